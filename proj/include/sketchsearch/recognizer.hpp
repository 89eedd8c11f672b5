#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketchsearch/classes.hpp"
#include "sketchsearch/stroke_model.hpp"

namespace sketchsearch {

struct Prediction {
  DoodleClass klass = DoodleClass::Square;
  double confidence = 0.0;
};

/// Number of points every prefix cloud is resampled to.
inline constexpr std::size_t kCloudPoints = 64;

/// Nominal coordinate space of the template file.
inline constexpr Canvas kTemplateCanvas{256.0, 256.0};

using PointCloud = std::vector<Point>;

/// One canonical drawing of a class. prefix_clouds[k] is the normalized cloud
/// of the first k + 1 strokes.
struct Template {
  std::vector<RawStroke> strokes;
  std::vector<PointCloud> prefix_clouds;

  static Template from_strokes(std::vector<RawStroke> strokes);
};

class TemplateSet {
 public:
  TemplateSet() = default;

  void add(DoodleClass klass, Template t);
  const std::vector<Template>& templates(DoodleClass klass) const {
    return by_class_[index_of(klass)];
  }
  std::size_t size() const noexcept;

  /// Throws UntrainedClass when a class has no template or a prefix cloud has
  /// the wrong point count.
  void validate() const;

 private:
  std::array<std::vector<Template>, kDoodleClassCount> by_class_;
};

TemplateSet parse_templates(std::string_view text);
TemplateSet load_templates(const std::filesystem::path& path);
std::string dump_templates(const TemplateSet& set);

/// Resamples a multi-stroke drawing to n points along its inked arc length
/// (pen-up jumps are not walked), then translates the centroid to the origin
/// and divides by the larger bounding-box side.
PointCloud normalized_cloud(std::span<const std::vector<Point>> strokes,
                            std::size_t n = kCloudPoints);

/// Order-free distance between two equally sized clouds using greedy
/// nearest-point matching from several start offsets.
double cloud_distance(std::span<const Point> a, std::span<const Point> b);

/// Pluggable partial-doodle classifier. Implementations return all 23 classes
/// ranked by confidence; confidences sum to one.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::vector<Prediction> classify(const Stroke5Sequence& strokes) const = 0;
};

class TemplateRecognizer final : public Recognizer {
 public:
  explicit TemplateRecognizer(TemplateSet templates);
  std::vector<Prediction> classify(const Stroke5Sequence& strokes) const override;
  const TemplateSet& templates() const noexcept { return templates_; }

 private:
  TemplateSet templates_;
};

/// Best-template distance per class for a query, indexed by DoodleClass.
std::array<double, kDoodleClassCount> class_distances(const Stroke5Sequence& strokes,
                                                      const TemplateSet& templates);

std::vector<Prediction> classify_partial(const Stroke5Sequence& strokes,
                                         const TemplateSet& templates);

// ---------------------------------------------------------------------------
// Evaluation

struct LabeledDoodle {
  DoodleClass label = DoodleClass::Square;
  Canvas canvas;
  std::vector<RawStroke> strokes;
};

/// Parses the line-delimited labeled dataset format. Blank lines are skipped.
std::vector<LabeledDoodle> parse_labeled_dataset(std::string_view text);
std::vector<LabeledDoodle> load_labeled_dataset(const std::filesystem::path& path);

struct SummaryStats {
  std::size_t count = 0;
  double avg = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double sd = 0.0;  // population standard deviation
};

SummaryStats summarize(std::span<const double> values);

struct FirstCorrectStats {
  SummaryStats first_stroke;  // over doodles that ever reach the criterion
  double wrong_last_pct = 0.0;
  double wrong_all_pct = 0.0;
};

struct ClassEvalReport {
  DoodleClass klass = DoodleClass::Square;
  std::size_t count = 0;
  SummaryStats strokes;
  FirstCorrectStats top1;
  FirstCorrectStats top3;
};

std::vector<ClassEvalReport> eval_recognizer(std::span<const LabeledDoodle> dataset,
                                             const Recognizer& recognizer);

/// Header line plus one tab-separated row per class.
std::string format_eval_report(std::span<const ClassEvalReport> report);

}  // namespace sketchsearch

#include "sketchsearch/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "json_util.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

using detail::json;

// ---------------------------------------------------------------------------
// Point clouds

PointCloud normalized_cloud(std::span<const std::vector<Point>> strokes, std::size_t n) {
  std::vector<Point> all;
  double total = 0.0;
  for (const auto& s : strokes) {
    all.insert(all.end(), s.begin(), s.end());
    total += arc_length(s);
  }
  if (all.empty()) throw Error(ErrorCode::EmptyInput, "no points");

  PointCloud cloud;
  cloud.reserve(n);
  if (!(total > 0.0)) {
    // Only taps: spread the available points round-robin.
    for (std::size_t i = 0; i < n; ++i) cloud.push_back(all[i % all.size()]);
  } else {
    const double step = total / static_cast<double>(n - 1);
    double walked = 0.0;
    std::size_t k = 0;
    for (const auto& s : strokes) {
      for (std::size_t i = 1; i < s.size() && k < n; ++i) {
        const double len = std::hypot(s[i].x - s[i - 1].x, s[i].y - s[i - 1].y);
        while (k < n && step * static_cast<double>(k) <= walked + len) {
          const double t = len > 0.0 ? (step * static_cast<double>(k) - walked) / len : 0.0;
          cloud.push_back({s[i - 1].x + t * (s[i].x - s[i - 1].x),
                           s[i - 1].y + t * (s[i].y - s[i - 1].y)});
          ++k;
        }
        walked += len;
      }
    }
    // Rounding can leave the final sample unplaced.
    while (cloud.size() < n) {
      const auto& last = strokes.back().empty() ? all.back() : strokes.back().back();
      cloud.push_back(last);
    }
  }

  double cx = 0.0;
  double cy = 0.0;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& p : cloud) {
    cx += p.x;
    cy += p.y;
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);
  double size = std::max(max_x - min_x, max_y - min_y);
  if (!(size > 0.0)) size = 1.0;
  for (auto& p : cloud) {
    p.x = (p.x - cx) / size;
    p.y = (p.y - cy) / size;
  }
  return cloud;
}

namespace {

double directed_cloud_distance(std::span<const Point> a, std::span<const Point> b,
                               std::size_t start) {
  const std::size_t n = a.size();
  std::vector<char> matched(n, 0);
  double sum = 0.0;
  std::size_t i = start;
  std::size_t weight_step = 0;
  do {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (matched[j]) continue;
      const double d = std::hypot(a[i].x - b[j].x, a[i].y - b[j].y);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    matched[best_j] = 1;
    const double weight = 1.0 - static_cast<double>(weight_step) / static_cast<double>(n);
    sum += weight * best;
    ++weight_step;
    i = (i + 1) % n;
  } while (i != start);
  return sum;
}

}  // namespace

double cloud_distance(std::span<const Point> a, std::span<const Point> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::InvalidArgument, "clouds must be non-empty and equally sized");
  }
  const std::size_t n = a.size();
  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start < n; start += step) {
    best = std::min({best, directed_cloud_distance(a, b, start),
                     directed_cloud_distance(b, a, start)});
  }
  return best / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Templates

Template Template::from_strokes(std::vector<RawStroke> strokes) {
  if (strokes.empty()) throw Error(ErrorCode::EmptyInput, "template has no strokes");
  Template t;
  t.strokes = std::move(strokes);
  std::vector<std::vector<Point>> prefix;
  for (const auto& s : t.strokes) {
    if (s.points.empty()) throw Error(ErrorCode::EmptyInput, "template stroke has no points");
    prefix.push_back(s.points);
    t.prefix_clouds.push_back(normalized_cloud(prefix));
  }
  return t;
}

void TemplateSet::add(DoodleClass klass, Template t) {
  by_class_[index_of(klass)].push_back(std::move(t));
}

std::size_t TemplateSet::size() const noexcept {
  std::size_t n = 0;
  for (const auto& v : by_class_) n += v.size();
  return n;
}

void TemplateSet::validate() const {
  for (auto klass : all_doodle_classes()) {
    const auto& list = templates(klass);
    if (list.empty()) {
      throw Error(ErrorCode::UntrainedClass, std::string(to_string(klass)));
    }
    for (const auto& t : list) {
      if (t.prefix_clouds.empty() || t.prefix_clouds.size() != t.strokes.size()) {
        throw Error(ErrorCode::UntrainedClass,
                    std::string(to_string(klass)) + ": template without prefix clouds");
      }
      for (const auto& cloud : t.prefix_clouds) {
        if (cloud.size() != kCloudPoints) {
          throw Error(ErrorCode::UntrainedClass,
                      std::string(to_string(klass)) + ": prefix cloud has wrong point count");
        }
      }
    }
  }
}

TemplateSet parse_templates(std::string_view text) {
  const json doc = detail::parse_json(text);
  const auto& version = detail::field(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    detail::bad_shape("unsupported template file version");
  }
  const auto& classes = detail::field(doc, "classes");
  if (!classes.is_object()) detail::bad_shape("'classes' must be an object");

  TemplateSet set;
  for (const auto& [name, entries] : classes.items()) {
    const auto klass = parse_doodle_class(name);
    if (!klass) throw Error(ErrorCode::UnknownLabel, "unknown template class '" + name + "'");
    if (!entries.is_array()) detail::bad_shape("templates of '" + name + "' must be an array");
    for (const auto& entry : entries) {
      set.add(*klass, Template::from_strokes(detail::strokes_from(detail::field(entry, "strokes"))));
    }
  }
  for (auto klass : all_doodle_classes()) {
    if (set.templates(klass).empty()) {
      throw Error(ErrorCode::MissingClass, std::string(to_string(klass)));
    }
  }
  set.validate();
  return set;
}

TemplateSet load_templates(const std::filesystem::path& path) {
  return parse_templates(detail::read_file(path));
}

std::string dump_templates(const TemplateSet& set) {
  json classes = json::object();
  for (auto klass : all_doodle_classes()) {
    json list = json::array();
    for (const auto& t : set.templates(klass)) {
      list.push_back({{"strokes", detail::strokes_to_json(t.strokes)}});
    }
    classes[std::string(to_string(klass))] = std::move(list);
  }
  return json{{"version", 1}, {"classes", std::move(classes)}}.dump();
}

// ---------------------------------------------------------------------------
// Classification

std::array<double, kDoodleClassCount> class_distances(const Stroke5Sequence& strokes,
                                                      const TemplateSet& templates) {
  if (strokes.points.empty()) throw Error(ErrorCode::EmptyInput, "no strokes");
  templates.validate();

  const auto query = strokes.absolute_strokes();
  const auto query_cloud = normalized_cloud(query);

  std::array<double, kDoodleClassCount> dist{};
  for (auto klass : all_doodle_classes()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : templates.templates(klass)) {
      const std::size_t k = std::min(query.size(), t.strokes.size());
      best = std::min(best, cloud_distance(query_cloud, t.prefix_clouds[k - 1]));
    }
    dist[index_of(klass)] = best;
  }
  return dist;
}

std::vector<Prediction> classify_partial(const Stroke5Sequence& strokes,
                                         const TemplateSet& templates) {
  const auto dist = class_distances(strokes, templates);

  // Standardize across classes, then softmax of the negated scores.
  const double n = static_cast<double>(kDoodleClassCount);
  const double mean = std::accumulate(dist.begin(), dist.end(), 0.0) / n;
  double var = 0.0;
  for (double d : dist) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / n);

  std::array<double, kDoodleClassCount> logits{};
  for (std::size_t i = 0; i < kDoodleClassCount; ++i) {
    logits[i] = sd > 0.0 ? -(dist[i] - mean) / sd : 0.0;
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - max_logit);

  std::vector<Prediction> out;
  out.reserve(kDoodleClassCount);
  for (auto klass : all_doodle_classes()) {
    out.push_back({klass, std::exp(logits[index_of(klass)] - max_logit) / z});
  }
  std::stable_sort(out.begin(), out.end(), [&](const Prediction& a, const Prediction& b) {
    return dist[index_of(a.klass)] < dist[index_of(b.klass)];
  });
  return out;
}

TemplateRecognizer::TemplateRecognizer(TemplateSet templates) : templates_(std::move(templates)) {
  templates_.validate();
}

std::vector<Prediction> TemplateRecognizer::classify(const Stroke5Sequence& strokes) const {
  return classify_partial(strokes, templates_);
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<LabeledDoodle> parse_labeled_dataset(std::string_view text) {
  std::vector<LabeledDoodle> out;
  for (auto line : detail::split_lines(text)) {
    const json rec = detail::parse_json(line);
    const auto label = detail::string_of(detail::field(rec, "label"), "label");
    const auto klass = parse_doodle_class(label);
    if (!klass) throw Error(ErrorCode::UnknownLabel, label);
    out.push_back({*klass, detail::canvas_from(detail::field(rec, "canvas")),
                   detail::strokes_from(detail::field(rec, "strokes"))});
  }
  return out;
}

std::vector<LabeledDoodle> load_labeled_dataset(const std::filesystem::path& path) {
  return parse_labeled_dataset(detail::read_file(path));
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  s.min = sorted.front();
  s.max = sorted.back();
  s.avg = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  double var = 0.0;
  for (double v : sorted) var += (v - s.avg) * (v - s.avg);
  s.sd = std::sqrt(var / n);
  return s;
}

namespace {

struct Tally {
  std::vector<double> strokes;
  std::vector<double> first_top1;
  std::vector<double> first_top3;
  std::size_t wrong_last_top1 = 0;
  std::size_t wrong_all_top1 = 0;
  std::size_t wrong_last_top3 = 0;
  std::size_t wrong_all_top3 = 0;
};

FirstCorrectStats finish(const std::vector<double>& firsts, std::size_t wrong_last,
                         std::size_t wrong_all, std::size_t count) {
  FirstCorrectStats out;
  out.first_stroke = summarize(firsts);
  out.wrong_last_pct = 100.0 * static_cast<double>(wrong_last) / static_cast<double>(count);
  out.wrong_all_pct = 100.0 * static_cast<double>(wrong_all) / static_cast<double>(count);
  return out;
}

}  // namespace

std::vector<ClassEvalReport> eval_recognizer(std::span<const LabeledDoodle> dataset,
                                             const Recognizer& recognizer) {
  std::array<Tally, kDoodleClassCount> tallies;
  std::array<bool, kDoodleClassCount> seen{};

  for (const auto& doodle : dataset) {
    if (doodle.strokes.empty()) throw Error(ErrorCode::EmptyInput, "labeled doodle without strokes");
    auto& t = tallies[index_of(doodle.label)];
    seen[index_of(doodle.label)] = true;
    t.strokes.push_back(static_cast<double>(doodle.strokes.size()));

    std::size_t first1 = 0;
    std::size_t first3 = 0;
    bool last_top1 = false;
    bool last_top3 = false;
    for (std::size_t k = 1; k <= doodle.strokes.size(); ++k) {
      const auto seq = normalize_strokes(std::span(doodle.strokes).first(k), doodle.canvas);
      const auto ranking = recognizer.classify(seq);
      last_top1 = ranking.front().klass == doodle.label;
      last_top3 = false;
      for (std::size_t r = 0; r < 3 && r < ranking.size(); ++r) {
        last_top3 = last_top3 || ranking[r].klass == doodle.label;
      }
      if (last_top1 && first1 == 0) first1 = k;
      if (last_top3 && first3 == 0) first3 = k;
    }
    if (first1) t.first_top1.push_back(static_cast<double>(first1));
    if (first3) t.first_top3.push_back(static_cast<double>(first3));
    t.wrong_last_top1 += last_top1 ? 0 : 1;
    t.wrong_all_top1 += first1 ? 0 : 1;
    t.wrong_last_top3 += last_top3 ? 0 : 1;
    t.wrong_all_top3 += first3 ? 0 : 1;
  }

  std::vector<ClassEvalReport> report;
  for (auto klass : all_doodle_classes()) {
    if (!seen[index_of(klass)]) continue;
    const auto& t = tallies[index_of(klass)];
    ClassEvalReport r;
    r.klass = klass;
    r.count = t.strokes.size();
    r.strokes = summarize(t.strokes);
    r.top1 = finish(t.first_top1, t.wrong_last_top1, t.wrong_all_top1, r.count);
    r.top3 = finish(t.first_top3, t.wrong_last_top3, t.wrong_all_top3, r.count);
    report.push_back(r);
  }
  return report;
}

std::string format_eval_report(std::span<const ClassEvalReport> report) {
  std::ostringstream out;
  out << "class\tcnt\tstrokes_avg\tstrokes_m\tstrokes_l\tstrokes_h\tstrokes_sd"
         "\ttop1_avg\ttop1_m\ttop1_l\ttop1_h\ttop1_sd\ttop1_w_lst\ttop1_w_all"
         "\ttop3_avg\ttop3_m\ttop3_l\ttop3_h\ttop3_sd\ttop3_w_lst\ttop3_w_all\n";
  out << std::fixed << std::setprecision(1);
  auto stats = [&](const SummaryStats& s) {
    out << '\t' << s.avg << '\t' << s.median << '\t' << s.min << '\t' << s.max << '\t' << s.sd;
  };
  for (const auto& r : report) {
    out << to_string(r.klass) << '\t' << r.count;
    stats(r.strokes);
    stats(r.top1.first_stroke);
    out << '\t' << r.top1.wrong_last_pct << '\t' << r.top1.wrong_all_pct;
    stats(r.top3.first_stroke);
    out << '\t' << r.top3.wrong_last_pct << '\t' << r.top3.wrong_all_pct << '\n';
  }
  return out.str();
}

}  // namespace sketchsearch

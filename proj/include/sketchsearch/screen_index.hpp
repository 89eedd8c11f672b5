#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sketchsearch/classes.hpp"
#include "sketchsearch/stroke_model.hpp"

namespace sketchsearch {

// ---------------------------------------------------------------------------
// Tile grid: 6 rows x 4 columns, row-major, rows top to bottom.

inline constexpr int kTileRows = 6;
inline constexpr int kTileCols = 4;
inline constexpr int kTileCount = kTileRows * kTileCols;

/// Coverage of one tile by the elements of one class: A is the covered
/// fraction of the tile (clamped to 1), C the number of overlapping elements.
struct TileCell {
  std::uint8_t tile = 0;
  std::uint32_t count = 0;
  double area = 0.0;

  friend bool operator==(const TileCell&, const TileCell&) = default;
};

/// Sparse per-tile coverage, ascending by tile, only tiles with count >= 1.
using TileCoverage = std::vector<TileCell>;

/// Adds the coverage of the given boxes (normalized to the unit canvas).
TileCoverage accumulate_coverage(std::span<const NormBBox> boxes);

/// Unclamped area fraction of every tile covered by one box.
std::array<double, kTileCount> tile_overlaps(const NormBBox& box) noexcept;

// ---------------------------------------------------------------------------
// Screen documents

struct PixelRect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

struct ScreenElement {
  std::string label;
  std::string android_class;
  std::optional<std::string> container_class;
  PixelRect bbox;

  friend bool operator==(const ScreenElement&, const ScreenElement&) = default;
};

struct ScreenDoc {
  std::string id;
  double width = 0.0;
  double height = 0.0;
  std::vector<ScreenElement> elements;

  friend bool operator==(const ScreenDoc&, const ScreenDoc&) = default;
};

ScreenDoc parse_screen_doc(std::string_view text);
std::string dump_screen_doc(const ScreenDoc& doc);

/// Reads every *.json file in a directory, sorted by file name.
std::vector<ScreenDoc> load_corpus_dir(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Label fixing

struct LabelFixRule {
  std::set<std::string> container_classes;
  std::set<std::string> element_classes;
  std::set<std::string> old_labels;
  ElementClass new_label = ElementClass::DefaultIcon;
};

std::vector<LabelFixRule> parse_label_fix_rules(std::string_view text);
std::vector<LabelFixRule> load_label_fix_rules(const std::filesystem::path& path);

/// Lower-cases a source label and folds spaces and dashes to underscores.
std::string normalize_label(std::string_view label);

/// Strips a Java package prefix ("android.widget.CheckBox" -> "CheckBox").
std::string_view simple_class_name(std::string_view android_class) noexcept;

/// Fixed source-label table; nullopt when the label has no screen class.
std::optional<ElementClass> map_source_label(std::string_view label);

/// First matching rule wins; otherwise the fixed table. nullopt = Unmapped.
std::optional<ElementClass> apply_label_fixes(const ScreenElement& element,
                                              std::span<const LabelFixRule> rules);

// ---------------------------------------------------------------------------
// Screen filtering and decomposition

enum class RejectReason {
  SingleText,
  SingleImage,
  TextPlusImage,
  SingleWebview,
  WebviewMajority,
  NoHierarchy,
};

std::string_view to_string(RejectReason r) noexcept;

/// nullopt means the screen is accepted.
std::optional<RejectReason> filter_screen(const ScreenDoc& doc,
                                          std::span<const LabelFixRule> rules = {});

bool is_webview(const ScreenElement& element);

struct MappedElement {
  ElementClass klass = ElementClass::Text;
  NormBBox bbox;
};

/// Clamps boxes to the screen, normalizes them, drops zero-area and unmapped
/// elements.
std::vector<MappedElement> map_elements(const ScreenDoc& doc, std::span<const LabelFixRule> rules);

std::map<ElementClass, TileCoverage> tile_decompose(std::span<const MappedElement> elements);
std::map<ElementClass, TileCoverage> tile_decompose(const ScreenDoc& doc,
                                                    std::span<const LabelFixRule> rules = {});

// ---------------------------------------------------------------------------
// Inverted index

/// idf(c) = ln(1 + N / df(c)); zero for classes that occur on no screen.
double idf_value(std::size_t screen_count, std::size_t df) noexcept;
std::array<double, kElementClassCount> compute_idf(
    std::size_t screen_count, const std::array<std::size_t, kElementClassCount>& df);

/// Screens containing one class, with their coverage stored back to back.
struct ClassPostings {
  std::vector<std::uint32_t> screens;  // ascending screen ordinals
  std::vector<std::uint32_t> offsets;  // screens.size() + 1 entries into cells
  std::vector<TileCell> cells;

  std::size_t size() const noexcept { return screens.size(); }
  std::span<const TileCell> coverage(std::size_t i) const noexcept {
    return std::span(cells).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }

  friend bool operator==(const ClassPostings&, const ClassPostings&) = default;
};

class ScreenIndex {
 public:
  ScreenIndex() = default;

  /// Takes per-screen coverage keyed by screen id; ordinals follow id order.
  static ScreenIndex from_coverage(
      std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens);

  std::size_t screen_count() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const std::string& screen_id(std::uint32_t ordinal) const { return ids_.at(ordinal); }
  const std::vector<std::string>& screen_ids() const noexcept { return ids_; }
  std::optional<std::uint32_t> find(std::string_view id) const;

  const ClassPostings& postings(ElementClass c) const noexcept { return postings_[index_of(c)]; }
  std::size_t df(ElementClass c) const noexcept { return postings_[index_of(c)].size(); }
  double idf(ElementClass c) const noexcept { return idf_[index_of(c)]; }
  const std::array<double, kElementClassCount>& idf_table() const noexcept { return idf_; }

  /// Coverage of one screen for one class, empty if absent.
  std::span<const TileCell> coverage(ElementClass c, std::uint32_t ordinal) const;

  friend bool operator==(const ScreenIndex& a, const ScreenIndex& b) {
    return a.ids_ == b.ids_ && a.postings_ == b.postings_ && a.idf_ == b.idf_;
  }

 private:
  friend ScreenIndex deserialize_index(std::string_view bytes);

  void rebuild_lookup();

  std::vector<std::string> ids_;
  std::array<ClassPostings, kElementClassCount> postings_;
  std::array<double, kElementClassCount> idf_{};
  std::unordered_map<std::string, std::uint32_t> lookup_;
};

struct BuildReport {
  std::size_t input_count = 0;
  std::size_t accepted = 0;
  std::map<RejectReason, std::size_t> rejected;
};

/// Filters, fixes labels, decomposes and aggregates. Throws EmptyCorpus or
/// DuplicateId. The result does not depend on document order.
ScreenIndex build_index(std::span<const ScreenDoc> docs, std::span<const LabelFixRule> rules,
                        BuildReport* report = nullptr);

inline constexpr std::string_view kIndexMagic = "PSDIDX1";
inline constexpr std::uint8_t kIndexVersion = 1;

std::string serialize_index(const ScreenIndex& index);
ScreenIndex deserialize_index(std::string_view bytes);
void save_index(const ScreenIndex& index, const std::filesystem::path& path);
ScreenIndex load_index(const std::filesystem::path& path);

}  // namespace sketchsearch

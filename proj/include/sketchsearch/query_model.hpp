#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sketchsearch/classes.hpp"
#include "sketchsearch/stroke_model.hpp"

namespace sketchsearch {

struct SketchElement {
  ElementClass klass = ElementClass::Text;
  NormBBox bbox;
  std::optional<DoodleClass> source_doodle;

  friend bool operator==(const SketchElement&, const SketchElement&) = default;
};

/// Ordered, immutable-by-convention list of confirmed elements. Every
/// operation below returns a new value.
struct Sketch {
  std::vector<SketchElement> elements;

  bool empty() const noexcept { return elements.empty(); }
  std::size_t size() const noexcept { return elements.size(); }

  friend bool operator==(const Sketch&, const Sketch&) = default;
};

/// Per-edge slack, in canvas fractions, when testing squiggle-in-square.
inline constexpr double kContainmentTolerance = 0.02;

bool contains_with_tolerance(const NormBBox& outer, const NormBBox& inner,
                             double tolerance = kContainmentTolerance) noexcept;

Sketch add_element(const Sketch& sketch, DoodleClass doodle, const NormBBox& bbox);

/// Appends an element given directly by its screen class (used by sketch
/// files and the synthetic evaluation), then merges.
Sketch add_element(const Sketch& sketch, ElementClass klass, const NormBBox& bbox);

Sketch remove_last_element(const Sketch& sketch);

/// Replaces every container that holds a text element and nothing else with a
/// single text_button spanning the container. When several texts sit in one
/// container the largest one is merged and the rest are kept.
Sketch merge_compound_elements(const Sketch& sketch);

/// Parses {"elements": [{"class": ..., "bbox": [x, y, w, h]}, ...]}. Both
/// element and doodle class names are accepted; merging is applied on load.
Sketch parse_sketch(std::string_view text);
Sketch load_sketch(const std::filesystem::path& path);
std::string dump_sketch(const Sketch& sketch);

}  // namespace sketchsearch

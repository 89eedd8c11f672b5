#include "sketchsearch/query_model.hpp"

#include "json_util.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

using detail::json;

namespace {

void require_valid(const NormBBox& bbox) {
  if (!bbox.valid()) {
    throw Error(ErrorCode::InvalidBBox,
                "bbox (" + std::to_string(bbox.x) + ", " + std::to_string(bbox.y) + ", " +
                    std::to_string(bbox.w) + ", " + std::to_string(bbox.h) +
                    ") is not inside the unit canvas");
  }
}

Sketch append_and_merge(const Sketch& sketch, SketchElement element) {
  require_valid(element.bbox);
  Sketch out = sketch;
  out.elements.push_back(std::move(element));
  return merge_compound_elements(out);
}

/// Attempts one merge; returns false when the sketch is already merged.
bool merge_once(std::vector<SketchElement>& elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].klass != ElementClass::Container) continue;
    const auto& square = elements[i].bbox;

    std::optional<std::size_t> best;
    bool blocked = false;
    for (std::size_t j = 0; j < elements.size() && !blocked; ++j) {
      if (j == i || !contains_with_tolerance(square, elements[j].bbox)) continue;
      if (elements[j].klass != ElementClass::Text) {
        blocked = true;
      } else if (!best || elements[j].bbox.area() > elements[*best].bbox.area()) {
        best = j;
      }
    }
    if (blocked || !best) continue;

    // The compound takes the later slot so removing the last element drops it
    // as one unit.
    const std::size_t keep = std::max(i, *best);
    const std::size_t drop = std::min(i, *best);
    elements[keep] = SketchElement{ElementClass::TextButton, square, std::nullopt};
    elements.erase(elements.begin() + static_cast<std::ptrdiff_t>(drop));
    return true;
  }
  return false;
}

}  // namespace

bool contains_with_tolerance(const NormBBox& outer, const NormBBox& inner,
                             double tolerance) noexcept {
  return inner.x >= outer.x - tolerance && inner.y >= outer.y - tolerance &&
         inner.x + inner.w <= outer.x + outer.w + tolerance &&
         inner.y + inner.h <= outer.y + outer.h + tolerance;
}

Sketch add_element(const Sketch& sketch, DoodleClass doodle, const NormBBox& bbox) {
  return append_and_merge(sketch, SketchElement{to_element_class(doodle), bbox, doodle});
}

Sketch add_element(const Sketch& sketch, ElementClass klass, const NormBBox& bbox) {
  return append_and_merge(sketch, SketchElement{klass, bbox, std::nullopt});
}

Sketch remove_last_element(const Sketch& sketch) {
  Sketch out = sketch;
  if (!out.elements.empty()) out.elements.pop_back();
  return out;
}

Sketch merge_compound_elements(const Sketch& sketch) {
  Sketch out = sketch;
  while (merge_once(out.elements)) {
  }
  return out;
}

Sketch parse_sketch(std::string_view text) {
  const json doc = detail::parse_json(text);
  const auto& elements = detail::field(doc, "elements");
  if (!elements.is_array()) detail::bad_shape("'elements' must be an array");

  Sketch sketch;
  for (const auto& e : elements) {
    const auto name = detail::string_of(detail::field(e, "class"), "class");
    const auto& b = detail::field(e, "bbox");
    if (!b.is_array() || b.size() != 4) detail::bad_shape("bbox must be [x, y, w, h]");
    const NormBBox bbox{detail::number(b[0], "x"), detail::number(b[1], "y"),
                        detail::number(b[2], "w"), detail::number(b[3], "h")};
    require_valid(bbox);

    SketchElement element{ElementClass::Text, bbox, std::nullopt};
    if (auto klass = parse_element_class(name)) {
      element.klass = *klass;
    } else if (auto doodle = parse_doodle_class(name)) {
      element.klass = to_element_class(*doodle);
      element.source_doodle = doodle;
    } else {
      throw Error(ErrorCode::UnknownClass, "unknown element class '" + name + "'");
    }
    sketch.elements.push_back(element);
  }
  return merge_compound_elements(sketch);
}

Sketch load_sketch(const std::filesystem::path& path) {
  return parse_sketch(detail::read_file(path));
}

std::string dump_sketch(const Sketch& sketch) {
  json elements = json::array();
  for (const auto& e : sketch.elements) {
    elements.push_back({{"class", std::string(to_string(e.klass))},
                        {"bbox", {e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h}}});
  }
  return json{{"elements", std::move(elements)}}.dump();
}

}  // namespace sketchsearch

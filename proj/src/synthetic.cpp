#include "sketchsearch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "json_util.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

using detail::json;

ClassProfile ClassProfile::rico_like() {
  ClassProfile p;
  auto set = [&](ElementClass c, double v) { p.presence[index_of(c)] = v; };
  set(ElementClass::Text, 0.90);
  set(ElementClass::Image, 0.60);
  set(ElementClass::Container, 0.50);
  set(ElementClass::DefaultIcon, 0.45);
  set(ElementClass::TextButton, 0.40);
  set(ElementClass::Back, 0.35);
  set(ElementClass::Menu, 0.20);
  set(ElementClass::Cancel, 0.12);
  set(ElementClass::Search, 0.12);
  set(ElementClass::Plus, 0.10);
  set(ElementClass::Avatar, 0.08);
  set(ElementClass::Home, 0.07);
  set(ElementClass::Share, 0.06);
  set(ElementClass::Setting, 0.06);
  set(ElementClass::Star, 0.06);
  set(ElementClass::Forward, 0.05);
  set(ElementClass::Switch, 0.05);
  set(ElementClass::Checkbox, 0.05);
  set(ElementClass::Play, 0.04);
  set(ElementClass::Dropdown, 0.04);
  set(ElementClass::Slider, 0.03);
  set(ElementClass::Camera, 0.03);
  set(ElementClass::Envelope, 0.03);
  set(ElementClass::LeftArrow, 0.02);
  return p;
}

ClassProfile ClassProfile::uniform(double presence) {
  ClassProfile p;
  p.presence.fill(presence);
  return p;
}

ClassProfile parse_profile(std::string_view spec) {
  if (spec.empty() || spec == "rico") return ClassProfile::rico_like();
  if (spec == "uniform") return ClassProfile::uniform();
  const json doc = detail::parse_json(spec);
  if (!doc.is_object()) detail::bad_shape("profile must be a JSON object");
  auto profile = ClassProfile::rico_like();
  for (const auto& [name, value] : doc.items()) {
    const auto klass = parse_element_class(name);
    if (!klass) throw Error(ErrorCode::UnknownClass, "profile names unknown class '" + name + "'");
    if (value.is_number()) {
      const double p = value.get<double>();
      if (p < 0.0 || p > 1.0) detail::bad_shape("presence of '" + name + "' must be in [0, 1]");
      profile.presence[index_of(*klass)] = p;
    } else if (value.is_object()) {
      const auto& df = detail::field(value, "df");
      if (!df.is_number_unsigned()) detail::bad_shape("df of '" + name + "' must be a count");
      profile.fixed_df[index_of(*klass)] = df.get<std::size_t>();
    } else {
      detail::bad_shape("profile entry '" + name + "' must be a number or {\"df\": k}");
    }
  }
  return profile;
}

namespace {

struct SizeRange {
  double w_lo, w_hi, h_lo, h_hi;
};

constexpr double kAspect = kSyntheticWidth / kSyntheticHeight;

SizeRange size_of(ElementClass c) {
  switch (c) {
    case ElementClass::Text: return {0.15, 0.70, 0.015, 0.04};
    case ElementClass::Image: return {0.25, 1.00, 0.08, 0.30};
    case ElementClass::Container: return {0.50, 1.00, 0.08, 0.35};
    case ElementClass::TextButton: return {0.20, 0.80, 0.035, 0.07};
    case ElementClass::Slider: return {0.45, 0.90, 0.015, 0.03};
    case ElementClass::Dropdown: return {0.25, 0.60, 0.03, 0.06};
    case ElementClass::Switch: return {0.08, 0.13, 0.025, 0.035};
    default: return {0.05, 0.10, 0.05 * kAspect, 0.10 * kAspect};
  }
}

std::size_t max_instances(ElementClass c) {
  switch (c) {
    case ElementClass::Text: return 6;
    case ElementClass::Image:
    case ElementClass::TextButton:
    case ElementClass::DefaultIcon: return 3;
    case ElementClass::Container:
    case ElementClass::Star:
    case ElementClass::Checkbox:
    case ElementClass::Switch: return 2;
    default: return 1;
  }
}

struct Labeling {
  std::string label;
  std::string android_class;
  std::optional<std::string> container_class;
};

/// Source labels as an upstream annotator would emit them. Classes covered by
/// the label-fix rules sometimes arrive as generic "input"/"image".
Labeling labeling_for(ElementClass c, Rng& rng) {
  const bool raw = rng.chance(0.3);
  switch (c) {
    case ElementClass::Text: return {"text", "android.widget.TextView", std::nullopt};
    case ElementClass::Image: return {"image", "android.widget.ImageView", std::nullopt};
    case ElementClass::Container: return {"container", "android.widget.LinearLayout", std::nullopt};
    case ElementClass::TextButton: return {"text_button", "android.widget.Button", std::nullopt};
    case ElementClass::DefaultIcon: return {"icon", "android.widget.ImageButton", std::nullopt};
    case ElementClass::Checkbox:
      if (raw) return {"input", "android.support.v7.widget.AppCompatCheckBox", std::nullopt};
      return {"checkbox", "android.widget.CheckBox", std::nullopt};
    case ElementClass::Slider:
      if (raw) return {"input", "com.example.RangeSeekBar", std::nullopt};
      return {"slider", "android.widget.SeekBar", std::nullopt};
    case ElementClass::Star:
      if (raw) return {"image", "com.example.RatingView", std::string("android.widget.RatingBar")};
      return {"star", "android.widget.ImageView", std::nullopt};
    case ElementClass::Switch:
      if (raw) return {"input", "android.support.v7.widget.SwitchCompat", std::nullopt};
      return {"switch", "android.widget.Switch", std::nullopt};
    case ElementClass::Search:
      if (raw) return {"input", "com.example.SearchEditText", std::nullopt};
      return {"search", "android.widget.ImageButton", std::nullopt};
    default: return {std::string(to_string(c)), "android.widget.ImageButton", std::nullopt};
  }
}

double overlap_area(const NormBBox& a, const NormBBox& b) {
  const double w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

/// Rounds a normalized box to whole pixels; returns the pixel box and the
/// normalized box it corresponds to exactly.
std::pair<PixelRect, NormBBox> snap(const NormBBox& b) {
  PixelRect r;
  r.x = std::round(b.x * kSyntheticWidth);
  r.y = std::round(b.y * kSyntheticHeight);
  r.w = std::max(1.0, std::round(b.w * kSyntheticWidth));
  r.h = std::max(1.0, std::round(b.h * kSyntheticHeight));
  r.w = std::min(r.w, kSyntheticWidth - r.x);
  r.h = std::min(r.h, kSyntheticHeight - r.y);
  return {r, {r.x / kSyntheticWidth, r.y / kSyntheticHeight, r.w / kSyntheticWidth,
              r.h / kSyntheticHeight}};
}

/// Non-overlap bias: keep the best of a few candidate positions. Containers
/// are allowed to hold other elements and do not count as obstacles.
NormBBox place(ElementClass c, const std::vector<MappedElement>& placed, Rng& rng) {
  const auto s = size_of(c);
  const double w = rng.uniform(s.w_lo, s.w_hi);
  const double h = rng.uniform(s.h_lo, s.h_hi);
  NormBBox best{};
  double best_overlap = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 6; ++attempt) {
    NormBBox cand{rng.uniform(0.0, 1.0 - w), rng.uniform(0.0, 1.0 - h), w, h};
    double overlap = 0.0;
    for (const auto& p : placed) {
      if (p.klass != ElementClass::Container) overlap += overlap_area(cand, p.bbox);
    }
    if (overlap < best_overlap) {
      best_overlap = overlap;
      best = cand;
    }
    if (overlap == 0.0) break;
  }
  return best;
}

bool acceptable(const std::vector<MappedElement>& elements) {
  if (elements.size() < 2) return false;
  if (elements.size() == 2) {
    const bool ti = (elements[0].klass == ElementClass::Text && elements[1].klass == ElementClass::Image) ||
                    (elements[0].klass == ElementClass::Image && elements[1].klass == ElementClass::Text);
    if (ti) return false;
  }
  return true;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n,
                                          const ClassProfile& profile) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "corpus size must be >= 1");
  for (std::size_t c = 0; c < kElementClassCount; ++c) {
    if (profile.fixed_df[c] && *profile.fixed_df[c] > n) {
      throw Error(ErrorCode::InvalidArgument,
                  "fixed df of " + std::string(to_string(static_cast<ElementClass>(c))) +
                      " exceeds corpus size");
    }
  }
  Rng rng(seed);

  // Screens carrying each pinned class: a seeded partial shuffle.
  std::array<std::vector<char>, kElementClassCount> forced;
  for (std::size_t c = 0; c < kElementClassCount; ++c) {
    if (!profile.fixed_df[c]) continue;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    forced[c].assign(n, 0);
    for (std::size_t i = 0; i < *profile.fixed_df[c]; ++i) {
      std::swap(order[i], order[i + rng.below(n - i)]);
      forced[c][order[i]] = 1;
    }
  }

  SyntheticCorpus corpus;
  corpus.docs.reserve(n);
  corpus.truth.reserve(n);
  const int width = static_cast<int>(std::to_string(n - 1).size());
  for (std::size_t s = 0; s < n; ++s) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "syn-%0*zu", width, s);

    std::vector<MappedElement> truth;
    std::vector<ScreenElement> elements;
    int attempts = 0;
    do {
      truth.clear();
      elements.clear();
      for (auto c : all_element_classes()) {
        const auto ci = index_of(c);
        const bool present = profile.fixed_df[ci] ? forced[ci][s] != 0 : rng.chance(profile.presence[ci]);
        if (!present) continue;
        const std::size_t instances = 1 + rng.below(max_instances(c));
        for (std::size_t k = 0; k < instances; ++k) {
          const auto [rect, norm] = snap(place(c, truth, rng));
          truth.push_back({c, norm});
          auto lab = labeling_for(c, rng);
          elements.push_back({std::move(lab.label), std::move(lab.android_class),
                              std::move(lab.container_class), rect});
        }
      }
      // Sparse profiles may never produce an acceptable screen on their own.
      if (!acceptable(truth) && ++attempts >= 50) {
        for (auto c : {ElementClass::DefaultIcon, ElementClass::Text}) {
          const auto [rect, norm] = snap(place(c, truth, rng));
          truth.push_back({c, norm});
          auto lab = labeling_for(c, rng);
          elements.push_back({std::move(lab.label), std::move(lab.android_class),
                              std::move(lab.container_class), rect});
        }
      }
    } while (!acceptable(truth));

    for (std::size_t c = 0; c < kElementClassCount; ++c) {
      const auto klass = static_cast<ElementClass>(c);
      corpus.df[c] += std::any_of(truth.begin(), truth.end(),
                                  [&](const MappedElement& e) { return e.klass == klass; })
                          ? 1
                          : 0;
    }
    corpus.docs.push_back({id_buf, kSyntheticWidth, kSyntheticHeight, std::move(elements)});
    corpus.truth.push_back({id_buf, std::move(truth)});
  }
  return corpus;
}

std::string dump_manifest(const SyntheticCorpus& corpus) {
  json screens = json::array();
  for (const auto& t : corpus.truth) {
    json elements = json::array();
    for (const auto& e : t.elements) {
      elements.push_back({{"class", std::string(to_string(e.klass))},
                          {"bbox", {e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h}}});
    }
    screens.push_back({{"id", t.id}, {"elements", std::move(elements)}});
  }
  json df = json::object();
  for (auto c : all_element_classes()) df[std::string(to_string(c))] = corpus.df[index_of(c)];
  return json{{"screen_count", corpus.docs.size()}, {"df", std::move(df)}, {"screens", std::move(screens)}}
      .dump();
}

}  // namespace sketchsearch

#include "sketchsearch/screen_index.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include <zlib.h>

#include "json_util.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

using detail::json;

// ---------------------------------------------------------------------------
// Tiles

std::array<double, kTileCount> tile_overlaps(const NormBBox& box) noexcept {
  std::array<double, kTileCount> out{};
  constexpr double tile_w = 1.0 / kTileCols;
  constexpr double tile_h = 1.0 / kTileRows;
  for (int r = 0; r < kTileRows; ++r) {
    const double y0 = static_cast<double>(r) / kTileRows;
    const double y1 = static_cast<double>(r + 1) / kTileRows;
    const double oh = std::min(box.y + box.h, y1) - std::max(box.y, y0);
    if (!(oh > 0.0)) continue;
    for (int c = 0; c < kTileCols; ++c) {
      const double x0 = static_cast<double>(c) / kTileCols;
      const double x1 = static_cast<double>(c + 1) / kTileCols;
      const double ow = std::min(box.x + box.w, x1) - std::max(box.x, x0);
      if (!(ow > 0.0)) continue;
      out[static_cast<std::size_t>(r * kTileCols + c)] = (ow * oh) / (tile_w * tile_h);
    }
  }
  return out;
}

TileCoverage accumulate_coverage(std::span<const NormBBox> boxes) {
  std::array<double, kTileCount> area{};
  std::array<std::uint32_t, kTileCount> count{};
  for (const auto& box : boxes) {
    const auto overlaps = tile_overlaps(box);
    for (std::size_t t = 0; t < overlaps.size(); ++t) {
      if (overlaps[t] > 0.0) {
        area[t] += overlaps[t];
        ++count[t];
      }
    }
  }
  TileCoverage cov;
  for (std::size_t t = 0; t < area.size(); ++t) {
    if (count[t] > 0) {
      cov.push_back({static_cast<std::uint8_t>(t), count[t], std::min(1.0, area[t])});
    }
  }
  return cov;
}

// ---------------------------------------------------------------------------
// Documents

ScreenDoc parse_screen_doc(std::string_view text) {
  const json doc = detail::parse_json(text);
  ScreenDoc out;
  out.id = detail::string_of(detail::field(doc, "id"), "id");
  out.width = detail::number(detail::field(doc, "width"), "width");
  out.height = detail::number(detail::field(doc, "height"), "height");
  if (!(out.width > 0.0) || !(out.height > 0.0)) {
    detail::bad_shape("screen '" + out.id + "' must have positive width and height");
  }
  const auto& elements = detail::field(doc, "elements");
  if (!elements.is_array()) detail::bad_shape("'elements' must be an array");
  for (const auto& e : elements) {
    ScreenElement el;
    el.label = detail::string_of(detail::field(e, "label"), "label");
    el.android_class = detail::string_of(detail::field(e, "android_class"), "android_class");
    if (auto it = e.find("container_class"); it != e.end() && !it->is_null()) {
      el.container_class = detail::string_of(*it, "container_class");
    }
    const auto& b = detail::field(e, "bbox");
    if (!b.is_array() || b.size() != 4) detail::bad_shape("bbox must be [x, y, w, h]");
    el.bbox = {detail::number(b[0], "x"), detail::number(b[1], "y"), detail::number(b[2], "w"),
               detail::number(b[3], "h")};
    out.elements.push_back(std::move(el));
  }
  return out;
}

std::string dump_screen_doc(const ScreenDoc& doc) {
  json elements = json::array();
  for (const auto& e : doc.elements) {
    elements.push_back({{"label", e.label},
                        {"android_class", e.android_class},
                        {"container_class", e.container_class ? json(*e.container_class) : json()},
                        {"bbox", {e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h}}});
  }
  return json{{"id", doc.id},
              {"width", doc.width},
              {"height", doc.height},
              {"elements", std::move(elements)}}
      .dump();
}

std::vector<ScreenDoc> load_corpus_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ScreenDoc> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    try {
      docs.push_back(parse_screen_doc(detail::read_file(f)));
    } catch (const Error& e) {
      throw Error(e.code(), f.filename().string() + ": " + e.detail());
    }
  }
  return docs;
}

// ---------------------------------------------------------------------------
// Label fixing

std::string normalize_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char ch : label) {
    if (ch == ' ' || ch == '-') {
      out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

std::string_view simple_class_name(std::string_view android_class) noexcept {
  const auto dot = android_class.rfind('.');
  return dot == std::string_view::npos ? android_class : android_class.substr(dot + 1);
}

std::optional<ElementClass> map_source_label(std::string_view label) {
  static const std::unordered_map<std::string, ElementClass> kSynonyms = {
      {"background_image", ElementClass::Image},
      {"icon", ElementClass::DefaultIcon},
      {"card", ElementClass::Container},
      {"button", ElementClass::TextButton},
      {"on/off_switch", ElementClass::Switch},
      {"email", ElementClass::Envelope},
      {"mail", ElementClass::Envelope},
      {"photo_camera", ElementClass::Camera},
      {"arrow_backward", ElementClass::Back},
      {"close", ElementClass::Cancel},
      {"arrow_drop_down", ElementClass::Dropdown},
      {"expand_more", ElementClass::Dropdown},
      {"arrow_forward", ElementClass::Forward},
      {"chevron_left", ElementClass::LeftArrow},
      {"add", ElementClass::Plus},
      {"settings", ElementClass::Setting},
      {"user", ElementClass::Avatar},
      {"favorite_star", ElementClass::Star},
  };
  const auto norm = normalize_label(label);
  if (auto c = parse_element_class(norm)) return c;
  if (auto it = kSynonyms.find(norm); it != kSynonyms.end()) return it->second;
  return std::nullopt;
}

namespace {

std::set<std::string> string_set(const json& v, const char* what) {
  if (!v.is_array()) detail::bad_shape(std::string(what) + " must be an array");
  std::set<std::string> out;
  for (const auto& s : v) out.insert(detail::string_of(s, what));
  return out;
}

}  // namespace

std::vector<LabelFixRule> parse_label_fix_rules(std::string_view text) {
  const json doc = detail::parse_json(text);
  if (!doc.is_array()) detail::bad_shape("label-fix rules must be an array");
  std::vector<LabelFixRule> rules;
  for (const auto& r : doc) {
    LabelFixRule rule;
    rule.container_classes = string_set(detail::field(r, "container_classes"), "container_classes");
    rule.element_classes = string_set(detail::field(r, "element_classes"), "element_classes");
    for (const auto& l : string_set(detail::field(r, "old_labels"), "old_labels")) {
      rule.old_labels.insert(normalize_label(l));
    }
    const auto target = normalize_label(detail::string_of(detail::field(r, "new_label"), "new_label"));
    const auto klass = parse_element_class(target);
    if (!klass) throw Error(ErrorCode::UnknownClass, "rule targets unknown class '" + target + "'");
    rule.new_label = *klass;
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<LabelFixRule> load_label_fix_rules(const std::filesystem::path& path) {
  return parse_label_fix_rules(detail::read_file(path));
}

std::optional<ElementClass> apply_label_fixes(const ScreenElement& element,
                                              std::span<const LabelFixRule> rules) {
  const auto label = normalize_label(element.label);
  const std::string own(simple_class_name(element.android_class));
  const std::string container =
      element.container_class ? std::string(simple_class_name(*element.container_class)) : "";
  for (const auto& rule : rules) {
    if (!rule.old_labels.contains(label)) continue;
    const bool by_element = rule.element_classes.contains(own);
    const bool by_container = element.container_class && rule.container_classes.contains(container);
    if (by_element || by_container) return rule.new_label;
  }
  return map_source_label(label);
}

// ---------------------------------------------------------------------------
// Filtering

std::string_view to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::SingleText: return "single_text";
    case RejectReason::SingleImage: return "single_image";
    case RejectReason::TextPlusImage: return "text_plus_image";
    case RejectReason::SingleWebview: return "single_webview";
    case RejectReason::WebviewMajority: return "webview_majority";
    case RejectReason::NoHierarchy: return "no_hierarchy";
  }
  return "unknown";
}

bool is_webview(const ScreenElement& element) {
  const auto label = normalize_label(element.label);
  if (label == "web_view" || label == "webview") return true;
  return simple_class_name(element.android_class).find("WebView") != std::string_view::npos;
}

namespace {

PixelRect clamp_rect(const PixelRect& r, double width, double height) {
  const double x0 = std::clamp(r.x, 0.0, width);
  const double y0 = std::clamp(r.y, 0.0, height);
  const double x1 = std::clamp(r.x + std::max(0.0, r.w), 0.0, width);
  const double y1 = std::clamp(r.y + std::max(0.0, r.h), 0.0, height);
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

std::optional<RejectReason> filter_screen(const ScreenDoc& doc,
                                          std::span<const LabelFixRule> rules) {
  if (doc.elements.empty()) return RejectReason::NoHierarchy;

  std::size_t text = 0;
  std::size_t image = 0;
  std::size_t webview = 0;
  for (const auto& e : doc.elements) {
    if (is_webview(e)) {
      ++webview;
      continue;
    }
    const auto klass = apply_label_fixes(e, rules);
    text += klass == ElementClass::Text ? 1 : 0;
    image += klass == ElementClass::Image ? 1 : 0;
  }
  const std::size_t n = doc.elements.size();
  if (n == 1 && text == 1) return RejectReason::SingleText;
  if (n == 1 && image == 1) return RejectReason::SingleImage;
  if (n == 2 && text == 1 && image == 1) return RejectReason::TextPlusImage;
  if (n == 1 && webview == 1) return RejectReason::SingleWebview;

  const double screen_area = doc.width * doc.height;
  for (const auto& e : doc.elements) {
    if (!is_webview(e)) continue;
    const auto r = clamp_rect(e.bbox, doc.width, doc.height);
    if (r.w * r.h > 0.5 * screen_area) return RejectReason::WebviewMajority;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Decomposition

std::vector<MappedElement> map_elements(const ScreenDoc& doc, std::span<const LabelFixRule> rules) {
  std::vector<MappedElement> out;
  for (const auto& e : doc.elements) {
    if (is_webview(e)) continue;
    const auto klass = apply_label_fixes(e, rules);
    if (!klass) continue;
    const auto r = clamp_rect(e.bbox, doc.width, doc.height);
    if (!(r.w > 0.0) || !(r.h > 0.0)) continue;
    out.push_back({*klass, {r.x / doc.width, r.y / doc.height, r.w / doc.width, r.h / doc.height}});
  }
  return out;
}

std::map<ElementClass, TileCoverage> tile_decompose(std::span<const MappedElement> elements) {
  std::map<ElementClass, std::vector<NormBBox>> grouped;
  for (const auto& e : elements) grouped[e.klass].push_back(e.bbox);
  std::map<ElementClass, TileCoverage> out;
  for (const auto& [klass, boxes] : grouped) {
    auto cov = accumulate_coverage(boxes);
    if (!cov.empty()) out.emplace(klass, std::move(cov));
  }
  return out;
}

std::map<ElementClass, TileCoverage> tile_decompose(const ScreenDoc& doc,
                                                    std::span<const LabelFixRule> rules) {
  return tile_decompose(map_elements(doc, rules));
}

// ---------------------------------------------------------------------------
// Index

double idf_value(std::size_t screen_count, std::size_t df) noexcept {
  if (df == 0) return 0.0;
  return std::log(1.0 + static_cast<double>(screen_count) / static_cast<double>(df));
}

std::array<double, kElementClassCount> compute_idf(
    std::size_t screen_count, const std::array<std::size_t, kElementClassCount>& df) {
  std::array<double, kElementClassCount> out{};
  for (std::size_t c = 0; c < kElementClassCount; ++c) out[c] = idf_value(screen_count, df[c]);
  return out;
}

ScreenIndex ScreenIndex::from_coverage(
    std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens) {
  std::sort(screens.begin(), screens.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ScreenIndex index;
  for (auto& p : index.postings_) p.offsets.push_back(0);
  index.ids_.reserve(screens.size());
  for (std::size_t ordinal = 0; ordinal < screens.size(); ++ordinal) {
    auto& [id, coverage] = screens[ordinal];
    if (!index.ids_.empty() && index.ids_.back() == id) {
      throw Error(ErrorCode::DuplicateId, id);
    }
    index.ids_.push_back(std::move(id));
    for (const auto& [klass, cells] : coverage) {
      if (cells.empty()) continue;
      auto& p = index.postings_[index_of(klass)];
      p.screens.push_back(static_cast<std::uint32_t>(ordinal));
      p.cells.insert(p.cells.end(), cells.begin(), cells.end());
      p.offsets.push_back(static_cast<std::uint32_t>(p.cells.size()));
    }
  }
  std::array<std::size_t, kElementClassCount> df{};
  for (std::size_t c = 0; c < kElementClassCount; ++c) df[c] = index.postings_[c].size();
  index.idf_ = compute_idf(index.ids_.size(), df);
  index.rebuild_lookup();
  return index;
}

void ScreenIndex::rebuild_lookup() {
  lookup_.clear();
  lookup_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) lookup_.emplace(ids_[i], static_cast<std::uint32_t>(i));
}

std::optional<std::uint32_t> ScreenIndex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const TileCell> ScreenIndex::coverage(ElementClass c, std::uint32_t ordinal) const {
  const auto& p = postings(c);
  auto it = std::lower_bound(p.screens.begin(), p.screens.end(), ordinal);
  if (it == p.screens.end() || *it != ordinal) return {};
  return p.coverage(static_cast<std::size_t>(it - p.screens.begin()));
}

ScreenIndex build_index(std::span<const ScreenDoc> docs, std::span<const LabelFixRule> rules,
                        BuildReport* report) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no screens");
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& d : docs) {
      if (!seen.insert(d.id).second) throw Error(ErrorCode::DuplicateId, d.id);
    }
  }

  BuildReport local;
  local.input_count = docs.size();
  std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> accepted;
  for (const auto& doc : docs) {
    auto reason = filter_screen(doc, rules);
    std::map<ElementClass, TileCoverage> coverage;
    if (!reason) {
      coverage = tile_decompose(doc, rules);
      if (coverage.empty()) reason = RejectReason::NoHierarchy;
    }
    if (reason) {
      ++local.rejected[*reason];
      continue;
    }
    accepted.emplace_back(doc.id, std::move(coverage));
  }
  local.accepted = accepted.size();
  if (report) *report = local;
  return ScreenIndex::from_coverage(std::move(accepted));
}

// ---------------------------------------------------------------------------
// Persistence
//
// Layout (little endian): magic, version byte, u32 screen count, ids as
// (u32 length, bytes), u32 stored-class count, then per class: u8 ordinal,
// u16 name length + name, f64 idf, u32 posting count, and per posting u32
// screen, u8 cell count, cells as (u8 tile, u32 count, f64 area). A trailing
// u32 CRC-32 covers everything before it.

namespace {

class Writer {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void str32(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  std::string take() { return std::move(out_); }
  const std::string& data() const { return out_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::ParseError, "index payload ends early");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < data.size(); off += kChunk) {
    const auto len = std::min(kChunk, data.size() - off);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string serialize_index(const ScreenIndex& index) {
  Writer w;
  w.bytes(kIndexMagic);
  w.u8(kIndexVersion);
  w.u32(static_cast<std::uint32_t>(index.screen_count()));
  for (const auto& id : index.screen_ids()) w.str32(id);

  std::uint32_t stored = 0;
  for (auto c : all_element_classes()) stored += index.df(c) > 0 ? 1 : 0;
  w.u32(stored);
  for (auto c : all_element_classes()) {
    const auto& p = index.postings(c);
    if (p.size() == 0) continue;
    w.u8(static_cast<std::uint8_t>(index_of(c)));
    const auto name = to_string(c);
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name);
    w.f64(index.idf(c));
    w.u32(static_cast<std::uint32_t>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto cells = p.coverage(i);
      w.u32(p.screens[i]);
      w.u8(static_cast<std::uint8_t>(cells.size()));
      for (const auto& cell : cells) {
        w.u8(cell.tile);
        w.u32(cell.count);
        w.f64(cell.area);
      }
    }
  }
  const auto crc = crc_of(w.data());
  w.u32(crc);
  return w.take();
}

ScreenIndex deserialize_index(std::string_view bytes) {
  const std::size_t header = kIndexMagic.size() + 1;
  if (bytes.size() < kIndexMagic.size() || bytes.substr(0, kIndexMagic.size()) != kIndexMagic) {
    throw Error(ErrorCode::VersionMismatch, "not an index file (bad magic)");
  }
  if (bytes.size() < header + 4) throw Error(ErrorCode::ChecksumMismatch, "index file truncated");
  if (static_cast<std::uint8_t>(bytes[kIndexMagic.size()]) != kIndexVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "index version " + std::to_string(static_cast<unsigned char>(bytes[kIndexMagic.size()])));
  }
  const auto body = bytes.substr(0, bytes.size() - 4);
  Reader tail(bytes.substr(bytes.size() - 4));
  if (tail.u32() != crc_of(body)) throw Error(ErrorCode::ChecksumMismatch, "index checksum mismatch");

  Reader r(body.substr(header));
  ScreenIndex index;
  const auto n = r.u32();
  index.ids_.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) index.ids_.emplace_back(r.bytes(r.u32()));
  for (auto& p : index.postings_) p.offsets.push_back(0);

  const auto stored = r.u32();
  for (std::uint32_t s = 0; s < stored; ++s) {
    const auto ordinal = r.u8();
    const auto name = r.bytes(r.u16());
    if (ordinal >= kElementClassCount || to_string(static_cast<ElementClass>(ordinal)) != name) {
      throw Error(ErrorCode::VersionMismatch, "index class table does not match this build");
    }
    auto& p = index.postings_[ordinal];
    index.idf_[ordinal] = r.f64();
    const auto count = r.u32();
    p.screens.reserve(count);
    p.offsets.reserve(count + 1);
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto screen = r.u32();
      if (screen >= n) throw Error(ErrorCode::ParseError, "posting refers to unknown screen");
      p.screens.push_back(screen);
      const auto cells = r.u8();
      for (std::uint8_t k = 0; k < cells; ++k) {
        TileCell cell;
        cell.tile = r.u8();
        cell.count = r.u32();
        cell.area = r.f64();
        p.cells.push_back(cell);
      }
      p.offsets.push_back(static_cast<std::uint32_t>(p.cells.size()));
    }
  }
  if (!r.done()) throw Error(ErrorCode::ParseError, "trailing bytes in index payload");
  index.rebuild_lookup();
  return index;
}

void save_index(const ScreenIndex& index, const std::filesystem::path& path) {
  detail::write_file(path, serialize_index(index));
}

ScreenIndex load_index(const std::filesystem::path& path) {
  return deserialize_index(detail::read_file(path));
}

}  // namespace sketchsearch

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sketchsearch/error.hpp"
#include "sketchsearch/stroke_model.hpp"

namespace sketchsearch::detail {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

[[noreturn]] inline void bad_shape(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

inline const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) bad_shape(std::string("expected object with '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) bad_shape(std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const json& v, const char* what) {
  if (!v.is_number()) bad_shape(std::string(what) + " must be a number");
  return v.get<double>();
}

inline std::string string_of(const json& v, const char* what) {
  if (!v.is_string()) bad_shape(std::string(what) + " must be a string");
  return v.get<std::string>();
}

inline Canvas canvas_from(const json& v) {
  if (!v.is_array() || v.size() != 2) bad_shape("canvas must be [w, h]");
  return {number(v[0], "canvas width"), number(v[1], "canvas height")};
}

inline Point point_from(const json& v) {
  if (!v.is_array() || v.size() != 2) bad_shape("point must be [x, y]");
  return {number(v[0], "x"), number(v[1], "y")};
}

inline RawStroke stroke_from(const json& v) {
  if (!v.is_array()) bad_shape("stroke must be an array of points");
  RawStroke s;
  s.points.reserve(v.size());
  for (const auto& p : v) s.points.push_back(point_from(p));
  return s;
}

inline std::vector<RawStroke> strokes_from(const json& v) {
  if (!v.is_array()) bad_shape("strokes must be an array");
  std::vector<RawStroke> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(stroke_from(s));
  return out;
}

inline json strokes_to_json(const std::vector<RawStroke>& strokes) {
  json arr = json::array();
  for (const auto& s : strokes) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({p.x, p.y});
    arr.push_back(std::move(pts));
  }
  return arr;
}

/// Splits a line-delimited document, skipping blank lines.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace sketchsearch::detail

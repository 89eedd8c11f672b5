#include "sketchsearch/stroke_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

namespace {

void require_canvas(Canvas canvas) {
  if (!(canvas.width > 0.0) || !(canvas.height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "canvas dimensions must be positive");
  }
}

double clamp_coord(double v, double hi, const char* axis) {
  if (!std::isfinite(v) || v < -kClampTolerancePx || v > hi + kClampTolerancePx) {
    throw Error(ErrorCode::OutOfBounds,
                std::string(axis) + "=" + std::to_string(v) + " outside [0, " +
                    std::to_string(hi) + "]");
  }
  return std::clamp(v, 0.0, hi);
}

}  // namespace

std::size_t Stroke5Sequence::stroke_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : points) n += (p.pen_up || p.done) ? 1 : 0;
  return n;
}

std::vector<std::vector<Point>> Stroke5Sequence::absolute_strokes() const {
  std::vector<std::vector<Point>> out;
  std::vector<Point> current;
  double x = 0.0;
  double y = 0.0;
  for (const auto& p : points) {
    x += p.dx;
    y += p.dy;
    current.push_back({x, y});
    if (p.pen_up || p.done) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<RawStroke> Stroke5Sequence::to_pixels() const {
  const double scale = std::max(canvas.width, canvas.height);
  std::vector<RawStroke> out;
  for (auto& stroke : absolute_strokes()) {
    RawStroke raw;
    raw.points.reserve(stroke.size());
    for (const auto& p : stroke) raw.points.push_back({p.x * scale, p.y * scale});
    out.push_back(std::move(raw));
  }
  return out;
}

bool NormBBox::valid() const noexcept {
  constexpr double eps = 1e-12;
  const bool finite = std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h);
  return finite && x >= 0.0 && y >= 0.0 && w >= 0.0 && h >= 0.0 && x + w <= 1.0 + eps &&
         y + h <= 1.0 + eps;
}

std::vector<RawStroke> clamp_to_canvas(std::span<const RawStroke> strokes, Canvas canvas) {
  require_canvas(canvas);
  std::vector<RawStroke> out(strokes.begin(), strokes.end());
  for (auto& s : out) {
    for (auto& p : s.points) {
      p.x = clamp_coord(p.x, canvas.width, "x");
      p.y = clamp_coord(p.y, canvas.height, "y");
    }
  }
  return out;
}

Stroke5Sequence normalize_strokes(std::span<const RawStroke> strokes, Canvas canvas) {
  if (strokes.empty()) throw Error(ErrorCode::EmptyInput, "no strokes");
  for (const auto& s : strokes) {
    if (s.points.empty()) throw Error(ErrorCode::EmptyInput, "stroke with no points");
  }
  const auto clamped = clamp_to_canvas(strokes, canvas);
  const double divisor = std::max(canvas.width, canvas.height);

  Stroke5Sequence seq;
  seq.canvas = canvas;
  Point prev{0.0, 0.0};
  for (std::size_t si = 0; si < clamped.size(); ++si) {
    const auto& pts = clamped[si].points;
    for (std::size_t pi = 0; pi < pts.size(); ++pi) {
      Stroke5Point sp;
      sp.dx = (pts[pi].x - prev.x) / divisor;
      sp.dy = (pts[pi].y - prev.y) / divisor;
      const bool last_in_stroke = pi + 1 == pts.size();
      const bool last_overall = last_in_stroke && si + 1 == clamped.size();
      if (last_overall) {
        sp.done = 1;
      } else if (last_in_stroke) {
        sp.pen_up = 1;
      } else {
        sp.pen_down = 1;
      }
      seq.points.push_back(sp);
      prev = pts[pi];
    }
  }
  return seq;
}

NormBBox bbox_of(std::span<const RawStroke> strokes, Canvas canvas) {
  require_canvas(canvas);
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  bool any = false;
  for (const auto& s : clamp_to_canvas(strokes, canvas)) {
    for (const auto& p : s.points) {
      any = true;
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  if (!any) throw Error(ErrorCode::EmptyInput, "no points");
  return {min_x / canvas.width, min_y / canvas.height, (max_x - min_x) / canvas.width,
          (max_y - min_y) / canvas.height};
}

double arc_length(std::span<const Point> points) noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  return total;
}

std::vector<Point> resample_stroke(std::span<const Point> points, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "resample count must be >= 2");
  const double total = arc_length(points);
  if (points.size() < 2 || !(total > 0.0)) {
    throw Error(ErrorCode::DegenerateStroke, "stroke has zero arc length");
  }

  std::vector<Point> out;
  out.reserve(n);
  out.push_back(points.front());
  const double step = total / static_cast<double>(n - 1);
  std::size_t seg = 1;
  double walked = 0.0;  // arc length at points[seg - 1]
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = step * static_cast<double>(k);
    while (seg < points.size()) {
      const double len = std::hypot(points[seg].x - points[seg - 1].x,
                                    points[seg].y - points[seg - 1].y);
      if (walked + len >= target && len > 0.0) {
        const double t = (target - walked) / len;
        out.push_back({points[seg - 1].x + t * (points[seg].x - points[seg - 1].x),
                       points[seg - 1].y + t * (points[seg].y - points[seg - 1].y)});
        break;
      }
      walked += len;
      ++seg;
    }
    if (seg == points.size()) out.push_back(points.back());
  }
  out.push_back(points.back());
  return out;
}

}  // namespace sketchsearch

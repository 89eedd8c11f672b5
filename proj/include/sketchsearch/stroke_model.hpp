#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sketchsearch {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Pixel dimensions of a drawing surface or screen.
struct Canvas {
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const Canvas&, const Canvas&) = default;
};

/// Points captured between one touch-down and the following touch-up.
struct RawStroke {
  std::vector<Point> points;

  friend bool operator==(const RawStroke&, const RawStroke&) = default;
};

/// One vertex of a stroke-5 sequence. Exactly one of the three state flags is
/// set: the pen stays down after this vertex, the pen lifts after it, or the
/// drawing ends with it.
struct Stroke5Point {
  double dx = 0.0;
  double dy = 0.0;
  std::uint8_t pen_down = 0;
  std::uint8_t pen_up = 0;
  std::uint8_t done = 0;

  friend bool operator==(const Stroke5Point&, const Stroke5Point&) = default;
};

struct Stroke5Sequence {
  std::vector<Stroke5Point> points;
  Canvas canvas;

  std::size_t stroke_count() const noexcept;

  /// Integrates the deltas back into absolute coordinates, one polyline per
  /// stroke, in the normalized (divided by max canvas side) space.
  std::vector<std::vector<Point>> absolute_strokes() const;

  /// Same as absolute_strokes() but scaled back to canvas pixels.
  std::vector<RawStroke> to_pixels() const;
};

/// Axis-aligned box in fractions of the canvas width and height.
struct NormBBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool valid() const noexcept;
  double area() const noexcept { return w * h; }

  friend bool operator==(const NormBBox&, const NormBBox&) = default;
};

/// Largest distance outside the canvas that is clamped instead of rejected.
inline constexpr double kClampTolerancePx = 1.0;

/// Converts raw strokes to stroke-5. Deltas are divided by the larger canvas
/// side; each stroke's first delta is taken from the previous stroke's last
/// vertex, or from the origin for the first stroke.
Stroke5Sequence normalize_strokes(std::span<const RawStroke> strokes, Canvas canvas);

NormBBox bbox_of(std::span<const RawStroke> strokes, Canvas canvas);

/// Resamples a polyline into n points equally spaced along its arc length.
std::vector<Point> resample_stroke(std::span<const Point> points, std::size_t n);

double arc_length(std::span<const Point> points) noexcept;

/// Clamps points lying at most kClampTolerancePx outside the canvas and
/// throws OutOfBounds for anything further out.
std::vector<RawStroke> clamp_to_canvas(std::span<const RawStroke> strokes, Canvas canvas);

}  // namespace sketchsearch

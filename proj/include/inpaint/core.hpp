#pragma once

// Raster image, mask and patch-geometry primitives shared by the whole
// library. All types are plain value types; nothing here allocates beyond
// its own pixel storage, and nothing mutates shared state.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace inpaint {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Pixel coordinate, (col, row) with col along the horizontal axis.
// Kept in this order everywhere to avoid transposition bugs.
struct Point {
  int col = 0;
  int row = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline std::size_t row_major_index(Point p, int width) {
  return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width) +
         static_cast<std::size_t>(p.col);
}

namespace detail {

inline std::size_t checked_area(int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("raster dimensions must be at least 1x1");
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace detail

/// 8-bit RGB image, row-major pixel grid.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {})
      : width_(width), height_(height), pixels_(detail::checked_area(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Point p) const {
    return p.col >= 0 && p.col < width_ && p.row >= 0 && p.row < height_;
  }

  const Rgb& at(Point p) const { return pixels_[row_major_index(p, width_)]; }
  Rgb& at(Point p) { return pixels_[row_major_index(p, width_)]; }

  const std::vector<Rgb>& pixels() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

// Region state of one pixel. Known cells are the original source material
// and stay immutable for the lifetime of a repair job; Missing cells form
// the target region; Filled marks cells synthesized by the engine.
enum class PixelState : std::uint8_t { Known, Missing, Filled };

class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, PixelState fill = PixelState::Known)
      : width_(width), height_(height), states_(detail::checked_area(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Point p) const {
    return p.col >= 0 && p.col < width_ && p.row >= 0 && p.row < height_;
  }

  PixelState at(Point p) const { return states_[row_major_index(p, width_)]; }
  void set(Point p, PixelState s) { states_[row_major_index(p, width_)] = s; }

  bool is_missing(Point p) const { return at(p) == PixelState::Missing; }
  // Known or Filled: the cell carries a pixel value that may be consumed.
  bool is_usable(Point p) const { return at(p) != PixelState::Missing; }

  void mark_filled(Point p) {
    auto& s = states_[row_major_index(p, width_)];
    if (s != PixelState::Missing)
      throw std::logic_error("mark_filled: cell is not Missing");
    s = PixelState::Filled;
  }

  std::size_t count(PixelState s) const {
    std::size_t n = 0;
    for (PixelState v : states_)
      if (v == s) ++n;
    return n;
  }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<PixelState> states_;
};

// Square patch window. side must be odd so a unique center pixel exists.
struct Patch {
  Point center;
  int side = 9;

  int half() const { return side / 2; }
};

// Half-open pixel rectangle [col_begin, col_end) x [row_begin, row_end).
struct PixelRect {
  int col_begin = 0;
  int col_end = 0;
  int row_begin = 0;
  int row_end = 0;

  int width() const { return col_end - col_begin; }
  int height() const { return row_end - row_begin; }
  std::size_t area() const {
    return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  bool contains(Point p) const {
    return p.col >= col_begin && p.col < col_end && p.row >= row_begin && p.row < row_end;
  }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Intersection of the patch window with the image bounds. Border patches
/// are clipped, never rejected; per-patch sums iterate the clipped window.
inline PixelRect clip_patch(const Patch& patch, int width, int height) {
  if (patch.side < 3 || patch.side % 2 == 0)
    throw std::invalid_argument("patch side must be odd and >= 3");
  if (patch.center.col < 0 || patch.center.col >= width || patch.center.row < 0 ||
      patch.center.row >= height)
    throw std::invalid_argument("patch center out of bounds");
  const int h = patch.half();
  PixelRect r;
  r.col_begin = patch.center.col - h < 0 ? 0 : patch.center.col - h;
  r.col_end = patch.center.col + h + 1 > width ? width : patch.center.col + h + 1;
  r.row_begin = patch.center.row - h < 0 ? 0 : patch.center.row - h;
  r.row_end = patch.center.row + h + 1 > height ? height : patch.center.row + h + 1;
  return r;
}

// Fill front: Missing pixels with at least one usable 4-neighbor, in
// row-major order. Row-major ordering makes every downstream tie-break
// deterministic.
using FillFront = std::vector<Point>;

inline FillFront extract_fill_front(const Mask& mask) {
  FillFront front;
  for (int row = 0; row < mask.height(); ++row) {
    for (int col = 0; col < mask.width(); ++col) {
      const Point p{col, row};
      if (!mask.is_missing(p)) continue;
      const Point n4[4] = {{col - 1, row}, {col + 1, row}, {col, row - 1}, {col, row + 1}};
      for (const Point& n : n4) {
        if (mask.in_bounds(n) && mask.is_usable(n)) {
          front.push_back(p);
          break;
        }
      }
    }
  }
  return front;
}

/// Rec.601 scalar intensity in [0, 255].
inline double luma(Rgb px) { return 0.299 * px.r + 0.587 * px.g + 0.114 * px.b; }

// Algorithm selector shared by priority, matcher and engine.
enum class Variant { Classic, Improved };

}  // namespace inpaint

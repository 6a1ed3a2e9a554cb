#pragma once

// Fill-order priority P(p) = C(p) * D(p) on the fill front: confidence
// term (patch-average or Manhattan-weighted sum), isophote data term, and
// target selection.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include "inpaint/core.hpp"

namespace inpaint {

/// Per-pixel nonnegative confidence. Starts at 1 on Known cells and 0 on
/// Missing cells; the engine writes repaired cells as it goes.
class ConfidenceMap {
 public:
  ConfidenceMap() = default;
  ConfidenceMap(int width, int height, double fill = 0.0)
      : width_(width), height_(height), values_(detail::checked_area(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }

  double at(Point p) const { return values_[row_major_index(p, width_)]; }
  void set(Point p, double v) { values_[row_major_index(p, width_)] = v; }

  const std::vector<double>& values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

inline ConfidenceMap init_confidence(const Mask& mask) {
  if (mask.count(PixelState::Filled) != 0)
    throw std::invalid_argument("init_confidence: mask already contains Filled cells");
  ConfidenceMap conf(mask.width(), mask.height());
  for (int row = 0; row < mask.height(); ++row)
    for (int col = 0; col < mask.width(); ++col)
      conf.set({col, row}, mask.is_missing({col, row}) ? 0.0 : 1.0);
  return conf;
}

inline double manhattan_distance(Point p, Point q) {
  return std::abs(p.col - q.col) + std::abs(p.row - q.row);
}

/// Confidence weight of a patch cell q relative to the patch center p:
/// half the Manhattan distance (0 center, 0.5 orthogonal, 1.0 diagonal).
inline double confidence_weight(Point p, Point q) { return manhattan_distance(p, q) / 2.0; }

namespace detail {

// Shared summation core: sum of weight(p,q) * C(q) over usable cells q of
// the clipped patch. The weight functor is a test seam as much as an
// implementation detail.
template <typename WeightFn>
double confidence_sum(Point p, const ConfidenceMap& conf, const Mask& mask, const Patch& patch,
                      WeightFn&& weight_of) {
  const PixelRect rect = clip_patch(patch, mask.width(), mask.height());
  double sum = 0.0;
  for (int row = rect.row_begin; row < rect.row_end; ++row) {
    for (int col = rect.col_begin; col < rect.col_end; ++col) {
      const Point q{col, row};
      if (mask.is_usable(q)) sum += weight_of(p, q) * conf.at(q);
    }
  }
  return sum;
}

}  // namespace detail

/// Patch-average confidence: sum of C(q) over usable cells, divided by the
/// clipped patch area.
inline double classic_confidence(Point p, const ConfidenceMap& conf, const Mask& mask,
                                 const Patch& patch) {
  const double sum =
      detail::confidence_sum(p, conf, mask, patch, [](Point, Point) { return 1.0; });
  return sum / static_cast<double>(clip_patch(patch, mask.width(), mask.height()).area());
}

/// Manhattan-weighted confidence: sum of weight(p,q) * C(q) over usable
/// cells. Unnormalized by default; `normalize` divides by the clipped
/// patch area.
inline double weighted_confidence(Point p, const ConfidenceMap& conf, const Mask& mask,
                                  const Patch& patch, bool normalize = false) {
  const double sum = detail::confidence_sum(p, conf, mask, patch, confidence_weight);
  if (!normalize) return sum;
  return sum / static_cast<double>(clip_patch(patch, mask.width(), mask.height()).area());
}

struct LumaGradient {
  double dcol = 0.0;
  double drow = 0.0;
};

namespace detail {

inline bool usable_cell(const Mask& mask, Point p) { return mask.in_bounds(p) && mask.is_usable(p); }

// One axis of the luma gradient at a valueless (front) pixel. Central
// difference over the two axis neighbors when both carry values; with one
// side usable, the slope of the two nearest usable pixels on that side;
// zero when neither side is usable.
inline double axis_gradient(Point p, Point step, const Image& image, const Mask& mask) {
  const Point plus{p.col + step.col, p.row + step.row};
  const Point minus{p.col - step.col, p.row - step.row};
  const bool has_plus = usable_cell(mask, plus);
  const bool has_minus = usable_cell(mask, minus);
  if (has_plus && has_minus) return (luma(image.at(plus)) - luma(image.at(minus))) / 2.0;
  if (has_plus) {
    const Point plus2{p.col + 2 * step.col, p.row + 2 * step.row};
    if (usable_cell(mask, plus2)) return luma(image.at(plus2)) - luma(image.at(plus));
    return 0.0;
  }
  if (has_minus) {
    const Point minus2{p.col - 2 * step.col, p.row - 2 * step.row};
    if (usable_cell(mask, minus2)) return luma(image.at(minus)) - luma(image.at(minus2));
    return 0.0;
  }
  return 0.0;
}

}  // namespace detail

/// Luma gradient at a front pixel, estimated from usable neighbors only.
inline LumaGradient luma_gradient(Point p, const Image& image, const Mask& mask) {
  return {detail::axis_gradient(p, {1, 0}, image, mask),
          detail::axis_gradient(p, {0, 1}, image, mask)};
}

/// Isophote data term: |isophote . front normal| / 255 + epsilon. The
/// normal is the unit gradient of the mask indicator (usable = 1); when
/// that gradient vanishes the dot product is taken as zero. The additive
/// epsilon keeps priorities ordered when every isophote is flat.
inline double data_term(Point p, const Image& image, const Mask& mask, double epsilon = 0.001) {
  const LumaGradient g = luma_gradient(p, image, mask);
  // isophote = gradient rotated 90 degrees
  const double iso_col = -g.drow;
  const double iso_row = g.dcol;

  const auto indicator = [&](Point q) {
    return detail::usable_cell(mask, q) ? 1.0 : 0.0;
  };
  const double n_col =
      (indicator({p.col + 1, p.row}) - indicator({p.col - 1, p.row})) / 2.0;
  const double n_row =
      (indicator({p.col, p.row + 1}) - indicator({p.col, p.row - 1})) / 2.0;
  const double norm = std::sqrt(n_col * n_col + n_row * n_row);

  double dot = 0.0;
  if (norm > 0.0) dot = (iso_col * n_col + iso_row * n_row) / norm;
  return std::abs(dot) / 255.0 + epsilon;
}

struct PriorityConfig {
  Variant variant = Variant::Improved;
  int patch_side = 9;
  bool normalize_confidence = false;
  double epsilon = 0.001;
};

struct PriorityRecord {
  Point target;
  double confidence_term = 0.0;
  double data_term = 0.0;
  double priority = 0.0;
};

/// Evaluates P(p) for every front pixel and returns the maximizer.
/// Ties go to the smallest row-major index; the front is already in
/// row-major order, so the first strict maximum wins.
inline PriorityRecord select_target(const FillFront& front, const Image& image, const Mask& mask,
                                    const ConfidenceMap& conf, const PriorityConfig& cfg) {
  if (front.empty()) throw std::invalid_argument("select_target: empty fill front");
  PriorityRecord best;
  bool first = true;
  for (const Point& p : front) {
    const Patch patch{p, cfg.patch_side};
    double c;
    if (cfg.variant == Variant::Classic) {
      c = cfg.normalize_confidence
              ? classic_confidence(p, conf, mask, patch)
              : detail::confidence_sum(p, conf, mask, patch, [](Point, Point) { return 1.0; });
    } else {
      c = weighted_confidence(p, conf, mask, patch, cfg.normalize_confidence);
    }
    const double d = data_term(p, image, mask, cfg.epsilon);
    const double priority = c * d;
    if (first || priority > best.priority) {
      best = {p, c, d, priority};
      first = false;
    }
  }
  return best;
}

}  // namespace inpaint

#pragma once

// Best-match search for a target patch: plain SSD criterion and the
// distance-augmented score with a bounded search radius. This is the hot
// kernel of a repair job, so candidate eligibility is answered from a
// summed-area table and SSD loops abandon early against the current best.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "inpaint/core.hpp"

namespace inpaint {

// Which cells a source patch may consist of. OriginalKnownOnly excludes
// synthesized (Filled) cells so matching errors cannot feed on themselves.
enum class SourcePolicy { OriginalKnownOnly, KnownOrFilled };

struct MatchConfig {
  double m = 0.0095;                // SSD weight of the distance-augmented score
  int search_radius = 60;           // Euclidean, center-to-center; 0 = unbounded
  SourcePolicy source_policy = SourcePolicy::OriginalKnownOnly;
  bool normalize_ssd = false;       // divide the sum by the compared-cell count

  void validate() const {
    if (m < 0.0) throw std::invalid_argument("match weight m must be >= 0");
    if (search_radius < 0) throw std::invalid_argument("search radius must be >= 0");
  }
};

struct MatchResult {
  Point source_center;
  double ssd = 0.0;        // cube root of the (possibly normalized) sum
  double ssd_sum = 0.0;    // the sum itself, the value the score is built from
  double distance = 0.0;
  double score = 0.0;
  std::size_t candidates_scanned = 0;
};

inline double euclidean_distance(Point p, Point q) {
  const double dc = p.col - q.col;
  const double dr = p.row - q.row;
  return std::sqrt(dc * dc + dr * dr);
}

/// Distance-augmented match score: ssd_value * m + distance.
inline double combined_score(double ssd_value, double distance, double m) {
  return ssd_value * m + distance;
}

namespace detail {

// Offsets (relative to the patch center) of the target cells that carry a
// value, with their pixels. Only these cells participate in SSD sums.
struct TargetCells {
  std::vector<Point> offsets;
  std::vector<Rgb> pixels;
};

inline TargetCells collect_target_cells(const Patch& target, const Image& image,
                                        const Mask& mask) {
  const PixelRect rect = clip_patch(target, image.width(), image.height());
  TargetCells cells;
  for (int row = rect.row_begin; row < rect.row_end; ++row) {
    for (int col = rect.col_begin; col < rect.col_end; ++col) {
      const Point q{col, row};
      if (!mask.is_usable(q)) continue;
      cells.offsets.push_back({col - target.center.col, row - target.center.row});
      cells.pixels.push_back(image.at(q));
    }
  }
  return cells;
}

inline bool cell_eligible(const Mask& mask, Point p, SourcePolicy policy) {
  return policy == SourcePolicy::OriginalKnownOnly ? mask.at(p) == PixelState::Known
                                                   : mask.is_usable(p);
}

// Summed-area table of ineligible-cell counts; answers "is this window
// free of ineligible cells" in O(1).
class EligibilityTable {
 public:
  EligibilityTable(const Mask& mask, SourcePolicy policy)
      : width_(mask.width()), height_(mask.height()), sums_((width_ + 1) * (height_ + 1), 0) {
    for (int row = 0; row < height_; ++row) {
      for (int col = 0; col < width_; ++col) {
        const std::int32_t bad = cell_eligible(mask, {col, row}, policy) ? 0 : 1;
        at(col + 1, row + 1) =
            bad + at(col, row + 1) + at(col + 1, row) - at(col, row);
      }
    }
  }

  // Window given as half-open [c0,c1) x [r0,r1), assumed in bounds.
  bool window_clean(int c0, int r0, int c1, int r1) const {
    return at(c1, r1) - at(c0, r1) - at(c1, r0) + at(c0, r0) == 0;
  }

 private:
  std::int32_t& at(int c, int r) { return sums_[static_cast<std::size_t>(r) * (width_ + 1) + c]; }
  std::int32_t at(int c, int r) const {
    return sums_[static_cast<std::size_t>(r) * (width_ + 1) + c];
  }

  int width_;
  int height_;
  std::vector<std::int32_t> sums_;
};

inline std::int64_t squared_rgb_diff(Rgb a, Rgb b) {
  const std::int64_t dr = static_cast<int>(a.r) - static_cast<int>(b.r);
  const std::int64_t dg = static_cast<int>(a.g) - static_cast<int>(b.g);
  const std::int64_t db = static_cast<int>(a.b) - static_cast<int>(b.b);
  return dr * dr + dg * dg + db * db;
}

// Raw SSD sum between the target's usable cells and the corresponding
// candidate cells. Stops once the sum reaches `abandon_at` (the candidate
// can no longer win); pass a negative value to disable.
inline std::int64_t ssd_sum_raw(const TargetCells& cells, Point candidate_center,
                                const Image& image, std::int64_t abandon_at = -1) {
  std::int64_t sum = 0;
  const std::size_t n = cells.offsets.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point off = cells.offsets[i];
    sum += squared_rgb_diff(
        cells.pixels[i],
        image.at({candidate_center.col + off.col, candidate_center.row + off.row}));
    if (abandon_at >= 0 && sum >= abandon_at) return sum;
  }
  return sum;
}

inline bool candidate_window_in_bounds(Point center, int half, int width, int height) {
  return center.col - half >= 0 && center.col + half < width && center.row - half >= 0 &&
         center.row + half < height;
}

}  // namespace detail

/// SSD similarity between a target patch and a fully-known candidate
/// patch: sum of squared RGB differences over the target's usable cells,
/// returned on cube-root scale. The candidate window must lie fully inside
/// the image and contain only eligible source cells.
inline double ssd(const Patch& target, Point candidate_center, const Image& image,
                  const Mask& mask, SourcePolicy policy = SourcePolicy::OriginalKnownOnly,
                  bool normalize = false) {
  const int half = target.half();
  if (!detail::candidate_window_in_bounds(candidate_center, half, image.width(), image.height()))
    throw std::invalid_argument("ssd: candidate window out of bounds");
  for (int dr = -half; dr <= half; ++dr)
    for (int dc = -half; dc <= half; ++dc)
      if (!detail::cell_eligible(mask, {candidate_center.col + dc, candidate_center.row + dr},
                                 policy))
        throw std::invalid_argument("ssd: candidate window contains ineligible cells");

  const detail::TargetCells cells = detail::collect_target_cells(target, image, mask);
  const std::int64_t raw = detail::ssd_sum_raw(cells, candidate_center, image);
  double sum = static_cast<double>(raw);
  if (normalize && !cells.offsets.empty()) sum /= static_cast<double>(cells.offsets.size());
  return std::cbrt(sum);
}

/// Exhaustive scan over every eligible candidate center (optionally
/// restricted to a Euclidean radius around the target center). Returns the
/// minimizer of the variant's score, ties broken by smallest row-major
/// candidate index; empty when the radius excludes every candidate.
///
/// Scores: classic = cube-rooted SSD (argmin-equivalent to the raw sum);
/// improved = ssd_sum * m + center distance, with ssd_sum the raw
/// (or count-normalized) sum whose magnitude the m range was chosen for.
inline std::optional<MatchResult> find_best_match(const Patch& target, const Image& image,
                                                  const Mask& mask, const MatchConfig& config,
                                                  Variant variant) {
  config.validate();
  if (image.width() != mask.width() || image.height() != mask.height())
    throw std::invalid_argument("find_best_match: image/mask dimension mismatch");

  const int half = target.half();
  const int width = image.width();
  const int height = image.height();
  const detail::TargetCells cells = detail::collect_target_cells(target, image, mask);
  const detail::EligibilityTable eligible(mask, config.source_policy);

  const double count_norm =
      config.normalize_ssd && !cells.offsets.empty()
          ? 1.0 / static_cast<double>(cells.offsets.size())
          : 1.0;
  const std::int64_t radius_sq =
      config.search_radius > 0
          ? static_cast<std::int64_t>(config.search_radius) * config.search_radius
          : -1;

  bool found = false;
  MatchResult best;
  std::int64_t best_raw = 0;
  std::size_t scanned = 0;

  for (int row = half; row < height - half; ++row) {
    const std::int64_t drow = row - target.center.row;
    if (radius_sq >= 0 && drow * drow > radius_sq) continue;
    for (int col = half; col < width - half; ++col) {
      if (radius_sq >= 0) {
        const std::int64_t dcol = col - target.center.col;
        if (drow * drow + dcol * dcol > radius_sq) continue;
      }
      if (!eligible.window_clean(col - half, row - half, col + half + 1, row + half + 1))
        continue;

      const Point center{col, row};
      ++scanned;

      if (variant == Variant::Classic) {
        // Argmin over raw sums; ties resolve to the earlier (row-major)
        // candidate because only strict improvement replaces the best.
        const std::int64_t abandon = found ? best_raw : -1;
        const std::int64_t raw = detail::ssd_sum_raw(cells, center, image, abandon);
        if (!found || raw < best_raw) {
          found = true;
          best_raw = raw;
          best.source_center = center;
        }
      } else {
        const double dist = euclidean_distance(target.center, center);
        std::int64_t abandon = -1;
        if (found) {
          if (dist >= best.score) continue;  // even a zero-SSD candidate loses
          // raw >= abandon implies score >= best.score; such candidates
          // lose outright or lose the tie to the earlier best.
          if (config.m > 0.0) {
            const double max_raw = (best.score - dist) / (config.m * count_norm);
            if (max_raw < 9.0e18) abandon = static_cast<std::int64_t>(std::ceil(max_raw)) + 1;
          }
        }
        const std::int64_t raw = detail::ssd_sum_raw(cells, center, image, abandon);
        const double sum = static_cast<double>(raw) * count_norm;
        const double score = combined_score(sum, dist, config.m);
        if (!found || score < best.score) {
          found = true;
          best_raw = raw;
          best.source_center = center;
          best.score = score;
        }
      }
    }
  }

  if (!found) return std::nullopt;

  // A stored best always completed its full sum (an abandoned candidate
  // can never replace the best), so one clean recompute fills the record.
  const std::int64_t raw = detail::ssd_sum_raw(cells, best.source_center, image);
  best.ssd_sum = static_cast<double>(raw) * count_norm;
  best.ssd = std::cbrt(best.ssd_sum);
  best.distance = euclidean_distance(target.center, best.source_center);
  best.score = variant == Variant::Classic
                   ? best.ssd
                   : combined_score(best.ssd_sum, best.distance, config.m);
  best.candidates_scanned = scanned;
  return best;
}

}  // namespace inpaint

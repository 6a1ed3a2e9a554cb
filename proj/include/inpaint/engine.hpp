#pragma once

// The main repair loop: extract the fill front, pick the highest-priority
// target, find its best source patch, copy pixels, update confidence,
// repeat until no Missing cell remains.

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "inpaint/core.hpp"
#include "inpaint/matcher.hpp"
#include "inpaint/priority.hpp"

namespace inpaint {

enum class FillMode { Patch, CenterPixel };

struct InpaintConfig {
  Variant variant = Variant::Improved;
  int patch_side = 9;
  FillMode fill_mode = FillMode::Patch;
  MatchConfig match;
  // Unset resolves per variant: the classic confidence is a patch average,
  // the weighted confidence is reported as a plain sum.
  std::optional<bool> normalize_confidence;
  double epsilon = 0.001;

  bool resolved_normalize() const {
    return normalize_confidence.value_or(variant == Variant::Classic);
  }

  PriorityConfig priority_config() const {
    return {variant, patch_side, resolved_normalize(), epsilon};
  }

  void validate() const {
    if (patch_side < 3 || patch_side % 2 == 0)
      throw std::invalid_argument("patch side must be odd and >= 3");
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    match.validate();
  }
};

// The job cannot produce a result from its inputs (for example a mask with
// no source material at all).
class UnprocessableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationRecord {
  Point target;
  double confidence_term = 0.0;
  double data_term = 0.0;
  double priority = 0.0;
  Point source;
  double ssd = 0.0;
  double ssd_sum = 0.0;
  double distance = 0.0;
  double score = 0.0;
  int radius_used = 0;             // 0 = unbounded
  double written_confidence = 0.0; // value assigned to the cells filled this turn
  std::vector<Point> filled;

  std::size_t pixels_filled() const { return filled.size(); }
};

struct RepairTrace {
  std::vector<IterationRecord> records;
  std::size_t iterations = 0;
  std::size_t initial_missing = 0;
  double duration_ms = 0.0;
};

struct InpaintResult {
  Image image;
  RepairTrace trace;
};

/// Copies source pixels into the Missing cells of the target patch (or
/// just its center in CenterPixel mode) and marks them Filled. Known cells
/// are never written. Returns the coordinates that were filled.
inline std::vector<Point> fill_patch(const Patch& target, Point source_center, Image& image,
                                     Mask& mask, FillMode mode) {
  std::vector<Point> filled;
  if (mode == FillMode::CenterPixel) {
    if (mask.is_missing(target.center)) {
      const Point s = source_center;
      image.at(target.center) = image.at(s);
      mask.mark_filled(target.center);
      filled.push_back(target.center);
    }
    return filled;
  }
  const PixelRect rect = clip_patch(target, image.width(), image.height());
  for (int row = rect.row_begin; row < rect.row_end; ++row) {
    for (int col = rect.col_begin; col < rect.col_end; ++col) {
      const Point t{col, row};
      if (!mask.is_missing(t)) continue;
      const Point s{source_center.col + (col - target.center.col),
                    source_center.row + (row - target.center.row)};
      image.at(t) = image.at(s);
      mask.mark_filled(t);
      filled.push_back(t);
    }
  }
  return filled;
}

/// Assigns the iteration's confidence value to every newly filled cell.
inline void update_confidence(ConfidenceMap& conf, const std::vector<Point>& filled,
                              double confidence_value) {
  for (const Point& p : filled) conf.set(p, confidence_value);
}

namespace detail {

// Radius ladder: the configured radius, doubled on a dry scan until it
// covers the image, then unbounded.
inline MatchResult match_with_fallback(const Patch& target, const Image& image, const Mask& mask,
                                       const MatchConfig& config, Variant variant,
                                       int& radius_used) {
  MatchConfig attempt = config;
  const double diagonal =
      std::sqrt(static_cast<double>(image.width()) * image.width() +
                static_cast<double>(image.height()) * image.height());
  for (;;) {
    if (std::optional<MatchResult> res = find_best_match(target, image, mask, attempt, variant)) {
      radius_used = attempt.search_radius;
      return *res;
    }
    if (attempt.search_radius == 0)
      throw std::runtime_error(
          "inpaint: no eligible source patch exists even with an unbounded search"
          " (no fully-known window of the configured patch size)");
    attempt.search_radius = attempt.search_radius >= diagonal ? 0 : attempt.search_radius * 2;
  }
}

}  // namespace detail

/// Repairs every Missing cell of `mask` in `image`. Known pixels come out
/// byte-identical; the result is deterministic for identical inputs.
inline InpaintResult inpaint(const Image& image, const Mask& mask, const InpaintConfig& config = {}) {
  config.validate();
  if (image.width() != mask.width() || image.height() != mask.height())
    throw std::invalid_argument("inpaint: image and mask dimensions differ");

  const std::size_t initial_missing = mask.count(PixelState::Missing);
  const std::size_t total = static_cast<std::size_t>(image.width()) * image.height();
  if (initial_missing == total)
    throw UnprocessableError("inpaint: mask marks every pixel Missing; no source material");

  const auto t0 = std::chrono::steady_clock::now();
  InpaintResult result{image, {}};
  result.trace.initial_missing = initial_missing;
  if (initial_missing == 0) {
    result.trace.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

  Mask work_mask = mask;
  ConfidenceMap conf = init_confidence(work_mask);
  const PriorityConfig prio_cfg = config.priority_config();
  std::size_t remaining = initial_missing;

  while (remaining > 0) {
    const FillFront front = extract_fill_front(work_mask);
    if (front.empty())
      throw std::runtime_error("inpaint: fill front is empty while Missing cells remain");

    const PriorityRecord target = select_target(front, result.image, work_mask, conf, prio_cfg);
    const Patch patch{target.target, config.patch_side};

    int radius_used = 0;
    const MatchResult match = detail::match_with_fallback(patch, result.image, work_mask,
                                                          config.match, config.variant, radius_used);

    // Write-back value is the patch-average confidence of the target,
    // taken before the fill mutates the mask.
    const double written = classic_confidence(target.target, conf, work_mask, patch);

    IterationRecord rec;
    rec.target = target.target;
    rec.confidence_term = target.confidence_term;
    rec.data_term = target.data_term;
    rec.priority = target.priority;
    rec.source = match.source_center;
    rec.ssd = match.ssd;
    rec.ssd_sum = match.ssd_sum;
    rec.distance = match.distance;
    rec.score = match.score;
    rec.radius_used = radius_used;
    rec.written_confidence = written;
    rec.filled = fill_patch(patch, match.source_center, result.image, work_mask, config.fill_mode);

    update_confidence(conf, rec.filled, written);
    remaining -= rec.filled.size();
    result.trace.records.push_back(std::move(rec));
  }

  result.trace.iterations = result.trace.records.size();
  result.trace.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace inpaint

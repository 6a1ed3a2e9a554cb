#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include <catch2/catch.hpp>

#include "inpaint/engine.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace inpaint;

namespace {

// BFS depth of every Missing cell from the usable region (depth 1 = on
// the initial front), 4-connected.
std::vector<int> hole_depths(const Mask& mask) {
  std::vector<int> depth(static_cast<std::size_t>(mask.width()) * mask.height(), 0);
  std::deque<Point> queue;
  for (const Point& p : extract_fill_front(mask)) {
    depth[row_major_index(p, mask.width())] = 1;
    queue.push_back(p);
  }
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    const int d = depth[row_major_index(p, mask.width())];
    const Point n4[4] = {{p.col - 1, p.row}, {p.col + 1, p.row}, {p.col, p.row - 1},
                         {p.col, p.row + 1}};
    for (const Point& n : n4) {
      if (!mask.in_bounds(n) || !mask.is_missing(n)) continue;
      auto& dn = depth[row_major_index(n, mask.width())];
      if (dn == 0) {
        dn = d + 1;
        queue.push_back(n);
      }
    }
  }
  return depth;
}

}  // namespace

TEST_CASE("fill_patch with nothing missing copies nothing", "[engine]") {
  Image img(9, 9, {10, 20, 30});
  const Image before = img;
  Mask mask(9, 9, PixelState::Known);
  const auto filled = fill_patch({{4, 4}, 3}, {7, 7}, img, mask, FillMode::Patch);
  CHECK(filled.empty());
  CHECK(img == before);
}

TEST_CASE("fill_patch copies exactly the missing cells of the target patch", "[engine]") {
  Image img(9, 9, {0, 0, 0});
  for (int row = 0; row < 9; ++row)
    for (int col = 0; col < 9; ++col)
      img.at({col, row}) = {static_cast<std::uint8_t>(col * 20),
                            static_cast<std::uint8_t>(row * 20), 50};
  Mask mask(9, 9, PixelState::Known);
  mask.set({4, 4}, PixelState::Missing);
  mask.set({5, 4}, PixelState::Missing);
  mask.set({4, 5}, PixelState::Missing);
  mask.set({3, 3}, PixelState::Missing);

  Image work = img;
  const auto filled = fill_patch({{4, 4}, 3}, {1, 1}, work, mask, FillMode::Patch);
  REQUIRE(filled.size() == 4);
  for (const Point& p : filled) {
    CHECK(mask.at(p) == PixelState::Filled);
    const Point src{1 + (p.col - 4), 1 + (p.row - 4)};
    CHECK(work.at(p) == img.at(src));
  }
  // Known cells stayed byte-identical.
  for (int row = 0; row < 9; ++row)
    for (int col = 0; col < 9; ++col)
      if (mask.at({col, row}) == PixelState::Known)
        REQUIRE(work.at({col, row}) == img.at({col, row}));
}

TEST_CASE("center-pixel mode fills only the center", "[engine]") {
  Image img(9, 9, {60, 60, 60});
  img.at({1, 1}) = {200, 10, 10};
  Mask mask(9, 9, PixelState::Known);
  mask.set({4, 4}, PixelState::Missing);
  mask.set({5, 4}, PixelState::Missing);
  const auto filled = fill_patch({{4, 4}, 3}, {1, 1}, img, mask, FillMode::CenterPixel);
  REQUIRE(filled.size() == 1);
  CHECK(filled[0] == Point{4, 4});
  CHECK(img.at({4, 4}) == Rgb{200, 10, 10});
  CHECK(mask.at({5, 4}) == PixelState::Missing);
}

TEST_CASE("update_confidence writes the value to the filled cells only", "[engine]") {
  ConfidenceMap conf(5, 5, 0.25);
  update_confidence(conf, {}, 0.9);
  for (int row = 0; row < 5; ++row)
    for (int col = 0; col < 5; ++col) CHECK(conf.at({col, row}) == 0.25);

  update_confidence(conf, {{2, 3}}, 0.7);
  CHECK(conf.at({2, 3}) == 0.7);
  CHECK(conf.at({3, 2}) == 0.25);
}

TEST_CASE("update_confidence propagates a computed classic confidence", "[engine]") {
  const Mask mask = synth::mask_of({
      "KKM",
      "KMM",
      "KMM",
  });
  ConfidenceMap conf = init_confidence(mask);
  const double term = classic_confidence({1, 1}, conf, mask, {{1, 1}, 3});
  REQUIRE(term == Approx(4.0 / 9.0).epsilon(1e-12));
  const std::vector<Point> filled = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  update_confidence(conf, filled, term);
  for (const Point& p : filled) CHECK(conf.at(p) == Approx(4.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("inpaint of an all-known mask returns the input untouched", "[engine]") {
  std::mt19937 rng(6401);
  const Image img = synth::random_image(20, 20, rng);
  const Mask mask(20, 20, PixelState::Known);
  const InpaintResult res = inpaint::inpaint(img, mask);
  CHECK(res.image == img);
  CHECK(res.trace.iterations == 0);
}

TEST_CASE("a single missing pixel in a uniform image heals in one iteration", "[engine]") {
  Image img(21, 21, {77, 123, 201});
  img.at({10, 10}) = {0, 0, 0};
  Mask mask(21, 21, PixelState::Known);
  mask.set({10, 10}, PixelState::Missing);
  for (Variant variant : {Variant::Classic, Variant::Improved}) {
    InpaintConfig cfg;
    cfg.variant = variant;
    const InpaintResult res = inpaint::inpaint(img, mask, cfg);
    CHECK(res.trace.iterations == 1);
    CHECK(res.image.at({10, 10}) == Rgb{77, 123, 201});
  }
}

TEST_CASE("both variants rebuild the stripe texture exactly", "[engine]") {
  const Image original = synth::stripes(64, 64);
  const Mask mask = synth::rect_hole_mask(64, 64, 24, 24, 16);
  Image broken = original;
  for (int row = 24; row < 40; ++row)
    for (int col = 24; col < 40; ++col) broken.at({col, row}) = {0, 0, 0};

  for (Variant variant : {Variant::Classic, Variant::Improved}) {
    InpaintConfig cfg;
    cfg.variant = variant;
    const InpaintResult res = inpaint::inpaint(broken, mask, cfg);
    REQUIRE(res.image == original);
  }
}

TEST_CASE("inpaint validates its inputs", "[engine]") {
  const Image img(10, 10);
  CHECK_THROWS_AS(inpaint::inpaint(img, Mask(9, 10, PixelState::Known)), std::invalid_argument);
  CHECK_THROWS_AS(inpaint::inpaint(img, Mask(10, 10, PixelState::Missing)), UnprocessableError);

  Mask filled_at_load(10, 10, PixelState::Known);
  filled_at_load.set({1, 1}, PixelState::Filled);
  filled_at_load.set({2, 2}, PixelState::Missing);
  CHECK_THROWS_AS(inpaint::inpaint(img, filled_at_load), std::invalid_argument);

  InpaintConfig bad;
  bad.patch_side = 4;
  CHECK_THROWS_AS(inpaint::inpaint(img, Mask(10, 10, PixelState::Known), bad), std::invalid_argument);
}

TEST_CASE("engine fuzz: progress, conservation and determinism", "[engine]") {
  std::mt19937 rng(6402);
  for (int i = 0; i < 12; ++i) {
    const Image img = synth::random_image(48, 48, rng);
    const Mask mask = synth::blob_mask(48, 48, 0.3, rng);
    const std::size_t missing = mask.count(PixelState::Missing);

    InpaintConfig cfg;
    cfg.variant = i % 2 == 0 ? Variant::Classic : Variant::Improved;
    const InpaintResult a = inpaint::inpaint(img, mask, cfg);
    const InpaintResult b = inpaint::inpaint(img, mask, cfg);

    REQUIRE(a.trace.iterations <= missing);
    REQUIRE(a.trace.initial_missing == missing);
    std::size_t filled_total = 0;
    for (const IterationRecord& rec : a.trace.records) {
      REQUIRE(rec.pixels_filled() >= 1);
      filled_total += rec.pixels_filled();
      REQUIRE(rec.priority == Approx(rec.confidence_term * rec.data_term).epsilon(1e-12));
    }
    REQUIRE(filled_total == missing);

    for (int row = 0; row < 48; ++row)
      for (int col = 0; col < 48; ++col)
        if (mask.at({col, row}) == PixelState::Known)
          REQUIRE(a.image.at({col, row}) == img.at({col, row}));

    REQUIRE(a.image == b.image);
  }
}

TEST_CASE("trace replays against freshly recomputed priorities and matches", "[engine]") {
  std::mt19937 rng(6403);
  const Image img = synth::random_image(24, 24, rng);
  const Mask mask = synth::blob_mask(24, 24, 0.2, rng);

  for (Variant variant : {Variant::Classic, Variant::Improved}) {
    InpaintConfig cfg;
    cfg.variant = variant;
    cfg.match.search_radius = 0;
    const InpaintResult res = inpaint::inpaint(img, mask, cfg);

    Image image = img;
    Mask state = mask;
    ConfidenceMap conf = init_confidence(state);
    for (const IterationRecord& rec : res.trace.records) {
      const FillFront front = extract_fill_front(state);
      for (const Point& p : front) REQUIRE(state.at(p) == PixelState::Missing);
      const oracle::BrutePriority want =
          oracle::select_target(front, image, state, conf, cfg.priority_config());
      REQUIRE(rec.target == want.target);
      REQUIRE(rec.priority == Approx(want.priority).epsilon(1e-12).margin(1e-300));
      REQUIRE(rec.confidence_term == Approx(want.confidence).epsilon(1e-12).margin(1e-300));
      REQUIRE(rec.data_term == Approx(want.data).epsilon(1e-12).margin(1e-300));

      const auto match =
          oracle::best_match({rec.target, cfg.patch_side}, image, state, cfg.match, variant);
      REQUIRE(match.has_value());
      REQUIRE(rec.source == match->center);

      const double written = classic_confidence(rec.target, conf, state, {rec.target, cfg.patch_side});
      REQUIRE(rec.written_confidence == Approx(written).epsilon(1e-12).margin(1e-300));

      const auto filled =
          fill_patch({rec.target, cfg.patch_side}, rec.source, image, state, cfg.fill_mode);
      REQUIRE(filled == rec.filled);
      update_confidence(conf, filled, written);
    }
    REQUIRE(image == res.image);
    REQUIRE(state.count(PixelState::Missing) == 0);
  }
}

TEST_CASE("classic repair of a disk hole proceeds outside-in", "[engine]") {
  const int size = 41;
  Image img(size, size, {140, 140, 140});
  Mask mask(size, size, PixelState::Known);
  const Point center{20, 20};
  for (int row = 0; row < size; ++row)
    for (int col = 0; col < size; ++col) {
      const int dc = col - center.col;
      const int dr = row - center.row;
      if (dc * dc + dr * dr <= 8 * 8) mask.set({col, row}, PixelState::Missing);
    }
  const std::vector<int> depth = hole_depths(mask);

  InpaintConfig cfg;
  cfg.variant = Variant::Classic;
  cfg.fill_mode = FillMode::CenterPixel;
  const InpaintResult res = inpaint::inpaint(img, mask, cfg);

  // Outside-in trend: the mean fill iteration of each depth ring strictly
  // increases with depth. (All-pairs monotonicity does not hold: a ring-2
  // cell behind a freshly filled stretch legitimately overtakes far-side
  // ring-1 cells once their confidence is boosted.)
  std::map<int, std::pair<double, std::size_t>> ring_sum;  // depth -> (iter sum, count)
  for (std::size_t it = 0; it < res.trace.records.size(); ++it) {
    for (const Point& p : res.trace.records[it].filled) {
      auto& [sum, count] = ring_sum[depth[row_major_index(p, size)]];
      sum += static_cast<double>(it);
      ++count;
    }
  }
  REQUIRE(ring_sum.size() >= 3);
  double previous_mean = -1.0;
  for (const auto& [d, entry] : ring_sum) {
    const double mean = entry.first / static_cast<double>(entry.second);
    INFO("depth " << d << " mean fill iteration " << mean);
    REQUIRE(mean > previous_mean);
    previous_mean = mean;
  }
}

TEST_CASE("a suffocating search radius widens until candidates appear", "[engine]") {
  const Image original = synth::stripes(64, 64);
  const Mask mask = synth::rect_hole_mask(64, 64, 28, 28, 9);
  InpaintConfig cfg;
  cfg.match.search_radius = 2;
  const InpaintResult res = inpaint::inpaint(original, mask, cfg);
  REQUIRE(res.trace.records.front().radius_used > 2);
  CHECK(res.image == original);
}

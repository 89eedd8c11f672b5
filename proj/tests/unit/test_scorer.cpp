#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "oracle.hpp"
#include "sketchsearch/scorer.hpp"

using namespace sketchsearch;

namespace {

// Menu doodle covering 4% of tile 0.
const NormBBox kDoodle{0.0, 0.0, 0.25 * 0.2, (1.0 / 6) * 0.2};

ScreenIndex hand_trace_index() {
  std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens;
  screens.push_back({"S", {{ElementClass::Menu, {{0, 1, 0.05}}}}});
  screens.push_back({"T", {{ElementClass::Menu, {{5, 1, 0.05}}}}});
  return ScreenIndex::from_coverage(std::move(screens));
}

Sketch one(ElementClass c, NormBBox b) { return Sketch{{{c, b, std::nullopt}}}; }

}  // namespace

TEST_CASE("doodle tile coverage") {
  CHECK(doodle_tile_coverage(Sketch{}).empty());

  const auto g = doodle_tile_coverage(one(ElementClass::Menu, kDoodle));
  REQUIRE(g.size() == 1);
  REQUIRE(g[0].coverage.size() == 1);
  CHECK(g[0].coverage[0].tile == 0);
  CHECK(g[0].coverage[0].area == doctest::Approx(0.04));

  // Two text doodles, each 10% of tile 5.
  const double h = (1.0 / 6) * 0.1;
  Sketch two{{{ElementClass::Text, {0.25, 1.0 / 6, 0.25, h}, std::nullopt},
              {ElementClass::Text, {0.25, 1.0 / 6 + 2 * h, 0.25, h}, std::nullopt}}};
  const auto t = doodle_tile_coverage(two);
  REQUIRE(t.size() == 1);
  REQUIRE(t[0].coverage.size() == 1);
  CHECK(t[0].coverage[0].tile == 5);
  CHECK(t[0].coverage[0].area == doctest::Approx(0.2));
  CHECK(t[0].coverage[0].count == 2);
}

TEST_CASE("neighbor tiles") {
  CHECK(neighbor_tiles({0}) == std::set<int>{1, 4, 5});
  CHECK(neighbor_tiles({}).empty());
  CHECK(neighbor_tiles({9}) == std::set<int>{4, 5, 6, 8, 10, 12, 13, 14});
  CHECK(neighbor_tiles({0, 1}) == std::set<int>{2, 4, 5, 6});
  CHECK(neighbor_tiles({23}) == std::set<int>{18, 19, 22});
  CHECK_ERROR_CODE(neighbor_tiles({24}), ErrorCode::InvalidTile);
}

TEST_CASE("hand-traced scores") {
  const auto index = hand_trace_index();
  const Hyperparams hp;
  const auto res = screen_scores(one(ElementClass::Menu, kDoodle), index, hp);
  const double own = (9 + 39 * 0.05 * 0.04 + 0.4 * 0.04 * 0.99 * 1) * std::log(2.0);
  const double near = (9 + 8 * 0.05) * std::log(2.0);
  CHECK(res[*index.find("S")] == doctest::Approx(own).epsilon(1e-12));
  CHECK(res[*index.find("S")] == doctest::Approx(6.30333).epsilon(1e-5));
  CHECK(res[*index.find("T")] == doctest::Approx(near).epsilon(1e-12));
  CHECK(res[*index.find("T")] == doctest::Approx(6.51558).epsilon(1e-5));

  const auto ranked = score_screens(one(ElementClass::Menu, kDoodle), index, hp, 10);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].screen_id == "T");
}

TEST_CASE("count mismatch removes the count bonus") {
  std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens;
  screens.push_back({"A", {{ElementClass::Menu, {{0, 2, 0.05}}}}});
  const auto index = ScreenIndex::from_coverage(std::move(screens));
  const auto res = screen_scores(one(ElementClass::Menu, kDoodle), index, Hyperparams{});
  CHECK(res[0] == doctest::Approx((9 + 39 * 0.025 * 0.04) * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("absent classes and empty sketches") {
  const auto index = hand_trace_index();
  CHECK(score_screens(one(ElementClass::Camera, kDoodle), index, Hyperparams{}, 10).empty());
  CHECK(score_screens(Sketch{}, index, Hyperparams{}, 10).empty());
  CHECK_ERROR_CODE(score_screens(Sketch{}, index, Hyperparams{}, 0), ErrorCode::InvalidN);
  CHECK_ERROR_CODE(score_screens(Sketch{}, ScreenIndex{}, Hyperparams{}, 1), ErrorCode::EmptyIndex);
}

TEST_CASE("ties break by ascending id and n truncates") {
  std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens;
  for (const char* id : {"c", "a", "b"}) screens.push_back({id, {{ElementClass::Menu, {{0, 1, 0.05}}}}});
  const auto index = ScreenIndex::from_coverage(std::move(screens));
  const auto r = score_screens(one(ElementClass::Menu, kDoodle), index, Hyperparams{}, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].screen_id == "a");
  CHECK(r[1].screen_id == "b");
  CHECK(score_screens(one(ElementClass::Menu, kDoodle), index, Hyperparams{}, 50).size() == 3);
}

TEST_CASE("hyperparameter parsing") {
  CHECK(parse_hyperparams("39,8,9,0.4,11") == Hyperparams{});
  CHECK(format_hyperparams(Hyperparams{}) == "39,8,9,0.4,11");
  CHECK_ERROR_CODE(parse_hyperparams("1,2,3"), ErrorCode::InvalidArgument);
  CHECK_ERROR_CODE(parse_hyperparams("1,2,3,4,x"), ErrorCode::InvalidArgument);
  CHECK_ERROR_CODE(parse_hyperparams("1,2,3,4,-1"), ErrorCode::InvalidArgument);
}

TEST_CASE("matches the reference scorer on a small corpus") {
  const auto rules = load_label_fix_rules(SKETCHSEARCH_DATA_DIR "/label_fix_rules.json");
  const auto corpus = generate_synthetic_corpus(21, 60);
  const auto index = build_index(corpus.docs, rules);
  const auto screens = oracle::screens_from_truth(corpus.truth);
  Rng rng(99);
  for (int q = 0; q < 20; ++q) {
    Sketch sketch;
    const std::size_t n = 1 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = rng.uniform(0.02, 0.6);
      const double h = rng.uniform(0.02, 0.3);
      sketch.elements.push_back({static_cast<ElementClass>(rng.below(kElementClassCount)),
                                 {rng.uniform(0, 1 - w), rng.uniform(0, 1 - h), w, h}, std::nullopt});
    }
    const auto got = screen_scores(sketch, index, Hyperparams{});
    const auto want = oracle::scores(sketch, screens, Hyperparams{});
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

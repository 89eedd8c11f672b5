#include <doctest.h>

#include <sstream>

#include "checks.hpp"
#include "sketchsearch/synthetic.hpp"
#include "sketchsearch/tuner.hpp"

using namespace sketchsearch;

namespace {

struct Fixture {
  SyntheticCorpus corpus;
  ScreenIndex index;
  std::vector<EvalPair> pairs;

  explicit Fixture(std::size_t n) : corpus(generate_synthetic_corpus(31, n)) {
    index = build_index(corpus.docs, load_label_fix_rules(SKETCHSEARCH_DATA_DIR "/label_fix_rules.json"));
    for (const auto& t : corpus.truth) {
      Sketch s;
      for (const auto& e : t.elements) s.elements.push_back({e.klass, e.bbox, std::nullopt});
      pairs.push_back({s, t.id});
    }
  }
};

}  // namespace

TEST_CASE("exact layout copies retrieve their targets") {
  Fixture f(5);
  const auto s = evaluate_search(f.pairs, f.index, Hyperparams{}, 10);
  CHECK(s.total == 5);
  CHECK(s.accuracy == 1.0);
}

TEST_CASE("hits are monotone in k") {
  Fixture f(200);
  std::vector<EvalPair> pairs;
  for (auto p : f.pairs) {
    p.sketch.elements.resize(1);
    pairs.push_back(p);
  }
  std::size_t prev = 0;
  for (std::size_t k : {1, 3, 10, 50, 200}) {
    const auto s = evaluate_search(pairs, f.index, Hyperparams{}, k);
    CHECK(s.hits >= prev);
    CHECK(s.hits <= s.total);
    prev = s.hits;
  }
}

TEST_CASE("evaluation errors") {
  Fixture f(5);
  CHECK_ERROR_CODE(evaluate_search(std::vector<EvalPair>{}, f.index, Hyperparams{}, 10), ErrorCode::EmptyInput);
  CHECK_ERROR_CODE(evaluate_search(f.pairs, f.index, Hyperparams{}, 0), ErrorCode::InvalidN);
  auto missing = f.pairs;
  missing[0].target_id = "nowhere";
  CHECK_ERROR_CODE(evaluate_search(missing, f.index, Hyperparams{}, 10), ErrorCode::TargetMissing);
  CHECK_ERROR_CODE(grid_search(missing, f.index, GridSpec{{39}, {8}, {9}, {0.4}, {11}}), ErrorCode::TargetMissing);
}

TEST_CASE("unranked targets") {
  Fixture f(5);
  Sketch nothing{{{ElementClass::Camera, {0.1, 0.1, 0.1, 0.1}, std::nullopt}}};
  if (f.index.df(ElementClass::Camera) == 0) {
    CHECK(!target_rank(nothing, f.index, Hyperparams{}, f.pairs[0].target_id).has_value());
  }
  const std::vector<std::optional<std::size_t>> ranks{1, std::nullopt, 4};
  CHECK(mean_reciprocal_rank(ranks) == doctest::Approx((1.0 + 0.25) / 3));
}

TEST_CASE("grid search") {
  Fixture f(40);
  std::vector<EvalPair> pairs(f.pairs.begin(), f.pairs.begin() + 5);

  SUBCASE("single point") {
    const auto r = grid_search(pairs, f.index, GridSpec{{39}, {8}, {9}, {0.4}, {11}});
    CHECK(r.best == Hyperparams{});
    REQUIRE(r.rows.size() == 1);
    const auto s = evaluate_search(pairs, f.index, Hyperparams{}, 10);
    CHECK(r.rows[0].top10_hits == s.hits);
  }
  SUBCASE("defaults beat the all-zero point") {
    const auto r = grid_search(pairs, f.index, GridSpec{{0, 39}, {0, 8}, {0, 9}, {0, 0.4}, {11}});
    CHECK(r.rows.size() == 16);
    CHECK(r.rows.front().mrr == 0.0);
    CHECK(r.best != Hyperparams(0, 0, 0, 0, 11));
  }
  SUBCASE("ties prefer the smallest point") {
    // Counts are integers, so any c_w >= 1 zeroes the same count bonuses.
    const auto r = grid_search(pairs, f.index, GridSpec{{39}, {8}, {9}, {0.4}, {12, 11}});
    CHECK(r.rows[0].mrr == r.rows[1].mrr);
    CHECK(r.best == Hyperparams{});
  }
  SUBCASE("report") {
    const auto r = grid_search(pairs, f.index, GridSpec{{39, 20}, {8}, {9, 3}, {0.4}, {11}});
    const auto text = format_tune_report(r);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "p1\tp2\tp3\tdelta_w\tc_w\tmrr\ttop10_hits");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
  }
  SUBCASE("empty grid") {
    CHECK_ERROR_CODE(grid_search(pairs, f.index, GridSpec{{}, {8}, {9}, {0.4}, {11}}), ErrorCode::EmptyGrid);
  }
}

TEST_CASE("file formats") {
  Fixture f(3);
  const auto text = dump_eval_pairs(f.pairs);
  const auto back = parse_eval_pairs(text);
  REQUIRE(back.size() == 3);
  CHECK(back[1].target_id == f.pairs[1].target_id);
  CHECK(back[1].sketch.size() <= f.pairs[1].sketch.size());

  const auto g = parse_grid(R"({"p1":[1,2],"p2":[3],"p3":[4],"delta_w":[0.5],"c_w":[11,0]})");
  CHECK(g.size() == 4);
  const auto pts = g.points();
  CHECK(pts[1] == Hyperparams(1, 3, 4, 0.5, 0));
  CHECK(pts[2] == Hyperparams(2, 3, 4, 0.5, 11));
  CHECK_ERROR_CODE(parse_grid(R"({"p1":[1]})"), ErrorCode::ParseError);
  CHECK_ERROR_CODE(parse_grid(R"({"p1":[-1],"p2":[3],"p3":[4],"delta_w":[0.5],"c_w":[11]})"),
                   ErrorCode::InvalidArgument);
}

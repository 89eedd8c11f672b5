// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sketchsearch/query_model.hpp"
#include "sketchsearch/recognizer.hpp"
#include "sketchsearch/scorer.hpp"
#include "sketchsearch/screen_index.hpp"
#include "sketchsearch/synthetic.hpp"
#include "sketchsearch/tuner.hpp"

using namespace sketchsearch;
namespace fs = std::filesystem;
using Seconds = std::chrono::duration<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<LabelFixRule>& rules() {
  static const auto r = load_label_fix_rules(SKETCHSEARCH_DATA_DIR "/label_fix_rules.json");
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

NormBBox random_box(Rng& rng, double min_side = 0.01, double max_w = 0.6, double max_h = 0.3) {
  const double w = rng.uniform(min_side, max_w);
  const double h = rng.uniform(min_side, max_h);
  return {rng.uniform(0, 1 - w), rng.uniform(0, 1 - h), w, h};
}

Sketch random_sketch(Rng& rng, std::size_t max_elements) {
  Sketch s;
  const std::size_t n = 1 + rng.below(max_elements);
  for (std::size_t i = 0; i < n; ++i) {
    s.elements.push_back({static_cast<ElementClass>(rng.below(kElementClassCount)), random_box(rng), std::nullopt});
  }
  return s;
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  double max_diff = 0.0;
  std::size_t ranking_mismatches = 0;
  std::size_t queries = 0;
  for (int c = 0; c < 50; ++c) {
    const std::size_t n = 1 + rng.below(500);
    const auto corpus = generate_synthetic_corpus(1000 + c, n, c % 2 ? ClassProfile::rico_like() : ClassProfile::uniform(0.25));
    const auto index = build_index(corpus.docs, rules());
    const auto screens = oracle::screens_from_truth(corpus.truth);
    for (int q = 0; q < 20; ++q) {
      const auto sketch = random_sketch(rng, 8);
      const Hyperparams hp = q % 4 == 0 ? Hyperparams{rng.uniform(0, 50), rng.uniform(0, 20), rng.uniform(0, 20),
                                                      rng.uniform(0, 2), rng.uniform(0, 20)}
                                        : Hyperparams{};
      const auto got = screen_scores(sketch, index, hp);
      const auto want = oracle::scores(sketch, screens, hp);
      for (std::size_t i = 0; i < want.size(); ++i) max_diff = std::max(max_diff, std::abs(got[i] - want[i]));

      std::vector<std::string> ranked;
      for (const auto& r : score_screens(sketch, index, hp, index.screen_count())) ranked.push_back(r.screen_id);
      ranking_mismatches += ranked != oracle::ranking(want, screens) ? 1 : 0;
      ++queries;
    }
  }
  const double secs = seconds_since(t0);
  return {max_diff <= 1e-9 && ranking_mismatches == 0 && secs < 30.0,
          fmt("%.0f queries, max |diff| = %.3g, ranking mismatches = %.0f, %.2f s", static_cast<double>(queries),
              max_diff, static_cast<double>(ranking_mismatches), secs)};
}

Outcome hand_trace() {
  std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens;
  screens.push_back({"S", {{ElementClass::Menu, {{0, 1, 0.05}}}}});
  screens.push_back({"T", {{ElementClass::Menu, {{5, 1, 0.05}}}}});
  const auto index = ScreenIndex::from_coverage(std::move(screens));
  const Sketch sketch{{{ElementClass::Menu, {0.0, 0.0, 0.25 * 0.2, (1.0 / 6) * 0.2}, std::nullopt}}};
  const auto res = screen_scores(sketch, index, Hyperparams{});
  const double s = res[*index.find("S")];
  const double t = res[*index.find("T")];
  return {std::abs(s - 6.30333) <= 1e-4 && std::abs(t - 6.51558) <= 1e-4,
          fmt("own tile %.6f (want 6.30333), neighbor tile %.6f (want 6.51558)", s, t)};
}

Outcome latency() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = generate_synthetic_corpus(58126, 58126);
  std::size_t accepted = 0;
  for (const auto& d : corpus.docs) accepted += filter_screen(d, rules()) ? 0 : 1;
  const auto index = build_index(corpus.docs, rules());
  const double setup = seconds_since(t0);

  Rng rng(5);
  std::vector<double> times;
  for (int q = 0; q < 100; ++q) {
    Sketch sketch;
    for (int i = 0; i < 5; ++i) {
      sketch.elements.push_back(
          {static_cast<ElementClass>(rng.below(kElementClassCount)), random_box(rng, 0.02, 0.5, 0.2), std::nullopt});
    }
    const auto q0 = std::chrono::steady_clock::now();
    const auto top = score_screens(sketch, index, Hyperparams{}, 10);
    times.push_back(seconds_since(q0));
    if (top.empty()) times.back() = 1e9;
  }
  std::sort(times.begin(), times.end());
  const double p50 = times[49];
  const double p95 = times[94];
  const double worst = times.back();
  return {index.screen_count() == 58126 && accepted == 58126 && worst < 1.0,
          fmt("58126 screens (%.0f accepted), p50 %.1f ms, p95 %.1f ms, max %.1f ms", static_cast<double>(accepted),
              p50 * 1e3, p95 * 1e3, worst * 1e3) +
              fmt(", setup %.1f s", setup)};
}

Outcome self_retrieval() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = generate_synthetic_corpus(10000, 10000);
  const auto index = build_index(corpus.docs, rules());
  Rng rng(77);
  std::size_t hits = 0;
  std::size_t exact_hits = 0;
  const std::size_t targets = 100;
  for (std::size_t t = 0; t < targets; ++t) {
    const auto& truth = corpus.truth[rng.below(corpus.truth.size())];
    std::vector<MappedElement> chosen = truth.elements;
    // Keep up to six elements, chosen at random, in their original order.
    while (chosen.size() > 6) chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(rng.below(chosen.size())));
    Sketch sketch;
    for (const auto& e : chosen) {
      NormBBox b = e.bbox;
      b.w = std::clamp(b.w + rng.uniform(-0.05, 0.05), 0.005, 1.0);
      b.h = std::clamp(b.h + rng.uniform(-0.05, 0.05), 0.005, 1.0);
      b.x = std::clamp(b.x + rng.uniform(-0.05, 0.05), 0.0, 1.0 - b.w);
      b.y = std::clamp(b.y + rng.uniform(-0.05, 0.05), 0.0, 1.0 - b.h);
      sketch.elements.push_back({e.klass, b, std::nullopt});
    }
    const auto rank = target_rank(sketch, index, Hyperparams{}, truth.id);
    hits += rank && *rank <= 10 ? 1 : 0;

    // Baseline: every element of the target, unjittered.
    Sketch copy;
    for (const auto& e : truth.elements) copy.elements.push_back({e.klass, e.bbox, std::nullopt});
    const auto copy_rank = target_rank(copy, index, Hyperparams{}, truth.id);
    exact_hits += copy_rank && *copy_rank <= 10 ? 1 : 0;
  }
  const double secs = seconds_since(t0);
  const double rate = static_cast<double>(hits) / static_cast<double>(targets);
  return {rate >= 0.90 && secs < 120.0,
          fmt("top-10 %.0f%% (%.0f/100); exact full-layout copies reach %.0f%%; %.1f s", rate * 100,
              static_cast<double>(hits), static_cast<double>(exact_hits), secs)};
}

Outcome scorer_properties() {
  Rng rng(31337);
  const auto corpus = generate_synthetic_corpus(8, 300);
  const auto index = build_index(corpus.docs, rules());
  std::size_t monotone_fail = 0, permutation_fail = 0, count_fail = 0, area_fail = 0;

  for (int i = 0; i < 1000; ++i) {
    // Adding a doodle group of a class the sketch does not have yet.
    Sketch base = random_sketch(rng, 5);
    ElementClass extra = static_cast<ElementClass>(rng.below(kElementClassCount));
    Sketch more = base;
    more.elements.push_back({extra, random_box(rng), std::nullopt});
    const bool new_group = std::none_of(base.elements.begin(), base.elements.end(),
                                        [&](const SketchElement& e) { return e.klass == extra; });
    if (new_group) {
      const auto before = screen_scores(base, index, Hyperparams{});
      const auto after = screen_scores(more, index, Hyperparams{});
      for (std::size_t s = 0; s < before.size(); ++s) monotone_fail += after[s] < before[s] ? 1 : 0;
    } else {
      --i;
      continue;
    }
  }

  for (int i = 0; i < 1000; ++i) {
    const Sketch s = random_sketch(rng, 8);
    Sketch p = s;
    for (std::size_t k = p.elements.size(); k > 1; --k) std::swap(p.elements[k - 1], p.elements[rng.below(k)]);
    const auto a = screen_scores(s, index, Hyperparams{});
    const auto b = screen_scores(p, index, Hyperparams{});
    for (std::size_t k = 0; k < a.size(); ++k) {
      permutation_fail += std::abs(a[k] - b[k]) > 1e-9 * std::max(1.0, std::abs(a[k])) ? 1 : 0;
    }
  }

  for (int i = 0; i < 1000; ++i) {
    // c_d doodles stacked inside one tile against c_o screen elements there.
    const int tile = static_cast<int>(rng.below(kTileCount));
    const double tx = (tile % kTileCols) * 0.25;
    const double ty = (tile / kTileCols) * (1.0 / 6);
    const std::uint32_t c_d = 1 + static_cast<std::uint32_t>(rng.below(4));
    std::uint32_t c_o = 1 + static_cast<std::uint32_t>(rng.below(4));
    if (c_o == c_d) c_o = c_d + 1;
    const double a_o = rng.uniform(0.01, 1.0);
    Sketch s;
    for (std::uint32_t k = 0; k < c_d; ++k) {
      const double w = 0.25 * rng.uniform(0.05, 1.0);
      const double h = (1.0 / 6) * rng.uniform(0.05, 1.0) / c_d;
      s.elements.push_back({ElementClass::Plus, {tx + rng.uniform(0, 0.25 - w), ty + k * (1.0 / 6) / c_d, w, h}, std::nullopt});
    }
    std::vector<std::pair<std::string, std::map<ElementClass, TileCoverage>>> screens;
    screens.push_back({"only", {{ElementClass::Plus, {{static_cast<std::uint8_t>(tile), c_o, a_o}}}}});
    const auto one = ScreenIndex::from_coverage(std::move(screens));
    const Hyperparams hp;
    double a_d = 0.0;
    for (const auto& e : s.elements) a_d += oracle::tile_fraction(e.bbox, tile / kTileCols, tile % kTileCols);
    const double want = (hp.p3 + hp.p1 * (a_o / c_o) * (a_d / c_d)) * std::log(2.0);
    count_fail += std::abs(screen_scores(s, one, hp)[0] - want) > 1e-9 ? 1 : 0;
  }

  for (int i = 0; i < 1000; ++i) {
    const NormBBox b = random_box(rng, 0.001, 1.0, 1.0);
    const double tile_area = 0.25 * (1.0 / 6);
    const auto overlaps = tile_overlaps(b);
    const double sum = std::accumulate(overlaps.begin(), overlaps.end(), 0.0) * tile_area;
    const std::vector<NormBBox> one{b};
    double cov_sum = 0.0;
    for (const auto& cell : accumulate_coverage(one)) cov_sum += cell.area * tile_area;
    const double rel = std::max(std::abs(sum - b.area()), std::abs(cov_sum - b.area())) / b.area();
    area_fail += rel > 1e-9 ? 1 : 0;
  }

  const std::size_t total = monotone_fail + permutation_fail + count_fail + area_fail;
  return {total == 0, fmt("failures: monotonicity %.0f, permutation %.0f, count mismatch %.0f",
                          static_cast<double>(monotone_fail), static_cast<double>(permutation_fail),
                          static_cast<double>(count_fail)) +
                          fmt(", area conservation %.0f (1000 cases each)", static_cast<double>(area_fail))};
}

Outcome recognizer() {
  const auto templates = load_templates(SKETCHSEARCH_DATA_DIR "/templates.json");
  const TemplateRecognizer rec(templates);

  std::size_t replay_fail = 0;
  std::vector<LabeledDoodle> dataset;
  for (auto c : all_doodle_classes()) {
    for (const auto& t : templates.templates(c)) {
      replay_fail += rec.classify(normalize_strokes(t.strokes, kTemplateCanvas)).front().klass != c ? 1 : 0;
      dataset.push_back({c, kTemplateCanvas, t.strokes});
    }
  }

  Rng rng(303);
  double worst_top1 = 1.0;
  double worst_top3 = 1.0;
  std::string worst_class;
  for (auto c : all_doodle_classes()) {
    const auto& variants = templates.templates(c);
    int top1 = 0, top3 = 0;
    for (int trial = 0; trial < 50; ++trial) {
      auto strokes = variants[static_cast<std::size_t>(trial) % variants.size()].strokes;
      for (auto& s : strokes) {
        for (auto& p : s.points) {
          p.x = std::clamp(p.x + rng.uniform(-0.03, 0.03) * kTemplateCanvas.width, 0.0, kTemplateCanvas.width);
          p.y = std::clamp(p.y + rng.uniform(-0.03, 0.03) * kTemplateCanvas.height, 0.0, kTemplateCanvas.height);
        }
      }
      const auto ranking = rec.classify(normalize_strokes(strokes, kTemplateCanvas));
      top1 += ranking[0].klass == c;
      top3 += ranking[0].klass == c || ranking[1].klass == c || ranking[2].klass == c;
    }
    if (top1 / 50.0 < worst_top1) {
      worst_top1 = top1 / 50.0;
      worst_class = std::string(to_string(c));
    }
    worst_top3 = std::min(worst_top3, top3 / 50.0);
  }

  double worst_w_last = 0.0;
  for (const auto& row : eval_recognizer(dataset, rec)) worst_w_last = std::max(worst_w_last, row.top1.wrong_last_pct);

  return {replay_fail == 0 && worst_top1 >= 0.95 && worst_top3 == 1.0 && worst_w_last == 0.0,
          fmt("replay misses %.0f; jitter worst-class top-1 %.0f%%, top-3 %.0f%%; max W_last %.1f%%",
              static_cast<double>(replay_fail), worst_top1 * 100, worst_top3 * 100, worst_w_last) +
              " (worst top-1: " + worst_class + ")"};
}

Outcome compound_merge() {
  Rng rng(4242);
  std::size_t failures = 0;
  std::size_t merges = 0;
  const std::vector<ElementClass> others{ElementClass::Star, ElementClass::Menu, ElementClass::Avatar,
                                         ElementClass::Image, ElementClass::Plus, ElementClass::Search};
  for (int i = 0; i < 500; ++i) {
    Sketch s;
    std::vector<NormBBox> squares;
    const std::size_t pairs = 1 + rng.below(3);
    const double band = 1.0 / static_cast<double>(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
      const double h = rng.uniform(0.05, band - 0.06);
      const double w = rng.uniform(0.2, 0.9);
      const NormBBox sq{rng.uniform(0, 1 - w), p * band + rng.uniform(0, band - h - 0.03), w, h};
      const double iw = sq.w * rng.uniform(0.2, 0.9);
      const double ih = sq.h * rng.uniform(0.2, 0.9);
      const NormBBox sg{sq.x + rng.uniform(0, sq.w - iw), sq.y + rng.uniform(0, sq.h - ih), iw, ih};
      squares.push_back(sq);
      s.elements.push_back({ElementClass::Container, sq, DoodleClass::Square});
      s.elements.push_back({ElementClass::Text, sg, DoodleClass::Squiggle});
    }
    const std::size_t noise = rng.below(4);
    for (std::size_t k = 0; k < noise; ++k) {
      s.elements.push_back({others[rng.below(others.size())], random_box(rng, 0.01, 0.15, 0.1), std::nullopt});
    }
    for (std::size_t k = s.elements.size(); k > 1; --k) std::swap(s.elements[k - 1], s.elements[rng.below(k)]);

    // A pair qualifies when its square holds nothing but squiggles.
    auto inside = [](const NormBBox& o, const NormBBox& b) {
      const double t = 0.02;
      return b.x >= o.x - t && b.y >= o.y - t && b.x + b.w <= o.x + o.w + t && b.y + b.h <= o.y + o.h + t;
    };
    std::size_t qualifying = 0;
    for (const auto& sq : squares) {
      bool blocked = false;
      for (const auto& e : s.elements) {
        if (e.bbox == sq) continue;
        blocked = blocked || (inside(sq, e.bbox) && e.klass != ElementClass::Text);
      }
      qualifying += blocked ? 0 : 1;
    }

    auto raw = [](const Sketch& k) {
      return std::count_if(k.elements.begin(), k.elements.end(), [](const SketchElement& e) {
        return e.klass == ElementClass::Container || e.klass == ElementClass::Text;
      });
    };
    const auto merged = merge_compound_elements(s);
    const auto buttons = std::count_if(merged.elements.begin(), merged.elements.end(),
                                       [](const SketchElement& e) { return e.klass == ElementClass::TextButton; });
    bool ok = static_cast<std::size_t>(buttons) == qualifying;
    ok = ok && raw(s) - raw(merged) == static_cast<long>(2 * qualifying);
    ok = ok && s.size() - merged.size() == qualifying;
    ok = ok && merge_compound_elements(merged) == merged;
    for (const auto& e : merged.elements) {
      if (e.klass == ElementClass::TextButton) {
        ok = ok && std::find(squares.begin(), squares.end(), e.bbox) != squares.end();
      }
    }
    failures += ok ? 0 : 1;
    merges += qualifying;
  }
  return {failures == 0, fmt("500 sketches, %.0f merges, %.0f failures", static_cast<double>(merges),
                             static_cast<double>(failures))};
}

Outcome tuner() {
  const auto corpus = generate_synthetic_corpus(55, 200);
  const auto index = build_index(corpus.docs, rules());
  const auto screens = oracle::screens_from_truth(corpus.truth);
  Rng rng(9);
  std::vector<EvalPair> pairs;
  for (int i = 0; i < 5; ++i) {
    const auto& t = corpus.truth[rng.below(corpus.truth.size())];
    Sketch s;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, t.elements.size()); ++k) {
      s.elements.push_back({t.elements[k].klass, t.elements[k].bbox, std::nullopt});
    }
    pairs.push_back({s, t.id});
  }
  const GridSpec grid{{0, 39}, {0}, {0, 9}, {0}, {0}};
  const auto result = grid_search(pairs, index, grid);
  const Hyperparams zero{0, 0, 0, 0, 0};

  // Recompute every row's MRR from the reference scorer.
  bool consistent = result.rows.size() == grid.size();
  for (const auto& row : result.rows) {
    double sum = 0.0;
    for (const auto& p : pairs) {
      const auto ranked = oracle::ranking(oracle::scores(p.sketch, screens, row.hp), screens);
      const auto it = std::find(ranked.begin(), ranked.end(), p.target_id);
      if (it != ranked.end()) sum += 1.0 / static_cast<double>(it - ranked.begin() + 1);
    }
    consistent = consistent && std::abs(sum / pairs.size() - row.mrr) <= 1e-12;
  }
  std::istringstream report(format_tune_report(result));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(report, line)) ++lines;
  consistent = consistent && lines == grid.size() + 1;

  return {result.best != zero && consistent,
          "best " + format_hyperparams(result.best) + fmt(", %.0f report rows, best MRR %.4f", lines - 1.0,
                                                          std::max_element(result.rows.begin(), result.rows.end(),
                                                                           [](const GridRow& a, const GridRow& b) {
                                                                             return a.mrr < b.mrr;
                                                                           })->mrr) +
              (consistent ? ", MRR consistent" : ", MRR inconsistent")};
}

Outcome index_round_trip() {
  const auto corpus = generate_synthetic_corpus(10001, 10000);
  const auto index = build_index(corpus.docs, rules());
  const auto path = fs::temp_directory_path() / "sketchsearch_acceptance_index.bin";
  save_index(index, path);
  const auto loaded = load_index(path);
  const auto bytes = serialize_index(index);
  const bool same_bytes = serialize_index(loaded) == bytes;
  const auto size = fs::file_size(path);
  fs::remove(path);
  return {loaded == index && same_bytes && size == bytes.size(),
          fmt("10000 screens, %.0f bytes, structure ", static_cast<double>(size)) +
              (loaded == index ? "equal" : "differs") + (same_bytes ? ", bytes identical" : ", bytes differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle_equivalence", oracle_equivalence},
      {"hand_trace", hand_trace},
      {"ranking_latency", latency},
      {"synthetic_self_retrieval", self_retrieval},
      {"scorer_properties", scorer_properties},
      {"recognizer", recognizer},
      {"compound_merge", compound_merge},
      {"tuner", tuner},
      {"index_round_trip", index_round_trip},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

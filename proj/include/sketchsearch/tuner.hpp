#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketchsearch/query_model.hpp"
#include "sketchsearch/scorer.hpp"
#include "sketchsearch/screen_index.hpp"

namespace sketchsearch {

struct EvalPair {
  Sketch sketch;
  std::string target_id;
};

/// One record per line: {"sketch": {...}, "target_id": "..."}.
std::vector<EvalPair> parse_eval_pairs(std::string_view text);
std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& path);
std::string dump_eval_pairs(std::span<const EvalPair> pairs);

/// 1-based rank of a screen under the documented ordering, or nullopt when
/// the screen scores zero and is therefore not listed at all.
std::optional<std::size_t> target_rank(const Sketch& sketch, const ScreenIndex& index,
                                       const Hyperparams& hp, std::string_view target_id);

struct EvalSummary {
  std::size_t k = 10;
  std::size_t hits = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
  std::vector<std::optional<std::size_t>> ranks;
};

/// Top-k retrieval accuracy. Throws TargetMissing for unindexed targets.
EvalSummary evaluate_search(std::span<const EvalPair> pairs, const ScreenIndex& index,
                            const Hyperparams& hp, std::size_t k);

struct GridSpec {
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> p3;
  std::vector<double> delta_w;
  std::vector<double> c_w;

  std::size_t size() const noexcept {
    return p1.size() * p2.size() * p3.size() * delta_w.size() * c_w.size();
  }
  /// Grid points in lexicographic (p1, p2, p3, delta_w, c_w) list order.
  std::vector<Hyperparams> points() const;
};

GridSpec parse_grid(std::string_view text);
GridSpec load_grid(const std::filesystem::path& path);

struct GridRow {
  Hyperparams hp;
  double mrr = 0.0;
  std::size_t top10_hits = 0;
  std::vector<std::optional<std::size_t>> ranks;  // per pair; nullopt = unranked
};

struct TuneResult {
  Hyperparams best;
  std::vector<GridRow> rows;  // grid order
};

/// Mean reciprocal rank over pairs; unranked targets contribute zero.
double mean_reciprocal_rank(std::span<const std::optional<std::size_t>> ranks);

/// Exhaustive search maximizing MRR; ties go to more top-10 hits, then to the
/// lexicographically smallest (p1, p2, p3, delta_w, c_w).
TuneResult grid_search(std::span<const EvalPair> pairs, const ScreenIndex& index,
                       const GridSpec& grid);

/// Header plus one tab-separated row per grid point.
std::string format_tune_report(const TuneResult& result);

}  // namespace sketchsearch

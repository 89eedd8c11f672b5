#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sketchsearch/classes.hpp"
#include "sketchsearch/query_model.hpp"
#include "sketchsearch/screen_index.hpp"

namespace sketchsearch {

/// Weights of the multi-scale score: p1 for same-tile matches, p2 for
/// neighbor-tile matches, p3 for class presence anywhere on the screen,
/// delta_w for area agreement and c_w for the count-mismatch penalty.
struct Hyperparams {
  double p1 = 39.0;
  double p2 = 8.0;
  double p3 = 9.0;
  double delta_w = 0.4;
  double c_w = 11.0;

  bool valid() const noexcept;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
  friend auto operator<=>(const Hyperparams&, const Hyperparams&) = default;
};

/// Parses "p1,p2,p3,delta_w,c_w".
Hyperparams parse_hyperparams(const std::string& csv);
std::string format_hyperparams(const Hyperparams& hp);

/// All sketch elements of one class with their combined tile coverage.
struct DoodleGroup {
  ElementClass klass = ElementClass::Text;
  TileCoverage coverage;
};

/// Groups are returned in ElementClass order.
std::vector<DoodleGroup> doodle_tile_coverage(const Sketch& sketch);

/// 8-neighborhood on the 6x4 grid of every input tile, minus the inputs.
std::set<int> neighbor_tiles(const std::set<int>& tiles);

struct ScoredScreen {
  std::string screen_id;
  double score = 0.0;

  friend bool operator==(const ScoredScreen&, const ScoredScreen&) = default;
};

/// Full ranking of every screen with a positive score, score descending then
/// screen id ascending, truncated to top_n.
std::vector<ScoredScreen> score_screens(const Sketch& sketch, const ScreenIndex& index,
                                        const Hyperparams& hp, std::size_t top_n);

/// Raw per-screen scores (indexed by screen ordinal) before ranking.
std::vector<double> screen_scores(const Sketch& sketch, const ScreenIndex& index,
                                  const Hyperparams& hp);

}  // namespace sketchsearch

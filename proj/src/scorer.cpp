#include "sketchsearch/scorer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "sketchsearch/error.hpp"

namespace sketchsearch {

bool Hyperparams::valid() const noexcept {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  return ok(p1) && ok(p2) && ok(p3) && ok(delta_w) && ok(c_w);
}

Hyperparams parse_hyperparams(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "hyperparameter '" + item + "' is not a number");
    }
  }
  if (values.size() != 5) {
    throw Error(ErrorCode::InvalidArgument, "expected p1,p2,p3,delta_w,c_w");
  }
  Hyperparams hp{values[0], values[1], values[2], values[3], values[4]};
  if (!hp.valid()) throw Error(ErrorCode::InvalidArgument, "hyperparameters must be >= 0");
  return hp;
}

std::string format_hyperparams(const Hyperparams& hp) {
  std::ostringstream out;
  out << hp.p1 << ',' << hp.p2 << ',' << hp.p3 << ',' << hp.delta_w << ',' << hp.c_w;
  return out.str();
}

std::vector<DoodleGroup> doodle_tile_coverage(const Sketch& sketch) {
  std::map<ElementClass, std::vector<NormBBox>> grouped;
  for (const auto& e : sketch.elements) grouped[e.klass].push_back(e.bbox);
  std::vector<DoodleGroup> out;
  out.reserve(grouped.size());
  for (const auto& [klass, boxes] : grouped) out.push_back({klass, accumulate_coverage(boxes)});
  return out;
}

std::set<int> neighbor_tiles(const std::set<int>& tiles) {
  std::set<int> out;
  for (int t : tiles) {
    if (t < 0 || t >= kTileCount) throw Error(ErrorCode::InvalidTile, std::to_string(t));
    const int r = t / kTileCols;
    const int c = t % kTileCols;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int nr = r + dr;
        const int nc = c + dc;
        if (nr < 0 || nr >= kTileRows || nc < 0 || nc >= kTileCols) continue;
        out.insert(nr * kTileCols + nc);
      }
    }
  }
  for (int t : tiles) out.erase(t);
  return out;
}

namespace {

/// Dense per-tile view of one doodle group.
struct GroupTiles {
  std::array<bool, kTileCount> own{};
  std::array<bool, kTileCount> neighbor{};
  std::array<double, kTileCount> area{};
  std::array<double, kTileCount> count{};

  explicit GroupTiles(const DoodleGroup& g) {
    std::set<int> tiles;
    for (const auto& cell : g.coverage) {
      own[cell.tile] = true;
      area[cell.tile] = std::clamp(cell.area, 0.0, 1.0);
      count[cell.tile] = static_cast<double>(cell.count);
      tiles.insert(cell.tile);
    }
    for (int t : neighbor_tiles(tiles)) neighbor[static_cast<std::size_t>(t)] = true;
  }
};

}  // namespace

std::vector<double> screen_scores(const Sketch& sketch, const ScreenIndex& index,
                                  const Hyperparams& hp) {
  if (index.empty()) throw Error(ErrorCode::EmptyIndex, "index has no screens");
  std::vector<double> res(index.screen_count(), 0.0);

  for (const auto& group : doodle_tile_coverage(sketch)) {
    const GroupTiles g(group);
    const auto& postings = index.postings(group.klass);
    const double idf = index.idf(group.klass);
    for (std::size_t i = 0; i < postings.size(); ++i) {
      double z = hp.p3;
      for (const auto& cell : postings.coverage(i)) {
        const double a_o = std::clamp(cell.area, 0.0, 1.0);
        const double c_o = static_cast<double>(cell.count);
        if (g.own[cell.tile]) {
          const double a_d = g.area[cell.tile];
          const double c_d = g.count[cell.tile];
          const double delta_a = 1.0 - std::abs(a_d - a_o);
          const double delta_c = std::max(0.0, 1.0 - hp.c_w * std::abs(c_d - c_o));
          z += hp.p1 * (a_o / c_o) * (a_d / c_d) + hp.delta_w * a_d * delta_a * delta_c;
        } else if (g.neighbor[cell.tile]) {
          z += hp.p2 * (a_o / c_o);
        }
      }
      res[postings.screens[i]] += z * idf;
    }
  }
  return res;
}

std::vector<ScoredScreen> score_screens(const Sketch& sketch, const ScreenIndex& index,
                                        const Hyperparams& hp, std::size_t top_n) {
  if (top_n == 0) throw Error(ErrorCode::InvalidN, "top_n must be >= 1");
  const auto res = screen_scores(sketch, index, hp);

  std::vector<std::uint32_t> hits;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (res[i] > 0.0) hits.push_back(static_cast<std::uint32_t>(i));
  }
  // Ordinals follow ascending screen id, so the ordinal breaks ties.
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    return res[a] != res[b] ? res[a] > res[b] : a < b;
  };
  const std::size_t keep = std::min(top_n, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), better);

  std::vector<ScoredScreen> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back({index.screen_id(hits[i]), res[hits[i]]});
  return out;
}

}  // namespace sketchsearch

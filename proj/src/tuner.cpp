#include "sketchsearch/tuner.hpp"

#include <iomanip>
#include <sstream>

#include "json_util.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

using detail::json;

std::vector<EvalPair> parse_eval_pairs(std::string_view text) {
  std::vector<EvalPair> pairs;
  for (auto line : detail::split_lines(text)) {
    const json rec = detail::parse_json(line);
    EvalPair pair;
    pair.sketch = parse_sketch(detail::field(rec, "sketch").dump());
    pair.target_id = detail::string_of(detail::field(rec, "target_id"), "target_id");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& path) {
  return parse_eval_pairs(detail::read_file(path));
}

std::string dump_eval_pairs(std::span<const EvalPair> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    json rec{{"sketch", json::parse(dump_sketch(p.sketch))}, {"target_id", p.target_id}};
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::optional<std::size_t> target_rank(const Sketch& sketch, const ScreenIndex& index,
                                       const Hyperparams& hp, std::string_view target_id) {
  const auto target = index.find(target_id);
  if (!target) throw Error(ErrorCode::TargetMissing, std::string(target_id));
  const auto res = screen_scores(sketch, index, hp);
  const double mine = res[*target];
  if (!(mine > 0.0)) return std::nullopt;
  std::size_t ahead = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (res[i] > mine || (res[i] == mine && i < *target)) ++ahead;
  }
  return ahead + 1;
}

namespace {

void require_targets(std::span<const EvalPair> pairs, const ScreenIndex& index) {
  for (const auto& p : pairs) {
    if (!index.find(p.target_id)) throw Error(ErrorCode::TargetMissing, p.target_id);
  }
}

}  // namespace

EvalSummary evaluate_search(std::span<const EvalPair> pairs, const ScreenIndex& index,
                            const Hyperparams& hp, std::size_t k) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no evaluation pairs");
  if (k == 0) throw Error(ErrorCode::InvalidN, "k must be >= 1");
  require_targets(pairs, index);
  EvalSummary s;
  s.k = k;
  s.total = pairs.size();
  for (const auto& p : pairs) {
    const auto rank = target_rank(p.sketch, index, hp, p.target_id);
    s.hits += (rank && *rank <= k) ? 1 : 0;
    s.ranks.push_back(rank);
  }
  s.accuracy = static_cast<double>(s.hits) / static_cast<double>(s.total);
  return s;
}

std::vector<Hyperparams> GridSpec::points() const {
  std::vector<Hyperparams> out;
  out.reserve(size());
  for (double a : p1)
    for (double b : p2)
      for (double c : p3)
        for (double d : delta_w)
          for (double e : c_w) out.push_back({a, b, c, d, e});
  return out;
}

GridSpec parse_grid(std::string_view text) {
  const json doc = detail::parse_json(text);
  auto list = [&](const char* key) {
    const auto& v = detail::field(doc, key);
    if (!v.is_array()) detail::bad_shape(std::string(key) + " must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
      const double d = detail::number(x, key);
      if (!(d >= 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(key) + " values must be >= 0");
      out.push_back(d);
    }
    return out;
  };
  return {list("p1"), list("p2"), list("p3"), list("delta_w"), list("c_w")};
}

GridSpec load_grid(const std::filesystem::path& path) { return parse_grid(detail::read_file(path)); }

double mean_reciprocal_rank(std::span<const std::optional<std::size_t>> ranks) {
  if (ranks.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : ranks) sum += r ? 1.0 / static_cast<double>(*r) : 0.0;
  return sum / static_cast<double>(ranks.size());
}

TuneResult grid_search(std::span<const EvalPair> pairs, const ScreenIndex& index,
                       const GridSpec& grid) {
  if (grid.size() == 0) throw Error(ErrorCode::EmptyGrid, "every hyperparameter needs >= 1 value");
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no evaluation pairs");
  require_targets(pairs, index);

  TuneResult result;
  for (const auto& hp : grid.points()) {
    GridRow row;
    row.hp = hp;
    for (const auto& p : pairs) {
      const auto rank = target_rank(p.sketch, index, hp, p.target_id);
      row.top10_hits += (rank && *rank <= 10) ? 1 : 0;
      row.ranks.push_back(rank);
    }
    row.mrr = mean_reciprocal_rank(row.ranks);
    result.rows.push_back(std::move(row));
  }

  const GridRow* best = &result.rows.front();
  for (const auto& row : result.rows) {
    if (row.mrr != best->mrr) {
      if (row.mrr > best->mrr) best = &row;
    } else if (row.top10_hits != best->top10_hits) {
      if (row.top10_hits > best->top10_hits) best = &row;
    } else if (row.hp < best->hp) {
      best = &row;
    }
  }
  result.best = best->hp;
  return result;
}

std::string format_tune_report(const TuneResult& result) {
  std::ostringstream out;
  out << "p1\tp2\tp3\tdelta_w\tc_w\tmrr\ttop10_hits\n";
  for (const auto& row : result.rows) {
    out << row.hp.p1 << '\t' << row.hp.p2 << '\t' << row.hp.p3 << '\t' << row.hp.delta_w << '\t'
        << row.hp.c_w << '\t' << std::setprecision(17) << row.mrr << std::setprecision(6) << '\t'
        << row.top10_hits << '\n';
  }
  return out.str();
}

}  // namespace sketchsearch

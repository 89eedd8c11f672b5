#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sketchsearch/classes.hpp"
#include "sketchsearch/screen_index.hpp"

namespace sketchsearch {

/// Per-class presence probability per screen, optionally pinned to an exact
/// number of screens (document frequency).
struct ClassProfile {
  std::array<double, kElementClassCount> presence{};
  std::array<std::optional<std::size_t>, kElementClassCount> fixed_df{};

  /// Frequencies loosely following the popularity order of app UI elements.
  static ClassProfile rico_like();
  static ClassProfile uniform(double presence = 0.2);
};

/// Accepts "rico", "uniform", or a JSON object {"<class>": p | {"df": k}}
/// whose entries override the rico-like defaults.
ClassProfile parse_profile(std::string_view spec);

struct GroundTruthScreen {
  std::string id;
  std::vector<MappedElement> elements;
};

struct SyntheticCorpus {
  std::vector<ScreenDoc> docs;
  std::vector<GroundTruthScreen> truth;
  std::array<std::size_t, kElementClassCount> df{};
};

inline constexpr double kSyntheticWidth = 1440.0;
inline constexpr double kSyntheticHeight = 2560.0;

/// Deterministic for a given seed. Every generated screen passes the screen
/// filter when indexed with the bundled label-fix rules; some elements carry
/// raw "input"/"image" labels that only those rules resolve.
SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n,
                                          const ClassProfile& profile = ClassProfile::rico_like());

std::string dump_manifest(const SyntheticCorpus& corpus);

/// Small portable RNG helpers over mt19937_64 (the standard distributions are
/// not bit-identical across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sketchsearch

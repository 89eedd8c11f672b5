#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sketchsearch/query_model.hpp"
#include "sketchsearch/recognizer.hpp"
#include "sketchsearch/scorer.hpp"
#include "sketchsearch/screen_index.hpp"

namespace httplib {
class Server;
}

namespace sketchsearch {

inline constexpr std::size_t kDefaultResultCount = 10;
inline constexpr std::size_t kMaxResultCount = 50;
inline constexpr std::size_t kShownPredictions = 3;

/// Snapshot of one session, for inspection and tests.
struct SessionView {
  Sketch sketch;
  std::size_t pending_strokes = 0;
  std::size_t redo_strokes = 0;
  std::vector<Prediction> predictions;
};

/// Owns the live sessions. Index, recognizer and hyperparameters are shared
/// read-only; each session's edits are serialized by its own mutex.
class SessionManager {
 public:
  using Clock = std::chrono::steady_clock;

  SessionManager(std::shared_ptr<const ScreenIndex> index,
                 std::shared_ptr<const Recognizer> recognizer, Hyperparams hp,
                 std::chrono::seconds idle_timeout = std::chrono::minutes(30),
                 std::function<Clock::time_point()> now = Clock::now);

  std::string create_session();

  std::vector<Prediction> submit_stroke(const std::string& id, const RawStroke& stroke,
                                        Canvas canvas);
  std::vector<Prediction> undo_stroke(const std::string& id);
  std::vector<Prediction> redo_stroke(const std::string& id);

  /// Adds the pending doodle to the sketch as the chosen class, or as the
  /// current top prediction, and returns the refreshed ranking.
  std::vector<ScoredScreen> confirm_element(const std::string& id,
                                            std::optional<DoodleClass> chosen,
                                            std::size_t n = kDefaultResultCount);
  std::vector<ScoredScreen> remove_last(const std::string& id,
                                        std::size_t n = kDefaultResultCount);
  std::vector<ScoredScreen> get_results(const std::string& id,
                                        std::size_t n = kDefaultResultCount);

  SessionView view(const std::string& id);

  /// Drops sessions idle longer than the timeout; returns how many.
  std::size_t expire_idle();
  std::size_t session_count() const;

  const ScreenIndex& index() const noexcept { return *index_; }
  const Hyperparams& hyperparams() const noexcept { return hp_; }

 private:
  struct Session {
    std::mutex mutex;
    Sketch sketch;
    std::vector<RawStroke> pending;
    std::vector<RawStroke> redo;
    Canvas canvas;
    std::vector<Prediction> predictions;
    Clock::time_point last_used;
  };

  std::shared_ptr<Session> find(const std::string& id);
  void repredict(Session& s) const;
  std::vector<ScoredScreen> rank(const Sketch& sketch, std::size_t n) const;

  std::shared_ptr<const ScreenIndex> index_;
  std::shared_ptr<const Recognizer> recognizer_;
  Hyperparams hp_;
  std::chrono::seconds idle_timeout_;
  std::function<Clock::time_point()> now_;

  mutable std::shared_mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

/// Schematic SVG of a screen: one translucent rectangle per covered tile and
/// class, opacity proportional to the covered area.
std::string render_thumbnail_svg(const ScreenIndex& index, const std::string& screen_id);

/// Installs the JSON-over-HTTP endpoints on a server.
void register_routes(httplib::Server& server, SessionManager& sessions);

}  // namespace sketchsearch

#include "sketchsearch/search_service.hpp"

#include <cstdio>
#include <random>
#include <sstream>

#include <httplib.h>

#include "json_util.hpp"
#include "sketchsearch/error.hpp"

namespace sketchsearch {

using detail::json;

SessionManager::SessionManager(std::shared_ptr<const ScreenIndex> index,
                               std::shared_ptr<const Recognizer> recognizer, Hyperparams hp,
                               std::chrono::seconds idle_timeout,
                               std::function<Clock::time_point()> now)
    : index_(std::move(index)),
      recognizer_(std::move(recognizer)),
      hp_(hp),
      idle_timeout_(idle_timeout),
      now_(std::move(now)) {
  if (!index_ || index_->empty()) throw Error(ErrorCode::EmptyIndex, "service needs a non-empty index");
  if (!recognizer_) throw Error(ErrorCode::InvalidArgument, "service needs a recognizer");
  if (!hp_.valid()) throw Error(ErrorCode::InvalidArgument, "hyperparameters must be >= 0");
}

std::string SessionManager::create_session() {
  expire_idle();
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::unique_lock lock(sessions_mutex_);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%016llx%08llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(++counter_));
  auto session = std::make_shared<Session>();
  session->last_used = now_();
  sessions_.emplace(buf, std::move(session));
  return buf;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, id);
  return it->second;
}

void SessionManager::repredict(Session& s) const {
  if (s.pending.empty()) {
    s.predictions.clear();
    return;
  }
  auto ranking = recognizer_->classify(normalize_strokes(s.pending, s.canvas));
  ranking.resize(std::min(ranking.size(), kShownPredictions));
  s.predictions = std::move(ranking);
}

std::vector<ScoredScreen> SessionManager::rank(const Sketch& sketch, std::size_t n) const {
  if (n < 1 || n > kMaxResultCount) {
    throw Error(ErrorCode::InvalidN, "n must be in [1, " + std::to_string(kMaxResultCount) + "]");
  }
  if (sketch.empty()) return {};
  return score_screens(sketch, *index_, hp_, n);
}

std::vector<Prediction> SessionManager::submit_stroke(const std::string& id, const RawStroke& stroke,
                                                      Canvas canvas) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (stroke.points.empty()) throw Error(ErrorCode::EmptyStroke, "stroke has no points");
  if (!(canvas.width > 0.0) || !(canvas.height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "canvas dimensions must be positive");
  }
  const RawStroke clamped = clamp_to_canvas(std::span(&stroke, 1), canvas).front();
  s->last_used = now_();
  s->pending.push_back(clamped);
  s->canvas = canvas;
  s->redo.clear();
  repredict(*s);
  return s->predictions;
}

std::vector<Prediction> SessionManager::undo_stroke(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->last_used = now_();
  if (!s->pending.empty()) {
    s->redo.push_back(std::move(s->pending.back()));
    s->pending.pop_back();
    repredict(*s);
  }
  return s->predictions;
}

std::vector<Prediction> SessionManager::redo_stroke(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->last_used = now_();
  if (!s->redo.empty()) {
    s->pending.push_back(std::move(s->redo.back()));
    s->redo.pop_back();
    repredict(*s);
  }
  return s->predictions;
}

std::vector<ScoredScreen> SessionManager::confirm_element(const std::string& id,
                                                          std::optional<DoodleClass> chosen,
                                                          std::size_t n) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->last_used = now_();
  if (s->pending.empty()) throw Error(ErrorCode::NoPendingStrokes, "nothing to confirm");
  if (n < 1 || n > kMaxResultCount) throw Error(ErrorCode::InvalidN, std::to_string(n));
  const DoodleClass klass = chosen ? *chosen : s->predictions.front().klass;
  const NormBBox bbox = bbox_of(s->pending, s->canvas);
  s->sketch = add_element(s->sketch, klass, bbox);
  s->pending.clear();
  s->redo.clear();
  s->predictions.clear();
  return rank(s->sketch, n);
}

std::vector<ScoredScreen> SessionManager::remove_last(const std::string& id, std::size_t n) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->last_used = now_();
  if (n < 1 || n > kMaxResultCount) throw Error(ErrorCode::InvalidN, std::to_string(n));
  s->sketch = remove_last_element(s->sketch);
  return rank(s->sketch, n);
}

std::vector<ScoredScreen> SessionManager::get_results(const std::string& id, std::size_t n) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->last_used = now_();
  return rank(s->sketch, n);
}

SessionView SessionManager::view(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return {s->sketch, s->pending.size(), s->redo.size(), s->predictions};
}

std::size_t SessionManager::expire_idle() {
  const auto now = now_();
  std::unique_lock lock(sessions_mutex_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle = false;
    {
      std::lock_guard session_lock(it->second->mutex);
      idle = now - it->second->last_used > idle_timeout_;
    }
    if (idle) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionManager::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------
// Thumbnails

std::string render_thumbnail_svg(const ScreenIndex& index, const std::string& screen_id) {
  const auto ordinal = index.find(screen_id);
  if (!ordinal) throw Error(ErrorCode::UnknownScreen, screen_id);
  constexpr int kWidth = 180;
  constexpr int kHeight = 320;
  constexpr double tile_w = static_cast<double>(kWidth) / kTileCols;
  constexpr double tile_h = static_cast<double>(kHeight) / kTileRows;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\" stroke=\"#333333\"/>";
  for (auto c : all_element_classes()) {
    const auto cells = index.coverage(c, *ordinal);
    if (cells.empty()) continue;
    const int hue = static_cast<int>(index_of(c) * 360 / kElementClassCount);
    svg << "<g fill=\"hsl(" << hue << ",65%,50%)\"><title>" << to_string(c) << "</title>";
    for (const auto& cell : cells) {
      const int row = cell.tile / kTileCols;
      const int col = cell.tile % kTileCols;
      svg << "<rect x=\"" << col * tile_w << "\" y=\"" << row * tile_h << "\" width=\"" << tile_w
          << "\" height=\"" << tile_h << "\" fill-opacity=\"" << 0.15 + 0.6 * cell.area << "\"/>";
    }
    svg << "</g>";
  }
  svg << "</svg>";
  return svg.str();
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownScreen: return 404;
    default: return 422;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json predictions_json(const std::vector<Prediction>& predictions) {
  json list = json::array();
  for (const auto& p : predictions) {
    list.push_back({{"class", std::string(to_string(p.klass))}, {"confidence", p.confidence}});
  }
  return {{"predictions", std::move(list)}};
}

json results_json(const std::vector<ScoredScreen>& results) {
  json list = json::array();
  for (const auto& r : results) list.push_back({{"id", r.screen_id}, {"score", r.score}});
  return {{"results", std::move(list)}};
}

std::size_t result_count(const httplib::Request& req) {
  if (!req.has_param("n")) return kDefaultResultCount;
  const auto raw = req.get_param_value("n");
  try {
    std::size_t used = 0;
    const long long v = std::stoll(raw, &used);
    if (used != raw.size() || v < 0) throw std::invalid_argument(raw);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidN, "n must be an integer");
  }
}

/// Runs a handler, translating library errors into the JSON error shape.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_json(res, {{"error", std::string(error_code_name(e.code()))}, {"detail", e.detail()}},
                status_for(e.code()));
    } catch (const std::exception& e) {
      send_json(res, {{"error", "InternalError"}, {"detail", e.what()}}, 500);
    }
  };
}

}  // namespace

void register_routes(httplib::Server& server, SessionManager& sessions) {
  server.Post("/sessions", guarded([&](const httplib::Request&, httplib::Response& res) {
                send_json(res, {{"id", sessions.create_session()}});
              }));

  server.Post(R"(/sessions/([^/]+)/strokes)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = detail::parse_json(req.body);
                const Canvas canvas = detail::canvas_from(detail::field(body, "canvas"));
                const RawStroke stroke = detail::stroke_from(detail::field(body, "points"));
                send_json(res, predictions_json(sessions.submit_stroke(req.matches[1], stroke, canvas)));
              }));

  server.Post(R"(/sessions/([^/]+)/strokes/undo)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                send_json(res, predictions_json(sessions.undo_stroke(req.matches[1])));
              }));

  server.Post(R"(/sessions/([^/]+)/strokes/redo)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                send_json(res, predictions_json(sessions.redo_stroke(req.matches[1])));
              }));

  server.Post(R"(/sessions/([^/]+)/elements)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                std::optional<DoodleClass> chosen;
                if (!req.body.empty()) {
                  const json body = detail::parse_json(req.body);
                  if (!body.is_object()) detail::bad_shape("body must be an object");
                  if (auto it = body.find("class"); it != body.end() && !it->is_null()) {
                    const auto name = detail::string_of(*it, "class");
                    chosen = parse_doodle_class(name);
                    if (!chosen) throw Error(ErrorCode::UnknownClass, name);
                  }
                }
                send_json(res, results_json(sessions.confirm_element(req.matches[1], chosen,
                                                                     result_count(req))));
              }));

  server.Delete(R"(/sessions/([^/]+)/elements/last)",
                guarded([&](const httplib::Request& req, httplib::Response& res) {
                  send_json(res, results_json(sessions.remove_last(req.matches[1], result_count(req))));
                }));

  server.Get(R"(/sessions/([^/]+)/results)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               send_json(res, results_json(sessions.get_results(req.matches[1], result_count(req))));
             }));

  server.Get(R"(/screens/([^/]+)/thumbnail)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               res.set_content(render_thumbnail_svg(sessions.index(), req.matches[1]), "image/svg+xml");
             }));
}

}  // namespace sketchsearch

#include <chrono>
#include <ctime>

#include "gamesys/config_io.hpp"
#include "gamesys/design_io.hpp"
#include "gamesys/error.hpp"
#include "gamesys/service.hpp"

namespace gamesys::service {

using nlohmann::json;

std::string_view session_mode_name(SessionMode mode) {
  return mode == SessionMode::Balance ? "balance" : "generate";
}

std::string_view session_status_name(SessionStatus status) {
  switch (status) {
    case SessionStatus::Running: return "running";
    case SessionStatus::AwaitingChoice: return "awaitingChoice";
    case SessionStatus::Finished: return "finished";
    case SessionStatus::Aborted: return "aborted";
  }
  return "running";
}

SessionMode session_mode_from_name(std::string_view name) {
  if (name == "balance") return SessionMode::Balance;
  if (name == "generate") return SessionMode::Generate;
  throw ServiceError(400, "INVALID_CONFIG",
                     "mode must be 'balance' or 'generate'");
}

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

bool ended(SessionStatus status) {
  return status == SessionStatus::Finished || status == SessionStatus::Aborted;
}

}  // namespace

struct SessionManager::Session {
  std::string id;
  std::string designId;
  SessionMode mode = SessionMode::Balance;
  EvolutionConfig config;
  std::string createdAt;

  mutable std::mutex mutex;
  mutable std::condition_variable changed;
  SessionStatus status = SessionStatus::Running;
  int generation = 0;
  std::vector<GenerationStats> history;
  std::vector<Candidate> pending;
  std::optional<std::size_t> choice;
  bool abortRequested = false;
  std::optional<EvolutionResult> result;
  std::string error;
  std::string updatedAt;
  std::thread worker;
};

class SessionManager::Bridge : public CandidateSelector {
 public:
  explicit Bridge(Session& session) : session_(session) {}

  std::optional<std::size_t> choose(
      int generation, std::span<const Candidate> candidates) override {
    std::unique_lock lock(session_.mutex);
    if (session_.abortRequested || candidates.empty()) return std::nullopt;
    session_.pending.assign(candidates.begin(), candidates.end());
    session_.generation = generation;
    session_.choice.reset();
    session_.status = SessionStatus::AwaitingChoice;
    session_.updatedAt = timestamp();
    session_.changed.notify_all();
    session_.changed.wait(lock, [&] {
      return session_.choice.has_value() || session_.abortRequested;
    });
    if (session_.abortRequested) return std::nullopt;
    return session_.choice;
  }

 private:
  Session& session_;
};

SessionManager::~SessionManager() {
  std::map<std::string, std::shared_ptr<Session>> sessions;
  {
    std::lock_guard lock(mutex_);
    sessions = sessions_;
  }
  for (auto& [id, session] : sessions) {
    {
      std::lock_guard lock(session->mutex);
      session->abortRequested = true;
      session->changed.notify_all();
    }
    if (session->worker.joinable()) session->worker.join();
  }
}

void SessionManager::run(std::shared_ptr<Session> session, GameDesign design) {
  Bridge bridge(*session);
  EvolutionHooks hooks;
  hooks.onGeneration = [&](const GenerationStats& stats,
                           std::span<const Individual>) {
    std::lock_guard lock(session->mutex);
    session->generation = stats.generation;
    session->history.push_back(stats);
    session->updatedAt = timestamp();
  };
  hooks.stopRequested = [&] {
    std::lock_guard lock(session->mutex);
    return session->abortRequested;
  };
  std::optional<EvolutionResult> result;
  std::string error;
  try {
    result = session->mode == SessionMode::Balance
                 ? balance(design, session->config, bridge, hooks)
                 : generate(design, session->config, bridge, hooks);
  } catch (const std::exception& e) {
    error = e.what();
  }
  std::lock_guard lock(session->mutex);
  session->pending.clear();
  if (result) {
    if (session->abortRequested) result->partial = true;
    session->status =
        result->partial ? SessionStatus::Aborted : SessionStatus::Finished;
    session->result = std::move(result);
  } else {
    session->status = SessionStatus::Aborted;
    session->error = error;
  }
  session->updatedAt = timestamp();
  session->changed.notify_all();
}

std::string SessionManager::start(const std::string& designId,
                                  const GameDesign& design, SessionMode mode,
                                  const EvolutionConfig& cfg) {
  cfg.validate();
  auto session = std::make_shared<Session>();
  session->designId = designId;
  session->mode = mode;
  session->config = cfg;
  session->createdAt = session->updatedAt = timestamp();
  {
    std::lock_guard lock(mutex_);
    session->id = "s" + std::to_string(++counter_);
    sessions_[session->id] = session;
  }
  std::lock_guard lock(session->mutex);
  session->worker = std::thread(&SessionManager::run, session, design);
  return session->id;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(
    const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ServiceError(404, "NOT_FOUND", "no session '" + id + "'");
  }
  return it->second;
}

json SessionManager::describe(const Session& s) {
  json candidates = json::array();
  for (std::size_t i = 0; i < s.pending.size(); ++i) {
    const Candidate& c = s.pending[i];
    candidates.push_back({{"index", i},
                          {"designDigest", design_digest(c.design)},
                          {"fitness", c.fitness},
                          {"playthrough", digest_to_json(c.digest)},
                          {"design", design_to_json(c.design)}});
  }
  json history = json::array();
  for (const auto& h : s.history) {
    history.push_back({{"generation", h.generation},
                       {"bestFitness", h.bestFitness},
                       {"meanFitness", h.meanFitness}});
  }
  json doc = {{"id", s.id},
              {"designId", s.designId},
              {"mode", session_mode_name(s.mode)},
              {"status", session_status_name(s.status)},
              {"generation", s.generation},
              {"generations", s.config.generations},
              {"history", std::move(history)},
              {"pendingCandidates", std::move(candidates)},
              {"hasResult", s.result.has_value()},
              {"config", evolution_config_to_json(s.config)},
              {"createdAt", s.createdAt},
              {"updatedAt", s.updatedAt}};
  if (!s.error.empty()) doc["error"] = s.error;
  return doc;
}

json SessionManager::snapshot(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  return describe(*session);
}

json SessionManager::choose(const std::string& id, long long index) {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  if (session->status != SessionStatus::AwaitingChoice) {
    throw ServiceError(409, "WRONG_STATE",
                       "session is " +
                           std::string(session_status_name(session->status)));
  }
  if (index < 0 || static_cast<std::size_t>(index) >= session->pending.size()) {
    throw ServiceError(400, "INDEX_OUT_OF_RANGE",
                       "index must be in [0, " +
                           std::to_string(session->pending.size()) + ")");
  }
  session->choice = static_cast<std::size_t>(index);
  session->pending.clear();
  session->status = SessionStatus::Running;
  session->updatedAt = timestamp();
  session->changed.notify_all();
  return describe(*session);
}

json SessionManager::abort(const std::string& id) {
  const auto session = find(id);
  std::unique_lock lock(session->mutex);
  if (ended(session->status)) {
    throw ServiceError(409, "WRONG_STATE",
                       "session is " +
                           std::string(session_status_name(session->status)));
  }
  session->abortRequested = true;
  session->changed.notify_all();
  session->changed.wait(lock, [&] { return ended(session->status); });
  return describe(*session);
}

json SessionManager::result(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  if (!session->result) {
    throw ServiceError(409, "WRONG_STATE",
                       "session is " +
                           std::string(session_status_name(session->status)));
  }
  json doc = evolution_result_to_json(*session->result);
  doc["status"] = session_status_name(session->status);
  doc["sessionId"] = session->id;
  return doc;
}

SessionStatus SessionManager::wait_while_running(
    const std::string& id, std::chrono::milliseconds timeout) const {
  const auto session = find(id);
  std::unique_lock lock(session->mutex);
  session->changed.wait_for(lock, timeout, [&] {
    return session->status != SessionStatus::Running;
  });
  return session->status;
}

}  // namespace gamesys::service

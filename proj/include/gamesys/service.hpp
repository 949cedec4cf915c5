#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gamesys/design.hpp"
#include "gamesys/evolution.hpp"
#include "gamesys/simulation.hpp"

namespace gamesys::service {

// Error carrying an HTTP status and a machine-readable code.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message,
               nlohmann::json details = nullptr)
      : std::runtime_error(message),
        status_(status),
        code_(std::move(code)),
        details_(std::move(details)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const nlohmann::json& details() const { return details_; }

 private:
  int status_;
  std::string code_;
  nlohmann::json details_;
};

struct StoredDesign {
  std::string id;
  std::string name;
  int revision = 1;
  GameDesign design;
};

nlohmann::json stored_design_to_json(const StoredDesign& stored);

// Designs persisted as one JSON file per id under a data directory.
class DesignStore {
 public:
  // Loads every stored design found in `dir`, creating it if needed.
  explicit DesignStore(std::filesystem::path dir);

  // Throws ServiceError(400 VALIDATION_ERROR).
  StoredDesign create(const GameDesign& design);
  std::optional<StoredDesign> get(const std::string& id) const;
  std::vector<StoredDesign> list() const;
  // Throws ServiceError 404 NOT_FOUND, 409 REVISION_CONFLICT when
  // expectedRevision is given and stale, 400 VALIDATION_ERROR.
  StoredDesign update(const std::string& id, const GameDesign& design,
                      std::optional<int> expectedRevision);
  // Idempotent; returns whether a design was removed.
  bool remove(const std::string& id);

 private:
  std::filesystem::path path_of(const std::string& id) const;
  void persist(const StoredDesign& stored) const;
  std::string fresh_id();

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<std::string, StoredDesign> designs_;
  std::uint64_t counter_ = 0;
};

enum class SessionMode { Balance, Generate };
enum class SessionStatus { Running, AwaitingChoice, Finished, Aborted };

std::string_view session_mode_name(SessionMode mode);
std::string_view session_status_name(SessionStatus status);
// Throws ServiceError(400 INVALID_CONFIG).
SessionMode session_mode_from_name(std::string_view name);

// Evolution runs on background threads and pause at human checkpoints until
// a choice or abort arrives.
class SessionManager {
 public:
  SessionManager() = default;
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;
  // Aborts and joins every running session.
  ~SessionManager();

  std::string start(const std::string& designId, const GameDesign& design,
                    SessionMode mode, const EvolutionConfig& cfg);
  // The calls below throw ServiceError(404 NOT_FOUND) for unknown ids.
  nlohmann::json snapshot(const std::string& id) const;
  // 409 WRONG_STATE unless awaiting a choice; 400 INDEX_OUT_OF_RANGE.
  nlohmann::json choose(const std::string& id, long long index);
  // Blocks until the run has stopped. 409 WRONG_STATE once ended.
  nlohmann::json abort(const std::string& id);
  // 409 WRONG_STATE while the run is still going.
  nlohmann::json result(const std::string& id) const;

  // Blocks until the session leaves Running, or the timeout elapses.
  SessionStatus wait_while_running(const std::string& id,
                                   std::chrono::milliseconds timeout) const;

 private:
  struct Session;
  class Bridge;

  std::shared_ptr<Session> find(const std::string& id) const;
  static nlohmann::json describe(const Session& session);
  static void run(std::shared_ptr<Session> session, GameDesign design);

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path dataDir = "gamesys-data";
  SimConfig defaultSim;
  EvolutionConfig defaultEvolution;
};

class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the listening socket; port 0 picks a free one. Returns the port
  // or throws Error(IoError).
  int bind();
  // Serves until stop(); bind() first.
  void run();
  void stop();
  // Waits until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gamesys::service

#include <httplib.h>

#include "gamesys/config_io.hpp"
#include "gamesys/design_io.hpp"
#include "gamesys/error.hpp"
#include "gamesys/service.hpp"

namespace gamesys::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, const json& details = nullptr) {
  json body = {{"code", code}, {"message", message}};
  if (!details.is_null()) body["details"] = details;
  if (code == "VALIDATION_ERROR" && !details.is_null()) body["report"] = details;
  send_json(res, status, body);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return 500;
    case ErrorCode::NoValidActions:
    case ErrorCode::NoLegalEdit: return 409;
    default: return 400;
  }
}

template <typename Handler>
auto guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what(), e.details());
    } catch (const ValidationFailure& e) {
      send_error(res, 400, "VALIDATION_ERROR", e.what(),
                 validation_report_to_json(e.report()));
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), std::string(to_string(e.code())),
                 e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "INTERNAL_ERROR", e.what());
    }
  };
}

json parse_body(const httplib::Request& req, bool allowEmpty) {
  if (req.body.empty()) {
    if (allowEmpty) return json::object();
    throw ServiceError(400, "PARSE_ERROR", "request body is empty");
  }
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "PARSE_ERROR", e.what());
  }
}

GameDesign design_from_body(const httplib::Request& req) {
  return design_from_json(parse_body(req, false));
}

std::optional<int> expected_revision(const httplib::Request& req) {
  std::string text;
  if (req.has_header("If-Match")) {
    text = req.get_header_value("If-Match");
    text.erase(std::remove(text.begin(), text.end(), '"'), text.end());
  } else if (req.has_param("revision")) {
    text = req.get_param_value("revision");
  } else {
    return std::nullopt;
  }
  try {
    std::size_t used = 0;
    const int revision = std::stoi(text, &used);
    if (used == text.size()) return revision;
  } catch (const std::exception&) {
  }
  throw ServiceError(400, "INVALID_CONFIG", "revision must be an integer");
}

}  // namespace

struct Server::Impl {
  explicit Impl(ServerOptions opts)
      : options(std::move(opts)), store(options.dataDir) {
    routes();
  }

  StoredDesign require_design(const std::string& id) const {
    auto stored = store.get(id);
    if (!stored) throw ServiceError(404, "NOT_FOUND", "no design '" + id + "'");
    return *stored;
  }

  void routes() {
    server.set_default_headers(
        {{"Access-Control-Allow-Origin", "*"},
         {"Access-Control-Allow-Headers", "Content-Type, If-Match"},
         {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    server.Get("/healthz", guarded([](const auto&, auto& res) {
      send_json(res, 200, {{"status", "ok"}});
    }));

    server.Post("/designs", guarded([this](const auto& req, auto& res) {
      send_json(res, 201, stored_design_to_json(store.create(design_from_body(req))));
    }));

    server.Get("/designs", guarded([this](const auto&, auto& res) {
      json list = json::array();
      for (const auto& stored : store.list()) {
        list.push_back({{"id", stored.id},
                        {"name", stored.name},
                        {"revision", stored.revision}});
      }
      send_json(res, 200, {{"designs", std::move(list)}});
    }));

    server.Get(R"(/designs/([^/]+))", guarded([this](const auto& req, auto& res) {
      send_json(res, 200, stored_design_to_json(require_design(req.matches[1])));
    }));

    server.Put(R"(/designs/([^/]+))", guarded([this](const auto& req, auto& res) {
      const auto revision = expected_revision(req);
      require_design(req.matches[1]);
      const GameDesign design = design_from_body(req);
      send_json(res, 200,
                stored_design_to_json(store.update(req.matches[1], design, revision)));
    }));

    server.Delete(R"(/designs/([^/]+))", guarded([this](const auto& req, auto& res) {
      store.remove(req.matches[1]);
      res.status = 204;
    }));

    server.Post(R"(/designs/([^/]+)/evaluate)",
                guarded([this](const auto& req, auto& res) {
      const StoredDesign stored = require_design(req.matches[1]);
      const json body = parse_body(req, true);
      if (!body.is_object()) {
        throw ServiceError(400, "SCHEMA_ERROR", "body must be an object");
      }
      MetricWeights weights;
      SimConfig sim = options.defaultSim;
      for (const auto& [key, value] : body.items()) {
        if (key == "weights") {
          weights = weights_from_json(value);
        } else if (key == "simConfig") {
          sim = sim_config_from_json(value, sim);
        } else if (key == "seed") {
          if (!value.is_number_unsigned()) {
            throw ServiceError(400, "INVALID_CONFIG", "seed must be a non-negative integer");
          }
          sim.seed = value.template get<std::uint64_t>();
        } else {
          throw ServiceError(400, "INVALID_CONFIG", "unknown field '" + key + "'");
        }
      }
      const Evaluation evaluation = evaluate(stored.design, weights, sim);
      send_json(res, 200,
                {{"designId", stored.id},
                 {"revision", stored.revision},
                 {"seed", sim.seed},
                 {"weights", weights_to_json(weights)},
                 {"simConfig", sim_config_to_json(sim)},
                 {"report", report_to_json(evaluation.report)},
                 {"summary", evaluation.summary}});
    }));

    server.Post("/sessions", guarded([this](const auto& req, auto& res) {
      const json body = parse_body(req, false);
      if (!body.is_object() || !body.contains("designId") ||
          !body["designId"].is_string()) {
        throw ServiceError(400, "SCHEMA_ERROR", "designId is required");
      }
      const std::string mode_name =
          body.contains("mode") && body["mode"].is_string()
              ? body["mode"].template get<std::string>()
              : std::string("balance");
      const SessionMode mode = session_mode_from_name(mode_name);
      const StoredDesign stored =
          require_design(body["designId"].template get<std::string>());
      const EvolutionConfig cfg =
          body.contains("config")
              ? evolution_config_from_json(body["config"], options.defaultEvolution)
              : options.defaultEvolution;
      const std::string id = sessions.start(stored.id, stored.design, mode, cfg);
      send_json(res, 201, sessions.snapshot(id));
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([this](const auto& req, auto& res) {
      send_json(res, 200, sessions.snapshot(req.matches[1]));
    }));

    server.Post(R"(/sessions/([^/]+)/choice)",
                guarded([this](const auto& req, auto& res) {
      const json body = parse_body(req, false);
      if (!body.is_object() || !body.contains("index") ||
          !body["index"].is_number_integer()) {
        throw ServiceError(400, "SCHEMA_ERROR", "index must be an integer");
      }
      send_json(res, 200,
                sessions.choose(req.matches[1], body["index"].template get<long long>()));
    }));

    server.Post(R"(/sessions/([^/]+)/abort)",
                guarded([this](const auto& req, auto& res) {
      send_json(res, 200, sessions.abort(req.matches[1]));
    }));

    server.Get(R"(/sessions/([^/]+)/result)",
               guarded([this](const auto& req, auto& res) {
      send_json(res, 200, sessions.result(req.matches[1]));
    }));
  }

  ServerOptions options;
  DesignStore store;
  SessionManager sessions;
  httplib::Server server;
  bool bound = false;
};

Server::Server(ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() { stop(); }

int Server::bind() {
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (!impl_->server.bind_to_port(impl_->options.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::IoError, "IO_ERROR: cannot listen on " +
                                        impl_->options.host + ":" +
                                        std::to_string(impl_->options.port));
  }
  impl_->bound = true;
  return port;
}

void Server::run() {
  if (!impl_->bound) bind();
  impl_->server.listen_after_bind();
}

void Server::stop() {
  if (impl_) impl_->server.stop();
}

void Server::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace gamesys::service

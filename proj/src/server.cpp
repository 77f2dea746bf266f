#include "latloc/server.hpp"

#include <mutex>

#include <httplib.h>

#include "latloc/error.hpp"

namespace latloc {

ExploreService::ExploreService(json_io::LatticeFile file, FrontierStrategy strategy)
    : kind_(file.kind),
      failing_(std::move(file.failing_coverage)),
      fl_(FailureLattice::build(std::move(file.rules))),
      lattice_json_(json_io::lattice_to_json(fl_, failing_, kind_)) {
  restart(strategy);
}

void ExploreService::restart(FrontierStrategy strategy) {
  session_ = ExplorationSession::start(fl_, failing_, strategy);
  current_.reset();
  advance();
}

void ExploreService::advance() {
  if (!current_ && !session_->finished()) current_ = session_->next_concept(fl_);
}

nlohmann::json ExploreService::lattice() const { return lattice_json_; }

nlohmann::json ExploreService::session() const {
  std::shared_lock lock(mutex_);
  return json_io::session_to_json(*session_, current_);
}

nlohmann::json ExploreService::decide(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("decision") || !body["decision"].is_string()) {
    throw Error("body must be an object with a \"decision\" string");
  }
  Decision decision;
  auto kind = body["decision"].get<std::string>();
  if (kind == "fault_located") {
    if (!body.contains("items")) throw Error("fault_located requires \"items\"");
    decision = Decision::fault_located(json_io::items_from_json(body["items"], kind_));
  } else if (kind != "no_fault") {
    throw Error("unknown decision '" + kind + "'");
  }

  std::unique_lock lock(mutex_);
  if (!current_) throw Error("session is finished");
  if (body.contains("concept")) {
    const auto& c = body["concept"];
    if (!c.is_number_unsigned() || c.get<std::size_t>() != current_->concept_id) {
      throw Error("concept " + c.dump() + " is not the presented concept " + std::to_string(current_->concept_id));
    }
  }
  session_->apply_decision(fl_, current_->concept_id, decision);
  current_.reset();
  advance();
  return json_io::session_to_json(*session_, current_);
}

nlohmann::json ExploreService::reset(const nlohmann::json& body) {
  auto strategy = FrontierStrategy::queue;
  if (body.is_object() && body.contains("strategy")) {
    if (!body["strategy"].is_string()) throw Error("\"strategy\" must be a string");
    strategy = parse_strategy(body["strategy"].get<std::string>());
  } else if (!body.is_null() && !body.is_object()) {
    throw Error("body must be an object");
  }
  std::unique_lock lock(mutex_);
  restart(strategy);
  return json_io::session_to_json(*session_, current_);
}

struct HttpServer::Impl {
  ExploreService& service;
  httplib::Server server;
  explicit Impl(ExploreService& s) : service(s) {}
};

namespace {

void send_json(httplib::Response& res, const nlohmann::json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nullptr;
  auto j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error("request body is not valid JSON");
  return j;
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, f(req));
    } catch (const Error& e) {
      send_json(res, {{"error", e.what()}}, 400);
    }
  };
}

}  // namespace

HttpServer::HttpServer(ExploreService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;
  srv.Get("/api/lattice", guarded([&svc](const httplib::Request&) { return svc.lattice(); }));
  srv.Get("/api/session", guarded([&svc](const httplib::Request&) { return svc.session(); }));
  srv.Post("/api/session/decision",
           guarded([&svc](const httplib::Request& req) { return svc.decide(parse_body(req)); }));
  srv.Post("/api/session/reset", guarded([&svc](const httplib::Request& req) { return svc.reset(parse_body(req)); }));
  if (static_dir && !srv.set_mount_point("/", static_dir->string())) {
    throw Error("static directory not found: " + static_dir->string());
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace latloc

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "latloc/failure_lattice.hpp"
#include "latloc/json_io.hpp"

namespace latloc {

// One exploration session over one failure lattice. The next concept is
// presented eagerly, so readers never mutate state. Decisions are serialized.
class ExploreService {
 public:
  explicit ExploreService(json_io::LatticeFile file, FrontierStrategy strategy = FrontierStrategy::queue);

  nlohmann::json lattice() const;
  nlohmann::json session() const;

  // Body: {"concept":int?, "decision":"no_fault"} or
  // {"concept":int?, "decision":"fault_located", "items":[int,...]}.
  // Throws latloc::Error on a malformed body, a finished session or a
  // concept other than the presented one.
  nlohmann::json decide(const nlohmann::json& body);

  // Body: {"strategy":"queue"|"stack"}, strategy optional.
  nlohmann::json reset(const nlohmann::json& body);

  const FailureLattice& failure_lattice() const noexcept { return fl_; }

 private:
  void restart(FrontierStrategy strategy);
  void advance();

  ItemKind kind_;
  std::vector<std::vector<ItemId>> failing_;
  FailureLattice fl_;
  nlohmann::json lattice_json_;

  mutable std::shared_mutex mutex_;
  std::optional<ExplorationSession> session_;
  std::optional<Presentation> current_;
};

// Embedded HTTP front end for ExploreService.
class HttpServer {
 public:
  HttpServer(ExploreService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace latloc

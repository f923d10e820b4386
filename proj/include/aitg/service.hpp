#pragma once

#include "aitg/report.hpp"
#include "aitg/workspace.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace aitg {

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

// JSON service over a loaded workspace. The bundle is immutable; firm profile
// edits go through one writer and readers work on the snapshot current at
// request start. `handle` is the transport-free entry point used by `listen`.
class Service {
 public:
  explicit Service(WorkspaceBundle bundle, std::filesystem::path archive_dir = {}, unsigned mc_workers = 0);
  ~Service();

  ServiceResponse handle(const std::string& method, const std::string& path, const std::string& body);

  // Blocks until stop(). Port 0 binds an ephemeral port, reported by port().
  bool listen(const std::string& host, int port);
  void stop();
  int port() const { return port_.load(); }
  bool running() const;

 private:
  using FirmMap = std::map<std::string, FirmProfile>;
  std::shared_ptr<const FirmMap> snapshot() const;

  ServiceResponse dispatch(const std::string& method, const std::string& path, const std::string& body);

  WorkspaceBundle bundle_;
  mutable std::mutex snap_mu_;
  std::shared_ptr<const FirmMap> firms_;
  std::mutex writer_mu_;
  ReportArchive archive_;
  unsigned mc_workers_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<int> port_{0};
};

}  // namespace aitg

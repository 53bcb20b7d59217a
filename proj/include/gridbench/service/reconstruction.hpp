#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "gridbench/expected.hpp"
#include "gridbench/protocol/episode.hpp"
#include "gridbench/protocol/task.hpp"

namespace httplib {
class Server;
}

namespace gridbench::service {

inline constexpr const char* kReconstructionSchema = "gridbench.reconstruction/1";

struct ReconstructionSubmission {
  std::string task_id;
  std::string annotator_id;
  std::string script;
  double duration = 0;  // seconds spent by the annotator
};

struct StoredReconstruction {
  ReconstructionSubmission submission;
  protocol::Verdict verdict;

  nlohmann::json to_json() const;
};

/// HTTP-agnostic reply.
struct Reply {
  int status = 200;
  nlohmann::json body;
};

/// Backend for human-baseline collection. Submissions are kept in an
/// append-only JSONL store that is replayed and re-scored on construction.
class ReconstructionService {
 public:
  static Expected<std::unique_ptr<ReconstructionService>, std::string> open(
      std::vector<protocol::TaskInstance> tasks, std::string store_path);

  /// GET /tasks/next?annotator=
  Reply next_task(const std::string& annotator) const;
  /// POST /reconstructions
  Reply submit(const nlohmann::json& body);
  /// GET /results
  Reply results() const;
  /// POST /execute
  Reply execute(const nlohmann::json& body) const;

  std::size_t stored() const;

 private:
  ReconstructionService(std::vector<protocol::TaskInstance> tasks, std::string store_path);
  const protocol::TaskInstance* find(const std::string& id) const;
  protocol::Verdict score(const protocol::TaskInstance& task, const std::string& script) const;

  std::vector<protocol::TaskInstance> tasks_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::string store_path_;
  mutable std::mutex mu_;
  std::vector<StoredReconstruction> records_;
  std::map<std::pair<std::string, std::string>, std::size_t> by_key_;
};

/// Registers the four endpoints on an httplib server.
void mount_routes(httplib::Server& server, ReconstructionService& service);

}  // namespace gridbench::service

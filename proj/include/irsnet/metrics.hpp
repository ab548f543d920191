#pragma once

#include <fstream>
#include <string>

#include "irsnet/config.hpp"

namespace irsnet {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kCsvHeader =
    "episode,step,agent_id,reward,sum_rate,critic_loss,actor_objective,"
    "wall_time_ms";

struct MetricsRow {
  long episode = 0;
  long step = 0;
  long agent_id = -1;  // -1 = global row
  double reward = 0.0;
  double sum_rate = 0.0;
  double critic_loss = 0.0;
  double actor_objective = 0.0;
  long wall_time_ms = 0;
  std::string strategy;  // optional tag column, used by `compare`
};

// Metrics stream: provenance comment lines, the fixed header, then rows.
// flush() per episode keeps partial output usable after a crash.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const ExperimentConfig& config,
            bool with_strategy_column = false);

  void write(const MetricsRow& row);
  void flush();

 private:
  std::ofstream out_;
  bool with_strategy_;
};

}  // namespace irsnet

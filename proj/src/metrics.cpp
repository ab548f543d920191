#include "irsnet/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace irsnet {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const ExperimentConfig& config,
                     bool with_strategy_column)
    : out_(path), with_strategy_(with_strategy_column) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  out_ << "# config_hash=" << hash << "\n";
  out_ << "# seed=" << config.seed << "\n";
  out_ << "# version=" << kArtifactVersion << "\n";
  out_ << kCsvHeader;
  if (with_strategy_) out_ << ",strategy";
  out_ << "\n";
}

void CsvWriter::write(const MetricsRow& row) {
  out_ << row.episode << ',' << row.step << ',' << row.agent_id << ','
       << fmt(row.reward) << ',' << fmt(row.sum_rate) << ','
       << fmt(row.critic_loss) << ',' << fmt(row.actor_objective) << ','
       << row.wall_time_ms;
  if (with_strategy_) out_ << ',' << row.strategy;
  out_ << "\n";
}

void CsvWriter::flush() { out_.flush(); }

}  // namespace irsnet

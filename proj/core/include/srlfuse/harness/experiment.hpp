#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srlfuse/harness/config.hpp"
#include "srlfuse/metrics.hpp"

namespace srlfuse {

struct SeedResult {
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;  // e.g. "dev.accuracy", "train.f1"
  std::string checkpoint;
};

struct ExperimentResult {
  std::string label;
  Task task = Task::kEntailment;
  std::string config_hash;
  TagSource tag_source = TagSource::kNone;
  int tag_dim = 0;
  bool contextual = true;
  std::vector<SeedResult> seeds;
  std::vector<MetricReport> metrics;  // aggregated over seeds, sorted by name
  std::map<std::string, std::string> corpus_checksums;
  std::string code_version;
  std::string error;  // non-empty when the run failed

  bool ok() const { return error.empty(); }
  const MetricReport* metric(const std::string& name) const;
  // Main number for tables: dev when available, otherwise train.
  std::string primary_metric() const;
};

struct RunOptions {
  bool save_checkpoints = true;
  std::ostream* log = nullptr;
};

// Trains and evaluates configurations. Loaded corpora, tagged datasets and
// trained SRL taggers are cached across runs of one runner.
class ExperimentRunner {
 public:
  explicit ExperimentRunner(RunOptions options = {});
  ~ExperimentRunner();
  ExperimentRunner(const ExperimentRunner&) = delete;
  ExperimentRunner& operator=(const ExperimentRunner&) = delete;

  ExperimentResult train(const RunConfig& config, std::string label = "");
  // Re-evaluates the checkpoints written by train() for the same config.
  ExperimentResult evaluate(const RunConfig& config, std::string label = "");

  // One result per (config, dim); failures are recorded and the sweep goes on.
  std::vector<ExperimentResult> sweep_dim(const std::vector<RunConfig>& configs, const std::vector<int>& dims);
  // {contextual on/off} x {tags on/off}, full model first.
  std::vector<ExperimentResult> ablate(const RunConfig& config);
  // Word-only baseline then one row per tag source (srl, pos, ne).
  std::vector<ExperimentResult> compare_tag_sources(const RunConfig& config);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline const std::vector<int>& default_sweep_dims() {
  static const std::vector<int> dims{1, 2, 5, 10, 20, 50, 100};
  return dims;
}

// Variants used by ablate(): label and config for each cell.
std::vector<std::pair<std::string, RunConfig>> ablation_grid(const RunConfig& config);
std::vector<std::pair<std::string, RunConfig>> tag_source_grid(const RunConfig& config);

}  // namespace srlfuse

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "srlfuse/embedding.hpp"
#include "srlfuse/esim.hpp"
#include "srlfuse/reader.hpp"
#include "srlfuse/srl.hpp"
#include "srlfuse/task_features.hpp"
#include "srlfuse/training.hpp"

namespace srlfuse {

enum class Task { kSrl, kEntailment, kReading };

const char* to_string(Task task);
Task parse_task(std::string_view text);  // throws Error(kConfig)

struct DataConfig {
  std::string train;
  std::string dev;
  std::string test;            // not accepted for reading
  std::string srl_corpus;      // trains the tagger when tag_source is srl
  std::string srl_checkpoint;  // used instead of training the tagger when set
  std::string pos_lexicon;     // extra "word TAG" lines for the POS tagger
};

struct RunConfig {
  Task task = Task::kEntailment;
  DataConfig data;
  EmbeddingConfig embedding;  // use_tags follows tag_source
  TagSource tag_source = TagSource::kSrl;
  std::string preset = "desk";
  SrlConfig srl;      // tagger (and the srl task); contextual comes from `embedding`
  EsimConfig esim;    // embedding field ignored
  ReaderConfig reader;
  TrainSchedule schedule;
  TrainSchedule tagger_schedule;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string output_dir;

  SrlConfig srl_model() const;
  EsimConfig esim_model() const;
  ReaderConfig reader_model() const;
};

// Defaults for a task and preset ("desk" or "full").
RunConfig default_config(Task task, std::string_view preset = "desk");

// Parses JSON text. Missing keys take the task defaults; unknown keys are
// rejected. Relative paths resolve against `base_dir`.
RunConfig parse_config(std::string_view text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

// Applies "dotted.key=value" overrides; value is parsed as JSON when possible,
// otherwise taken as a string.
RunConfig apply_overrides(const RunConfig& config, const std::vector<std::string>& assignments,
                          const std::string& base_dir = "");

// Sorted-key serialisation. The hash covers everything except output_dir.
std::string canonical_json(const RunConfig& config, bool pretty = false);
std::string config_hash(const RunConfig& config);

// Throws Error(kConfig) on invalid values; with check_paths, Error(kIo) for
// data files that do not exist.
void validate(const RunConfig& config, bool check_paths = true);

// Cache/output root: $SRLFUSE_HOME or ./srlfuse-runs.
std::string output_root();
// config.output_dir, or <output_root>/runs when unset.
std::string resolve_output_dir(const RunConfig& config);

const char* version();

}  // namespace srlfuse

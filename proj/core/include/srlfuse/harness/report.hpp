#pragma once

#include <string>
#include <vector>

#include "srlfuse/harness/experiment.hpp"

namespace srlfuse {

// Left-aligned first column, right-aligned others, two-space gutters.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

std::string format_percent(double value);  // 0.8912 -> "89.12"

// One JSON object, keys sorted, no trailing newline.
std::string result_json(const ExperimentResult& result);
std::string results_jsonl(const std::vector<ExperimentResult>& results);

// Label and every aggregated metric (mean over seeds, in percent).
std::string metrics_table(const std::vector<ExperimentResult>& results);
// Model | Dev | Test layout used for the ablation and tag-source tables.
std::string dev_test_table(const std::vector<ExperimentResult>& results);
// task | dim | metric | value, one row per sweep cell.
std::string sweep_table(const std::vector<ExperimentResult>& results);
// CSV plot data: task,dim,metric,value,seeds (empty value for failed cells).
std::string sweep_csv(const std::vector<ExperimentResult>& results);

}  // namespace srlfuse

#include "srlfuse/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "../json_util.hpp"

namespace srlfuse {

using detail::json;

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto grow = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  grow(header);
  for (const auto& r : rows) grow(r);
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    std::string text;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      const std::string pad(width[i] - cell.size(), ' ');
      if (i > 0) text += "  ";
      text += i == 0 ? cell + pad : pad + cell;
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * value);
  return buf;
}

std::string result_json(const ExperimentResult& r) {
  json seeds = json::array();
  for (const auto& s : r.seeds) {
    json m = json::object();
    for (const auto& [k, v] : s.metrics) m[k] = v;
    seeds.push_back({{"seed", s.seed}, {"metrics", m}, {"checkpoint", s.checkpoint}});
  }
  json metrics = json::object();
  for (const auto& m : r.metrics)
    metrics[m.name] = {{"mean", m.value}, {"per_seed", m.per_seed}, {"count", m.count}};
  json j = {{"label", r.label},
            {"task", to_string(r.task)},
            {"config_hash", r.config_hash},
            {"tag_source", to_string(r.tag_source)},
            {"tag_dim", r.tag_dim},
            {"contextual", r.contextual},
            {"seeds", seeds},
            {"metrics", metrics},
            {"corpus_checksums", r.corpus_checksums},
            {"code_version", r.code_version}};
  if (!r.ok()) j["error"] = r.error;
  return j.dump();
}

std::string results_jsonl(const std::vector<ExperimentResult>& results) {
  std::string out;
  for (const auto& r : results) out += result_json(r) + '\n';
  return out;
}

std::string metrics_table(const std::vector<ExperimentResult>& results) {
  std::vector<std::string> names;
  for (const auto& r : results)
    for (const auto& m : r.metrics)
      if (std::find(names.begin(), names.end(), m.name) == names.end()) names.push_back(m.name);
  std::sort(names.begin(), names.end());
  std::vector<std::string> header{"run", "seeds"};
  header.insert(header.end(), names.begin(), names.end());
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    std::vector<std::string> row{r.label, std::to_string(r.seeds.size())};
    for (const auto& n : names) {
      const auto* m = r.metric(n);
      row.push_back(m ? format_percent(m->value) : r.ok() ? "-" : "failed");
    }
    rows.push_back(std::move(row));
  }
  return render_table(header, rows);
}

namespace {

std::string metric_cell(const ExperimentResult& r, const std::string& split) {
  if (!r.ok()) return "failed";
  for (const char* suffix : {".accuracy", ".f1"})
    if (const auto* m = r.metric(split + suffix)) return format_percent(m->value);
  return "-";
}

}  // namespace

std::string dev_test_table(const std::vector<ExperimentResult>& results) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) rows.push_back({r.label, metric_cell(r, "dev"), metric_cell(r, "test")});
  return render_table({"Model", "Dev", "Test"}, rows);
}

std::string sweep_table(const std::vector<ExperimentResult>& results) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    const auto name = r.primary_metric();
    const auto* m = r.ok() ? r.metric(name) : nullptr;
    rows.push_back({to_string(r.task), std::to_string(r.tag_dim), r.ok() ? name : "-",
                    m ? format_percent(m->value) : "failed"});
  }
  return render_table({"task", "dim", "metric", "value"}, rows);
}

std::string sweep_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "task,dim,metric,value,seeds\n";
  for (const auto& r : results) {
    const auto name = r.primary_metric();
    const auto* m = r.ok() ? r.metric(name) : nullptr;
    out << to_string(r.task) << ',' << r.tag_dim << ',' << name << ',';
    if (m) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", m->value);
      out << buf;
    }
    out << ',' << r.seeds.size() << '\n';
  }
  return out.str();
}

}  // namespace srlfuse

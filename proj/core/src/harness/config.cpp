#include "srlfuse/harness/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../json_util.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/hashing.hpp"

#ifndef SRLFUSE_VERSION
#define SRLFUSE_VERSION "unknown"
#endif

namespace srlfuse {

namespace fs = std::filesystem;
using detail::json;

const char* version() { return SRLFUSE_VERSION; }

const char* to_string(Task task) {
  switch (task) {
    case Task::kSrl: return "srl";
    case Task::kEntailment: return "entailment";
    case Task::kReading: return "reading";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  if (text == "srl") return Task::kSrl;
  if (text == "entailment") return Task::kEntailment;
  if (text == "reading") return Task::kReading;
  fail(ErrorKind::kConfig, "unknown task '" + std::string(text) + "' (expected srl, entailment or reading)");
}

SrlConfig RunConfig::srl_model() const {
  SrlConfig c = srl;
  c.contextual = embedding.contextual;
  return c;
}

EsimConfig RunConfig::esim_model() const {
  EsimConfig c = esim;
  c.embedding = embedding;
  c.embedding.use_tags = tag_source != TagSource::kNone;
  return c;
}

ReaderConfig RunConfig::reader_model() const {
  ReaderConfig c = reader;
  c.embedding = embedding;
  c.embedding.use_tags = tag_source != TagSource::kNone;
  return c;
}

RunConfig default_config(Task task, std::string_view preset) {
  RunConfig c;
  c.task = task;
  c.preset = std::string(preset);
  c.tagger_schedule.epochs = 40;
  c.tagger_schedule.batch_size = 4;
  switch (task) {
    case Task::kSrl:
      c.tag_source = TagSource::kNone;
      c.schedule.epochs = 40;
      c.schedule.batch_size = 4;
      break;
    case Task::kEntailment:
      c.schedule.epochs = 15;
      c.schedule.learning_rate = 0.005;
      break;
    case Task::kReading:
      c.embedding.use_char_cnn = true;
      c.schedule.epochs = 30;
      c.schedule.learning_rate = 0.005;
      c.schedule.batch_size = 4;
      break;
  }
  if (preset == "full") {
    c.srl = SrlConfig::full_scale();
    c.embedding.word_dim = 300;
    c.embedding.contextual.dim = 512;
    c.esim.hidden = c.esim.projection = c.esim.classifier = 300;
    c.reader.hidden = 100;
    c.embedding.char_filters = 100;
  } else if (preset != "desk") {
    fail(ErrorKind::kConfig, "unknown preset '" + std::string(preset) + "' (expected desk or full)");
  }
  return c;
}

namespace {

json schedule_to_json(const TrainSchedule& s) {
  return {{"epochs", s.epochs},       {"learning_rate", s.learning_rate}, {"batch_size", s.batch_size},
          {"clip_norm", s.clip_norm}, {"seed", s.seed},                   {"shuffle", s.shuffle}};
}

TrainSchedule schedule_from_json(const json& j) {
  TrainSchedule s;
  s.epochs = j.at("epochs").get<int>();
  s.learning_rate = j.at("learning_rate").get<double>();
  s.batch_size = j.at("batch_size").get<int>();
  s.clip_norm = j.at("clip_norm").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.shuffle = j.at("shuffle").get<bool>();
  return s;
}

json to_json(const RunConfig& c) {
  const auto& e = c.embedding;
  return {
      {"task", to_string(c.task)},
      {"preset", c.preset},
      {"data",
       {{"train", c.data.train},
        {"dev", c.data.dev},
        {"test", c.data.test},
        {"srl_corpus", c.data.srl_corpus},
        {"srl_checkpoint", c.data.srl_checkpoint},
        {"pos_lexicon", c.data.pos_lexicon}}},
      {"embedding",
       {{"word_dim", e.word_dim},
        {"tag_dim", e.tag_dim},
        {"char_dim", e.char_dim},
        {"char_filters", e.char_filters},
        {"char_kernel", e.char_kernel},
        {"use_word", e.use_word},
        {"use_char_cnn", e.use_char_cnn},
        {"use_contextual", e.use_contextual},
        {"word_vectors", e.word_vectors},
        {"contextual", detail::contextual_to_json(e.contextual)}}},
      {"tag_source", to_string(c.tag_source)},
      {"model",
       {{"srl",
         {{"layers", c.srl.layers},
          {"hidden", c.srl.hidden},
          {"predicate_dim", c.srl.predicate_dim},
          {"dropout", c.srl.dropout},
          {"carry_bias", c.srl.carry_bias}}},
        {"esim",
         {{"hidden", c.esim.hidden},
          {"projection", c.esim.projection},
          {"classifier", c.esim.classifier},
          {"dropout", c.esim.dropout}}},
        {"reader",
         {{"hidden", c.reader.hidden},
          {"max_answer_length", c.reader.max_answer_length},
          {"dropout", c.reader.dropout}}}}},
      {"schedule", schedule_to_json(c.schedule)},
      {"tagger_schedule", schedule_to_json(c.tagger_schedule)},
      {"seeds", c.seeds},
      {"output_dir", c.output_dir},
  };
}

RunConfig from_json(const json& j) {
  RunConfig c;
  c.task = parse_task(j.at("task").get<std::string>());
  c.preset = j.at("preset").get<std::string>();
  const auto& d = j.at("data");
  c.data.train = d.at("train").get<std::string>();
  c.data.dev = d.at("dev").get<std::string>();
  c.data.test = d.at("test").get<std::string>();
  c.data.srl_corpus = d.at("srl_corpus").get<std::string>();
  c.data.srl_checkpoint = d.at("srl_checkpoint").get<std::string>();
  c.data.pos_lexicon = d.at("pos_lexicon").get<std::string>();
  const auto& e = j.at("embedding");
  c.embedding.word_dim = e.at("word_dim").get<int>();
  c.embedding.tag_dim = e.at("tag_dim").get<int>();
  c.embedding.char_dim = e.at("char_dim").get<int>();
  c.embedding.char_filters = e.at("char_filters").get<int>();
  c.embedding.char_kernel = e.at("char_kernel").get<int>();
  c.embedding.use_word = e.at("use_word").get<bool>();
  c.embedding.use_char_cnn = e.at("use_char_cnn").get<bool>();
  c.embedding.use_contextual = e.at("use_contextual").get<bool>();
  c.embedding.word_vectors = e.at("word_vectors").get<std::string>();
  c.embedding.contextual = detail::contextual_from_json(e.at("contextual"));
  c.tag_source = parse_tag_source(j.at("tag_source").get<std::string>());
  c.embedding.use_tags = c.tag_source != TagSource::kNone;
  const auto& m = j.at("model");
  const auto& ms = m.at("srl");
  c.srl.layers = ms.at("layers").get<int>();
  c.srl.hidden = ms.at("hidden").get<int>();
  c.srl.predicate_dim = ms.at("predicate_dim").get<int>();
  c.srl.dropout = ms.at("dropout").get<double>();
  c.srl.carry_bias = ms.at("carry_bias").get<double>();
  const auto& me = m.at("esim");
  c.esim.hidden = me.at("hidden").get<int>();
  c.esim.projection = me.at("projection").get<int>();
  c.esim.classifier = me.at("classifier").get<int>();
  c.esim.dropout = me.at("dropout").get<double>();
  const auto& mr = m.at("reader");
  c.reader.hidden = mr.at("hidden").get<int>();
  c.reader.max_answer_length = mr.at("max_answer_length").get<int>();
  c.reader.dropout = mr.at("dropout").get<double>();
  c.schedule = schedule_from_json(j.at("schedule"));
  c.tagger_schedule = schedule_from_json(j.at("tagger_schedule"));
  c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.output_dir = j.at("output_dir").get<std::string>();
  return c;
}

// Overlays `user` onto `base`, rejecting keys that `base` does not have.
void merge_strict(json& base, const json& user, const std::string& prefix) {
  if (!user.is_object()) fail(ErrorKind::kConfig, "config section '" + prefix + "' must be an object");
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = base.find(key);
    if (it == base.end()) fail(ErrorKind::kConfig, "unknown config key '" + path + "'");
    if (it->is_object())
      merge_strict(*it, value, path);
    else
      *it = value;
  }
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

void resolve_paths(RunConfig& c, const std::string& base_dir) {
  for (auto* p : {&c.data.train, &c.data.dev, &c.data.test, &c.data.srl_corpus, &c.data.srl_checkpoint,
                  &c.data.pos_lexicon, &c.embedding.word_vectors, &c.embedding.contextual.path, &c.output_dir})
    *p = resolve_path(*p, base_dir);
}

RunConfig build(const json& user, const std::string& base_dir, const RunConfig* base) {
  if (!user.is_object()) fail(ErrorKind::kConfig, "config must be a JSON object");
  try {
    json merged;
    if (base) {
      merged = to_json(*base);
    } else {
      const Task task = parse_task(user.value("task", std::string{"entailment"}));
      merged = to_json(default_config(task, user.value("preset", std::string{"desk"})));
    }
    merge_strict(merged, user, "");
    RunConfig c = from_json(merged);
    resolve_paths(c, base_dir);
    return c;
  } catch (const json::exception& e) {
    fail(ErrorKind::kConfig, std::string("invalid config value: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& base_dir) {
  json user;
  try {
    user = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::kConfig, std::string("malformed config JSON: ") + e.what());
  }
  return build(user, base_dir, nullptr);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kConfig, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), fs::path(path).parent_path().string());
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

RunConfig apply_overrides(const RunConfig& config, const std::vector<std::string>& assignments,
                          const std::string& base_dir) {
  json user = json::object();
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::kConfig, "override '" + a + "' is not key=value");
    const std::string key = a.substr(0, eq), raw = a.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    json* node = &user;
    std::size_t start = 0;
    for (std::size_t dot; (dot = key.find('.', start)) != std::string::npos; start = dot + 1) {
      node = &(*node)[key.substr(start, dot - start)];
      if (!node->is_object()) *node = json::object();
    }
    (*node)[key.substr(start)] = value;
  }
  if (user.contains("preset") && user["preset"] != config.preset) {
    // A preset switch re-derives defaults before applying the rest.
    RunConfig fresh = default_config(config.task, user["preset"].get<std::string>());
    fresh.data = config.data;
    fresh.seeds = config.seeds;
    fresh.output_dir = config.output_dir;
    fresh.tag_source = config.tag_source;
    user.erase("preset");
    return build(user, base_dir, &fresh);
  }
  return build(user, base_dir, &config);
}

std::string canonical_json(const RunConfig& config, bool pretty) { return to_json(config).dump(pretty ? 2 : -1); }

std::string config_hash(const RunConfig& config) {
  json j = to_json(config);
  j.erase("output_dir");
  return sha256_hex(j.dump()).substr(0, 16);
}

void validate(const RunConfig& c, bool check_paths) {
  auto bad = [](const std::string& msg) { fail(ErrorKind::kConfig, msg); };
  if (c.seeds.empty()) bad("seeds must not be empty");
  if (c.schedule.epochs < 0 || c.tagger_schedule.epochs < 0) bad("epochs must be non-negative");
  if (c.schedule.batch_size < 1 || c.tagger_schedule.batch_size < 1) bad("batch_size must be at least 1");
  if (!(c.schedule.learning_rate > 0.0)) bad("learning_rate must be positive");
  if (c.tag_source != TagSource::kNone && c.embedding.tag_dim < 1) bad("tag_dim must be >= 1 when tags are enabled");
  if (c.embedding.word_dim < 1 && c.embedding.use_word) bad("word_dim must be positive");
  if (c.embedding.contextual.dim < 1) bad("contextual dim must be positive");
  if (c.data.train.empty()) bad("data.train is required");
  if (c.task == Task::kSrl && c.tag_source != TagSource::kNone) bad("the srl task takes no tag source; set tag_source to none");
  if (c.task == Task::kReading && !c.data.test.empty())
    bad("reading has no test split; evaluation uses data.dev only");
  if (c.tag_source == TagSource::kSrl && c.data.srl_corpus.empty() && c.data.srl_checkpoint.empty())
    bad("tag_source srl needs data.srl_corpus or data.srl_checkpoint");
  if (c.srl.layers < 1) bad("model.srl.layers must be >= 1");
  if (c.reader.max_answer_length < 1) bad("model.reader.max_answer_length must be >= 1");
  if (!check_paths) return;
  const std::pair<const char*, const std::string*> files[] = {
      {"data.train", &c.data.train},           {"data.dev", &c.data.dev},
      {"data.test", &c.data.test},             {"data.srl_corpus", &c.data.srl_corpus},
      {"data.srl_checkpoint", &c.data.srl_checkpoint}, {"data.pos_lexicon", &c.data.pos_lexicon},
      {"embedding.word_vectors", &c.embedding.word_vectors}};
  for (const auto& [name, path] : files)
    if (!path->empty() && !fs::exists(*path)) fail(ErrorKind::kIo, std::string(name) + ": no such file " + *path);
}

std::string output_root() {
  if (const char* home = std::getenv("SRLFUSE_HOME"); home && *home) return home;
  return "srlfuse-runs";
}

std::string resolve_output_dir(const RunConfig& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  return (fs::path(output_root()) / "runs").string();
}

}  // namespace srlfuse

#include "srlfuse/harness/experiment.hpp"

#include <filesystem>
#include <ostream>

#include "../json_util.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/hashing.hpp"
#include "srlfuse/nli_data.hpp"
#include "srlfuse/srl_corpus.hpp"
#include "srlfuse/squad_data.hpp"

namespace srlfuse {

namespace fs = std::filesystem;
using detail::json;

const MetricReport* ExperimentResult::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return &m;
  return nullptr;
}

std::string ExperimentResult::primary_metric() const {
  const char* names[] = {"dev.accuracy", "dev.f1", "train.accuracy", "train.f1"};
  for (const char* n : names)
    if (metric(n)) return n;
  return metrics.empty() ? std::string{} : metrics.front().name;
}

namespace {

constexpr const char* kParamsFormat = "srlfuse-params";

void save_params(const std::string& path, const nn::ParameterSet& params, const std::string& hash) {
  detail::write_json_file(path, {{"format", kParamsFormat},
                                 {"version", 1},
                                 {"config_hash", hash},
                                 {"parameters", detail::params_to_json(params)}});
}

void load_params(const std::string& path, nn::ParameterSet& params, const std::string& hash) {
  if (!fs::exists(path)) fail(ErrorKind::kIo, "checkpoint " + path + " not found; run train first");
  const auto j = detail::read_json_file(path);
  detail::check_header(j, kParamsFormat, 1, path);
  if (j.value("config_hash", std::string{}) != hash)
    fail(ErrorKind::kModel, path + " was written for a different configuration");
  detail::params_from_json(params, j.at("parameters"));
}

struct EntailmentData {
  std::vector<EntailmentExample> train, dev, test;
  std::vector<std::string> labels;
};

struct ReadingData {
  std::vector<ReadingExample> train, dev;
  std::vector<std::string> labels;
};

std::string split_of(const std::string& metric) { return metric.substr(0, metric.find('.')); }

}  // namespace

struct ExperimentRunner::Impl {
  RunOptions options;
  std::map<std::string, std::shared_ptr<const std::vector<SrlExample>>> srl_corpora;
  std::map<std::string, std::shared_ptr<const PosProvider>> pos_providers;
  std::map<std::string, std::shared_ptr<const SrlModel>> taggers;
  std::map<std::string, std::shared_ptr<const EntailmentData>> entailment;
  std::map<std::string, std::shared_ptr<const ReadingData>> reading;

  void log(const std::string& msg) const {
    if (options.log) *options.log << msg << '\n' << std::flush;
  }

  std::shared_ptr<const std::vector<SrlExample>> srl_corpus(const std::string& path) {
    if (path.empty()) return std::make_shared<const std::vector<SrlExample>>();
    auto& slot = srl_corpora[path];
    if (!slot) slot = std::make_shared<const std::vector<SrlExample>>(load_srl_corpus(path));
    return slot;
  }

  std::shared_ptr<const PosProvider> pos_provider(const std::string& lexicon) {
    auto& slot = pos_providers[lexicon];
    if (!slot)
      slot = lexicon.empty() ? std::make_shared<const LexiconPosTagger>()
                             : std::make_shared<const LexiconPosTagger>(LexiconPosTagger::from_file(lexicon));
    return slot;
  }

  std::string tagger_key(const RunConfig& c) const {
    if (!c.data.srl_checkpoint.empty()) return "ckpt:" + c.data.srl_checkpoint;
    RunConfig k = default_config(Task::kSrl);
    k.data.train = c.data.srl_corpus;
    k.srl = c.srl;
    k.embedding.contextual = c.embedding.contextual;
    k.schedule = c.tagger_schedule;
    k.seeds = {c.tagger_schedule.seed};
    return config_hash(k);
  }

  std::shared_ptr<const SrlModel> srl_tagger(const RunConfig& c) {
    const auto key = tagger_key(c);
    auto& slot = taggers[key];
    if (slot) return slot;
    if (!c.data.srl_checkpoint.empty()) {
      log("loading SRL tagger " + c.data.srl_checkpoint);
      slot = std::make_shared<const SrlModel>(SrlModel::load(c.data.srl_checkpoint));
      return slot;
    }
    const auto corpus = srl_corpus(c.data.srl_corpus);
    std::vector<std::vector<BioTag>> seqs;
    for (const auto& ex : *corpus) seqs.push_back(ex.tags);
    auto model = std::make_shared<SrlModel>(c.srl_model(), TagAlphabet::from_sequences(seqs), c.tagger_schedule.seed);
    log("training SRL tagger on " + c.data.srl_corpus + " (" + std::to_string(corpus->size()) + " sentences)");
    train_srl(*model, *corpus, c.tagger_schedule);
    slot = model;
    return slot;
  }

  std::unique_ptr<TokenTagger> token_tagger(const RunConfig& c) {
    switch (c.tag_source) {
      case TagSource::kNone: return nullptr;
      case TagSource::kSrl: return std::make_unique<SrlTokenTagger>(srl_tagger(c), pos_provider(c.data.pos_lexicon));
      case TagSource::kPos: return std::make_unique<PosTokenTagger>(pos_provider(c.data.pos_lexicon));
      case TagSource::kNe: return std::make_unique<NeTokenTagger>(std::make_shared<const GazetteerNeTagger>());
    }
    return nullptr;
  }

  std::string data_key(const RunConfig& c) {
    std::string key = std::string(to_string(c.task)) + "|" + c.data.train + "|" + c.data.dev + "|" + c.data.test +
                      "|" + to_string(c.tag_source) + "|" + c.data.pos_lexicon;
    if (c.tag_source == TagSource::kSrl) key += "|" + tagger_key(c);
    return key;
  }

  std::shared_ptr<const EntailmentData> entailment_data(const RunConfig& c) {
    auto& slot = entailment[data_key(c)];
    if (slot) return slot;
    auto d = std::make_shared<EntailmentData>();
    auto load = [&](const std::string& path, std::vector<EntailmentExample>& out) {
      if (path.empty()) return;
      auto ds = load_nli_jsonl(path);
      if (ds.skipped > 0) log(path + ": skipped " + std::to_string(ds.skipped) + " unlabeled records");
      out = std::move(ds.examples);
    };
    load(c.data.train, d->train);
    load(c.data.dev, d->dev);
    load(c.data.test, d->test);
    if (d->train.empty()) fail(ErrorKind::kData, c.data.train + ": no labeled examples");
    if (auto tagger = token_tagger(c)) {
      apply_tags(d->train, *tagger);
      apply_tags(d->dev, *tagger);
      apply_tags(d->test, *tagger);
      d->labels = tagger->labels();
    }
    slot = d;
    return slot;
  }

  std::shared_ptr<const ReadingData> reading_data(const RunConfig& c) {
    auto& slot = reading[data_key(c)];
    if (slot) return slot;
    auto d = std::make_shared<ReadingData>();
    d->train = load_squad_json(c.data.train);
    if (!c.data.dev.empty()) d->dev = load_squad_json(c.data.dev);
    if (d->train.empty()) fail(ErrorKind::kData, c.data.train + ": no questions");
    if (auto tagger = token_tagger(c)) {
      apply_tags(d->train, *tagger);
      apply_tags(d->dev, *tagger);
      d->labels = tagger->labels();
    }
    slot = d;
    return slot;
  }

  std::string checkpoint_path(const RunConfig& c, const std::string& hash, std::uint64_t seed) const {
    const fs::path dir = fs::path(resolve_output_dir(c)) / (std::string(to_string(c.task)) + "-" + hash);
    return (dir / ("seed-" + std::to_string(seed) + ".json")).string();
  }

  void prepare_checkpoint(const std::string& path, bool training) const {
    if (training && options.save_checkpoints) fs::create_directories(fs::path(path).parent_path());
  }

  void run_srl(const RunConfig& c, const std::string& hash, bool training, ExperimentResult& r,
               std::map<std::string, std::size_t>& counts) {
    const auto train = srl_corpus(c.data.train);
    const auto dev = srl_corpus(c.data.dev);
    const auto test = srl_corpus(c.data.test);
    if (train->empty()) fail(ErrorKind::kData, c.data.train + ": no sentences");
    std::vector<std::vector<BioTag>> seqs;
    for (const auto* split : {train.get(), dev.get(), test.get()})
      for (const auto& ex : *split) seqs.push_back(ex.tags);
    const auto alphabet = TagAlphabet::from_sequences(seqs);
    const std::pair<const char*, const std::vector<SrlExample>*> splits[] = {
        {"train", train.get()}, {"dev", dev.get()}, {"test", test.get()}};

    for (auto seed : c.seeds) {
      SeedResult sr{seed, {}, checkpoint_path(c, hash, seed)};
      std::optional<SrlModel> model;
      if (training) {
        model.emplace(c.srl_model(), alphabet, seed);
        TrainSchedule s = c.schedule;
        s.seed = seed;
        train_srl(*model, *train, s);
        prepare_checkpoint(sr.checkpoint, true);
        if (options.save_checkpoints) model->save(sr.checkpoint);
      } else {
        if (!fs::exists(sr.checkpoint)) fail(ErrorKind::kIo, "checkpoint " + sr.checkpoint + " not found");
        model.emplace(SrlModel::load(sr.checkpoint));
      }
      for (const auto& [name, data] : splits) {
        if (data->empty()) continue;
        std::vector<std::vector<BioTag>> gold;
        for (const auto& ex : *data) gold.push_back(ex.tags);
        const auto s = srl_span_f1(predict_srl(*model, *data), gold);
        const std::string n = name;
        sr.metrics[n + ".precision"] = s.precision;
        sr.metrics[n + ".recall"] = s.recall;
        sr.metrics[n + ".f1"] = s.f1;
        counts[n] = data->size();
      }
      report_seed(r, sr);
    }
  }

  void run_entailment(const RunConfig& c, const std::string& hash, bool training, ExperimentResult& r,
                      std::map<std::string, std::size_t>& counts) {
    const auto data = entailment_data(c);
    const auto words = build_word_vocabulary(data->train);
    const auto chars = build_char_vocabulary(data->train);
    const std::pair<const char*, const std::vector<EntailmentExample>*> splits[] = {
        {"train", &data->train}, {"dev", &data->dev}, {"test", &data->test}};
    for (auto seed : c.seeds) {
      SeedResult sr{seed, {}, checkpoint_path(c, hash, seed)};
      const auto cfg = c.esim_model();
      EsimModel model(cfg, words, cfg.embedding.use_char_cnn ? std::optional(chars) : std::nullopt,
                      cfg.embedding.use_tags ? data->labels : std::vector<std::string>{}, seed);
      if (training) {
        TrainSchedule s = c.schedule;
        s.seed = seed;
        train_entailment(model, data->train, s);
        prepare_checkpoint(sr.checkpoint, true);
        if (options.save_checkpoints) save_params(sr.checkpoint, model.params(), hash);
      } else {
        load_params(sr.checkpoint, model.params(), hash);
      }
      for (const auto& [name, split] : splits) {
        if (split->empty()) continue;
        sr.metrics[std::string(name) + ".accuracy"] = entailment_accuracy(model, *split);
        counts[name] = split->size();
      }
      report_seed(r, sr);
    }
  }

  void run_reading(const RunConfig& c, const std::string& hash, bool training, ExperimentResult& r,
                   std::map<std::string, std::size_t>& counts) {
    const auto data = reading_data(c);
    const auto words = build_word_vocabulary(data->train);
    const auto chars = build_char_vocabulary(data->train);
    const std::pair<const char*, const std::vector<ReadingExample>*> splits[] = {{"train", &data->train},
                                                                                 {"dev", &data->dev}};
    for (auto seed : c.seeds) {
      SeedResult sr{seed, {}, checkpoint_path(c, hash, seed)};
      const auto cfg = c.reader_model();
      ReaderModel model(cfg, words, cfg.embedding.use_char_cnn ? std::optional(chars) : std::nullopt,
                        cfg.embedding.use_tags ? data->labels : std::vector<std::string>{}, seed);
      if (training) {
        TrainSchedule s = c.schedule;
        s.seed = seed;
        train_reader(model, data->train, s);
        prepare_checkpoint(sr.checkpoint, true);
        if (options.save_checkpoints) save_params(sr.checkpoint, model.params(), hash);
      } else {
        load_params(sr.checkpoint, model.params(), hash);
      }
      for (const auto& [name, split] : splits) {
        if (split->empty()) continue;
        const auto scores = evaluate_reader(model, *split);
        sr.metrics[std::string(name) + ".em"] = scores.exact_match;
        sr.metrics[std::string(name) + ".f1"] = scores.f1;
        counts[name] = split->size();
      }
      report_seed(r, sr);
    }
  }

  void report_seed(ExperimentResult& r, SeedResult sr) {
    std::string line = "[" + r.label + "] seed " + std::to_string(sr.seed) + ":";
    for (const auto& [k, v] : sr.metrics) line += " " + k + "=" + std::to_string(v);
    log(line);
    if (!options.save_checkpoints) sr.checkpoint.clear();
    r.seeds.push_back(std::move(sr));
  }

  ExperimentResult run(const RunConfig& c, std::string label, bool training) {
    validate(c);
    ExperimentResult r;
    r.task = c.task;
    r.config_hash = config_hash(c);
    r.label = label.empty() ? std::string(to_string(c.task)) + "-" + r.config_hash : std::move(label);
    r.tag_source = c.tag_source;
    r.tag_dim = c.tag_source == TagSource::kNone ? 0 : c.embedding.tag_dim;
    r.contextual = c.task == Task::kSrl || c.embedding.use_contextual;
    r.code_version = version();
    const std::pair<const char*, const std::string*> files[] = {
        {"data.train", &c.data.train},           {"data.dev", &c.data.dev},
        {"data.test", &c.data.test},             {"data.srl_corpus", &c.data.srl_corpus},
        {"data.srl_checkpoint", &c.data.srl_checkpoint}, {"data.pos_lexicon", &c.data.pos_lexicon}};
    for (const auto& [name, path] : files) {
      if (path->empty()) continue;
      if (std::string(name) == "data.srl_corpus" && c.tag_source != TagSource::kSrl) continue;
      if (std::string(name) == "data.srl_checkpoint" && c.tag_source != TagSource::kSrl) continue;
      r.corpus_checksums[name] = file_sha256(*path);
    }

    std::map<std::string, std::size_t> counts;
    switch (c.task) {
      case Task::kSrl: run_srl(c, r.config_hash, training, r, counts); break;
      case Task::kEntailment: run_entailment(c, r.config_hash, training, r, counts); break;
      case Task::kReading: run_reading(c, r.config_hash, training, r, counts); break;
    }
    for (const auto& [name, _] : r.seeds.front().metrics) {
      std::vector<double> values;
      for (const auto& s : r.seeds) values.push_back(s.metrics.at(name));
      r.metrics.push_back(aggregate(name, values, counts[split_of(name)]));
    }
    return r;
  }
};

ExperimentRunner::ExperimentRunner(RunOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
}

ExperimentRunner::~ExperimentRunner() = default;

ExperimentResult ExperimentRunner::train(const RunConfig& config, std::string label) {
  return impl_->run(config, std::move(label), true);
}

ExperimentResult ExperimentRunner::evaluate(const RunConfig& config, std::string label) {
  return impl_->run(config, std::move(label), false);
}

std::vector<ExperimentResult> ExperimentRunner::sweep_dim(const std::vector<RunConfig>& configs,
                                                          const std::vector<int>& dims) {
  std::vector<ExperimentResult> out;
  for (const auto& base : configs) {
    for (int d : dims) {
      RunConfig c = base;
      c.embedding.tag_dim = d;
      const std::string label = std::string(to_string(c.task)) + " d_s=" + std::to_string(d);
      try {
        if (c.tag_source == TagSource::kNone) fail(ErrorKind::kConfig, "dimension sweep needs a tag source");
        out.push_back(train(c, label));
      } catch (const Error& e) {
        ExperimentResult r;
        r.label = label;
        r.task = c.task;
        r.config_hash = config_hash(c);
        r.tag_source = c.tag_source;
        r.tag_dim = d;
        r.contextual = c.embedding.use_contextual;
        r.code_version = version();
        r.error = std::string(to_string(e.kind())) + ": " + e.what();
        impl_->log("[" + label + "] failed: " + r.error);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<std::pair<std::string, RunConfig>> ablation_grid(const RunConfig& config) {
  if (config.task == Task::kSrl) fail(ErrorKind::kConfig, "ablation applies to the entailment and reading tasks");
  if (config.tag_source == TagSource::kNone) fail(ErrorKind::kConfig, "ablation needs a tag source other than none");
  const std::string tag = std::string("-") + to_string(config.tag_source);
  std::vector<std::pair<std::string, RunConfig>> grid;
  for (bool contextual : {true, false}) {
    for (bool tags : {true, false}) {
      RunConfig c = config;
      c.embedding.use_word = true;
      c.embedding.use_contextual = contextual;
      if (!tags) c.tag_source = TagSource::kNone;
      std::string label = contextual && tags ? "full" : "";
      if (!contextual) label += "-contextual";
      if (!tags) label += (label.empty() ? "" : " ") + tag;
      grid.emplace_back(label, std::move(c));
    }
  }
  return grid;
}

std::vector<std::pair<std::string, RunConfig>> tag_source_grid(const RunConfig& config) {
  if (config.task == Task::kSrl) fail(ErrorKind::kConfig, "tag comparison applies to the entailment and reading tasks");
  std::vector<std::pair<std::string, RunConfig>> grid;
  for (auto src : {TagSource::kNone, TagSource::kSrl, TagSource::kPos, TagSource::kNe}) {
    RunConfig c = config;
    c.embedding.use_word = true;
    c.tag_source = src;
    grid.emplace_back(src == TagSource::kNone ? "baseline" : std::string("word + ") + to_string(src), std::move(c));
  }
  return grid;
}

std::vector<ExperimentResult> ExperimentRunner::ablate(const RunConfig& config) {
  std::vector<ExperimentResult> out;
  for (auto& [label, c] : ablation_grid(config)) out.push_back(train(c, label));
  return out;
}

std::vector<ExperimentResult> ExperimentRunner::compare_tag_sources(const RunConfig& config) {
  std::vector<ExperimentResult> out;
  for (auto& [label, c] : tag_source_grid(config)) out.push_back(train(c, label));
  return out;
}

}  // namespace srlfuse

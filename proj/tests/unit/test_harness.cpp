#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "srlfuse/error.hpp"
#include "srlfuse/harness/config.hpp"
#include "srlfuse/harness/experiment.hpp"
#include "srlfuse/harness/report.hpp"

namespace srlfuse {
namespace {

namespace fs = std::filesystem;

std::string toy(const std::string& name) { return std::string(SRLFUSE_TEST_DATA_DIR) + "/toy/" + name; }

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("srlfuse_harness_" + name);
  fs::remove_all(p);
  return p;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::kInvalidArgument;
}

// Tiny entailment run: POS tags, one seed, two epochs.
RunConfig quick_entailment(const fs::path& out) {
  RunConfig c = default_config(Task::kEntailment);
  c.data.train = toy("nli_dev.jsonl");
  c.data.dev = toy("nli_test.jsonl");
  c.tag_source = TagSource::kPos;
  c.esim.hidden = c.esim.projection = c.esim.classifier = 6;
  c.embedding.word_dim = 8;
  c.embedding.contextual.dim = 8;
  c.schedule.epochs = 2;
  c.seeds = {7};
  c.output_dir = out.string();
  return c;
}

TEST(Config, Defaults) {
  const auto e = default_config(Task::kEntailment);
  EXPECT_EQ(e.tag_source, TagSource::kSrl);
  EXPECT_EQ(e.embedding.tag_dim, 5);
  EXPECT_EQ(e.seeds, (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(e.preset, "desk");
  const auto r = default_config(Task::kReading);
  EXPECT_TRUE(r.embedding.use_char_cnn);
  EXPECT_EQ(r.reader.max_answer_length, 17);
  EXPECT_EQ(default_config(Task::kSrl).tag_source, TagSource::kNone);
  const auto full = default_config(Task::kSrl, "full");
  EXPECT_EQ(full.srl.layers, 8);
  EXPECT_EQ(full.srl.hidden, 300);
  EXPECT_EQ(kind_of([] { default_config(Task::kSrl, "huge"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { parse_task("qa"); }), ErrorKind::kConfig);
}

TEST(Config, ParseMergesDefaultsAndResolvesPaths) {
  const auto c = parse_config(R"({"task": "reading", "data": {"train": "t.json"}, "embedding": {"tag_dim": 20},
                                  "schedule": {"epochs": 3}, "seeds": [4]})",
                              "/base");
  EXPECT_EQ(c.task, Task::kReading);
  EXPECT_EQ(c.data.train, "/base/t.json");
  EXPECT_EQ(c.embedding.tag_dim, 20);
  EXPECT_EQ(c.schedule.epochs, 3);
  EXPECT_EQ(c.schedule.batch_size, 4);
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{4});
  EXPECT_TRUE(c.embedding.use_char_cnn);
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  EXPECT_EQ(kind_of([] { parse_config(R"({"embeding": {}})"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { parse_config(R"({"embedding": {"tag_dimm": 3}})"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { parse_config(R"({"embedding": {"tag_dim": "big"}})"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { parse_config(R"({"tag_source": "wordnet"})"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { parse_config("{"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { parse_config("[]"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { load_config("/nonexistent/config.json"); }), ErrorKind::kConfig);
}

TEST(Config, OverridesAndRoundTrip) {
  const auto base = default_config(Task::kEntailment);
  const auto c = apply_overrides(base, {"embedding.tag_dim=50", "tag_source=ne", "data.train=x.jsonl", "seeds=[1,2]"});
  EXPECT_EQ(c.embedding.tag_dim, 50);
  EXPECT_EQ(c.tag_source, TagSource::kNe);
  EXPECT_EQ(c.data.train, "x.jsonl");
  EXPECT_EQ(c.seeds.size(), 2u);
  EXPECT_EQ(kind_of([&] { apply_overrides(base, {"nonsense"}); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([&] { apply_overrides(base, {"model.esim.depth=3"}); }), ErrorKind::kConfig);
  EXPECT_EQ(apply_overrides(base, {"preset=full"}).esim.hidden, 300);
  EXPECT_EQ(canonical_json(parse_config(canonical_json(c))), canonical_json(c));
}

TEST(Config, HashCoversSettingsButNotOutputDir) {
  auto a = default_config(Task::kEntailment);
  auto b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.output_dir = "/elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.embedding.tag_dim = 6;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, Validation) {
  auto ok = default_config(Task::kEntailment);
  ok.data.train = toy("nli_train.jsonl");
  ok.data.srl_corpus = toy("srl_full.conll");
  EXPECT_NO_THROW(validate(ok));
  auto c = ok;
  c.seeds.clear();
  EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::kConfig);
  c = ok;
  c.embedding.tag_dim = 0;
  EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::kConfig);
  c.tag_source = TagSource::kNone;
  EXPECT_NO_THROW(validate(c));
  c = ok;
  c.data.srl_corpus.clear();
  EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::kConfig);
  c = ok;
  c.data.train = "/nonexistent.jsonl";
  EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::kIo);
  EXPECT_NO_THROW(validate(c, false));
  auto r = default_config(Task::kReading);
  r.data.train = toy("squad_train.json");
  r.tag_source = TagSource::kNone;
  r.data.test = toy("squad_dev.json");
  EXPECT_EQ(kind_of([&] { validate(r); }), ErrorKind::kConfig);
  auto s = default_config(Task::kSrl);
  s.data.train = toy("srl_basic.conll");
  s.tag_source = TagSource::kPos;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kConfig);
}

TEST(Grids, AblationCells) {
  auto c = default_config(Task::kEntailment);
  c.embedding.use_word = false;
  const auto grid = ablation_grid(c);
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0].first, "full");
  EXPECT_EQ(grid[1].first, "-srl");
  EXPECT_EQ(grid[2].first, "-contextual");
  EXPECT_EQ(grid[3].first, "-contextual -srl");
  std::set<std::string> hashes;
  for (const auto& [label, cfg] : grid) {
    EXPECT_TRUE(cfg.embedding.use_word) << label;
    hashes.insert(config_hash(cfg));
  }
  EXPECT_EQ(hashes.size(), 4u);
  EXPECT_FALSE(grid[3].second.embedding.use_contextual);
  EXPECT_EQ(grid[3].second.tag_source, TagSource::kNone);
  c.tag_source = TagSource::kNone;
  EXPECT_THROW(ablation_grid(c), Error);
  EXPECT_THROW(ablation_grid(default_config(Task::kSrl)), Error);
}

TEST(Grids, TagSourceCells) {
  const auto grid = tag_source_grid(default_config(Task::kReading));
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0].first, "baseline");
  EXPECT_EQ(grid[0].second.tag_source, TagSource::kNone);
  EXPECT_EQ(grid[1].first, "word + srl");
  EXPECT_EQ(grid[2].first, "word + pos");
  EXPECT_EQ(grid[3].first, "word + ne");
}

TEST(Experiment, SameSeedSameNumbers) {
  const auto out = scratch_dir("determinism");
  const auto cfg = quick_entailment(out);
  ExperimentRunner first;
  const auto a = first.train(cfg);
  ExperimentRunner second;
  const auto b = second.train(cfg);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.config_hash, b.config_hash);
  ASSERT_EQ(a.seeds.size(), 1u);
  EXPECT_EQ(a.seeds[0].seed, 7u);
  EXPECT_EQ(a.seeds[0].metrics, b.seeds[0].metrics);
  EXPECT_TRUE(a.seeds[0].metrics.count("train.accuracy"));
  EXPECT_TRUE(a.seeds[0].metrics.count("dev.accuracy"));
  EXPECT_EQ(a.primary_metric(), "dev.accuracy");
  EXPECT_EQ(a.corpus_checksums.size(), 2u);
  EXPECT_EQ(a.tag_dim, 5);
  EXPECT_TRUE(fs::exists(a.seeds[0].checkpoint));

  const auto again = first.evaluate(cfg);
  EXPECT_EQ(again.seeds[0].metrics, a.seeds[0].metrics);
  fs::remove_all(out);
}

TEST(Experiment, EvaluateWithoutCheckpointFails) {
  const auto out = scratch_dir("missing");
  ExperimentRunner runner;
  EXPECT_THROW(runner.evaluate(quick_entailment(out)), Error);
}

TEST(Experiment, SweepRecordsEveryCell) {
  const auto out = scratch_dir("sweep");
  auto cfg = quick_entailment(out);
  cfg.schedule.epochs = 1;
  ExperimentRunner runner(RunOptions{false, nullptr});
  auto broken = cfg;
  broken.tag_source = TagSource::kNone;
  const auto cells = runner.sweep_dim({cfg, broken}, {1, 3});
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_TRUE(cells[0].ok());
  EXPECT_EQ(cells[0].tag_dim, 1);
  EXPECT_EQ(cells[1].tag_dim, 3);
  EXPECT_EQ(cells[0].label, "entailment d_s=1");
  EXPECT_FALSE(cells[2].ok());
  EXPECT_TRUE(cells[0].seeds[0].checkpoint.empty());
  const auto csv = sweep_csv(cells);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "task,dim,metric,value,seeds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto table = sweep_table(cells);
  EXPECT_NE(table.find("dim"), std::string::npos);
  const auto jsonl = results_jsonl(cells);
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 4);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Experiment, SingleDimensionSweepEqualsTrain) {
  const auto out = scratch_dir("single");
  auto cfg = quick_entailment(out);
  cfg.schedule.epochs = 1;
  ExperimentRunner runner(RunOptions{false, nullptr});
  const auto cells = runner.sweep_dim({cfg}, {5});
  ASSERT_EQ(cells.size(), 1u);
  const auto trained = ExperimentRunner(RunOptions{false, nullptr}).train(cfg);
  EXPECT_EQ(cells[0].config_hash, trained.config_hash);
  EXPECT_EQ(cells[0].seeds[0].metrics, trained.seeds[0].metrics);
  const auto table = sweep_table(cells);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
}

TEST(Report, Formatting) {
  EXPECT_EQ(format_percent(0.8912), "89.12");
  EXPECT_EQ(format_percent(1.0), "100.00");
  const auto t = render_table({"Model", "Dev"}, {{"full", "89.12"}, {"-contextual", "7.50"}});
  EXPECT_EQ(t,
            "Model          Dev\n"
            "------------------\n"
            "full         89.12\n"
            "-contextual   7.50\n");
  ExperimentResult r;
  r.label = "full";
  const std::vector<double> dev{0.5, 0.7};
  r.metrics.push_back(aggregate("dev.accuracy", dev, 30));
  const auto row = dev_test_table({r});
  EXPECT_NE(row.find("60.00"), std::string::npos);
  const auto js = result_json(r);
  EXPECT_EQ(js.front(), '{');
  EXPECT_NE(js.back(), '\n');
  EXPECT_LT(js.find("\"code_version\""), js.find("\"label\""));
}

}  // namespace
}  // namespace srlfuse

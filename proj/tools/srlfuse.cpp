#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "srlfuse/decoding.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/harness/config.hpp"
#include "srlfuse/harness/experiment.hpp"
#include "srlfuse/harness/report.hpp"
#include "srlfuse/predicate.hpp"
#include "srlfuse/srl.hpp"
#include "srlfuse/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace srlfuse;

namespace {

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kDataError = 3, kRuntime = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidArgument: return kUsage;
    case ErrorKind::kData:
    case ErrorKind::kIo: return kDataError;
    default: return kRuntime;
  }
}

// Flags shared by the experiment subcommands; they override the config file.
struct RunFlags {
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  std::optional<int> epochs;
  std::string tag_source;
  std::string output;
  bool quiet = false;

  void attach(CLI::App* cmd, bool many_configs) {
    auto* opt = cmd->add_option("-c,--config", configs, "JSON run configuration")->required();
    if (!many_configs) opt->expected(1);
    cmd->add_option("-s,--set", overrides, "override a config value, e.g. embedding.tag_dim=10 (repeatable)");
    cmd->add_option("--seeds", seeds, "seed list, e.g. --seeds 1,2,3")->delimiter(',');
    cmd->add_option("--epochs", epochs, "training epochs for the task model");
    cmd->add_option("--tag-source", tag_source, "srl, pos, ne or none");
    cmd->add_option("-o,--output", output, "output directory (default: config output_dir or $SRLFUSE_HOME/runs)");
    cmd->add_flag("-q,--quiet", quiet, "no progress log on stderr");
  }

  RunConfig load(const std::string& path) const {
    RunConfig c = load_config(path);
    if (!overrides.empty()) c = apply_overrides(c, overrides);
    if (!seeds.empty()) c.seeds = seeds;
    if (epochs) c.schedule.epochs = *epochs;
    if (!tag_source.empty()) c.tag_source = parse_tag_source(tag_source);
    if (!output.empty()) c.output_dir = output;
    validate(c);
    return c;
  }

  RunOptions options() const { return {true, quiet ? nullptr : &std::cerr}; }
};

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
}

// table.txt, results.jsonl and optionally plot.csv under `dir`.
void write_outputs(const fs::path& dir, const std::string& table, const std::vector<ExperimentResult>& results,
                   const std::string& csv = {}) {
  write_file(dir / "table.txt", table);
  write_file(dir / "results.jsonl", results_jsonl(results));
  if (!csv.empty()) write_file(dir / "plot.csv", csv);
  std::cout << table << "wrote " << (dir / "table.txt").string() << '\n';
}

int report_failures(const std::vector<ExperimentResult>& results) {
  int failed = 0;
  for (const auto& r : results)
    if (!r.ok()) {
      std::cerr << "error: " << r.label << ": " << r.error << '\n';
      ++failed;
    }
  return failed == 0 ? kOk : kRuntime;
}

int cmd_train(const RunFlags& flags, bool training) {
  const RunConfig c = flags.load(flags.configs.front());
  ExperimentRunner runner(flags.options());
  const auto r = training ? runner.train(c) : runner.evaluate(c);
  const fs::path dir = fs::path(resolve_output_dir(c)) / (std::string(to_string(c.task)) + "-" + r.config_hash);
  write_outputs(dir, metrics_table({r}), {r});
  return kOk;
}

int cmd_sweep(const RunFlags& flags, const std::vector<int>& dims) {
  std::vector<RunConfig> configs;
  for (const auto& path : flags.configs) configs.push_back(flags.load(path));
  for (int d : dims)
    if (d < 1) fail(ErrorKind::kConfig, "sweep dimensions must be >= 1");
  ExperimentRunner runner(flags.options());
  const auto results = runner.sweep_dim(configs, dims);
  write_outputs(resolve_output_dir(configs.front()), sweep_table(results), results, sweep_csv(results));
  return report_failures(results);
}

int cmd_ablate(const RunFlags& flags, const std::string& variant) {
  const RunConfig c = flags.load(flags.configs.front());
  ExperimentRunner runner(flags.options());
  const auto results = variant == "tag-source" ? runner.compare_tag_sources(c) : runner.ablate(c);
  write_outputs(resolve_output_dir(c), dev_test_table(results), results);
  return kOk;
}

std::unique_ptr<PosProvider> pos_provider(const std::string& lexicon) {
  if (lexicon.empty()) return std::make_unique<LexiconPosTagger>();
  return std::make_unique<LexiconPosTagger>(LexiconPosTagger::from_file(lexicon));
}

std::string join_tags(const std::vector<BioTag>& tags) { return join(tag_strings(tags)); }

// One input line per sentence. A line that fails is reported on stderr and
// left blank in the output so line numbers stay aligned.
int cmd_annotate(const std::string& input, const std::string& output, const std::string& checkpoint,
                 const std::string& format, const std::string& lexicon) {
  const SrlModel model = SrlModel::load(checkpoint);
  const auto pos = pos_provider(lexicon);
  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) fail(ErrorKind::kIo, "cannot open " + input);
    in = &file;
  }
  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!output.empty()) {
    out_file.open(output);
    if (!out_file) fail(ErrorKind::kIo, "cannot write " + output);
    out = &out_file;
  }
  const bool conll = format == "conll";
  std::string line;
  std::size_t lineno = 0, failures = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      const auto words = tokenize_words(line);
      if (words.empty()) {
        if (!conll) *out << '\n';
        continue;
      }
      const auto a = annotate(std::span<const std::string>(words), model, *pos);
      if (conll) {
        *out << "# " << a.provenance() << '\n';
        const auto labels = tag_strings(a.labels);
        for (std::size_t i = 0; i < words.size(); ++i)
          *out << words[i] << '\t' << (a.selected == i ? 1 : 0) << '\t' << labels[i] << '\n';
        *out << '\n';
      } else {
        *out << join(words) << '\t' << join_tags(a.labels) << '\t' << a.provenance() << '\n';
      }
    } catch (const Error& e) {
      ++failures;
      std::cerr << input << ":" << lineno << ": " << e.what() << '\n';
      if (!conll) *out << '\n';
    }
  }
  return failures == 0 ? kOk : kDataError;
}

int cmd_decode(const std::string& sentence, const std::string& checkpoint, std::optional<std::size_t> predicate,
               const std::string& lexicon) {
  const SrlModel model = SrlModel::load(checkpoint);
  const auto words = tokenize_words(sentence);
  if (words.empty()) fail(ErrorKind::kInvalidArgument, "empty sentence");
  std::vector<std::size_t> predicates;
  if (predicate) {
    if (*predicate >= words.size()) fail(ErrorKind::kInvalidArgument, "predicate index outside the sentence");
    predicates.push_back(*predicate);
  } else {
    predicates = identify_predicates(make_tokens(words), *pos_provider(lexicon)).indices();
    if (predicates.empty()) std::cout << "no predicate found\n";
  }
  for (auto p : predicates) {
    const auto tags = model.predict(words, p);
    std::cout << "predicate " << p << " (" << words[p] << ")\n";
    std::vector<std::vector<std::string>> rows;
    const auto names = tag_strings(tags);
    for (std::size_t i = 0; i < words.size(); ++i) rows.push_back({std::to_string(i), words[i], names[i]});
    std::cout << render_table({"i", "token", "tag"}, rows);
    for (const auto& s : decode_spans(tags).spans) {
      std::vector<std::string> span_words(words.begin() + s.start, words.begin() + s.end + 1);
      std::cout << "  [" << s.role << ": " << join(span_words) << "]\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srlfuse: semantic-role embeddings for entailment and reading comprehension"};
  app.set_version_flag("--version", std::string("srlfuse ") + version());
  app.require_subcommand(1);

  RunFlags train_flags, eval_flags, sweep_flags, ablate_flags;
  auto* train = app.add_subcommand("train", "train every seed and report the averaged metrics");
  train_flags.attach(train, false);
  auto* eval = app.add_subcommand("eval", "re-evaluate checkpoints written by train");
  eval_flags.attach(eval, false);

  auto* sweep = app.add_subcommand("sweep-dim", "train once per tag embedding dimension");
  sweep_flags.attach(sweep, true);
  std::vector<int> dims = default_sweep_dims();
  sweep->add_option("--dims", dims, "dimensions to try")->delimiter(',')->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "contextual x tag-embedding ablation grid");
  ablate_flags.attach(ablate, false);
  std::string variant = "contextual";
  ablate->add_option("--variant", variant, "contextual (2x2 grid) or tag-source (baseline, srl, pos, ne)")
      ->check(CLI::IsMember({"contextual", "tag-source"}))
      ->capture_default_str();

  auto* annotate_cmd = app.add_subcommand("annotate", "label each input line with the SRL tagger");
  std::string input, output, checkpoint, format = "tsv", lexicon;
  annotate_cmd->add_option("input", input, "text file, one sentence per line ('-' for stdin)")->required();
  annotate_cmd->add_option("--checkpoint", checkpoint, "SRL tagger checkpoint")->required();
  annotate_cmd->add_option("-o,--output", output, "output file (default stdout)");
  annotate_cmd->add_option("--format", format, "tsv or conll")
      ->check(CLI::IsMember({"tsv", "conll"}))
      ->capture_default_str();
  annotate_cmd->add_option("--pos-lexicon", lexicon, "extra 'word TAG' lexicon for predicate detection");

  auto* decode = app.add_subcommand("decode", "print the constrained decode of one sentence");
  std::string sentence;
  std::optional<std::size_t> predicate;
  decode->add_option("sentence", sentence, "sentence text")->required();
  decode->add_option("--checkpoint", checkpoint, "SRL tagger checkpoint")->required();
  decode->add_option("--predicate", predicate, "token index of the predicate (default: every detected verb)");
  decode->add_option("--pos-lexicon", lexicon, "extra 'word TAG' lexicon for predicate detection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return cmd_train(train_flags, true);
    if (*eval) return cmd_train(eval_flags, false);
    if (*sweep) return cmd_sweep(sweep_flags, dims);
    if (*ablate) return cmd_ablate(ablate_flags, variant);
    if (*annotate_cmd) return cmd_annotate(input, output, checkpoint, format, lexicon);
    if (*decode) return cmd_decode(sentence, checkpoint, predicate, lexicon);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}

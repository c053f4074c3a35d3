#include <random>

#include <benchmark/benchmark.h>

#include "srlfuse/decoding.hpp"
#include "srlfuse/esim.hpp"
#include "srlfuse/metrics.hpp"
#include "srlfuse/reader.hpp"
#include "srlfuse/srl.hpp"

namespace {

using namespace srlfuse;

std::vector<std::string> sentence(std::size_t n) {
  static const std::vector<std::string> pool{"the", "man", "sold", "a", "book", "to", "Sherry", "last", "week", "."};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[i % pool.size()]);
  return out;
}

void BM_Viterbi(benchmark::State& state) {
  const TagAlphabet alphabet({"ARG0", "ARG1", "ARG2", "AM-TMP", "V", "ARGM-LOC"});
  const auto mask = transition_mask(alphabet);
  const auto start = start_mask(alphabet);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  EmissionMatrix e(state.range(0), static_cast<Eigen::Index>(alphabet.size()));
  for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = n(rng);
  for (auto _ : state) benchmark::DoNotOptimize(viterbi_decode(e, mask, start));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Viterbi)->Arg(10)->Arg(40)->Arg(160);

void BM_SrlForward(benchmark::State& state) {
  SrlConfig c = SrlConfig::desk();
  c.layers = static_cast<int>(state.range(0));
  const SrlModel model(c, TagAlphabet({"ARG0", "ARG1", "ARG2", "V"}), 1);
  const auto words = sentence(20);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(words, 2));
}
BENCHMARK(BM_SrlForward)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SrlTrainStep(benchmark::State& state) {
  SrlModel model(SrlConfig::desk(), TagAlphabet({"ARG0", "ARG1", "V"}), 1);
  SrlExample ex{sentence(12), 2, std::vector<BioTag>(12, BioTag::outside())};
  ex.tags[2] = BioTag::begin("V");
  for (auto _ : state) {
    nn::Graph g(true);
    g.backward(model.loss(g, ex));
    model.params().zero_grad();
  }
}
BENCHMARK(BM_SrlTrainStep)->Unit(benchmark::kMillisecond);

void BM_EsimForward(benchmark::State& state) {
  EsimConfig c;
  c.embedding.use_tags = false;
  EntailmentExample ex;
  ex.premise = sentence(static_cast<std::size_t>(state.range(0)));
  ex.hypothesis = sentence(static_cast<std::size_t>(state.range(0)) / 2 + 1);
  const EsimModel model(c, Vocabulary(ex.premise, "<unk>"), std::nullopt, {}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(model.probabilities(ex));
}
BENCHMARK(BM_EsimForward)->Arg(10)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_ReaderForward(benchmark::State& state) {
  ReaderConfig c;
  c.embedding.use_tags = false;
  c.embedding.use_char_cnn = false;
  std::string context;
  for (const auto& w : sentence(static_cast<std::size_t>(state.range(0)))) context += w + " ";
  const auto ex = make_reading_example("b", context, "who sold a book ?", 0, 0);
  const ReaderModel model(c, Vocabulary(ex.document_words(), "<unk>"), std::nullopt, {}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_span(ex));
}
BENCHMARK(BM_ReaderForward)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_TokenF1(benchmark::State& state) {
  const std::vector<std::string> golds{"heat and pressure", "the heat", "pressure that changes the rock"};
  for (auto _ : state) benchmark::DoNotOptimize(token_f1("Heat, and the pressure!", golds));
}
BENCHMARK(BM_TokenF1);

}  // namespace

BENCHMARK_MAIN();

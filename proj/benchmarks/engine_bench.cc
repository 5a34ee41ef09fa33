#include <string>

#include <benchmark/benchmark.h>

#include "conspec/model.h"
#include "conspec/network.h"
#include "conspec/parser.h"
#include "conspec/realizer.h"
#include "conspec/similarity.h"
#include "conspec/treeline.h"

namespace {

std::string Data(const char *rel) {
  return std::string(CONSPEC_DATA_DIR) + "/" + rel;
}

const conspec::Model &English() {
  static const conspec::Model m = conspec::LoadModel(Data("models/english.tl"));
  return m;
}

void BM_Realize(benchmark::State &state) {
  conspec::Network n = conspec::ParseNetwork(
      "trust > [{past}, {agent} > he, {theme} > John]");
  for (auto _ : state) {
    benchmark::DoNotOptimize(conspec::Realize(English(), n));
  }
}
BENCHMARK(BM_Realize);

void BM_Parse(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(conspec::ParseText(English(), "He trusted John."));
  }
}
BENCHMARK(BM_Parse);

void BM_NetworkSim(benchmark::State &state) {
  conspec::Lexicon lex = conspec::Lexicon::WithDefaults();
  lex.Define(conspec::Concept::Stem("trust"), conspec::ParseNetwork("{verb}"));
  lex.Define(conspec::Concept::Stem("jump"), conspec::ParseNetwork("{verb}"));
  conspec::Network a = conspec::Canonicalize(conspec::ParseNetwork(
      "trust > [{past}, {agent} > he, {theme} > John, quickly, again]"));
  conspec::Network b = conspec::Canonicalize(conspec::ParseNetwork(
      "jump > [{past}, {agent} > he, {theme} > John, quickly, again]"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(conspec::NetworkSim(lex, a, b));
  }
}
BENCHMARK(BM_NetworkSim);

void BM_Canonicalize(benchmark::State &state) {
  conspec::Network n = conspec::ParseNetwork(
      "bark > [happily, {past}, {agent} > dog > (eat > [{theme} > (butter > "
      "peanut) > the, >>{agent}, {past}])]");
  for (auto _ : state) {
    benchmark::DoNotOptimize(conspec::Canonicalize(n));
  }
}
BENCHMARK(BM_Canonicalize);

}  // namespace
BENCHMARK_MAIN();

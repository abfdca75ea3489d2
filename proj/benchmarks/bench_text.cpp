#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "xenorisk/lexicon/lexicon.hpp"
#include "xenorisk/lexicon/tokenizer.hpp"

using namespace xenorisk;

namespace {

const std::filesystem::path kData = XENORISK_BENCH_DATA_DIR;

std::vector<std::string> sample_texts(std::size_t n) {
  static const char* words[] = {"the",  "virus", "spreading", "#stayhome", "china", "masks", "news",
                                "https://example.com/a?b=1", "@someone", "kung", "flu", "tonight", "é"};
  std::mt19937 rng(1);
  std::vector<std::string> out(n);
  for (auto& t : out) {
    for (int w = 0; w < 20; ++w) t += std::string(words[rng() % std::size(words)]) + " ";
  }
  return out;
}

void BM_Tokenize(benchmark::State& state) {
  const auto texts = sample_texts(1000);
  std::size_t bytes = 0;
  for (const auto& t : texts) bytes += t.size();
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(lexicon::tokenize(t));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_Tokenize);

void BM_FindSlurs(benchmark::State& state) {
  const auto texts = sample_texts(1000);
  const auto slurs = lexicon::load_lexicon(kData / "slurs.lex");
  std::vector<lexicon::TokenStream> streams;
  for (const auto& t : texts) streams.push_back(lexicon::tokenize(t));
  for (auto _ : state) {
    for (const auto& s : streams) benchmark::DoNotOptimize(lexicon::find_slurs(s, slurs));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * streams.size()));
}
BENCHMARK(BM_FindSlurs);

void BM_MatchCategories(benchmark::State& state) {
  const auto texts = sample_texts(1000);
  const auto lex = lexicon::load_lexicon(kData / (state.range(0) ? "liwc_open.lex" : "nela.lex"));
  std::vector<lexicon::TokenStream> streams;
  for (const auto& t : texts) streams.push_back(lexicon::tokenize(t));
  for (auto _ : state) {
    for (const auto& s : streams) benchmark::DoNotOptimize(lexicon::match_categories(s, lex));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * streams.size()));
}
BENCHMARK(BM_MatchCategories)->Arg(0)->Arg(1);

}  // namespace

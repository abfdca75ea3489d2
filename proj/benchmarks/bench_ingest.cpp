#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "xenorisk/corpus/corpus.hpp"

using namespace xenorisk;

namespace {

std::string jsonl(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += R"({"tweet_id":")" + std::to_string(i) + R"(","user_id":")" + std::to_string(i % 500) +
         R"(","timestamp":"2020-02-0)" + std::to_string(1 + i % 9) +
         R"(T12:00:00Z","text":"stay home and read https://news.example/x #covid @friend","retweet_count":3,"like_count":7,"urls":["https://news.example/x"]})" + "\n";
  }
  return s;
}

void BM_IngestTweets(benchmark::State& state) {
  const std::string data = jsonl(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    std::istringstream in(data);
    corpus::IngestReport report;
    benchmark::DoNotOptimize(corpus::ingest_tweets(in, report));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_IngestTweets)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

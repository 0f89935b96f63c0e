// Serial reference against the OpenMP batch kernel over the degree 3 corpus.
#include <benchmark/benchmark.h>

#include "../tests/support.hpp"

using namespace fontaine;
using namespace fontaine::testing;

namespace {

const Corpus& deg3() {
  static const auto c = corpus({"data/corpus/deg3.jsonl"});
  return *c;
}

void BM_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(classify_serial(deg3().items, table(), Caps{}));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(deg3().items.size()));
}

void BM_batch(benchmark::State& st) {
  const int threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(classify_batch(deg3().items, table(), Caps{}, threads));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(deg3().items.size()));
}

}  // namespace

BENCHMARK(BM_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_batch)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();

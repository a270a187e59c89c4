#include <benchmark/benchmark.h>

#include "prodcrit/product.hpp"

namespace {

using namespace prodcrit;

// Qubit count from the range argument; everything is a product of 2-qubit blocks
// plus one random 3-level system, so the finest search has real work to do.
DensityMatrix block_state(int pairs) {
  std::vector<Dims> groups(static_cast<std::size_t>(pairs), Dims{2, 2});
  groups.push_back({3});
  return gen_random_product(groups, 17);
}

void BM_Realign(benchmark::State& state) {
  const Index d = state.range(0);
  const ComplexMatrix z = gen_random_density({d, d}, 1).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(realign(z, d, d));
}
BENCHMARK(BM_Realign)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_SvdOfRealigned(benchmark::State& state) {
  const Index d = state.range(0);
  const ComplexMatrix r = realign(gen_random_density({d, d}, 2).matrix(), d, d);
  for (auto _ : state) benchmark::DoNotOptimize(svd(r));
}
BENCHMARK(BM_SvdOfRealigned)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_IsProduct(benchmark::State& state) {
  const Index d = state.range(0);
  const DensityMatrix rho = gen_random_product({{d}, {d}}, 3);
  const Partition cut = Partition::finest(2);
  for (auto _ : state) benchmark::DoNotOptimize(is_product_bipartition(rho, cut));
}
BENCHMARK(BM_IsProduct)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_FinestPartition(benchmark::State& state) {
  const DensityMatrix rho = block_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(finest_product_partition(rho));
}
BENCHMARK(BM_FinestPartition)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

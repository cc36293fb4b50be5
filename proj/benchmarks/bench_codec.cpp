#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "takum/arith.hpp"
#include "takum/codec.hpp"

using namespace takum;

namespace {

std::vector<TakumBits> random_patterns(unsigned n, std::size_t count) {
  std::mt19937_64 gen(42);
  std::vector<TakumBits> out;
  while (out.size() < count) {
    TakumBits b = TakumBits::make(n, gen() & width_mask(n));
    if (!b.is_nar() && !b.is_zero()) out.push_back(b);
  }
  return out;
}

void BM_Decode(benchmark::State& state) {
  auto xs = random_patterns(static_cast<unsigned>(state.range(0)), 1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decode(xs[i++ & 1023]));
}
BENCHMARK(BM_Decode)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_RoundRational(benchmark::State& state) {
  std::mt19937_64 gen(7);
  std::vector<BigReal> xs;
  for (int i = 0; i < 256; ++i) xs.emplace_back(mpq_class(static_cast<long>(gen() >> 40) + 1, 1 + static_cast<long>(gen() >> 44)));
  unsigned n = static_cast<unsigned>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(round(xs[i++ & 255], n));
}
BENCHMARK(BM_RoundRational)->Arg(16)->Arg(32)->Arg(64);

void BM_Mul(benchmark::State& state) {
  auto xs = random_patterns(static_cast<unsigned>(state.range(0)), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mul(xs[i & 1023], xs[(i * 7 + 3) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Mul)->Arg(16)->Arg(32);

void BM_Add(benchmark::State& state) {
  auto xs = random_patterns(static_cast<unsigned>(state.range(0)), 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(add(xs[i & 1023], xs[(i * 7 + 3) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Add)->Arg(16)->Arg(32);

}  // namespace
BENCHMARK_MAIN();

// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "tilemeasure/automaton.hpp"
#include "tilemeasure/oracle.hpp"

using namespace tilemeasure;

namespace {

struct System {
	IntMatrix a;
	DigitSet d;
};

System system_for(int which)
{
	switch (which) {
	case 0:
		return {IntMatrix{{3}}, DigitSet({{0}, {1}, {5}, {6}})};
	case 1:
		return {IntMatrix{{1, 1}, {-1, 1}}, DigitSet({{0, 0}, {1, 0}})};
	default:
		return {IntMatrix{{0, -2}, {1, -1}}, DigitSet({{-7, 6}, {1, -6}, {7, -5}})};
	}
}

const char* label(int which)
{
	static const char* names[] = {"gapped", "twin_dragon", "wide"};
	return names[which];
}

void BM_gamma(benchmark::State& state)
{
	auto s = system_for(static_cast<int>(state.range(0)));
	auto system = extend_digits(s.a, s.d);
	auto bound = contraction_bound(s.a, system.k);
	for (auto _ : state)
		benchmark::DoNotOptimize(build_gamma(s.a, system.k, bound));
	state.SetLabel(label(static_cast<int>(state.range(0))));
}

void BM_gamma_serial(benchmark::State& state)
{
	auto s = system_for(static_cast<int>(state.range(0)));
	auto system = extend_digits(s.a, s.d);
	auto bound = contraction_bound(s.a, system.k);
	for (auto _ : state)
		benchmark::DoNotOptimize(build_gamma_serial(s.a, system.k, bound));
	state.SetLabel(label(static_cast<int>(state.range(0))));
}

CoverOptions cover_depth(int depth)
{
	CoverOptions o;
	o.depth = static_cast<std::size_t>(depth);
	return o;
}

void BM_cover(benchmark::State& state)
{
	auto s = system_for(static_cast<int>(state.range(0)));
	auto options = cover_depth(static_cast<int>(state.range(1)));
	for (auto _ : state)
		benchmark::DoNotOptimize(box_cover_estimate(s.a, s.d, options));
	state.SetLabel(label(static_cast<int>(state.range(0))));
}

void BM_cover_serial(benchmark::State& state)
{
	auto s = system_for(static_cast<int>(state.range(0)));
	auto options = cover_depth(static_cast<int>(state.range(1)));
	for (auto _ : state)
		benchmark::DoNotOptimize(box_cover_estimate_serial(s.a, s.d, options));
	state.SetLabel(label(static_cast<int>(state.range(0))));
}

} // namespace

BENCHMARK(BM_gamma)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gamma_serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cover)->Args({0, 8})->Args({1, 12})->Args({2, 7})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cover_serial)->Args({0, 8})->Args({1, 12})->Args({2, 7})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

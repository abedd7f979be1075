#include <doctest.h>

#include <omp.h>

#include "fixtures.hpp"
#include "tilemeasure/automaton.hpp"
#include "tilemeasure/oracle.hpp"

using namespace tilemeasure;
using namespace tilemeasure::testing;

namespace {

bool same_graph(const PairGraph& x, const PairGraph& y)
{
	return x.vertices() == y.vertices() && x.alphabet() == y.alphabet() && x.edges() == y.edges();
}

} // namespace

TEST_CASE("parallel graph construction matches the serial reference")
{
	std::mt19937_64 rng(101);
	for (int t = 0; t < 25; ++t) {
		auto [a, d] = random_system(rng);
		auto system = extend_digits(a, d);
		auto bound = contraction_bound(a, system.k);
		auto serial = build_gamma_serial(a, system.k, bound);
		CHECK(same_graph(build_gamma(a, system.k, bound), serial));
	}
}

TEST_CASE("graph construction is independent of thread count")
{
	IntMatrix a{{1, -2}, {2, 1}};
	auto d = digits({{0, 0}, {1, 0}, {3, 1}, {-2, 4}, {5, -3}});
	auto system = extend_digits(a, d);
	auto bound = contraction_bound(a, system.k);
	const int saved = omp_get_max_threads();
	omp_set_num_threads(1);
	auto one = build_gamma(a, system.k, bound);
	omp_set_num_threads(std::max(saved, 4));
	auto many = build_gamma(a, system.k, bound);
	omp_set_num_threads(saved);
	CHECK(same_graph(one, many));
}

TEST_CASE("parallel box cover matches the serial reference")
{
	std::vector<std::pair<IntMatrix, DigitSet>> fixtures{
		{scalar(3), digits1({0, 1, 5, 6})},
		{scalar(-2), digits1({0, 1})},
		{IntMatrix{{1, 1}, {-1, 1}}, digits({{0, 0}, {1, 0}})},
		{IntMatrix{{0, -2}, {1, -1}}, digits({{-7, 6}, {1, -6}, {7, -5}})},
	};
	for (const auto& [a, d] : fixtures) {
		CoverOptions options;
		options.depth = 7;
		auto parallel = box_cover_estimate(a, d, options);
		auto serial = box_cover_estimate_serial(a, d, options);
		CHECK(parallel.cell_count == serial.cell_count);
		CHECK(parallel.estimate == serial.estimate);
		CHECK(parallel.grid_exponent == serial.grid_exponent);
	}
}

#include <doctest.h>

#include <map>
#include <random>

#include "fixtures.hpp"
#include "tilemeasure/error.hpp"
#include "tilemeasure/measure.hpp"

using namespace tilemeasure;
using namespace tilemeasure::testing;

namespace {

using Interval = std::pair<Rational, Rational>;

// Lebesgue measure of (union of xs) intersect (union of ys + u) for disjoint
// interval lists.
Rational overlap(const std::vector<Interval>& xs, const std::vector<Interval>& ys, const Rational& u)
{
	Rational total = 0;
	for (const auto& [a, b] : xs)
		for (const auto& [c, d] : ys) {
			Rational lo = std::max(a, Rational(c + u)), hi = std::min(b, Rational(d + u));
			if (hi > lo)
				total += hi - lo;
		}
	return total;
}

const std::vector<Interval> example_set{{q(0), q(4, 3)}, {q(5, 3), q(3)}};

} // namespace

TEST_CASE("mu_vector small graphs")
{
	std::vector<Edge> full{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
	CHECK(mu_vector(1, 3, full) == MuVector{q(1)});
	CHECK(mu_vector(1, 3, {}) == MuVector{q(0)});
	std::vector<Edge> partial{{0, 0, 0}, {0, 0, 1}};
	CHECK(mu_vector(1, 3, partial) == MuVector{q(0)});
	// a full source feeding a vertex on one letter
	std::vector<Edge> feed{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}};
	CHECK(mu_vector(2, 2, feed) == MuVector{q(1), q(1, 2)});
	// not left-resolving
	std::vector<Edge> bad{{0, 1, 0}, {1, 1, 0}};
	CHECK_THROWS_AS(mu_vector(2, 2, bad), Error);
}

TEST_CASE("measures of T(3, {0,1,5,6})")
{
	auto an = analyze(scalar(3), digits1({0, 1, 5, 6}));
	CHECK(an.nucleus.system.c == digits1({0, 1, 5}));
	std::map<std::int64_t, Rational> expected{
		{0, q(1)}, {1, q(1, 3)}, {2, q(1, 8)}, {-1, q(7, 12)}, {-2, q(5, 8)}, {3, q(0)}, {-3, q(0)}};
	REQUIRE(an.digit_graph.vertex_count() == expected.size());
	for (std::size_t v = 0; v < an.digit_graph.vertex_count(); ++v)
		CHECK(an.vertex_mu[v] == expected.at(an.digit_graph.vertices()[v][0]));
	CHECK(an.value == q(8, 3));
	const auto& g = an.resolved.graph;
	CHECK(satisfies_balance(g.vertex_count(), g.alphabet().size(), g.edges(), an.mu));
}

TEST_CASE("lebesgue_measure")
{
	auto e1 = lebesgue_measure(scalar(3), digits1({0, 1, 5, 6}));
	CHECK(e1.value == q(8, 3));
	CHECK(e1.decimal == "2.66666666667");
	CHECK(e1.nucleus_vertices == 7);
	CHECK(e1.transversal == digits1({0, 1, 5}));
	CHECK(lebesgue_measure(scalar(2), digits1({0, 1})).value == 1);
	CHECK(lebesgue_measure(scalar(3), digits1({0, 2})).value == 0);
	CHECK(lebesgue_measure(scalar(2), digits1({0, 2})).value == 2);
	CHECK(lebesgue_measure(scalar(3), digits1({0, 1, 2})).value == 1);
	CHECK(lebesgue_measure(scalar(-2), digits1({0, 1})).value == 1);
	CHECK(lebesgue_measure(IntMatrix{{1, 1}, {-1, 1}}, digits({{0, 0}, {1, 0}})).value == 1);
	CHECK(lebesgue_measure(scalar(2), digits1({5})).value == 0);
	CHECK_THROWS_AS(lebesgue_measure(scalar(1), digits1({0})), Error);
}

TEST_CASE("positive_measure")
{
	CHECK(positive_measure(scalar(3), digits1({0, 1, 5, 6})));
	CHECK_FALSE(positive_measure(scalar(3), digits1({0, 2})));
	CHECK(positive_measure(scalar(2), digits1({0, 1})));
}

TEST_CASE("translate_intersection")
{
	CHECK(translate_intersection(scalar(2), digits1({0, 1}), {0}).value == 1);
	CHECK(translate_intersection(scalar(2), digits1({0, 1}), {1}).value == 0);
	CHECK(translate_intersection(scalar(2), digits1({0, 1}), {2}).value == 0);
	for (long u = -4; u <= 4; ++u) {
		Rational oracle = overlap(example_set, example_set, u);
		CHECK(translate_intersection(scalar(3), digits1({0, 1, 5, 6}), {u}).value == oracle);
	}
	CHECK(overlap(example_set, example_set, 1) == q(4, 3));
	CHECK(overlap(example_set, example_set, 2) == q(1));
	CHECK_THROWS_AS(translate_intersection(scalar(2), digits1({0, 1}), {0, 0}), Error);
}

TEST_CASE("pair_intersection")
{
	CHECK(pair_intersection(scalar(3), digits1({0, 1, 2}), digits1({0, 1, 2})).value == 1);
	CHECK(pair_intersection(scalar(3), digits1({0, 1, 2}), digits1({0, 2, 4})).value == 1);
	CHECK(pair_intersection(scalar(2), digits1({0, 1}), digits1({0, 2})).value == 1);
	// [0,1] against [1/2, 3/2]: T(2, {1, 2}) = [1, 2], shifted digits {1,2} -> [1,2]
	CHECK(pair_intersection(scalar(2), digits1({0, 1}), digits1({1, 2})).value == 0);
	// [0,4/3] u [5/3,3] against [0, 3] = T(3, {0, 3, 6})
	std::vector<Interval> zero_three{{q(0), q(3)}};
	CHECK(pair_intersection(scalar(3), digits1({0, 1, 5, 6}), digits1({0, 3, 6})).value
		== overlap(example_set, zero_three, 0));
}

TEST_CASE("is_tile")
{
	CHECK(is_tile(scalar(2), digits1({0, 1})));
	CHECK(is_tile(IntMatrix{{1, 1}, {-1, 1}}, digits({{0, 0}, {1, 0}})));
	CHECK_FALSE(is_tile(scalar(3), digits1({0, 2})));
	CHECK_FALSE(is_tile(scalar(3), digits1({0, 1, 5, 6})));
	// T(3, {0, 3, 6}) = 3 T(3, {0, 1, 2}) = [0, 3]
	CHECK(is_tile(scalar(3), digits1({0, 3, 6})));
	CHECK(lebesgue_measure(scalar(3), digits1({0, 3, 6})).value == 3);
}

TEST_CASE("measure invariants on random systems")
{
	std::mt19937_64 rng(41);
	for (int t = 0; t < 60; ++t) {
		auto [a, d, an] = tractable_system(rng, 20'000);
		const auto& g = an.resolved.graph;
		CHECK(satisfies_balance(g.vertex_count(), g.alphabet().size(), g.edges(), an.mu));
		CHECK(an.value >= 0);
		CHECK((an.value > 0) == positive_measure(a, d));
		if (Integer(static_cast<unsigned long>(d.size())) < an.nucleus.system.absdet)
			CHECK(an.value == 0);
		CHECK(translate_intersection(a, d, LatticeVector(a.dim(), 0)).value == an.value);
		CHECK(pair_intersection(a, d, d).value == an.value);
	}
}

#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "fixtures.hpp"
#include "tilemeasure/error.hpp"
#include "tilemeasure/lattice.hpp"

using namespace tilemeasure;
using namespace tilemeasure::testing;

TEST_CASE("is_expanding")
{
	CHECK(is_expanding(scalar(3)));
	CHECK(is_expanding(scalar(-2)));
	CHECK_FALSE(is_expanding(scalar(1)));
	CHECK_FALSE(is_expanding(scalar(-1)));
	CHECK(is_expanding(IntMatrix{{1, 1}, {-1, 1}}));
	// eigenvalues 2 and 1/2 * ... : [[2,1],[0,1]] has eigenvalue 1
	CHECK_FALSE(is_expanding(IntMatrix{{2, 1}, {0, 1}}));
	// rotation by 90 degrees: eigenvalues on the unit circle
	CHECK_FALSE(is_expanding(IntMatrix{{0, -1}, {1, 0}}));
	// eigenvalues +-sqrt(2)
	CHECK(is_expanding(IntMatrix{{0, 2}, {1, 0}}));
	CHECK_THROWS_AS(is_expanding(IntMatrix{{1, 2}, {2, 4}}), Error);
	try {
		is_expanding(scalar(0));
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::SingularMatrix);
	}
}

TEST_CASE("schur_stable")
{
	CHECK(schur_stable({Integer(1), Integer(-3)}));        // root 1/3
	CHECK_FALSE(schur_stable({Integer(1), Integer(-1)}));  // root 1
	CHECK_FALSE(schur_stable({Integer(-3), Integer(1)}));  // root 3
	CHECK(schur_stable({Integer(1), Integer(0), Integer(4)})); // +-i/2
	CHECK_FALSE(schur_stable({Integer(1), Integer(0), Integer(-1)}));
}

TEST_CASE("is_expanding agrees with floating-point eigenvalues")
{
	std::mt19937_64 rng(5);
	std::uniform_int_distribution<long> e(-4, 4);
	std::uniform_int_distribution<int> dim(1, 3);
	int checked = 0, expanding = 0;
	while (checked < 600) {
		const int n = dim(rng);
		IntMatrix a(static_cast<std::size_t>(n));
		Eigen::MatrixXd f(n, n);
		for (int i = 0; i < n; ++i)
			for (int j = 0; j < n; ++j) {
				long v = e(rng);
				a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
				f(i, j) = static_cast<double>(v);
			}
		if (det(a) == 0)
			continue;
		auto ev = f.eigenvalues();
		bool near_circle = false, all_out = true;
		for (int i = 0; i < n; ++i) {
			double m = std::abs(ev[i]);
			near_circle = near_circle || std::abs(m - 1.0) < 1e-6;
			all_out = all_out && m > 1.0;
		}
		if (near_circle)
			continue;
		bool exact = is_expanding(a);
		CHECK(exact == all_out);
		if (exact)
			CHECK(abs(det(a)) >= 2);
		expanding += exact;
		++checked;
	}
	CHECK(expanding > 50);
}

TEST_CASE("residue")
{
	CHECK(residue(scalar(3), {7}) == LatticeVector{1});
	CHECK(residue(scalar(3), {-1}) == LatticeVector{2});
	CHECK(residue(scalar(-3), {-1}) == LatticeVector{2});
	IntMatrix tw{{1, 1}, {-1, 1}};
	CHECK(residue(tw, {1, 0}) == LatticeVector{0, 1});
	CHECK(residue(tw, {0, 0}) == LatticeVector{0, 0});
	CHECK_THROWS_AS(residue(tw, {1}), Error);
}

TEST_CASE("residue properties")
{
	std::mt19937_64 rng(9);
	std::uniform_int_distribution<std::int64_t> c(-20, 20);
	for (int t = 0; t < 200; ++t) {
		IntMatrix a = random_expanding(rng);
		ResidueMap map(a);
		LatticeVector x(a.dim()), y(a.dim());
		for (auto& v : x)
			v = c(rng);
		for (auto& v : y)
			v = c(rng);
		auto rx = map(x);
		CHECK(map(rx) == rx);
		CHECK((map(x) == map(y)) == same_coset(a, x, y));
		// x and its residue differ by an element of A(Z^n)
		CHECK(same_coset(a, x, rx));
	}
}

TEST_CASE("transversal")
{
	CHECK(transversal(scalar(3)) == digits1({0, 1, 2}));
	CHECK(transversal(scalar(2)) == digits1({0, 1}));
	CHECK(transversal(IntMatrix{{1, 1}, {-1, 1}}) == digits({{0, 0}, {0, 1}}));

	std::mt19937_64 rng(1);
	for (int t = 0; t < 200; ++t) {
		IntMatrix a = random_expanding(rng);
		auto c = transversal(a);
		CHECK(Integer(static_cast<unsigned long>(c.size())) == abs(det(a)));
		for (std::size_t i = 0; i < c.size(); ++i)
			for (std::size_t j = i + 1; j < c.size(); ++j)
				CHECK_FALSE(same_coset(a, c[i], c[j]));
	}
}

TEST_CASE("extend_digits")
{
	auto e1 = extend_digits(scalar(3), digits1({0, 1, 5, 6}));
	CHECK(e1.c == digits1({0, 1, 5}));
	CHECK(e1.k == digits1({0, 1, 5, 6}));
	CHECK(e1.absdet == 3);

	auto bin = extend_digits(scalar(2), digits1({0, 1}));
	CHECK(bin.c == digits1({0, 1}));
	CHECK(bin.k == digits1({0, 1}));

	auto gap = extend_digits(scalar(3), digits1({0, 2}));
	CHECK(gap.c == digits1({0, 1, 2}));
	CHECK(gap.k == digits1({0, 2, 1}));

	CHECK_THROWS_AS(extend_digits(scalar(1), digits1({0})), Error);
	CHECK_THROWS_AS(extend_digits(scalar(2), digits({{0, 0}})), Error);
	CHECK_THROWS_AS(DigitSet({{0}, {0}}), Error);
	CHECK_THROWS_AS(DigitSet(std::vector<LatticeVector>{}), Error);
}

TEST_CASE("extend_digits invariants")
{
	std::mt19937_64 rng(21);
	for (int t = 0; t < 200; ++t) {
		auto [a, d] = random_system(rng);
		for (bool prefer : {true, false}) {
			TransversalChoice choice;
			choice.prefer_digits = prefer;
			auto sys = extend_digits(a, d, choice);
			CHECK(Integer(static_cast<unsigned long>(sys.c.size())) == sys.absdet);
			for (const auto& x : d)
				CHECK(sys.k.contains(x));
			for (const auto& x : sys.c)
				CHECK(sys.k.contains(x));
			for (const auto& x : sys.k) {
				int reps = 0;
				for (const auto& c : sys.c)
					reps += same_coset(a, x, c);
				CHECK(reps == 1);
			}
		}
	}
}

#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tilemeasure/error.hpp"
#include "tilemeasure/ratlin.hpp"

using namespace tilemeasure;
using tilemeasure::testing::q;

TEST_CASE("det")
{
	CHECK(det(IntMatrix{{3}}) == 3);
	CHECK(det(IntMatrix::identity(2)) == 1);
	CHECK(det(IntMatrix{{1, 1}, {-1, 1}}) == 2);
	CHECK(det(IntMatrix{{0, 1}, {1, 0}}) == -1);
	CHECK(det(IntMatrix{{2, 4}, {1, 2}}) == 0);
	// needs a row swap at the first pivot
	CHECK(det(IntMatrix{{0, 2, 1}, {1, 0, 0}, {0, 0, 3}}) == -6);
}

TEST_CASE("det agrees with cofactor expansion on random 3x3")
{
	std::mt19937_64 rng(7);
	std::uniform_int_distribution<long> e(-9, 9);
	for (int t = 0; t < 200; ++t) {
		long m[3][3];
		for (auto& row : m)
			for (auto& x : row)
				x = e(rng);
		IntMatrix a{{m[0][0], m[0][1], m[0][2]}, {m[1][0], m[1][1], m[1][2]}, {m[2][0], m[2][1], m[2][2]}};
		long cof = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
			- m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
			+ m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
		CHECK(det(a) == cof);
	}
}

namespace {

void check_hnf(const IntMatrix& m)
{
	auto [h, u] = hnf(m);
	REQUIRE(m * u == h);
	CHECK(abs(det(u)) == 1);
	Integer diag = 1;
	for (std::size_t i = 0; i < h.dim(); ++i) {
		CHECK(h(i, i) > 0);
		diag *= h(i, i);
		for (std::size_t j = i + 1; j < h.dim(); ++j)
			CHECK(h(i, j) == 0);
		for (std::size_t j = 0; j < i; ++j) {
			CHECK(h(i, j) >= 0);
			CHECK(h(i, j) < h(i, i));
		}
	}
	CHECK(diag == abs(det(m)));
}

} // namespace

TEST_CASE("hnf")
{
	auto one = hnf(IntMatrix{{3}});
	CHECK(one.h == IntMatrix{{3}});
	CHECK(one.u == IntMatrix{{1}});

	auto id = hnf(IntMatrix::identity(2));
	CHECK(id.h == IntMatrix::identity(2));
	CHECK(id.u == IntMatrix::identity(2));

	// c2 <- c2 - c1 gives [[1,0],[-1,2]]; reducing -1 into [0, 2) adds c2 to c1.
	IntMatrix tw{{1, 1}, {-1, 1}};
	auto t = hnf(tw);
	CHECK(t.h == IntMatrix{{1, 0}, {1, 2}});
	check_hnf(tw);

	check_hnf(IntMatrix{{-3}});
	check_hnf(IntMatrix{{0, 2}, {3, 0}});
	check_hnf(IntMatrix{{4, 6, 1}, {2, -3, 5}, {7, 0, 2}});

	CHECK_THROWS_AS(hnf(IntMatrix{{2, 4}, {1, 2}}), Error);
}

TEST_CASE("hnf invariants on random matrices")
{
	std::mt19937_64 rng(11);
	std::uniform_int_distribution<long> e(-6, 6);
	std::uniform_int_distribution<int> dim(1, 4);
	int done = 0;
	while (done < 200) {
		std::size_t n = static_cast<std::size_t>(dim(rng));
		IntMatrix m(n);
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = 0; j < n; ++j)
				m(i, j) = e(rng);
		if (det(m) == 0)
			continue;
		check_hnf(m);
		++done;
	}
}

TEST_CASE("solve_rational")
{
	std::vector<Rational> b{q(1, 2), q(2, 3)};
	CHECK(solve_rational(IntMatrix::identity(2), b) == b);
	CHECK(solve_rational(IntMatrix{{3}}, std::vector<Rational>{q(1)}) == std::vector<Rational>{q(1, 3)});
	CHECK(solve_rational(IntMatrix{{2, 0}, {0, 4}}, std::vector<Rational>{q(1), q(1)})
		== std::vector<Rational>{q(1, 2), q(1, 4)});
	CHECK_THROWS_AS(solve_rational(IntMatrix{{1, 2}, {2, 4}}, std::vector<Rational>{q(1), q(1)}), Error);
}

TEST_CASE("solve_rational round trip")
{
	std::mt19937_64 rng(3);
	std::uniform_int_distribution<long> e(-5, 5);
	int done = 0;
	while (done < 200) {
		std::size_t n = 1 + static_cast<std::size_t>(rng() % 4);
		IntMatrix m(n);
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = 0; j < n; ++j)
				m(i, j) = e(rng);
		if (det(m) == 0)
			continue;
		RationalVector x(n);
		for (auto& v : x)
			v = make_rational(e(rng), 1 + static_cast<long>(rng() % 7));
		auto b = RatMatrix(m) * std::span<const Rational>(x);
		auto y = solve_rational(m, b);
		CHECK(y == x);
		for (const auto& v : y)
			CHECK(is_canonical(v));
		++done;
	}
}

TEST_CASE("inverse_rational")
{
	CHECK(inverse_rational(IntMatrix{{3}})(0, 0) == q(1, 3));
	CHECK(inverse_rational(IntMatrix::identity(3)) == RatMatrix::identity(3));
	IntMatrix m{{1, 1}, {-1, 1}};
	auto inv = inverse_rational(m);
	CHECK(inv(0, 0) == q(1, 2));
	CHECK(inv(0, 1) == q(-1, 2));
	CHECK(inv(1, 0) == q(1, 2));
	CHECK(inv(1, 1) == q(1, 2));
	CHECK(RatMatrix(m) * inv == RatMatrix::identity(2));
	CHECK_THROWS_AS(inverse_rational(IntMatrix{{0}}), Error);
}

TEST_CASE("characteristic polynomial")
{
	// z^2 - 2z + 2
	auto p = characteristic_polynomial(IntMatrix{{1, 1}, {-1, 1}});
	REQUIRE(p.size() == 3);
	CHECK(p[0] == 2);
	CHECK(p[1] == -2);
	CHECK(p[2] == 1);
	auto c = characteristic_polynomial(IntMatrix{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}});
	CHECK(c == std::vector<Integer>{-30, 31, -10, 1});
}

TEST_CASE("fractions and decimals")
{
	CHECK(to_fraction_string(q(8, 3)) == "8/3");
	CHECK(to_fraction_string(q(-4, 2)) == "-2");
	CHECK(parse_fraction(" 16/6 ") == q(8, 3));
	CHECK(parse_fraction("-7") == q(-7));
	CHECK_THROWS_AS(parse_fraction("1/0"), Error);
	CHECK_THROWS_AS(parse_fraction("1.5"), Error);
	CHECK_THROWS_AS(parse_fraction("3/-4"), Error);
	CHECK(is_canonical(make_rational(6, -4)));

	CHECK(to_decimal(q(8, 3)) == "2.66666666667");
	CHECK(to_decimal(q(1, 3)) == "0.333333333333");
	CHECK(to_decimal(q(1)) == "1");
	CHECK(to_decimal(q(0)) == "0");
	CHECK(to_decimal(q(-7, 12)) == "-0.583333333333");
	CHECK(to_decimal(q(1, 8)) == "0.125");
	// half-even: 0.1234567890125 -> ...012, 0.1234567890135 -> ...014
	CHECK(to_decimal(parse_fraction("1234567890125/10000000000000")) == "0.123456789012");
	CHECK(to_decimal(parse_fraction("1234567890135/10000000000000")) == "0.123456789014");
	CHECK(to_decimal(parse_fraction("999999999999500/1000")) == "1000000000000");
	CHECK(to_decimal(q(1, 1024 * 1024 * 16)) == "5.96046447754e-8");
}

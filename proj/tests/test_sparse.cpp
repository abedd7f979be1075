#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tilemeasure/error.hpp"
#include "tilemeasure/sparse.hpp"

using namespace tilemeasure;
using tilemeasure::testing::q;

TEST_CASE("rational reconstruction")
{
	const Integer m = Integer(1) << 40;
	Rational out;
	Integer inv3;
	Integer three = 3;
	mpz_invert(inv3.get_mpz_t(), three.get_mpz_t(), m.get_mpz_t());
	Integer bound;
	Integer half = m / 2;
	mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
	CHECK(rational_reconstruct(Integer(-2 * inv3), m, bound, out));
	CHECK(out == q(-2, 3));
	CHECK(rational_reconstruct(Integer(17), m, bound, out));
	CHECK(out == 17);
}

TEST_CASE("solve_sparse small systems")
{
	std::vector<SparseEntry> e{{0, 0, 2}, {1, 1, 3}, {0, 1, -1}};
	auto x = solve_sparse(SparseMatrix(2, e), std::vector<Rational>{q(1), q(1, 2)});
	CHECK(x == RationalVector{q(7, 12), q(1, 6)});
	std::vector<SparseEntry> singular{{0, 0, 1}, {0, 1, 1}, {1, 0, 2}, {1, 1, 2}};
	CHECK_THROWS_AS(solve_sparse(SparseMatrix(2, singular), std::vector<Rational>{q(1), q(1)}), Error);
	// repeated entries are summed
	std::vector<SparseEntry> twice{{0, 0, 1}, {0, 0, 1}};
	CHECK(solve_sparse(SparseMatrix(1, twice), std::vector<Rational>{q(1)}) == RationalVector{q(1, 2)});
}

TEST_CASE("solve_sparse agrees with dense elimination")
{
	std::mt19937_64 rng(5);
	for (int t = 0; t < 40; ++t) {
		const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
		const long letters = std::uniform_int_distribution<long>(2, 5)(rng);
		// letters*I minus a 0/1 matrix with at most letters ones per row, as in mu_vector
		RatMatrix dense(n, n);
		std::vector<SparseEntry> entries;
		std::uniform_int_distribution<std::uint32_t> col(0, static_cast<std::uint32_t>(n - 1));
		for (std::uint32_t i = 0; i < n; ++i) {
			dense(i, i) += letters;
			entries.push_back({i, i, letters});
			const long k = std::uniform_int_distribution<long>(0, letters)(rng);
			for (long j = 0; j < k; ++j) {
				auto c = col(rng);
				dense(i, c) -= 1;
				entries.push_back({i, c, -1});
			}
		}
		RationalVector b(n);
		for (auto& x : b)
			x = q(std::uniform_int_distribution<long>(0, 9)(rng), std::uniform_int_distribution<long>(1, 7)(rng));
		bool dense_ok = true;
		RationalVector expect;
		try {
			expect = solve_rational(dense, b);
		} catch (const Error&) {
			dense_ok = false;
		}
		if (dense_ok)
			CHECK(solve_sparse(SparseMatrix(n, entries), b) == expect);
		else
			CHECK_THROWS_AS(solve_sparse(SparseMatrix(n, entries), b), Error);
	}
}

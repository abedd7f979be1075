#pragma once

// Exact solution of sparse nonsingular integer systems. The matrix is
// factored once modulo a word-sized prime; the solution is lifted p-adically
// and recovered by rational reconstruction, then checked exactly.

#include <cstdint>
#include <span>
#include <vector>

#include "tilemeasure/ratlin.hpp"

namespace tilemeasure {

struct SparseEntry {
	std::uint32_t row;
	std::uint32_t col;
	std::int64_t value;
};

/// Square n x n matrix given as triplets; repeated (row, col) pairs are summed.
class SparseMatrix {
public:
	SparseMatrix(std::size_t n, std::span<const SparseEntry> entries);

	std::size_t dim() const noexcept { return n_; }
	const std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>>& rows() const noexcept { return rows_; }

	std::vector<Integer> operator*(std::span<const Integer> x) const;

private:
	std::size_t n_;
	std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows_;
};

/// Throws SingularMatrix if no pivot is found modulo several primes.
RationalVector solve_sparse(const SparseMatrix& m, std::span<const Rational> b);

/// n/d with |n|, d <= bound and n/d == u mod m, if one exists.
bool rational_reconstruct(const Integer& u, const Integer& m, const Integer& bound, Rational& out);

} // namespace tilemeasure

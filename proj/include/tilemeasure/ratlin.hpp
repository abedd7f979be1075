#pragma once

// Exact integer/rational arithmetic and the small amount of linear algebra
// the rest of the library needs. Integers and rationals are GMP values;
// mpq_class results of arithmetic are always canonical (lowest terms,
// positive denominator).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace tilemeasure {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Builds num/den in lowest terms. Throws on a zero denominator.
Rational make_rational(const Integer& num, const Integer& den);

/// True iff the stored representation is reduced with a positive denominator.
bool is_canonical(const Rational& q);

/// "p/q", or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& q);

/// Inverse of to_fraction_string; accepts optional surrounding whitespace.
Rational parse_fraction(const std::string& text);

/// Decimal rendering with the given number of significant digits, rounding
/// half to even. Plain notation for exponents in (-7, 21), scientific otherwise.
std::string to_decimal(const Rational& q, int significant = 12);

Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);
Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Square integer matrix, row-major.
class IntMatrix {
public:
	IntMatrix() = default;
	explicit IntMatrix(std::size_t n);
	IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
	static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);
	static IntMatrix identity(std::size_t n);

	std::size_t dim() const noexcept { return n_; }

	Integer& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
	const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

	IntMatrix operator*(const IntMatrix& rhs) const;
	std::vector<Integer> operator*(std::span<const Integer> x) const;
	std::vector<Integer> operator*(std::span<const std::int64_t> x) const;

	bool operator==(const IntMatrix&) const = default;

private:
	std::size_t n_ = 0;
	std::vector<Integer> a_;
};

/// Rectangular rational matrix, row-major.
class RatMatrix {
public:
	RatMatrix() = default;
	RatMatrix(std::size_t rows, std::size_t cols);
	explicit RatMatrix(const IntMatrix& m);
	static RatMatrix identity(std::size_t n);

	std::size_t rows() const noexcept { return rows_; }
	std::size_t cols() const noexcept { return cols_; }

	Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
	const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

	RatMatrix operator*(const RatMatrix& rhs) const;
	RationalVector operator*(std::span<const Rational> x) const;
	RationalVector operator*(std::span<const std::int64_t> x) const;

	/// Induced l-infinity operator norm (maximum absolute row sum).
	Rational inf_norm() const;

	bool operator==(const RatMatrix&) const = default;

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<Rational> a_;
};

Rational inf_norm(std::span<const Rational> x);

/// Determinant by Bareiss fraction-free elimination.
Integer det(const IntMatrix& m);

struct HermiteForm {
	IntMatrix h; ///< lower triangular, positive diagonal, 0 <= h(i,j) < h(i,i) for j < i
	IntMatrix u; ///< unimodular, m * u == h
};

/// Column-style Hermite normal form. Throws SingularMatrix if det(m) == 0.
HermiteForm hnf(const IntMatrix& m);

RationalVector solve_rational(const RatMatrix& m, std::span<const Rational> b);
RationalVector solve_rational(const IntMatrix& m, std::span<const Rational> b);

RatMatrix inverse_rational(const IntMatrix& m);

/// Coefficients c[0..n] of det(zI - m), c[n] == 1, via Faddeev-LeVerrier.
std::vector<Integer> characteristic_polynomial(const IntMatrix& m);

} // namespace tilemeasure

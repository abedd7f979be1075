#include "tilemeasure/ratlin.hpp"

#include <algorithm>
#include <cctype>

#include "tilemeasure/error.hpp"

namespace tilemeasure {

std::string_view to_string(ErrorCode code)
{
	switch (code) {
	case ErrorCode::SingularMatrix: return "SingularMatrix";
	case ErrorCode::DimensionMismatch: return "DimensionMismatch";
	case ErrorCode::NotExpanding: return "NotExpanding";
	case ErrorCode::ExpansionPowerExceeded: return "ExpansionPowerExceeded";
	case ErrorCode::SubsetBlowup: return "SubsetBlowup";
	case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
	case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
	case ErrorCode::InvalidDigits: return "InvalidDigits";
	case ErrorCode::InternalInconsistency: return "InternalInconsistency";
	case ErrorCode::ParseError: return "ParseError";
	}
	return "Unknown";
}

Rational make_rational(const Integer& num, const Integer& den)
{
	if (den == 0)
		throw Error(ErrorCode::InternalInconsistency, "zero denominator");
	Rational q(num, den);
	q.canonicalize();
	return q;
}

bool is_canonical(const Rational& q)
{
	if (q.get_den() <= 0)
		return false;
	Integer g;
	mpz_gcd(g.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	return g == 1;
}

std::string to_fraction_string(const Rational& q)
{
	if (q.get_den() == 1)
		return q.get_num().get_str();
	return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_fraction(const std::string& text)
{
	auto first = text.find_first_not_of(" \t\r\n");
	auto last = text.find_last_not_of(" \t\r\n");
	if (first == std::string::npos)
		throw Error(ErrorCode::ParseError, "empty fraction");
	std::string s = text.substr(first, last - first + 1);
	auto valid_int = [](const std::string& t, bool allow_sign) {
		std::size_t k = 0;
		if (allow_sign && k < t.size() && (t[k] == '-' || t[k] == '+'))
			++k;
		if (k == t.size())
			return false;
		return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(k), t.end(),
			[](unsigned char c) { return std::isdigit(c) != 0; });
	};
	auto slash = s.find('/');
	std::string num = s.substr(0, slash);
	std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
	if (!valid_int(num, true) || !valid_int(den, false))
		throw Error(ErrorCode::ParseError, "malformed fraction '" + s + "'");
	if (num[0] == '+')
		num.erase(0, 1);
	Integer n(num), d(den);
	if (d == 0)
		throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
	return make_rational(n, d);
}

Integer floor_div(const Integer& a, const Integer& b)
{
	Integer q;
	mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	return q;
}

Integer ceil_div(const Integer& a, const Integer& b)
{
	Integer q;
	mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	return q;
}

Integer floor(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }
Integer ceil(const Rational& q) { return ceil_div(q.get_num(), q.get_den()); }

// IntMatrix

IntMatrix::IntMatrix(std::size_t n) : n_(n), a_(n * n) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
	: n_(rows.size()), a_(rows.size() * rows.size())
{
	std::size_t i = 0;
	for (const auto& row : rows) {
		if (row.size() != n_)
			throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
		std::size_t j = 0;
		for (long v : row)
			(*this)(i, j++) = v;
		++i;
	}
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows)
{
	IntMatrix m(rows.size());
	for (std::size_t i = 0; i < rows.size(); ++i) {
		if (rows[i].size() != rows.size())
			throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
		for (std::size_t j = 0; j < rows.size(); ++j)
			m(i, j) = static_cast<long>(rows[i][j]);
	}
	return m;
}

IntMatrix IntMatrix::identity(std::size_t n)
{
	IntMatrix m(n);
	for (std::size_t i = 0; i < n; ++i)
		m(i, i) = 1;
	return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const
{
	if (rhs.n_ != n_)
		throw Error(ErrorCode::DimensionMismatch, "matrix product dimension mismatch");
	IntMatrix out(n_);
	for (std::size_t i = 0; i < n_; ++i)
		for (std::size_t k = 0; k < n_; ++k) {
			if ((*this)(i, k) == 0)
				continue;
			for (std::size_t j = 0; j < n_; ++j)
				out(i, j) += (*this)(i, k) * rhs(k, j);
		}
	return out;
}

std::vector<Integer> IntMatrix::operator*(std::span<const Integer> x) const
{
	if (x.size() != n_)
		throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension mismatch");
	std::vector<Integer> out(n_);
	for (std::size_t i = 0; i < n_; ++i)
		for (std::size_t j = 0; j < n_; ++j)
			out[i] += (*this)(i, j) * x[j];
	return out;
}

std::vector<Integer> IntMatrix::operator*(std::span<const std::int64_t> x) const
{
	if (x.size() != n_)
		throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension mismatch");
	std::vector<Integer> out(n_);
	for (std::size_t i = 0; i < n_; ++i)
		for (std::size_t j = 0; j < n_; ++j)
			out[i] += (*this)(i, j) * static_cast<long>(x[j]);
	return out;
}

// RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
	: rows_(rows), cols_(cols), a_(rows * cols) {}

RatMatrix::RatMatrix(const IntMatrix& m) : RatMatrix(m.dim(), m.dim())
{
	for (std::size_t i = 0; i < rows_; ++i)
		for (std::size_t j = 0; j < cols_; ++j)
			(*this)(i, j) = m(i, j);
}

RatMatrix RatMatrix::identity(std::size_t n)
{
	RatMatrix m(n, n);
	for (std::size_t i = 0; i < n; ++i)
		m(i, i) = 1;
	return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const
{
	if (cols_ != rhs.rows_)
		throw Error(ErrorCode::DimensionMismatch, "matrix product dimension mismatch");
	RatMatrix out(rows_, rhs.cols_);
	for (std::size_t i = 0; i < rows_; ++i)
		for (std::size_t k = 0; k < cols_; ++k) {
			if ((*this)(i, k) == 0)
				continue;
			for (std::size_t j = 0; j < rhs.cols_; ++j)
				out(i, j) += (*this)(i, k) * rhs(k, j);
		}
	return out;
}

RationalVector RatMatrix::operator*(std::span<const Rational> x) const
{
	if (x.size() != cols_)
		throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension mismatch");
	RationalVector out(rows_);
	for (std::size_t i = 0; i < rows_; ++i)
		for (std::size_t j = 0; j < cols_; ++j)
			out[i] += (*this)(i, j) * x[j];
	return out;
}

RationalVector RatMatrix::operator*(std::span<const std::int64_t> x) const
{
	if (x.size() != cols_)
		throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension mismatch");
	RationalVector out(rows_);
	for (std::size_t i = 0; i < rows_; ++i)
		for (std::size_t j = 0; j < cols_; ++j)
			out[i] += (*this)(i, j) * Integer(static_cast<long>(x[j]));
	return out;
}

Rational RatMatrix::inf_norm() const
{
	Rational best = 0;
	for (std::size_t i = 0; i < rows_; ++i) {
		Rational row = 0;
		for (std::size_t j = 0; j < cols_; ++j)
			row += abs((*this)(i, j));
		best = std::max(best, row);
	}
	return best;
}

Rational inf_norm(std::span<const Rational> x)
{
	Rational best = 0;
	for (const auto& v : x)
		best = std::max(best, Rational(abs(v)));
	return best;
}

// Bareiss: after step k every entry of the trailing block is a minor of m,
// so the division by the previous pivot is exact.
Integer det(const IntMatrix& m)
{
	const std::size_t n = m.dim();
	if (n == 0)
		return 1;
	IntMatrix a = m;
	Integer prev = 1;
	int sign = 1;
	for (std::size_t k = 0; k + 1 < n; ++k) {
		if (a(k, k) == 0) {
			std::size_t p = k + 1;
			while (p < n && a(p, k) == 0)
				++p;
			if (p == n)
				return 0;
			for (std::size_t j = 0; j < n; ++j)
				std::swap(a(k, j), a(p, j));
			sign = -sign;
		}
		for (std::size_t i = k + 1; i < n; ++i) {
			for (std::size_t j = k + 1; j < n; ++j) {
				Integer t = a(k, k) * a(i, j) - a(i, k) * a(k, j);
				mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
			}
		}
		prev = a(k, k);
	}
	return sign * a(n - 1, n - 1);
}

namespace {

// Replace columns (i, j) of h and u by (s*ci + t*cj, -b/g*ci + a/g*cj),
// a unimodular step that zeroes h(row, j).
void column_gcd_step(IntMatrix& h, IntMatrix& u, std::size_t row, std::size_t i, std::size_t j)
{
	const std::size_t n = h.dim();
	Integer a = h(row, i), b = h(row, j), g, s, t;
	mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	Integer ag = a / g, bg = b / g;
	for (IntMatrix* mat : {&h, &u}) {
		IntMatrix& x = *mat;
		for (std::size_t r = 0; r < n; ++r) {
			Integer ci = x(r, i), cj = x(r, j);
			x(r, i) = s * ci + t * cj;
			x(r, j) = ag * cj - bg * ci;
		}
	}
}

} // namespace

HermiteForm hnf(const IntMatrix& m)
{
	const std::size_t n = m.dim();
	if (det(m) == 0)
		throw Error(ErrorCode::SingularMatrix, "hnf: matrix is singular");
	IntMatrix h = m;
	IntMatrix u = IntMatrix::identity(n);
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = i + 1; j < n; ++j)
			if (h(i, j) != 0)
				column_gcd_step(h, u, i, i, j);
		if (h(i, i) < 0)
			for (std::size_t r = 0; r < n; ++r) {
				h(r, i) = -h(r, i);
				u(r, i) = -u(r, i);
			}
		// Column i vanishes above row i, so reducing columns to its left
		// leaves the rows already processed untouched.
		for (std::size_t j = 0; j < i; ++j) {
			Integer q = floor_div(h(i, j), h(i, i));
			if (q == 0)
				continue;
			for (std::size_t r = 0; r < n; ++r) {
				h(r, j) -= q * h(r, i);
				u(r, j) -= q * u(r, i);
			}
		}
	}
	return {std::move(h), std::move(u)};
}

RationalVector solve_rational(const RatMatrix& m, std::span<const Rational> b)
{
	const std::size_t n = m.rows();
	if (m.cols() != n || b.size() != n)
		throw Error(ErrorCode::DimensionMismatch, "solve_rational: shape mismatch");
	RatMatrix a = m;
	RationalVector x(b.begin(), b.end());
	for (std::size_t k = 0; k < n; ++k) {
		std::size_t p = k;
		while (p < n && a(p, k) == 0)
			++p;
		if (p == n)
			throw Error(ErrorCode::SingularMatrix, "solve_rational: matrix is singular");
		if (p != k) {
			for (std::size_t j = k; j < n; ++j)
				std::swap(a(k, j), a(p, j));
			std::swap(x[k], x[p]);
		}
		for (std::size_t i = k + 1; i < n; ++i) {
			if (a(i, k) == 0)
				continue;
			Rational f = a(i, k) / a(k, k);
			for (std::size_t j = k; j < n; ++j)
				a(i, j) -= f * a(k, j);
			x[i] -= f * x[k];
		}
	}
	for (std::size_t k = n; k-- > 0;) {
		for (std::size_t j = k + 1; j < n; ++j)
			x[k] -= a(k, j) * x[j];
		x[k] /= a(k, k);
	}
	return x;
}

RationalVector solve_rational(const IntMatrix& m, std::span<const Rational> b)
{
	return solve_rational(RatMatrix(m), b);
}

RatMatrix inverse_rational(const IntMatrix& m)
{
	const std::size_t n = m.dim();
	RatMatrix inv(n, n);
	for (std::size_t c = 0; c < n; ++c) {
		RationalVector e(n);
		e[c] = 1;
		RationalVector col = solve_rational(m, e);
		for (std::size_t r = 0; r < n; ++r)
			inv(r, c) = col[r];
	}
	return inv;
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& m)
{
	const std::size_t n = m.dim();
	std::vector<Integer> c(n + 1);
	c[n] = 1;
	IntMatrix mk(n); // M_0 = 0
	for (std::size_t k = 1; k <= n; ++k) {
		IntMatrix next = m * mk;
		for (std::size_t i = 0; i < n; ++i)
			next(i, i) += c[n - k + 1];
		mk = std::move(next);
		IntMatrix am = m * mk;
		Integer trace = 0;
		for (std::size_t i = 0; i < n; ++i)
			trace += am(i, i);
		Integer q;
		Integer kk(static_cast<unsigned long>(k));
		mpz_divexact(q.get_mpz_t(), trace.get_mpz_t(), kk.get_mpz_t());
		c[n - k] = -q;
	}
	return c;
}

} // namespace tilemeasure

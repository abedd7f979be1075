#include "tilemeasure/lattice.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "tilemeasure/error.hpp"

namespace tilemeasure {

namespace {

void require_same_dim(const LatticeVector& a, const LatticeVector& b)
{
	if (a.size() != b.size())
		throw Error(ErrorCode::DimensionMismatch, "lattice vectors of different dimension");
}

std::int64_t to_int64(const Integer& v)
{
	if (!v.fits_slong_p())
		throw Error(ErrorCode::InvalidDigits, "lattice coordinate exceeds 64-bit range");
	return static_cast<std::int64_t>(v.get_si());
}

} // namespace

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b)
{
	require_same_dim(a, b);
	LatticeVector out(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		out[i] = a[i] + b[i];
	return out;
}

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b)
{
	require_same_dim(a, b);
	LatticeVector out(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		out[i] = a[i] - b[i];
	return out;
}

LatticeVector operator-(const LatticeVector& a)
{
	LatticeVector out(a.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		out[i] = -a[i];
	return out;
}

std::int64_t linf_norm(const LatticeVector& v)
{
	std::int64_t best = 0;
	for (auto x : v)
		best = std::max(best, x < 0 ? -x : x);
	return best;
}

LatticeVector apply(const IntMatrix& m, const LatticeVector& v)
{
	auto prod = m * std::span<const std::int64_t>(v);
	LatticeVector out(prod.size());
	for (std::size_t i = 0; i < prod.size(); ++i)
		out[i] = to_int64(prod[i]);
	return out;
}

LatticeVector to_lattice(std::span<const Rational> v)
{
	LatticeVector out(v.size());
	for (std::size_t i = 0; i < v.size(); ++i) {
		if (v[i].get_den() != 1)
			throw Error(ErrorCode::InternalInconsistency, "expected an integral vector");
		out[i] = to_int64(v[i].get_num());
	}
	return out;
}

// DigitSet

DigitSet::DigitSet(std::vector<LatticeVector> digits) : digits_(std::move(digits))
{
	if (digits_.empty())
		throw Error(ErrorCode::InvalidDigits, "digit set is empty");
	const std::size_t n = digits_.front().size();
	if (n == 0)
		throw Error(ErrorCode::InvalidDigits, "digits must have dimension >= 1");
	std::set<LatticeVector> seen;
	for (const auto& d : digits_) {
		if (d.size() != n)
			throw Error(ErrorCode::InvalidDigits, "digits have inconsistent dimensions");
		if (!seen.insert(d).second)
			throw Error(ErrorCode::InvalidDigits, "duplicate digit in digit set");
	}
}

bool DigitSet::contains(const LatticeVector& v) const { return index_of(v) != size(); }

std::size_t DigitSet::index_of(const LatticeVector& v) const
{
	return static_cast<std::size_t>(std::find(digits_.begin(), digits_.end(), v) - digits_.begin());
}

// Expansion test

bool schur_stable(std::vector<Integer> f)
{
	while (!f.empty() && f.back() == 0)
		f.pop_back();
	if (f.empty())
		return false;
	// f <- (lead * f - f(0) * reverse(f)) / z keeps the count of roots inside
	// the disc when |lead| > |f(0)| (Rouche on the unit circle).
	while (f.size() > 1) {
		const std::size_t n = f.size() - 1;
		const Integer lead = f[n], c0 = f[0];
		if (abs(lead) <= abs(c0))
			return false;
		std::vector<Integer> g(n);
		for (std::size_t k = 1; k <= n; ++k)
			g[k - 1] = lead * f[k] - c0 * f[n - k];
		Integer content = 0;
		for (const auto& x : g)
			mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_mpz_t());
		if (content > 1)
			for (auto& x : g)
				mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), content.get_mpz_t());
		f = std::move(g);
	}
	return f[0] != 0;
}

bool is_expanding(const IntMatrix& a)
{
	if (a.dim() == 0)
		throw Error(ErrorCode::DimensionMismatch, "empty matrix");
	if (det(a) == 0)
		throw Error(ErrorCode::SingularMatrix, "matrix is singular");
	// Roots of the reversed characteristic polynomial are the reciprocal eigenvalues.
	auto p = characteristic_polynomial(a);
	std::reverse(p.begin(), p.end());
	return schur_stable(std::move(p));
}

// Cosets

ResidueMap::ResidueMap(const IntMatrix& a) : h_(hnf(a).h), index_(1)
{
	for (std::size_t i = 0; i < h_.dim(); ++i)
		index_ *= h_(i, i);
}

LatticeVector ResidueMap::operator()(const LatticeVector& z) const
{
	const std::size_t n = h_.dim();
	if (z.size() != n)
		throw Error(ErrorCode::DimensionMismatch, "residue: dimension mismatch");
	std::vector<Integer> w(n);
	for (std::size_t i = 0; i < n; ++i)
		w[i] = static_cast<long>(z[i]);
	for (std::size_t i = 0; i < n; ++i) {
		Integer q = floor_div(w[i], h_(i, i));
		if (q == 0)
			continue;
		for (std::size_t r = i; r < n; ++r)
			w[r] -= q * h_(r, i);
	}
	LatticeVector out(n);
	for (std::size_t i = 0; i < n; ++i)
		out[i] = to_int64(w[i]);
	return out;
}

LatticeVector residue(const IntMatrix& a, const LatticeVector& z) { return ResidueMap(a)(z); }

bool same_coset(const IntMatrix& a, const LatticeVector& x, const LatticeVector& y)
{
	auto diff = x - y;
	auto v = inverse_rational(a) * std::span<const std::int64_t>(diff);
	return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q.get_den() == 1; });
}

DigitSet transversal(const IntMatrix& a)
{
	ResidueMap map(a);
	const auto& h = map.hermite();
	const std::size_t n = h.dim();
	std::vector<std::int64_t> extent(n);
	for (std::size_t i = 0; i < n; ++i)
		extent[i] = to_int64(h(i, i));
	std::vector<LatticeVector> reps;
	LatticeVector cur(n, 0);
	while (true) {
		reps.push_back(cur);
		std::size_t i = n;
		while (i-- > 0) {
			if (++cur[i] < extent[i])
				break;
			cur[i] = 0;
		}
		if (i == static_cast<std::size_t>(-1))
			break;
	}
	return DigitSet(std::move(reps));
}

bool prefer_small(const LatticeVector& x, const LatticeVector& y)
{
	auto nx = linf_norm(x), ny = linf_norm(y);
	if (nx != ny)
		return nx < ny;
	return x < y;
}

DigitSystem extend_digits(const IntMatrix& a, const DigitSet& d, const TransversalChoice& choice)
{
	if (d.empty())
		throw Error(ErrorCode::InvalidDigits, "digit set is empty");
	if (d.dim() != a.dim())
		throw Error(ErrorCode::DimensionMismatch, "digit dimension differs from matrix dimension");
	if (!is_expanding(a))
		throw Error(ErrorCode::NotExpanding, "matrix is not expanding");

	ResidueMap map(a);
	std::map<LatticeVector, LatticeVector> chosen; // residue -> representative
	if (choice.prefer_digits) {
		for (const auto& x : d) {
			auto r = map(x);
			auto it = chosen.find(r);
			if (it == chosen.end())
				chosen.emplace(r, x);
			else if (choice.prefer(x, it->second))
				it->second = x;
		}
	}
	DigitSet box = transversal(a);
	std::vector<LatticeVector> c;
	for (const auto& r : box) {
		auto it = chosen.find(r);
		c.push_back(it == chosen.end() ? r : it->second);
	}
	std::sort(c.begin(), c.end());

	std::vector<LatticeVector> k = d.digits();
	for (const auto& x : c)
		if (!d.contains(x))
			k.push_back(x);

	Integer absdet = abs(det(a));
	return {a, d, DigitSet(std::move(k)), DigitSet(std::move(c)), absdet};
}

} // namespace tilemeasure

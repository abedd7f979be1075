#include "tilemeasure/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "tilemeasure/error.hpp"

namespace tilemeasure {

SparseMatrix::SparseMatrix(std::size_t n, std::span<const SparseEntry> entries) : n_(n), rows_(n)
{
	std::vector<std::map<std::uint32_t, std::int64_t>> acc(n);
	for (const auto& e : entries) {
		if (e.row >= n || e.col >= n)
			throw Error(ErrorCode::DimensionMismatch, "sparse entry outside the matrix");
		acc[e.row][e.col] += e.value;
	}
	for (std::size_t i = 0; i < n; ++i)
		for (auto [c, v] : acc[i])
			if (v != 0)
				rows_[i].emplace_back(c, v);
}

std::vector<Integer> SparseMatrix::operator*(std::span<const Integer> x) const
{
	if (x.size() != n_)
		throw Error(ErrorCode::DimensionMismatch, "sparse product dimension mismatch");
	std::vector<Integer> y(n_);
	for (std::size_t i = 0; i < n_; ++i)
		for (auto [c, v] : rows_[i])
			y[i] += x[c] * Integer(static_cast<long>(v));
	return y;
}

bool rational_reconstruct(const Integer& u, const Integer& m, const Integer& bound, Rational& out)
{
	Integer r0 = m, r1 = u % m, t0 = 0, t1 = 1, q, tmp;
	if (r1 < 0)
		r1 += m;
	while (r1 > bound) {
		mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
		tmp = r0 - q * r1;
		r0 = r1;
		r1 = tmp;
		tmp = t0 - q * t1;
		t0 = t1;
		t1 = tmp;
	}
	if (t1 == 0 || abs(t1) > bound)
		return false;
	Integer g;
	mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
	if (g != 1)
		return false;
	out = Rational(r1, t1);
	out.canonicalize();
	return true;
}

namespace {

using Row = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
	return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p)
{
	std::uint64_t r = 1;
	for (; e; e >>= 1, a = mul_mod(a, a, p))
		if (e & 1)
			r = mul_mod(r, a, p);
	return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

std::uint64_t reduce(std::int64_t v, std::uint64_t p)
{
	auto r = v % static_cast<std::int64_t>(p);
	return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

std::uint64_t reduce(const Integer& v, std::uint64_t p)
{
	Integer r;
	mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
	return r.get_ui();
}

// Sparse LU modulo p with Markowitz-style pivoting on the sparsest column.
class ModularLU {
public:
	ModularLU(const SparseMatrix& m, std::uint64_t p) : p_(p), rows_(m.dim())
	{
		const std::size_t n = m.dim();
		for (std::size_t i = 0; i < n; ++i)
			for (auto [c, v] : m.rows()[i])
				if (auto r = reduce(v, p))
					rows_[i].emplace_back(c, r);

		std::vector<std::vector<std::uint32_t>> col_rows(n);
		std::vector<std::size_t> col_count(n, 0);
		for (std::uint32_t i = 0; i < n; ++i)
			for (auto [c, v] : rows_[i]) {
				col_rows[c].push_back(i);
				++col_count[c];
			}
		std::set<std::pair<std::size_t, std::uint32_t>> queue;
		for (std::uint32_t c = 0; c < n; ++c)
			queue.emplace(col_count[c], c);
		std::vector<bool> row_done(n, false), col_done(n, false);
		auto set_count = [&](std::uint32_t c, std::size_t count) {
			queue.erase({col_count[c], c});
			col_count[c] = count;
			queue.emplace(count, c);
		};
		auto entry = [&](std::uint32_t r, std::uint32_t c) -> std::uint64_t {
			const auto& row = rows_[r];
			auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(c, std::uint64_t{0}));
			return it != row.end() && it->first == c ? it->second : 0;
		};

		Row merged;
		for (std::size_t step = 0; step < n; ++step) {
			auto [count, c] = *queue.begin();
			queue.erase(queue.begin());
			col_done[c] = true;
			// col_rows may hold stale or repeated rows; filter to live holders.
			std::vector<std::uint32_t> holders;
			for (auto r : col_rows[c])
				if (!row_done[r] && entry(r, c) != 0)
					holders.push_back(r);
			std::sort(holders.begin(), holders.end());
			holders.erase(std::unique(holders.begin(), holders.end()), holders.end());
			col_rows[c].clear();
			if (holders.empty()) {
				singular_ = true;
				return;
			}
			std::uint32_t pr = *std::min_element(holders.begin(), holders.end(),
				[&](auto x, auto y) { return rows_[x].size() < rows_[y].size() || (rows_[x].size() == rows_[y].size() && x < y); });
			row_done[pr] = true;
			pivot_row_.push_back(pr);
			pivot_col_.push_back(c);
			for (auto [cc, v] : rows_[pr])
				if (!col_done[cc])
					set_count(cc, col_count[cc] - 1);
			const std::uint64_t inv = inv_mod(entry(pr, c), p);
			for (auto s : holders) {
				if (s == pr)
					continue;
				const std::uint64_t f = mul_mod(entry(s, c), inv, p);
				ops_.push_back({s, pr, f});
				merged.clear();
				const Row& a = rows_[s];
				const Row& b = rows_[pr];
				std::size_t i = 0, j = 0;
				while (i < a.size() || j < b.size()) {
					if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
						merged.push_back(a[i++]);
					} else {
						const auto col = b[j].first;
						const std::uint64_t sub = mul_mod(f, b[j].second, p);
						const bool had = i < a.size() && a[i].first == col;
						const std::uint64_t old = had ? a[i++].second : 0;
						const std::uint64_t val = old >= sub ? old - sub : old + p - sub;
						++j;
						if (val != 0)
							merged.push_back({col, val});
						if (col_done[col])
							continue;
						if (!had && val != 0) {
							col_rows[col].push_back(s);
							set_count(col, col_count[col] + 1);
						} else if (had && val == 0) {
							set_count(col, col_count[col] - 1);
						}
					}
				}
				rows_[s].swap(merged);
			}
		}
	}

	bool singular() const noexcept { return singular_; }

	std::vector<std::uint64_t> solve(std::vector<std::uint64_t> y) const
	{
		for (const auto& op : ops_) {
			const std::uint64_t sub = mul_mod(op.factor, y[op.pivot], p_);
			y[op.target] = y[op.target] >= sub ? y[op.target] - sub : y[op.target] + p_ - sub;
		}
		std::vector<std::uint64_t> x(y.size(), 0);
		for (std::size_t k = pivot_row_.size(); k-- > 0;) {
			const auto r = pivot_row_[k];
			const auto c = pivot_col_[k];
			std::uint64_t acc = y[r], diag = 0;
			for (auto [cc, v] : rows_[r]) {
				if (cc == c) {
					diag = v;
					continue;
				}
				const std::uint64_t sub = mul_mod(v, x[cc], p_);
				acc = acc >= sub ? acc - sub : acc + p_ - sub;
			}
			x[c] = mul_mod(acc, inv_mod(diag, p_), p_);
		}
		return x;
	}

private:
	struct Op {
		std::uint32_t target;
		std::uint32_t pivot;
		std::uint64_t factor;
	};

	std::uint64_t p_;
	std::vector<Row> rows_;
	std::vector<std::uint32_t> pivot_row_, pivot_col_;
	std::vector<Op> ops_;
	bool singular_ = false;
};

std::uint64_t prime_below(const Integer& start)
{
	Integer p = start;
	do
		--p;
	while (mpz_probab_prime_p(p.get_mpz_t(), 40) == 0);
	return p.get_ui();
}

} // namespace

RationalVector solve_sparse(const SparseMatrix& m, std::span<const Rational> b)
{
	const std::size_t n = m.dim();
	if (b.size() != n)
		throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from matrix size");
	if (n == 0)
		return {};

	Integer scale = 1;
	for (const auto& x : b)
		mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), x.get_den_mpz_t());
	std::vector<Integer> rhs(n);
	for (std::size_t i = 0; i < n; ++i)
		rhs[i] = b[i].get_num() * (scale / b[i].get_den());

	// Hadamard bound on numerators and denominators of the solution.
	double log_bound = 0;
	for (std::size_t i = 0; i < n; ++i) {
		double norm = 0;
		for (auto [c, v] : m.rows()[i])
			norm += static_cast<double>(v) * static_cast<double>(v);
		log_bound += std::log2(std::sqrt(norm) + std::abs(rhs[i].get_d()) + 1);
	}

	Integer start = Integer(1) << 62;
	std::uint64_t p = 0;
	std::unique_ptr<ModularLU> lu;
	for (int attempt = 0; attempt < 4; ++attempt) {
		p = prime_below(start);
		lu = std::make_unique<ModularLU>(m, p);
		if (!lu->singular())
			break;
		start = p;
	}
	if (lu->singular())
		throw Error(ErrorCode::SingularMatrix, "sparse system is singular");

	const Integer pz(static_cast<unsigned long>(p));
	std::vector<Integer> lifted(n), residual = rhs;
	Integer modulus = 1;
	std::vector<std::uint64_t> ym(n);
	std::vector<Integer> xi(n);
	std::size_t next_check = 1;
	for (std::size_t step = 1;; ++step) {
		for (std::size_t i = 0; i < n; ++i)
			ym[i] = reduce(residual[i], p);
		auto xm = lu->solve(ym);
		for (std::size_t i = 0; i < n; ++i) {
			xi[i] = static_cast<unsigned long>(xm[i]);
			lifted[i] += xi[i] * modulus;
		}
		modulus *= pz;
		auto ax = m * xi;
		for (std::size_t i = 0; i < n; ++i) {
			residual[i] -= ax[i];
			mpz_divexact_ui(residual[i].get_mpz_t(), residual[i].get_mpz_t(), p);
		}
		const bool exhausted = static_cast<double>(mpz_sizeinbase(modulus.get_mpz_t(), 2)) > 2 * log_bound + 2;
		if (step != next_check && !exhausted)
			continue;
		next_check *= 2;

		Integer bound;
		Integer half = modulus / 2;
		mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
		RationalVector x(n);
		bool ok = true;
		for (std::size_t i = 0; i < n && ok; ++i)
			ok = rational_reconstruct(lifted[i], modulus, bound, x[i]);
		if (ok) {
			// Exact check: m x == rhs.
			Integer den = 1;
			for (const auto& v : x)
				mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
			std::vector<Integer> num(n);
			for (std::size_t i = 0; i < n; ++i)
				num[i] = x[i].get_num() * (den / x[i].get_den());
			auto lhs = m * num;
			for (std::size_t i = 0; i < n && ok; ++i)
				ok = lhs[i] == rhs[i] * den;
			if (ok) {
				for (auto& v : x)
					v /= scale;
				return x;
			}
		}
		if (exhausted)
			throw Error(ErrorCode::InternalInconsistency, "sparse solve failed to reconstruct the solution");
	}
}

} // namespace tilemeasure

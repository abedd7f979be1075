#include "tilemeasure/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include <omp.h>

#include "tilemeasure/error.hpp"

namespace tilemeasure {

std::vector<CylinderCount> cylinder_bounds(const ResolvedGraph& g, std::size_t length)
{
	const std::size_t n = g.vertex_count();
	// paths[v] = number of paths of the current length ending at v; in a
	// left-resolving graph these are in bijection with readable words.
	std::vector<Integer> paths(n, Integer(1)), next(n);
	for (std::size_t step = 0; step < length; ++step) {
		std::fill(next.begin(), next.end(), Integer(0));
		for (const auto& e : g.edges())
			next[e.target] += paths[e.source];
		paths.swap(next);
	}
	Integer total;
	mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(g.alphabet().size()),
		static_cast<unsigned long>(length));
	std::vector<CylinderCount> out(n);
	for (std::size_t v = 0; v < n; ++v)
		out[v] = {length, paths[v], make_rational(paths[v], total)};
	return out;
}

CylinderCount cylinder_upper(const ResolvedGraph& g, std::size_t v, std::size_t length)
{
	if (!is_left_resolving(g))
		throw Error(ErrorCode::InternalInconsistency, "cylinder counts need a left-resolving graph");
	if (v >= g.vertex_count())
		throw Error(ErrorCode::DimensionMismatch, "vertex out of range");
	return cylinder_bounds(g, length)[v];
}

RationalVector point_sample(const IntMatrix& a, const LatticeVector& v, const std::vector<LatticeVector>& word)
{
	const std::size_t n = a.dim();
	if (v.size() != n)
		throw Error(ErrorCode::DimensionMismatch, "point_sample: base point dimension");
	RatMatrix inv = inverse_rational(a);
	RatMatrix power = inv;
	RationalVector p(n);
	for (std::size_t i = 0; i < n; ++i)
		p[i] = Integer(static_cast<long>(v[i]));
	for (const auto& x : word) {
		if (x.size() != n)
			throw Error(ErrorCode::DimensionMismatch, "point_sample: digit dimension");
		auto y = power * std::span<const std::int64_t>(x);
		for (std::size_t i = 0; i < n; ++i)
			p[i] += y[i];
		power = power * inv;
	}
	return p;
}

TailBox tail_box(const IntMatrix& a, const DigitSet& d, std::size_t depth)
{
	constexpr std::size_t extra_terms = 24;
	const std::size_t n = a.dim();
	if (d.dim() != n)
		throw Error(ErrorCode::DimensionMismatch, "digit dimension differs from matrix dimension");
	ContractionBound bound(a, d);
	const Rational radius = bound.attractor_radius(d); // ||t||_inf <= ||t||* <= radius on T

	RatMatrix inv = bound.inverse();
	RatMatrix power = RatMatrix::identity(n);
	for (std::size_t k = 0; k < depth; ++k)
		power = power * inv;
	TailBox box{RationalVector(n), RationalVector(n)};
	// The extent of a linear functional on T is the sum of its per-level extents.
	for (std::size_t k = 0; k < extra_terms; ++k) {
		power = power * inv;
		for (std::size_t i = 0; i < n; ++i) {
			Rational lo = 0, hi = 0;
			bool first = true;
			for (const auto& x : d) {
				Rational s = 0;
				for (std::size_t j = 0; j < n; ++j)
					s += power(i, j) * Integer(static_cast<long>(x[j]));
				if (first || s < lo)
					lo = s;
				if (first || s > hi)
					hi = s;
				first = false;
			}
			box.lo[i] += lo;
			box.hi[i] += hi;
		}
	}
	Rational rest = power.inf_norm() * radius;
	for (std::size_t i = 0; i < n; ++i) {
		box.lo[i] -= rest;
		box.hi[i] += rest;
	}
	return box;
}

int default_grid_exponent(const TailBox& box)
{
	constexpr int max_exponent = 24;
	Rational width = -1;
	for (std::size_t i = 0; i < box.lo.size(); ++i) {
		Rational w = box.hi[i] - box.lo[i];
		if (width < 0 || w < width)
			width = w;
	}
	if (width <= 0)
		return max_exponent;
	int g = 1;
	Rational cell(1, 2);
	while (g < max_exponent && cell * 4 > width) {
		cell /= 2;
		++g;
	}
	return g;
}

namespace {

struct CoverSetup {
	std::size_t n = 0;
	std::size_t depth = 0;
	int grid = 0;
	TailBox tail;
	Rational spacing;
	std::size_t samples = 0;
	// Packing of cell indices into one 64-bit key.
	std::vector<std::int64_t> cell_min;
	std::vector<std::uint64_t> cell_span;
};

Integer pow2(int g) { return Integer(1) << static_cast<mp_bitcnt_t>(g); }

CoverSetup setup_cover(const IntMatrix& a, const DigitSet& d, const CoverOptions& options)
{
	if (options.depth < 1)
		throw Error(ErrorCode::InvalidDigits, "cover depth must be at least 1");
	CoverSetup s;
	s.n = a.dim();
	s.depth = options.depth;
	if (d.dim() != s.n)
		throw Error(ErrorCode::DimensionMismatch, "digit dimension differs from matrix dimension");
	s.samples = 1;
	for (std::size_t k = 0; k < options.depth; ++k) {
		if (s.samples > options.sample_cap / d.size())
			throw Error(ErrorCode::EnumerationCapExceeded,
				"cover enumeration exceeds " + std::to_string(options.sample_cap) + " samples");
		s.samples *= d.size();
	}
	s.tail = tail_box(a, d, options.depth);
	s.grid = options.grid_exponent >= 0 ? options.grid_exponent : default_grid_exponent(s.tail);
	s.spacing = make_rational(1, pow2(s.grid));

	// Whole set T is inside the depth-0 tail box; one cell of slack each side.
	TailBox whole = tail_box(a, d, 0);
	Integer cells = 1;
	for (std::size_t i = 0; i < s.n; ++i) {
		Integer lo = floor(Rational(whole.lo[i] * pow2(s.grid))) - 1;
		Integer hi = ceil(Rational(whole.hi[i] * pow2(s.grid))) + 1;
		if (!lo.fits_slong_p() || !hi.fits_slong_p())
			throw Error(ErrorCode::EnumerationCapExceeded, "cover grid too fine");
		Integer span = hi - lo + 1;
		cells *= span;
		if (cells > Integer(std::numeric_limits<long>::max()))
			throw Error(ErrorCode::EnumerationCapExceeded, "cover grid too fine");
		s.cell_min.push_back(lo.get_si());
		s.cell_span.push_back(span.get_ui());
	}
	return s;
}

// Appends packed keys of the cells meeting [lo_i, hi_i] per coordinate.
void emit_cells(const CoverSetup& s, const std::vector<Integer>& lo, const std::vector<Integer>& hi,
	std::vector<std::uint64_t>& keys)
{
	const std::size_t n = s.n;
	std::vector<std::int64_t> l(n), h(n), cur(n);
	for (std::size_t i = 0; i < n; ++i) {
		l[i] = lo[i].get_si();
		h[i] = hi[i].get_si();
		if (l[i] < s.cell_min[i] || h[i] >= s.cell_min[i] + static_cast<std::int64_t>(s.cell_span[i]))
			throw Error(ErrorCode::InternalInconsistency, "cover cell outside the attractor box");
	}
	cur = l;
	while (true) {
		std::uint64_t key = 0;
		for (std::size_t i = 0; i < n; ++i)
			key = key * s.cell_span[i] + static_cast<std::uint64_t>(cur[i] - s.cell_min[i]);
		keys.push_back(key);
		std::size_t i = n;
		while (i-- > 0) {
			if (++cur[i] <= h[i])
				break;
			cur[i] = l[i];
		}
		if (i == static_cast<std::size_t>(-1))
			break;
	}
}

void sort_unique(std::vector<std::uint64_t>& keys)
{
	std::sort(keys.begin(), keys.end());
	keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

CoverEstimate finish(const CoverSetup& s, std::size_t count)
{
	CoverEstimate est;
	est.depth = s.depth;
	est.grid_exponent = s.grid;
	est.cell_spacing = s.spacing;
	est.cell_count = count;
	Rational area = 1;
	for (std::size_t i = 0; i < s.n; ++i)
		area *= s.spacing;
	est.estimate = area * Integer(static_cast<unsigned long>(count));
	return est;
}

} // namespace

CoverEstimate box_cover_estimate(const IntMatrix& a, const DigitSet& d, const CoverOptions& options)
{
	const CoverSetup s = setup_cover(a, d, options);
	const std::size_t n = s.n;
	const std::size_t base = d.size();

	// Sample = A^-depth z with z = sum_j A^(depth-j) d_j; A^-depth = scaled / q.
	const Integer absdet = abs(det(a));
	Integer q = 1;
	for (std::size_t k = 0; k < s.depth; ++k)
		q *= absdet;
	RatMatrix inv_power = RatMatrix::identity(n);
	{
		RatMatrix inv = inverse_rational(a);
		for (std::size_t k = 0; k < s.depth; ++k)
			inv_power = inv_power * inv;
	}
	IntMatrix scaled(n);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < n; ++j)
			scaled(i, j) = Rational(inv_power(i, j) * q).get_num();

	// floor((scaled z)_i 2^g / q + tail.lo_i 2^g) as (num_i(z)) / den_i with integers.
	const Integer g2 = pow2(s.grid);
	std::vector<Integer> lo_add(n), lo_den(n), hi_add(n), hi_den(n);
	for (std::size_t i = 0; i < n; ++i) {
		lo_den[i] = q * s.tail.lo[i].get_den();
		lo_add[i] = s.tail.lo[i].get_num() * q * g2;
		hi_den[i] = q * s.tail.hi[i].get_den();
		hi_add[i] = s.tail.hi[i].get_num() * q * g2;
	}

	std::size_t prefix_len = 0, prefixes = 1;
	while (prefix_len < s.depth && prefixes < 1024) {
		prefixes *= base;
		++prefix_len;
	}
	const std::size_t suffix_count = s.samples / prefixes;

	std::vector<std::vector<std::uint64_t>> chunk_keys(prefixes);
	std::atomic<std::size_t> total_keys{0};
	std::atomic<bool> overflow{false};
	std::atomic<bool> failed{false};

	#pragma omp parallel for schedule(dynamic, 1)
	for (std::int64_t pi = 0; pi < static_cast<std::int64_t>(prefixes); ++pi) {
		if (overflow || failed)
			continue;
		try {
			auto& keys = chunk_keys[static_cast<std::size_t>(pi)];
			// Digits of the sample index in base |D|, most significant first.
			std::vector<std::size_t> word(s.depth, 0);
			std::size_t rest = static_cast<std::size_t>(pi);
			for (std::size_t k = prefix_len; k-- > 0;) {
				word[k] = rest % base;
				rest /= base;
			}
			std::vector<std::vector<Integer>> partial(s.depth + 1, std::vector<Integer>(n));
			auto extend = [&](std::size_t level) {
				auto az = a * std::span<const Integer>(partial[level]);
				const auto& dg = d[word[level]];
				for (std::size_t i = 0; i < n; ++i)
					partial[level + 1][i] = az[i] + static_cast<long>(dg[i]);
			};
			for (std::size_t k = 0; k < s.depth; ++k)
				extend(k);
			std::vector<Integer> lo(n), hi(n);
			for (std::size_t t = 0; t < suffix_count; ++t) {
				if (t > 0) {
					// Odometer over the suffix digits; recompute from the first changed level.
					std::size_t k = s.depth;
					while (k-- > prefix_len) {
						if (++word[k] < base)
							break;
						word[k] = 0;
					}
					for (std::size_t level = k; level < s.depth; ++level)
						extend(level);
				}
				auto pz = scaled * std::span<const Integer>(partial[s.depth]);
				for (std::size_t i = 0; i < n; ++i) {
					Integer x = pz[i] * g2;
					lo[i] = floor_div(x * s.tail.lo[i].get_den() + lo_add[i], lo_den[i]);
					hi[i] = ceil_div(x * s.tail.hi[i].get_den() + hi_add[i], hi_den[i]) - 1;
					if (hi[i] < lo[i])
						hi[i] = lo[i];
				}
				emit_cells(s, lo, hi, keys);
			}
			sort_unique(keys);
			if ((total_keys += keys.size()) > 4 * options.cell_cap)
				overflow = true;
		} catch (...) {
			failed = true;
		}
	}
	if (failed)
		throw Error(ErrorCode::InternalInconsistency, "cover enumeration failed");
	if (overflow)
		throw Error(ErrorCode::EnumerationCapExceeded, "cover exceeds the cell cap");

	std::vector<std::uint64_t> all;
	all.reserve(total_keys);
	for (auto& k : chunk_keys) {
		all.insert(all.end(), k.begin(), k.end());
		std::vector<std::uint64_t>().swap(k);
	}
	sort_unique(all);
	if (all.size() > options.cell_cap)
		throw Error(ErrorCode::EnumerationCapExceeded, "cover exceeds the cell cap");
	return finish(s, all.size());
}

CoverEstimate box_cover_estimate_serial(const IntMatrix& a, const DigitSet& d, const CoverOptions& options)
{
	const CoverSetup s = setup_cover(a, d, options);
	const std::size_t n = s.n;
	const Rational scale = pow2(s.grid);
	std::vector<std::size_t> word(s.depth, 0);
	std::vector<LatticeVector> digits(s.depth);
	std::vector<std::uint64_t> keys;
	std::vector<Integer> lo(n), hi(n);
	const LatticeVector origin(n, 0);
	for (std::size_t t = 0; t < s.samples; ++t) {
		for (std::size_t k = 0; k < s.depth; ++k)
			digits[k] = d[word[k]];
		auto p = point_sample(a, origin, digits);
		for (std::size_t i = 0; i < n; ++i) {
			lo[i] = floor(Rational((p[i] + s.tail.lo[i]) * scale));
			hi[i] = ceil(Rational((p[i] + s.tail.hi[i]) * scale)) - 1;
			if (hi[i] < lo[i])
				hi[i] = lo[i];
		}
		emit_cells(s, lo, hi, keys);
		std::size_t k = s.depth;
		while (k-- > 0) {
			if (++word[k] < d.size())
				break;
			word[k] = 0;
		}
	}
	sort_unique(keys);
	if (keys.size() > options.cell_cap)
		throw Error(ErrorCode::EnumerationCapExceeded, "cover exceeds the cell cap");
	return finish(s, keys.size());
}

void write_samples_csv(std::ostream& out, const IntMatrix& a, const DigitSet& d, std::size_t depth,
	std::size_t sample_cap)
{
	const std::size_t n = a.dim();
	std::size_t samples = 1;
	for (std::size_t k = 0; k < depth; ++k) {
		if (samples > sample_cap / d.size())
			throw Error(ErrorCode::EnumerationCapExceeded,
				"sample enumeration exceeds " + std::to_string(sample_cap) + " points");
		samples *= d.size();
	}
	for (std::size_t i = 0; i < n; ++i)
		out << (i ? "," : "") << 'x' << i;
	out << '\n';
	std::vector<std::size_t> word(depth, 0);
	std::vector<LatticeVector> digits(depth);
	const LatticeVector origin(n, 0);
	for (std::size_t t = 0; t < samples; ++t) {
		for (std::size_t k = 0; k < depth; ++k)
			digits[k] = d[word[k]];
		auto p = point_sample(a, origin, digits);
		for (std::size_t i = 0; i < n; ++i)
			out << (i ? "," : "") << to_decimal(p[i]);
		out << '\n';
		std::size_t k = depth;
		while (k-- > 0) {
			if (++word[k] < d.size())
				break;
			word[k] = 0;
		}
	}
}

} // namespace tilemeasure

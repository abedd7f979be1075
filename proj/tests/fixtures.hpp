#pragma once

// Shared fixtures and random generators for the test suites.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "tilemeasure/error.hpp"
#include "tilemeasure/lattice.hpp"
#include "tilemeasure/measure.hpp"
#include "tilemeasure/ratlin.hpp"

namespace tilemeasure::testing {

inline DigitSet digits1(std::initializer_list<std::int64_t> xs)
{
	std::vector<LatticeVector> out;
	for (auto x : xs)
		out.push_back({x});
	return DigitSet(std::move(out));
}

inline DigitSet digits(std::vector<LatticeVector> xs) { return DigitSet(std::move(xs)); }

inline IntMatrix scalar(long a) { return IntMatrix{{a}}; }

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

struct RandomSystem {
	IntMatrix a;
	DigitSet d;
};

/// Expanding A with n <= 2 and 2 <= |det A| <= max_det.
inline IntMatrix random_expanding(std::mt19937_64& rng, long max_det = 5)
{
	std::uniform_int_distribution<int> dim(1, 2);
	std::uniform_int_distribution<long> entry(-3, 3);
	while (true) {
		const std::size_t n = static_cast<std::size_t>(dim(rng));
		IntMatrix a(n);
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = 0; j < n; ++j)
				a(i, j) = entry(rng);
		Integer d = abs(det(a));
		if (d < 2 || d > max_det)
			continue;
		if (is_expanding(a))
			return a;
	}
}

/// count distinct digits with coordinates in [-range, range].
inline DigitSet random_digits(std::mt19937_64& rng, std::size_t n, std::size_t count, std::int64_t range = 8)
{
	std::uniform_int_distribution<std::int64_t> coord(-range, range);
	std::set<LatticeVector> seen;
	std::vector<LatticeVector> out;
	while (out.size() < count) {
		LatticeVector v(n);
		for (auto& x : v)
			x = coord(rng);
		if (seen.insert(v).second)
			out.push_back(v);
	}
	return DigitSet(std::move(out));
}

/// Random system with |D| drawn from [1, |det A| + 1].
inline RandomSystem random_system(std::mt19937_64& rng, long max_det = 5, std::int64_t range = 8)
{
	IntMatrix a = random_expanding(rng, max_det);
	const auto absdet = Integer(abs(det(a))).get_ui();
	std::uniform_int_distribution<std::size_t> count(1, absdet + 1);
	return {a, random_digits(rng, a.dim(), count(rng), range)};
}

/// Random system whose left-resolving graph stays under subset_cap. Draws that
/// raise SubsetBlowup are redrawn and counted in *rejected.
struct AnalyzedSystem {
	IntMatrix a;
	DigitSet d;
	SetAnalysis analysis;
};

inline AnalyzedSystem tractable_system(std::mt19937_64& rng, std::size_t subset_cap, std::size_t* rejected = nullptr)
{
	MeasureOptions options;
	options.subset_cap = subset_cap;
	while (true) {
		auto [a, d] = random_system(rng);
		try {
			auto an = analyze(a, d, options);
			return {std::move(a), std::move(d), std::move(an)};
		} catch (const Error& e) {
			if (e.code() != ErrorCode::SubsetBlowup)
				throw;
			if (rejected)
				++*rejected;
		}
	}
}

} // namespace tilemeasure::testing

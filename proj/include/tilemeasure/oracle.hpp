#pragma once

// Brute-force approximations used to cross-check the exact results:
// cylinder counts bound mu(F_v) from above, and a box cover of the truncated
// digit expansions bounds lambda(T) from above.

#include <cstddef>
#include <ostream>
#include <vector>

#include "tilemeasure/automaton.hpp"
#include "tilemeasure/lattice.hpp"
#include "tilemeasure/ratlin.hpp"

namespace tilemeasure {

struct CylinderCount {
	std::size_t length = 0;
	Integer readable_words;
	Rational bound; ///< readable_words / |C|^length
};

/// Words of length L readable along paths ending at v, for every vertex of a
/// left-resolving graph at once.
std::vector<CylinderCount> cylinder_bounds(const ResolvedGraph& g, std::size_t length);

CylinderCount cylinder_upper(const ResolvedGraph& g, std::size_t v, std::size_t length);

/// v + sum_{k=1..L} A^-k word[k-1].
RationalVector point_sample(const IntMatrix& a, const LatticeVector& v, const std::vector<LatticeVector>& word);

struct CoverEstimate {
	std::size_t depth = 0;
	int grid_exponent = 0;
	Rational cell_spacing;   ///< 2^-grid_exponent
	std::size_t cell_count = 0;
	Rational estimate;       ///< cell_count * spacing^n
};

struct CoverOptions {
	std::size_t depth = 10;
	int grid_exponent = -1;  ///< negative: a quarter of the tail width, clamped to [1, 24]
	std::size_t sample_cap = std::size_t{1} << 24;
	std::size_t cell_cap = std::size_t{1} << 26;
};

/// Exact bounding box [lo, hi] of A^-depth T per coordinate, padded by a
/// certified bound on the truncated tail.
struct TailBox {
	RationalVector lo;
	RationalVector hi;
};

TailBox tail_box(const IntMatrix& a, const DigitSet& d, std::size_t depth);

/// Counts grid cells meeting sample + tail_box over all |D|^depth truncated
/// expansions; an outer approximation of T. OpenMP-parallel over digit prefixes.
CoverEstimate box_cover_estimate(const IntMatrix& a, const DigitSet& d, const CoverOptions& options = {});

/// Single-threaded reference for box_cover_estimate using exact rational points.
CoverEstimate box_cover_estimate_serial(const IntMatrix& a, const DigitSet& d, const CoverOptions& options = {});

/// Grid exponent chosen when CoverOptions::grid_exponent is negative.
int default_grid_exponent(const TailBox& box);

/// One CSV row per truncated expansion of the given depth, coordinates as
/// 12-significant-digit decimals. Throws EnumerationCapExceeded past sample_cap.
void write_samples_csv(std::ostream& out, const IntMatrix& a, const DigitSet& d, std::size_t depth,
	std::size_t sample_cap = std::size_t{1} << 20);

} // namespace tilemeasure

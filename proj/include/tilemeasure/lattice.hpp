#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tilemeasure/ratlin.hpp"

namespace tilemeasure {

using LatticeVector = std::vector<std::int64_t>;

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator-(const LatticeVector& a);
std::int64_t linf_norm(const LatticeVector& v);

/// m * v, throwing DimensionMismatch or InvalidDigits on int64 overflow.
LatticeVector apply(const IntMatrix& m, const LatticeVector& v);

/// Converts an integral rational vector; throws InternalInconsistency otherwise.
LatticeVector to_lattice(std::span<const Rational> v);

/// Ordered list of distinct lattice vectors of a common dimension.
class DigitSet {
public:
	DigitSet() = default;
	/// Throws InvalidDigits on an empty list, duplicates, or ragged dimensions.
	explicit DigitSet(std::vector<LatticeVector> digits);

	std::size_t size() const noexcept { return digits_.size(); }
	std::size_t dim() const noexcept { return digits_.empty() ? 0 : digits_.front().size(); }
	bool empty() const noexcept { return digits_.empty(); }

	const LatticeVector& operator[](std::size_t i) const { return digits_[i]; }
	auto begin() const noexcept { return digits_.begin(); }
	auto end() const noexcept { return digits_.end(); }
	const std::vector<LatticeVector>& digits() const noexcept { return digits_; }

	bool contains(const LatticeVector& v) const;
	/// Position of v, or size() if absent.
	std::size_t index_of(const LatticeVector& v) const;

	bool operator==(const DigitSet&) const = default;

private:
	std::vector<LatticeVector> digits_;
};

/// All roots of sum coeffs[k] z^k strictly inside the unit disc (Schur-Cohn,
/// exact integers). A step with |leading| == |constant| counts as unstable.
bool schur_stable(std::vector<Integer> coeffs);

/// Every eigenvalue of a has modulus > 1. Throws SingularMatrix if det(a) == 0.
bool is_expanding(const IntMatrix& a);

/// Canonical coset representatives for Z^n / a(Z^n), backed by the Hermite form.
class ResidueMap {
public:
	explicit ResidueMap(const IntMatrix& a);

	LatticeVector operator()(const LatticeVector& z) const;
	const IntMatrix& hermite() const noexcept { return h_; }
	/// Number of cosets, |det a|.
	const Integer& index() const noexcept { return index_; }

private:
	IntMatrix h_;
	Integer index_;
};

LatticeVector residue(const IntMatrix& a, const LatticeVector& z);

/// x - y in a(Z^n), decided through a^{-1}(x - y) being integral.
bool same_coset(const IntMatrix& a, const LatticeVector& x, const LatticeVector& y);

/// The |det a| box representatives, lexicographically sorted.
DigitSet transversal(const IntMatrix& a);

struct DigitSystem {
	IntMatrix a;
	DigitSet d;
	DigitSet k;
	DigitSet c;
	Integer absdet;
};

/// Strict "better representative" order used to pick C inside each coset.
using DigitPreference = std::function<bool(const LatticeVector&, const LatticeVector&)>;

/// l-infinity norm, then lexicographic.
bool prefer_small(const LatticeVector& x, const LatticeVector& y);

struct TransversalChoice {
	DigitPreference prefer = prefer_small;
	/// Take representatives from D whenever a coset meets D.
	bool prefer_digits = true;
};

/// Extends D to K = D u C with C a coset transversal. Throws NotExpanding,
/// SingularMatrix, DimensionMismatch.
DigitSystem extend_digits(const IntMatrix& a, const DigitSet& d, const TransversalChoice& choice = {});

} // namespace tilemeasure

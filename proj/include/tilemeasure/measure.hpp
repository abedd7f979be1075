#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "tilemeasure/automaton.hpp"
#include "tilemeasure/lattice.hpp"
#include "tilemeasure/ratlin.hpp"

namespace tilemeasure {

/// mu(F_v) for every vertex of a left-resolving graph, indexed like its vertices.
using MuVector = std::vector<Rational>;

/// Uniform Bernoulli measures of the path sets F_v of a left-resolving graph
/// over an alphabet of the given size. Source components get 1 if every
/// vertex has an internal incoming edge for every letter and 0 otherwise;
/// the rest follow from |C| mu_v = sum over edges u -> v of mu_u, solved one
/// component at a time in topological order. Throws InternalInconsistency if
/// the result fails the balance equation or leaves [0, 1].
MuVector mu_vector(std::size_t vertex_count, std::size_t alphabet_size, std::span<const Edge> edges);

template <class V, class L>
MuVector mu_vector(const LabeledGraph<V, L>& g)
{
	return mu_vector(g.vertex_count(), g.alphabet().size(), g.edges());
}

/// Exact check of |C| mu_v == sum_{u -> v} mu_u and 0 <= mu_v <= 1.
bool satisfies_balance(std::size_t vertex_count, std::size_t alphabet_size, std::span<const Edge> edges,
	const MuVector& mu);

/// Some strongly connected component in which every vertex has an internal
/// incoming edge for every letter.
bool has_full_component(std::size_t vertex_count, std::size_t alphabet_size, std::span<const Edge> edges);

struct MeasureOptions {
	std::size_t subset_cap = 1'000'000;
	std::size_t power_cap = 64;
	std::size_t box_cap = 50'000'000;
	TransversalChoice choice = {};
};

struct MeasureReport {
	Rational value;
	std::string decimal;
	std::size_t nucleus_vertices = 0;
	std::size_t nucleus_edges = 0;
	std::size_t subset_states = 0;
	DigitSet transversal;
	std::chrono::nanoseconds timing{0};
};

/// Digit system, ball bound and nucleus for (A, digits).
struct NucleusData {
	DigitSystem system;
	ContractionBound bound;
	PairGraph nucleus;
};

NucleusData build_nucleus(const IntMatrix& a, const DigitSet& digits, const MeasureOptions& options = {});

/// Everything computed on the way to lambda(T(A, D)).
struct SetAnalysis {
	NucleusData nucleus;
	DigitGraph digit_graph;  ///< N_D
	LeftResolved resolved;
	MuVector mu;             ///< on resolved.graph
	std::vector<Rational> vertex_mu; ///< mu(F_v) for each vertex of digit_graph
	Rational value;
};

SetAnalysis analyze(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options = {});

MeasureReport lebesgue_measure(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options = {});

/// lambda(T) > 0, decided structurally on the left-resolving graph.
bool positive_measure(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options = {});

/// lambda(T intersect (T + u)).
MeasureReport translate_intersection(const IntMatrix& a, const DigitSet& d, const LatticeVector& u,
	const MeasureOptions& options = {});

/// lambda(T(A, D1) intersect T(A, D2)).
MeasureReport pair_intersection(const IntMatrix& a, const DigitSet& d1, const DigitSet& d2,
	const MeasureOptions& options = {});

/// |D| == |det A| and lambda(T) > 0. Throws InternalInconsistency if such a
/// tile has non-integral measure.
bool is_tile(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options = {});

} // namespace tilemeasure

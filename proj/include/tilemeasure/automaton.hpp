#pragma once

// Labeled graphs over lattice vertices: the graph of digit-pair relations,
// its nucleus, the digit-restricted graph and its left-resolving
// (predecessor-subset) presentation, and labeled products.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tilemeasure/error.hpp"
#include "tilemeasure/lattice.hpp"
#include "tilemeasure/ratlin.hpp"

namespace tilemeasure {

struct Edge {
	std::uint32_t source;
	std::uint32_t target;
	std::uint32_t label; ///< index into the graph alphabet

	auto operator<=>(const Edge&) const = default;
};

struct PairLabel {
	LatticeVector x;
	LatticeVector y;

	auto operator<=>(const PairLabel&) const = default;
};

/// Sorted, nonempty set of vertex indices of an underlying graph.
using SubsetVertex = std::vector<std::uint32_t>;
using VertexPair = std::pair<std::uint32_t, std::uint32_t>;

/// Finite directed multigraph. Vertices and letters are stored as values;
/// edges refer to them by index. Edges are kept sorted and unique.
template <class V, class L>
class LabeledGraph {
public:
	using vertex_type = V;
	using label_type = L;

	LabeledGraph() = default;

	LabeledGraph(std::vector<V> vertices, std::vector<L> alphabet, std::vector<Edge> edges)
		: vertices_(std::move(vertices)), alphabet_(std::move(alphabet)), edges_(std::move(edges))
	{
		for (const auto& e : edges_)
			if (e.source >= vertices_.size() || e.target >= vertices_.size() || e.label >= alphabet_.size())
				throw Error(ErrorCode::InternalInconsistency, "edge refers to an undeclared vertex or letter");
		std::sort(edges_.begin(), edges_.end());
		edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
		for (std::uint32_t i = 0; i < vertices_.size(); ++i)
			if (!index_.emplace(vertices_[i], i).second)
				throw Error(ErrorCode::InternalInconsistency, "duplicate vertex");
	}

	std::size_t vertex_count() const noexcept { return vertices_.size(); }
	std::size_t edge_count() const noexcept { return edges_.size(); }
	const std::vector<V>& vertices() const noexcept { return vertices_; }
	const std::vector<L>& alphabet() const noexcept { return alphabet_; }
	const std::vector<Edge>& edges() const noexcept { return edges_; }

	/// Index of v, or vertex_count() if absent.
	std::size_t find(const V& v) const
	{
		auto it = index_.find(v);
		return it == index_.end() ? vertices_.size() : it->second;
	}
	bool contains(const V& v) const { return index_.count(v) != 0; }

private:
	std::vector<V> vertices_;
	std::vector<L> alphabet_;
	std::vector<Edge> edges_;
	std::map<V, std::uint32_t> index_;
};

using PairGraph = LabeledGraph<LatticeVector, PairLabel>;
using DigitGraph = LabeledGraph<LatticeVector, LatticeVector>;
using ResolvedGraph = LabeledGraph<SubsetVertex, LatticeVector>;
using ProductGraph = LabeledGraph<VertexPair, LatticeVector>;

// Graph utilities shared by the automaton and measure layers.

struct Components {
	std::vector<std::uint32_t> id; ///< component of each vertex; ids are in topological order
	std::size_t count = 0;
};

/// Tarjan's algorithm (iterative). Component ids are numbered so that every
/// edge between distinct components goes from a smaller to a larger id.
Components strongly_connected(std::size_t vertex_count, std::span<const Edge> edges);

/// Vertices lying on a cycle: nontrivial SCCs and vertices with a self-loop.
std::vector<bool> on_cycle(std::size_t vertex_count, std::span<const Edge> edges);

/// Whether no vertex has two incoming edges with the same label.
bool is_left_resolving(std::size_t vertex_count, std::span<const Edge> edges);

template <class V, class L>
bool is_left_resolving(const LabeledGraph<V, L>& g)
{
	return is_left_resolving(g.vertex_count(), g.edges());
}

/// Least power m with ||A^-m||_inf < 1, a rational bound theta on the induced
/// norm of A^-1 in the adapted norm
///     ||x||* = max_{0<=k<m} theta^-k ||A^-k x||_inf,
/// and the radius R = c / (1 - theta), c = max_{x,y in K} ||A^-1 (x - y)||*.
/// The ball ||u||* <= R holds every cycle of the digit-pair graph and is
/// closed under its edges.
class ContractionBound {
public:
	ContractionBound(const IntMatrix& a, const DigitSet& k, std::size_t power_cap = 64);

	std::size_t power() const noexcept { return power_; }
	const Rational& theta() const noexcept { return theta_; }
	const Rational& offset() const noexcept { return offset_; }
	const Rational& radius() const noexcept { return radius_; }
	const RatMatrix& inverse() const noexcept { return inverse_powers_.at(1); }
	/// A^-k for 0 <= k <= power().
	const RatMatrix& inverse_power(std::size_t k) const { return inverse_powers_.at(k); }

	Rational adapted_norm(std::span<const Rational> x) const;
	Rational adapted_norm(const LatticeVector& x) const;

	/// ||x||* <= R using integer arithmetic only.
	bool in_ball(const LatticeVector& x) const;

	/// max_{d in digits} ||A^-1 d||* / (1 - theta): every point of T(A, digits) lies in that ball.
	Rational attractor_radius(const DigitSet& digits) const;

private:
	std::size_t power_ = 0;
	Rational theta_;
	Rational offset_;
	Rational radius_;
	std::vector<RatMatrix> inverse_powers_;
	// in_ball: ||scaled_[k] x||_inf <= thresholds_[k], scaled_[k] = |det|^k A^-k.
	std::vector<IntMatrix> scaled_;
	std::vector<Integer> thresholds_;
};

ContractionBound contraction_bound(const IntMatrix& a, const DigitSet& k, std::size_t power_cap = 64);

/// Lattice points of the ball with every edge u -> (u + x - y) A^-1 of the
/// digit-pair graph. OpenMP-parallel over lattice points.
PairGraph build_gamma(const IntMatrix& a, const DigitSet& k, const ContractionBound& bound,
	std::size_t box_cap = 50'000'000);

/// Single-threaded reference for build_gamma using rational arithmetic.
PairGraph build_gamma_serial(const IntMatrix& a, const DigitSet& k, const ContractionBound& bound,
	std::size_t box_cap = 50'000'000);

/// Vertices on cycles plus everything reachable from them, with induced edges.
PairGraph nucleus(const PairGraph& g);

/// Keeps edges labeled (a, b) with a in C and b in D, relabeled by a. The
/// alphabet of the result is C; all vertices are kept.
DigitGraph restrict_to_cd(const PairGraph& g, const DigitSet& c, const DigitSet& d);

struct LeftResolved {
	ResolvedGraph graph;
	std::vector<std::uint32_t> embed; ///< vertex v of the input -> state {v}
};

/// Predecessor-subset construction from all singletons. Throws SubsetBlowup
/// when more than state_cap states would be created.
LeftResolved left_resolve(const DigitGraph& g, std::size_t state_cap = 1'000'000);

/// Vertex set V1 x V2 (row-major), an edge per pair of equally labeled edges.
template <class V1, class V2>
ProductGraph product_graph(const LabeledGraph<V1, LatticeVector>& g1, const LabeledGraph<V2, LatticeVector>& g2);

struct ProductAncestors {
	ProductGraph graph;
	std::vector<std::uint32_t> targets; ///< state index of each requested pair
};

/// The part of the labeled product of two left-resolving graphs that lies
/// backward-reachable from the given pairs. Values of F on those states are
/// the same as in the full product.
ProductAncestors product_ancestors(const ResolvedGraph& g1, const ResolvedGraph& g2,
	std::span<const VertexPair> targets, std::size_t state_cap = 1'000'000);

std::string format_vector(const LatticeVector& v);
std::string format_vertex(const LatticeVector& v);
std::string format_vertex(const SubsetVertex& s);
std::string format_vertex(const VertexPair& p);
std::string format_label(const LatticeVector& v);
std::string format_label(const PairLabel& p);

/// Graphviz rendering with vertices and edges in canonical (value) order.
template <class V, class L>
std::string export_dot(const LabeledGraph<V, L>& g);

// Implementation of the templates.

template <class V1, class V2>
ProductGraph product_graph(const LabeledGraph<V1, LatticeVector>& g1, const LabeledGraph<V2, LatticeVector>& g2)
{
	if (g1.alphabet() != g2.alphabet())
		throw Error(ErrorCode::AlphabetMismatch, "product of graphs over different alphabets");
	const auto n2 = static_cast<std::uint32_t>(g2.vertex_count());
	std::vector<VertexPair> vertices;
	vertices.reserve(g1.vertex_count() * g2.vertex_count());
	for (std::uint32_t i = 0; i < g1.vertex_count(); ++i)
		for (std::uint32_t j = 0; j < n2; ++j)
			vertices.emplace_back(i, j);
	std::vector<std::vector<const Edge*>> by_label(g2.alphabet().size());
	for (const auto& e : g2.edges())
		by_label[e.label].push_back(&e);
	std::vector<Edge> edges;
	for (const auto& e1 : g1.edges())
		for (const Edge* e2 : by_label[e1.label])
			edges.push_back({e1.source * n2 + e2->source, e1.target * n2 + e2->target, e1.label});
	return ProductGraph(std::move(vertices), g1.alphabet(), std::move(edges));
}

template <class V, class L>
std::string export_dot(const LabeledGraph<V, L>& g)
{
	std::vector<std::uint32_t> order(g.vertex_count());
	for (std::uint32_t i = 0; i < order.size(); ++i)
		order[i] = i;
	std::sort(order.begin(), order.end(),
		[&](auto x, auto y) { return g.vertices()[x] < g.vertices()[y]; });
	std::vector<Edge> edges = g.edges();
	std::sort(edges.begin(), edges.end(), [&](const Edge& x, const Edge& y) {
		const auto& vs = g.vertices();
		const auto& as = g.alphabet();
		if (vs[x.source] != vs[y.source])
			return vs[x.source] < vs[y.source];
		if (vs[x.target] != vs[y.target])
			return vs[x.target] < vs[y.target];
		return as[x.label] < as[y.label];
	});
	std::string out = "digraph G {\n";
	for (auto i : order)
		out += "  " + format_vertex(g.vertices()[i]) + ";\n";
	for (const auto& e : edges)
		out += "  " + format_vertex(g.vertices()[e.source]) + " -> " + format_vertex(g.vertices()[e.target])
			+ " [label=\"" + format_label(g.alphabet()[e.label]) + "\"];\n";
	out += "}\n";
	return out;
}

} // namespace tilemeasure

#include "tilemeasure/automaton.hpp"

#include <atomic>
#include <deque>
#include <limits>
#include <optional>
#include <set>

#include <omp.h>

namespace tilemeasure {

// Graph utilities

Components strongly_connected(std::size_t vertex_count, std::span<const Edge> edges)
{
	const std::size_t n = vertex_count;
	std::vector<std::uint32_t> start(n + 1, 0), adj(edges.size());
	for (const auto& e : edges)
		++start[e.source + 1];
	for (std::size_t i = 0; i < n; ++i)
		start[i + 1] += start[i];
	{
		auto fill = start;
		for (const auto& e : edges)
			adj[fill[e.source]++] = e.target;
	}

	constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();
	std::vector<std::uint32_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
	std::vector<std::uint32_t> stack, call, next_child(n, 0);
	std::vector<bool> on_stack(n, false);
	std::uint32_t counter = 0, comps = 0;

	for (std::uint32_t root = 0; root < n; ++root) {
		if (index[root] != unvisited)
			continue;
		call.push_back(root);
		index[root] = low[root] = counter++;
		stack.push_back(root);
		on_stack[root] = true;
		next_child[root] = start[root];
		while (!call.empty()) {
			std::uint32_t v = call.back();
			if (next_child[v] < start[v + 1]) {
				std::uint32_t w = adj[next_child[v]++];
				if (index[w] == unvisited) {
					index[w] = low[w] = counter++;
					stack.push_back(w);
					on_stack[w] = true;
					next_child[w] = start[w];
					call.push_back(w);
				} else if (on_stack[w]) {
					low[v] = std::min(low[v], index[w]);
				}
				continue;
			}
			call.pop_back();
			if (!call.empty())
				low[call.back()] = std::min(low[call.back()], low[v]);
			if (low[v] == index[v]) {
				std::uint32_t w;
				do {
					w = stack.back();
					stack.pop_back();
					on_stack[w] = false;
					comp[w] = comps;
				} while (w != v);
				++comps;
			}
		}
	}
	// Tarjan completes sinks first; flip to get sources first.
	Components out;
	out.count = comps;
	out.id.resize(n);
	for (std::size_t v = 0; v < n; ++v)
		out.id[v] = comps - 1 - comp[v];
	return out;
}

std::vector<bool> on_cycle(std::size_t vertex_count, std::span<const Edge> edges)
{
	auto comps = strongly_connected(vertex_count, edges);
	std::vector<std::size_t> size(comps.count, 0);
	for (auto c : comps.id)
		++size[c];
	std::vector<bool> cyclic(comps.count, false);
	for (std::size_t c = 0; c < comps.count; ++c)
		cyclic[c] = size[c] > 1;
	for (const auto& e : edges)
		if (e.source == e.target)
			cyclic[comps.id[e.source]] = true;
	std::vector<bool> out(vertex_count);
	for (std::size_t v = 0; v < vertex_count; ++v)
		out[v] = cyclic[comps.id[v]];
	return out;
}

bool is_left_resolving(std::size_t vertex_count, std::span<const Edge> edges)
{
	std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
	for (const auto& e : edges) {
		if (e.target >= vertex_count)
			return false;
		if (!seen.emplace(e.target, e.label).second)
			return false;
	}
	return true;
}

// Contraction bound

namespace {

// Smallest rational theta with theta^m >= norm: exact when norm is a perfect
// m-th power, otherwise a dyadic upper bound. Empty if the bound reaches 1.
std::optional<Rational> root_upper_bound(const Rational& norm, std::size_t m)
{
	const auto mm = static_cast<unsigned long>(m);
	Integer rn, rd;
	bool exact_n = mpz_root(rn.get_mpz_t(), norm.get_num_mpz_t(), mm) != 0;
	bool exact_d = mpz_root(rd.get_mpz_t(), norm.get_den_mpz_t(), mm) != 0;
	if (exact_n && exact_d)
		return make_rational(rn, rd);
	for (unsigned long bits = 16; bits <= 256; bits *= 2) {
		Integer scale = Integer(1) << static_cast<mp_bitcnt_t>(bits);
		Integer scale_m;
		mpz_pow_ui(scale_m.get_mpz_t(), scale.get_mpz_t(), mm);
		// k = ceil((norm * scale^m)^(1/m))
		Integer target = ceil(Rational(norm * scale_m));
		Integer k;
		mpz_root(k.get_mpz_t(), target.get_mpz_t(), mm);
		Integer km;
		mpz_pow_ui(km.get_mpz_t(), k.get_mpz_t(), mm);
		while (km < target) {
			++k;
			mpz_pow_ui(km.get_mpz_t(), k.get_mpz_t(), mm);
		}
		if (k < scale)
			return make_rational(k, scale);
	}
	return std::nullopt;
}

Rational pow(const Rational& q, std::size_t k)
{
	Rational out = 1;
	for (std::size_t i = 0; i < k; ++i)
		out *= q;
	return out;
}

} // namespace

ContractionBound::ContractionBound(const IntMatrix& a, const DigitSet& k, std::size_t power_cap)
{
	const std::size_t n = a.dim();
	if (!k.empty() && k.dim() != n)
		throw Error(ErrorCode::DimensionMismatch, "digit dimension differs from matrix dimension");
	RatMatrix inv = inverse_rational(a);
	inverse_powers_.push_back(RatMatrix::identity(n));
	std::optional<Rational> theta;
	for (std::size_t m = 1; m <= power_cap; ++m) {
		inverse_powers_.push_back(inverse_powers_.back() * inv);
		Rational norm = inverse_powers_.back().inf_norm();
		if (norm < 1 && (theta = root_upper_bound(norm, m))) {
			power_ = m;
			break;
		}
	}
	if (!theta)
		throw Error(ErrorCode::ExpansionPowerExceeded,
			"no power of the inverse up to " + std::to_string(power_cap) + " contracts");
	theta_ = *theta;

	Integer absdet = abs(det(a));
	Integer scale = 1;
	for (std::size_t j = 0; j < power_; ++j) {
		IntMatrix s(n);
		for (std::size_t r = 0; r < n; ++r)
			for (std::size_t c = 0; c < n; ++c) {
				Rational v = inverse_powers_[j](r, c) * scale;
				if (v.get_den() != 1)
					throw Error(ErrorCode::InternalInconsistency, "scaled inverse power is not integral");
				s(r, c) = v.get_num();
			}
		scaled_.push_back(std::move(s));
		scale *= absdet;
	}

	offset_ = 0;
	std::set<LatticeVector> diffs;
	for (const auto& x : k)
		for (const auto& y : k)
			diffs.insert(x - y);
	for (const auto& d : diffs) {
		auto img = inv * std::span<const std::int64_t>(d);
		offset_ = std::max(offset_, adapted_norm(img));
	}
	radius_ = offset_ / (1 - theta_);

	scale = 1;
	for (std::size_t j = 0; j < power_; ++j) {
		thresholds_.push_back(floor(Rational(radius_ * pow(theta_, j) * scale)));
		scale *= absdet;
	}
}

Rational ContractionBound::adapted_norm(std::span<const Rational> x) const
{
	Rational best = 0;
	Rational weight = 1; // theta^-k
	for (std::size_t j = 0; j < power_; ++j) {
		auto y = inverse_powers_[j] * x;
		best = std::max(best, Rational(weight * inf_norm(y)));
		weight /= theta_;
	}
	return best;
}

Rational ContractionBound::adapted_norm(const LatticeVector& x) const
{
	RationalVector q(x.size());
	for (std::size_t i = 0; i < x.size(); ++i)
		q[i] = Integer(static_cast<long>(x[i]));
	return adapted_norm(q);
}

bool ContractionBound::in_ball(const LatticeVector& x) const
{
	for (std::size_t j = 0; j < power_; ++j) {
		auto y = scaled_[j] * std::span<const std::int64_t>(x);
		for (const auto& v : y)
			if (abs(v) > thresholds_[j])
				return false;
	}
	return true;
}

Rational ContractionBound::attractor_radius(const DigitSet& digits) const
{
	Rational best = 0;
	for (const auto& d : digits)
		best = std::max(best, adapted_norm(inverse() * std::span<const std::int64_t>(d)));
	return best / (1 - theta_);
}

ContractionBound contraction_bound(const IntMatrix& a, const DigitSet& k, std::size_t power_cap)
{
	return ContractionBound(a, k, power_cap);
}

// Digit-pair graph

namespace {

struct Box {
	std::int64_t half = 0;   // coordinates in [-half, half]
	std::size_t dim = 0;
	std::size_t side = 0;
	std::size_t total = 0;

	LatticeVector point(std::size_t t) const
	{
		LatticeVector x(dim);
		for (std::size_t i = dim; i-- > 0;) {
			x[i] = static_cast<std::int64_t>(t % side) - half;
			t /= side;
		}
		return x;
	}

	// Position of x in the box, or total if outside.
	std::size_t index(const LatticeVector& x) const
	{
		std::size_t t = 0;
		for (std::size_t i = 0; i < dim; ++i) {
			if (x[i] < -half || x[i] > half)
				return total;
			t = t * side + static_cast<std::size_t>(x[i] + half);
		}
		return t;
	}
};

Box make_box(const ContractionBound& bound, std::size_t dim, std::size_t box_cap)
{
	Integer r = floor(bound.radius());
	Box box;
	box.dim = dim;
	if (!r.fits_slong_p() || r > 1'000'000'000)
		throw Error(ErrorCode::EnumerationCapExceeded, "nucleus radius too large to enumerate");
	box.half = r.get_si();
	box.side = static_cast<std::size_t>(2 * box.half + 1);
	box.total = 1;
	for (std::size_t i = 0; i < dim; ++i) {
		if (box.total > box_cap / box.side)
			throw Error(ErrorCode::EnumerationCapExceeded,
				"lattice box exceeds " + std::to_string(box_cap) + " points");
		box.total *= box.side;
	}
	return box;
}

std::vector<PairLabel> pair_alphabet(const DigitSet& k)
{
	std::vector<PairLabel> out;
	for (const auto& x : k)
		for (const auto& y : k)
			out.push_back({x, y});
	return out;
}

// 64-bit copy of an integer matrix when |m x| cannot overflow for |x|_inf <= bound.
std::optional<std::vector<std::int64_t>> narrow(const IntMatrix& m, std::int64_t bound)
{
	const std::size_t n = m.dim();
	Integer limit = Integer(1) << 62;
	Integer row_max = 0;
	std::vector<std::int64_t> out(n * n);
	for (std::size_t i = 0; i < n; ++i) {
		Integer row = 0;
		for (std::size_t j = 0; j < n; ++j) {
			if (!m(i, j).fits_slong_p())
				return std::nullopt;
			out[i * n + j] = m(i, j).get_si();
			row += abs(m(i, j));
		}
		row_max = std::max(row_max, row);
	}
	if (row_max * (bound + 1) >= limit)
		return std::nullopt;
	return out;
}

} // namespace

PairGraph build_gamma(const IntMatrix& a, const DigitSet& k, const ContractionBound& bound, std::size_t box_cap)
{
	const std::size_t n = a.dim();
	if (k.dim() != n)
		throw Error(ErrorCode::DimensionMismatch, "digit dimension differs from matrix dimension");
	const Box box = make_box(bound, n, box_cap);
	const auto labels = pair_alphabet(k);

	std::vector<char> inside(box.total, 0);
	#pragma omp parallel for schedule(static)
	for (std::int64_t t = 0; t < static_cast<std::int64_t>(box.total); ++t)
		inside[static_cast<std::size_t>(t)] = bound.in_ball(box.point(static_cast<std::size_t>(t))) ? 1 : 0;

	std::vector<LatticeVector> vertices;
	std::vector<std::int64_t> vertex_of(box.total, -1);
	for (std::size_t t = 0; t < box.total; ++t)
		if (inside[t]) {
			vertex_of[t] = static_cast<std::int64_t>(vertices.size());
			vertices.push_back(box.point(t));
		}

	// A^-1 = adj / absdet with adj integral.
	const Integer absdet = abs(det(a));
	IntMatrix adj(n);
	for (std::size_t r = 0; r < n; ++r)
		for (std::size_t c = 0; c < n; ++c)
			adj(r, c) = Rational(bound.inverse()(r, c) * absdet).get_num();
	std::vector<LatticeVector> deltas;
	std::int64_t delta_max = 0;
	for (const auto& l : labels) {
		deltas.push_back(l.x - l.y);
		delta_max = std::max(delta_max, linf_norm(deltas.back()));
	}
	const auto fast = absdet.fits_slong_p() ? narrow(adj, box.half + delta_max) : std::nullopt;
	const std::int64_t q = absdet.fits_slong_p() ? absdet.get_si() : 0;

	std::vector<std::vector<Edge>> out_edges(vertices.size());
	std::atomic<bool> escaped{false};
	#pragma omp parallel for schedule(dynamic, 64)
	for (std::int64_t vi = 0; vi < static_cast<std::int64_t>(vertices.size()); ++vi) {
		const auto& u = vertices[static_cast<std::size_t>(vi)];
		LatticeVector w(n), v(n);
		for (std::uint32_t l = 0; l < labels.size(); ++l) {
			for (std::size_t i = 0; i < n; ++i)
				w[i] = u[i] + deltas[l][i];
			bool integral = true;
			if (fast) {
				for (std::size_t i = 0; i < n && integral; ++i) {
					std::int64_t s = 0;
					for (std::size_t j = 0; j < n; ++j)
						s += (*fast)[i * n + j] * w[j];
					integral = s % q == 0;
					v[i] = s / q;
				}
			} else {
				auto s = adj * std::span<const std::int64_t>(w);
				for (std::size_t i = 0; i < n && integral; ++i) {
					integral = mpz_divisible_p(s[i].get_mpz_t(), absdet.get_mpz_t()) != 0;
					if (integral)
						v[i] = Integer(s[i] / absdet).get_si();
				}
			}
			if (!integral)
				continue;
			std::size_t t = box.index(v);
			if (t == box.total || vertex_of[t] < 0) {
				escaped = true;
				continue;
			}
			out_edges[static_cast<std::size_t>(vi)].push_back(
				{static_cast<std::uint32_t>(vi), static_cast<std::uint32_t>(vertex_of[t]), l});
		}
	}
	if (escaped)
		throw Error(ErrorCode::InternalInconsistency, "edge leaves the nucleus ball");

	std::vector<Edge> edges;
	for (auto& es : out_edges)
		edges.insert(edges.end(), es.begin(), es.end());
	return PairGraph(std::move(vertices), labels, std::move(edges));
}

PairGraph build_gamma_serial(const IntMatrix& a, const DigitSet& k, const ContractionBound& bound,
	std::size_t box_cap)
{
	const std::size_t n = a.dim();
	if (k.dim() != n)
		throw Error(ErrorCode::DimensionMismatch, "digit dimension differs from matrix dimension");
	const Box box = make_box(bound, n, box_cap);
	const auto labels = pair_alphabet(k);
	const RatMatrix& inv = bound.inverse();

	std::vector<LatticeVector> vertices;
	std::map<LatticeVector, std::uint32_t> index;
	for (std::size_t t = 0; t < box.total; ++t) {
		auto x = box.point(t);
		if (bound.adapted_norm(x) <= bound.radius()) {
			index.emplace(x, static_cast<std::uint32_t>(vertices.size()));
			vertices.push_back(std::move(x));
		}
	}
	std::vector<Edge> edges;
	for (std::uint32_t ui = 0; ui < vertices.size(); ++ui) {
		for (std::uint32_t l = 0; l < labels.size(); ++l) {
			auto w = vertices[ui] + labels[l].x - labels[l].y;
			auto v = inv * std::span<const std::int64_t>(w);
			if (!std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; }))
				continue;
			auto it = index.find(to_lattice(v));
			if (it == index.end())
				throw Error(ErrorCode::InternalInconsistency, "edge leaves the nucleus ball");
			edges.push_back({ui, it->second, l});
		}
	}
	return PairGraph(std::move(vertices), labels, std::move(edges));
}

// Nucleus and restriction

PairGraph nucleus(const PairGraph& g)
{
	const std::size_t n = g.vertex_count();
	auto keep = on_cycle(n, g.edges());
	std::vector<std::vector<std::uint32_t>> succ(n);
	for (const auto& e : g.edges())
		succ[e.source].push_back(e.target);
	std::deque<std::uint32_t> queue;
	for (std::uint32_t v = 0; v < n; ++v)
		if (keep[v])
			queue.push_back(v);
	while (!queue.empty()) {
		auto v = queue.front();
		queue.pop_front();
		for (auto w : succ[v])
			if (!keep[w]) {
				keep[w] = true;
				queue.push_back(w);
			}
	}
	std::vector<std::int64_t> remap(n, -1);
	std::vector<LatticeVector> vertices;
	for (std::uint32_t v = 0; v < n; ++v)
		if (keep[v]) {
			remap[v] = static_cast<std::int64_t>(vertices.size());
			vertices.push_back(g.vertices()[v]);
		}
	std::vector<Edge> edges;
	for (const auto& e : g.edges())
		if (keep[e.source] && keep[e.target])
			edges.push_back({static_cast<std::uint32_t>(remap[e.source]),
				static_cast<std::uint32_t>(remap[e.target]), e.label});
	return PairGraph(std::move(vertices), g.alphabet(), std::move(edges));
}

DigitGraph restrict_to_cd(const PairGraph& g, const DigitSet& c, const DigitSet& d)
{
	std::vector<Edge> edges;
	for (const auto& e : g.edges()) {
		const auto& label = g.alphabet()[e.label];
		std::size_t a = c.index_of(label.x);
		if (a == c.size() || !d.contains(label.y))
			continue;
		edges.push_back({e.source, e.target, static_cast<std::uint32_t>(a)});
	}
	return DigitGraph(g.vertices(), c.digits(), std::move(edges));
}

// Left-resolving presentation

LeftResolved left_resolve(const DigitGraph& g, std::size_t state_cap)
{
	const std::size_t n = g.vertex_count();
	const std::size_t letters = g.alphabet().size();
	std::vector<std::vector<std::uint32_t>> pred(n * letters);
	for (const auto& e : g.edges())
		pred[e.target * letters + e.label].push_back(e.source);

	std::vector<SubsetVertex> states;
	std::map<SubsetVertex, std::uint32_t> index;
	auto intern = [&](SubsetVertex s) {
		auto [it, fresh] = index.emplace(s, static_cast<std::uint32_t>(states.size()));
		if (fresh) {
			if (states.size() >= state_cap)
				throw Error(ErrorCode::SubsetBlowup,
					"left-resolving construction exceeds " + std::to_string(state_cap) + " states");
			states.push_back(std::move(s));
		}
		return it->second;
	};

	LeftResolved out;
	out.embed.resize(n);
	for (std::uint32_t v = 0; v < n; ++v)
		out.embed[v] = intern({v});

	std::vector<Edge> edges;
	for (std::size_t i = 0; i < states.size(); ++i) {
		for (std::uint32_t a = 0; a < letters; ++a) {
			SubsetVertex p;
			for (auto w : states[i]) {
				const auto& src = pred[w * letters + a];
				p.insert(p.end(), src.begin(), src.end());
			}
			if (p.empty())
				continue;
			std::sort(p.begin(), p.end());
			p.erase(std::unique(p.begin(), p.end()), p.end());
			auto s = intern(std::move(p));
			edges.push_back({s, static_cast<std::uint32_t>(i), a});
		}
	}
	out.graph = ResolvedGraph(std::move(states), g.alphabet(), std::move(edges));
	return out;
}

namespace {

std::vector<std::int64_t> predecessor_table(const ResolvedGraph& g)
{
	const std::size_t letters = g.alphabet().size();
	std::vector<std::int64_t> pred(g.vertex_count() * letters, -1);
	for (const auto& e : g.edges()) {
		auto& slot = pred[e.target * letters + e.label];
		if (slot >= 0)
			throw Error(ErrorCode::InternalInconsistency, "graph is not left-resolving");
		slot = e.source;
	}
	return pred;
}

} // namespace

ProductAncestors product_ancestors(const ResolvedGraph& g1, const ResolvedGraph& g2,
	std::span<const VertexPair> targets, std::size_t state_cap)
{
	if (g1.alphabet() != g2.alphabet())
		throw Error(ErrorCode::AlphabetMismatch, "product of graphs over different alphabets");
	const std::size_t letters = g1.alphabet().size();
	const auto pred1 = predecessor_table(g1);
	const auto pred2 = predecessor_table(g2);

	std::vector<VertexPair> states;
	std::map<VertexPair, std::uint32_t> index;
	auto intern = [&](VertexPair p) {
		auto [it, fresh] = index.emplace(p, static_cast<std::uint32_t>(states.size()));
		if (fresh) {
			if (states.size() >= state_cap)
				throw Error(ErrorCode::SubsetBlowup,
					"product construction exceeds " + std::to_string(state_cap) + " states");
			states.push_back(p);
		}
		return it->second;
	};

	ProductAncestors out;
	for (const auto& t : targets)
		out.targets.push_back(intern(t));
	std::vector<Edge> edges;
	for (std::size_t i = 0; i < states.size(); ++i) {
		const auto [s1, s2] = states[i];
		for (std::uint32_t a = 0; a < letters; ++a) {
			auto p1 = pred1[s1 * letters + a], p2 = pred2[s2 * letters + a];
			if (p1 < 0 || p2 < 0)
				continue;
			auto s = intern({static_cast<std::uint32_t>(p1), static_cast<std::uint32_t>(p2)});
			edges.push_back({s, static_cast<std::uint32_t>(i), a});
		}
	}
	out.graph = ProductGraph(std::move(states), g1.alphabet(), std::move(edges));
	return out;
}

// Formatting

std::string format_vector(const LatticeVector& v)
{
	if (v.size() == 1)
		return std::to_string(v[0]);
	std::string out = "(";
	for (std::size_t i = 0; i < v.size(); ++i) {
		if (i)
			out += ",";
		out += std::to_string(v[i]);
	}
	return out + ")";
}

std::string format_vertex(const LatticeVector& v)
{
	if (v.size() == 1)
		return std::to_string(v[0]);
	return "\"" + format_vector(v) + "\"";
}

std::string format_vertex(const SubsetVertex& s)
{
	std::string out = "\"{";
	for (std::size_t i = 0; i < s.size(); ++i) {
		if (i)
			out += ",";
		out += std::to_string(s[i]);
	}
	return out + "}\"";
}

std::string format_vertex(const VertexPair& p)
{
	return "\"(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")\"";
}

std::string format_label(const LatticeVector& v) { return format_vector(v); }

std::string format_label(const PairLabel& p)
{
	return "(" + format_vector(p.x) + "," + format_vector(p.y) + ")";
}

} // namespace tilemeasure

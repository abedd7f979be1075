#include "tilemeasure/measure.hpp"

#include <algorithm>

#include "tilemeasure/sparse.hpp"

namespace tilemeasure {

namespace {

struct Incoming {
	std::vector<std::uint32_t> start;
	std::vector<const Edge*> edges;

	Incoming(std::size_t vertex_count, std::span<const Edge> all) : start(vertex_count + 1, 0), edges(all.size())
	{
		for (const auto& e : all)
			++start[e.target + 1];
		for (std::size_t i = 0; i < vertex_count; ++i)
			start[i + 1] += start[i];
		auto fill = start;
		for (const auto& e : all)
			edges[fill[e.target]++] = &e;
	}

	std::span<const Edge* const> of(std::size_t v) const
	{
		return {edges.data() + start[v], edges.data() + start[v + 1]};
	}
};

// Vertices whose component has, at each of its vertices, an internal
// incoming edge for every letter.
std::vector<bool> full_components(const Components& comps, const Incoming& in, std::size_t vertex_count,
	std::size_t alphabet_size)
{
	std::vector<bool> full(comps.count, true);
	std::vector<char> seen(alphabet_size);
	for (std::size_t v = 0; v < vertex_count; ++v) {
		std::fill(seen.begin(), seen.end(), 0);
		std::size_t distinct = 0;
		for (const Edge* e : in.of(v))
			if (comps.id[e->source] == comps.id[v] && !seen[e->label]) {
				seen[e->label] = 1;
				++distinct;
			}
		if (distinct < alphabet_size)
			full[comps.id[v]] = false;
	}
	return full;
}

} // namespace

MuVector mu_vector(std::size_t vertex_count, std::size_t alphabet_size, std::span<const Edge> edges)
{
	if (!is_left_resolving(vertex_count, edges))
		throw Error(ErrorCode::InternalInconsistency, "mu_vector requires a left-resolving graph");
	const Rational letters(static_cast<long>(alphabet_size));
	const auto comps = strongly_connected(vertex_count, edges);
	const Incoming in(vertex_count, edges);

	std::vector<std::vector<std::uint32_t>> members(comps.count);
	for (std::uint32_t v = 0; v < vertex_count; ++v)
		members[comps.id[v]].push_back(v);
	std::vector<bool> fed(comps.count, false);
	for (const auto& e : edges)
		if (comps.id[e.source] != comps.id[e.target])
			fed[comps.id[e.target]] = true;
	const auto full = full_components(comps, in, vertex_count, alphabet_size);

	MuVector mu(vertex_count, Rational(0));
	std::vector<std::int64_t> local(vertex_count, -1);
	for (std::size_t c = 0; c < comps.count; ++c) {
		const auto& vs = members[c];
		if (!fed[c]) {
			if (full[c])
				for (auto v : vs)
					mu[v] = 1;
			continue;
		}
		// Inflow from components already solved.
		RationalVector rhs(vs.size());
		bool any_inflow = false;
		for (std::size_t i = 0; i < vs.size(); ++i)
			for (const Edge* e : in.of(vs[i]))
				if (comps.id[e->source] != c)
					rhs[i] += mu[e->source];
		for (const auto& r : rhs)
			any_inflow = any_inflow || r != 0;
		if (!any_inflow)
			continue;
		if (vs.size() == 1) {
			Rational self = 0;
			for (const Edge* e : in.of(vs[0]))
				if (e->source == vs[0])
					self += 1;
			mu[vs[0]] = rhs[0] / (letters - self);
			continue;
		}
		for (std::size_t i = 0; i < vs.size(); ++i)
			local[vs[i]] = static_cast<std::int64_t>(i);
		std::vector<SparseEntry> entries;
		for (std::uint32_t i = 0; i < vs.size(); ++i) {
			entries.push_back({i, i, static_cast<std::int64_t>(alphabet_size)});
			for (const Edge* e : in.of(vs[i]))
				if (comps.id[e->source] == c)
					entries.push_back({i, static_cast<std::uint32_t>(local[e->source]), -1});
		}
		auto x = solve_sparse(SparseMatrix(vs.size(), entries), rhs);
		for (std::size_t i = 0; i < vs.size(); ++i)
			mu[vs[i]] = x[i];
	}
	if (!satisfies_balance(vertex_count, alphabet_size, edges, mu))
		throw Error(ErrorCode::InternalInconsistency, "measure vector fails the balance equation");
	return mu;
}

bool satisfies_balance(std::size_t vertex_count, std::size_t alphabet_size, std::span<const Edge> edges,
	const MuVector& mu)
{
	if (mu.size() != vertex_count)
		return false;
	std::vector<Rational> inflow(vertex_count, Rational(0));
	for (const auto& e : edges)
		inflow[e.target] += mu[e.source];
	const Rational letters(static_cast<long>(alphabet_size));
	for (std::size_t v = 0; v < vertex_count; ++v) {
		if (mu[v] < 0 || mu[v] > 1)
			return false;
		if (letters * mu[v] != inflow[v])
			return false;
	}
	return true;
}

bool has_full_component(std::size_t vertex_count, std::size_t alphabet_size, std::span<const Edge> edges)
{
	const auto comps = strongly_connected(vertex_count, edges);
	const Incoming in(vertex_count, edges);
	const auto full = full_components(comps, in, vertex_count, alphabet_size);
	return alphabet_size > 0 && std::find(full.begin(), full.end(), true) != full.end();
}

NucleusData build_nucleus(const IntMatrix& a, const DigitSet& digits, const MeasureOptions& options)
{
	DigitSystem system = extend_digits(a, digits, options.choice);
	ContractionBound bound(a, system.k, options.power_cap);
	PairGraph gamma = build_gamma(a, system.k, bound, options.box_cap);
	return {std::move(system), std::move(bound), nucleus(gamma)};
}

SetAnalysis analyze(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options)
{
	NucleusData nd = build_nucleus(a, d, options);
	DigitGraph digit_graph = restrict_to_cd(nd.nucleus, nd.system.c, d);
	LeftResolved resolved = left_resolve(digit_graph, options.subset_cap);
	MuVector mu = mu_vector(resolved.graph);
	std::vector<Rational> vertex_mu;
	Rational value = 0;
	for (auto s : resolved.embed) {
		vertex_mu.push_back(mu[s]);
		value += mu[s];
	}
	return {std::move(nd), std::move(digit_graph), std::move(resolved), std::move(mu), std::move(vertex_mu), value};
}

namespace {

using Clock = std::chrono::steady_clock;

MeasureReport make_report(const Rational& value, const NucleusData& nd, std::size_t states, Clock::time_point t0)
{
	MeasureReport r;
	r.value = value;
	r.decimal = to_decimal(value);
	r.nucleus_vertices = nd.nucleus.vertex_count();
	r.nucleus_edges = nd.nucleus.edge_count();
	r.subset_states = states;
	r.transversal = nd.system.c;
	r.timing = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0);
	return r;
}

} // namespace

MeasureReport lebesgue_measure(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options)
{
	auto t0 = Clock::now();
	auto an = analyze(a, d, options);
	return make_report(an.value, an.nucleus, an.resolved.graph.vertex_count(), t0);
}

bool positive_measure(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options)
{
	NucleusData nd = build_nucleus(a, d, options);
	LeftResolved resolved = left_resolve(restrict_to_cd(nd.nucleus, nd.system.c, d), options.subset_cap);
	const auto& g = resolved.graph;
	return has_full_component(g.vertex_count(), g.alphabet().size(), g.edges());
}

MeasureReport translate_intersection(const IntMatrix& a, const DigitSet& d, const LatticeVector& u,
	const MeasureOptions& options)
{
	auto t0 = Clock::now();
	if (u.size() != a.dim())
		throw Error(ErrorCode::DimensionMismatch, "translation dimension differs from matrix dimension");
	NucleusData nd = build_nucleus(a, d, options);
	DigitGraph digit_graph = restrict_to_cd(nd.nucleus, nd.system.c, d);

	std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
	for (std::uint32_t v1 = 0; v1 < digit_graph.vertex_count(); ++v1) {
		auto v2 = digit_graph.find(digit_graph.vertices()[v1] + u);
		if (v2 != digit_graph.vertex_count())
			pairs.emplace_back(v1, static_cast<std::uint32_t>(v2));
	}
	if (pairs.empty())
		return make_report(0, nd, 0, t0);

	LeftResolved resolved = left_resolve(digit_graph, options.subset_cap);
	std::vector<VertexPair> targets;
	for (auto [v1, v2] : pairs)
		targets.emplace_back(resolved.embed[v1], resolved.embed[v2]);
	auto product = product_ancestors(resolved.graph, resolved.graph, targets, options.subset_cap);
	MuVector mu = mu_vector(product.graph);
	Rational value = 0;
	for (auto t : product.targets)
		value += mu[t];
	return make_report(value, nd, product.graph.vertex_count(), t0);
}

MeasureReport pair_intersection(const IntMatrix& a, const DigitSet& d1, const DigitSet& d2,
	const MeasureOptions& options)
{
	auto t0 = Clock::now();
	if (d1.dim() != d2.dim())
		throw Error(ErrorCode::DimensionMismatch, "digit sets of different dimension");
	std::vector<LatticeVector> joined = d1.digits();
	for (const auto& x : d2)
		if (!d1.contains(x))
			joined.push_back(x);
	NucleusData nd = build_nucleus(a, DigitSet(std::move(joined)), options);
	LeftResolved r1 = left_resolve(restrict_to_cd(nd.nucleus, nd.system.c, d1), options.subset_cap);
	LeftResolved r2 = left_resolve(restrict_to_cd(nd.nucleus, nd.system.c, d2), options.subset_cap);
	std::vector<VertexPair> targets;
	for (std::size_t v = 0; v < nd.nucleus.vertex_count(); ++v)
		targets.emplace_back(r1.embed[v], r2.embed[v]);
	auto product = product_ancestors(r1.graph, r2.graph, targets, options.subset_cap);
	MuVector mu = mu_vector(product.graph);
	Rational value = 0;
	for (auto t : product.targets)
		value += mu[t];
	return make_report(value, nd, product.graph.vertex_count(), t0);
}

bool is_tile(const IntMatrix& a, const DigitSet& d, const MeasureOptions& options)
{
	Integer absdet = abs(det(a));
	if (Integer(static_cast<unsigned long>(d.size())) != absdet)
		return false;
	if (!positive_measure(a, d, options))
		return false;
	auto report = lebesgue_measure(a, d, options);
	if (report.value.get_den() != 1)
		throw Error(ErrorCode::InternalInconsistency,
			"tile with non-integral measure " + to_fraction_string(report.value));
	return true;
}

} // namespace tilemeasure

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "tilemeasure/automaton.hpp"
#include "tilemeasure/error.hpp"
#include "tilemeasure/oracle.hpp"

namespace tilemeasure::cli {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::int64_t as_int(const json& v, const std::string& where)
{
	if (!v.is_number_integer())
		parse_fail(where + ": expected an integer");
	if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
		parse_fail(where + ": integer out of range");
	return v.get<std::int64_t>();
}

std::size_t as_count(const json& v, const std::string& where)
{
	auto x = as_int(v, where);
	if (x < 0)
		parse_fail(where + ": expected a nonnegative integer");
	return static_cast<std::size_t>(x);
}

LatticeVector as_vector(const json& v, std::size_t n, const std::string& where)
{
	// One-dimensional vectors may be written as bare integers.
	if (n == 1 && v.is_number())
		return {as_int(v, where)};
	if (!v.is_array())
		parse_fail(where + ": expected an array of integers");
	if (v.size() != n)
		parse_fail(where + ": expected " + std::to_string(n) + " coordinates");
	LatticeVector out;
	for (const auto& x : v)
		out.push_back(as_int(x, where));
	return out;
}

DigitSet as_digits(const json& v, std::size_t n, const std::string& where)
{
	if (!v.is_array() || v.empty())
		parse_fail(where + ": expected a nonempty array of digits");
	std::vector<LatticeVector> out;
	for (std::size_t i = 0; i < v.size(); ++i)
		out.push_back(as_vector(v[i], n, where + "[" + std::to_string(i) + "]"));
	std::set<LatticeVector> seen;
	for (const auto& d : out)
		if (!seen.insert(d).second)
			parse_fail(where + ": duplicate digit " + format_vector(d));
	return DigitSet(std::move(out));
}

std::string as_fraction_text(const json& v, const std::string& where)
{
	if (v.is_string()) {
		parse_fraction(v.get<std::string>());
		return v.get<std::string>();
	}
	if (v.is_number_integer())
		return std::to_string(v.get<std::int64_t>());
	if (v.is_number_float()) {
		Rational q(v.get<double>());
		return to_fraction_string(q);
	}
	parse_fail(where + ": expected a fraction string or a number");
}

json vector_json(const LatticeVector& v)
{
	json out = json::array();
	for (auto x : v)
		out.push_back(x);
	return out;
}

} // namespace

ProblemSpec parse_problem(const json& doc)
{
	if (!doc.is_object())
		parse_fail("problem must be a JSON object");
	static const std::set<std::string> known{"matrix", "digits", "digits2", "translate", "options"};
	for (const auto& [key, _] : doc.items())
		if (!known.count(key))
			parse_fail("unknown key '" + key + "'");
	if (!doc.contains("matrix") || !doc.contains("digits"))
		parse_fail("problem needs 'matrix' and 'digits'");

	ProblemSpec spec;
	const auto& m = doc["matrix"];
	if (!m.is_array() || m.empty())
		parse_fail("matrix: expected a nonempty array of rows");
	const std::size_t n = m.size();
	for (std::size_t i = 0; i < n; ++i) {
		const auto& row = m[i];
		if (!row.is_array() || row.size() != n)
			parse_fail("matrix: must be square");
		std::vector<std::int64_t> r;
		for (const auto& x : row)
			r.push_back(as_int(x, "matrix"));
		spec.rows.push_back(std::move(r));
	}
	spec.matrix = IntMatrix::from_rows(spec.rows);
	spec.digits = as_digits(doc["digits"], n, "digits");
	if (doc.contains("digits2"))
		spec.digits2 = as_digits(doc["digits2"], n, "digits2");
	if (doc.contains("translate"))
		spec.translate = as_vector(doc["translate"], n, "translate");

	if (doc.contains("options")) {
		const auto& o = doc["options"];
		if (!o.is_object())
			parse_fail("options: expected an object");
		auto& opt = spec.options;
		for (const auto& [key, v] : o.items()) {
			if (key == "subset_cap")
				opt.subset_cap = as_count(v, key);
			else if (key == "power_cap")
				opt.power_cap = as_count(v, key);
			else if (key == "oracle_depth")
				opt.oracle_depth = as_count(v, key);
			else if (key == "oracle_length")
				opt.oracle_length = as_count(v, key);
			else if (key == "grid_exponent")
				opt.grid_exponent = static_cast<int>(std::min<std::size_t>(as_count(v, key), 60));
			else if (key == "cylinder_tolerance")
				opt.cylinder_tolerance = as_fraction_text(v, key);
			else if (key == "cover_tolerance")
				opt.cover_tolerance = as_fraction_text(v, key);
			else if (key == "expected")
				opt.expected = as_fraction_text(v, key);
			else
				parse_fail("options: unknown key '" + key + "'");
		}
		if (opt.oracle_depth == 0)
			parse_fail("options: oracle_depth must be at least 1");
	}
	return spec;
}

ProblemSpec parse_problem_text(const std::string& text)
{
	json doc;
	try {
		doc = json::parse(text);
	} catch (const json::exception& e) {
		parse_fail(std::string("invalid JSON: ") + e.what());
	}
	return parse_problem(doc);
}

json to_json(const ResultDocument& doc)
{
	json t = json::array();
	for (const auto& v : doc.transversal)
		t.push_back(vector_json(v));
	json out = {
		{"op", doc.op},
		{"value", doc.value},
		{"decimal", doc.decimal},
		{"nucleus_vertices", doc.nucleus_vertices},
		{"nucleus_edges", doc.nucleus_edges},
		{"subset_states", doc.subset_states},
		{"transversal", t},
	};
	if (!doc.input.is_null())
		out["input"] = doc.input;
	return out;
}

ResultDocument parse_result(const json& doc)
{
	try {
		ResultDocument r;
		r.op = doc.at("op").get<std::string>();
		r.value = doc.at("value").get<std::string>();
		if (to_fraction_string(parse_fraction(r.value)) != r.value)
			parse_fail("value is not a reduced fraction");
		r.decimal = doc.at("decimal").get<std::string>();
		r.nucleus_vertices = doc.at("nucleus_vertices").get<std::size_t>();
		r.nucleus_edges = doc.at("nucleus_edges").get<std::size_t>();
		r.subset_states = doc.at("subset_states").get<std::size_t>();
		for (const auto& v : doc.at("transversal"))
			r.transversal.push_back(v.get<LatticeVector>());
		if (doc.contains("input"))
			r.input = doc["input"];
		return r;
	} catch (const json::exception& e) {
		parse_fail(std::string("malformed result document: ") + e.what());
	}
}

ResultDocument make_result(const std::string& op, const MeasureReport& report, const json& input)
{
	ResultDocument r;
	r.op = op;
	r.value = to_fraction_string(report.value);
	r.decimal = report.decimal;
	r.nucleus_vertices = report.nucleus_vertices;
	r.nucleus_edges = report.nucleus_edges;
	r.subset_states = report.subset_states;
	r.transversal = report.transversal.digits();
	r.input = input;
	return r;
}

namespace {

MeasureOptions measure_options(const ProblemSpec& spec)
{
	MeasureOptions o;
	o.subset_cap = spec.options.subset_cap;
	o.power_cap = spec.options.power_cap;
	return o;
}

json echo_input(const ProblemSpec& spec)
{
	json in;
	in["matrix"] = spec.rows;
	json d = json::array();
	for (const auto& v : spec.digits)
		d.push_back(vector_json(v));
	in["digits"] = d;
	if (spec.digits2) {
		json d2 = json::array();
		for (const auto& v : *spec.digits2)
			d2.push_back(vector_json(v));
		in["digits2"] = d2;
	}
	if (spec.translate)
		in["translate"] = vector_json(*spec.translate);
	return in;
}

void write_text(const std::string& path, const std::string& text)
{
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw std::runtime_error("cannot open '" + path + "' for writing");
	f << text;
}

int cmd_measure(const ProblemSpec& spec, const std::string& dot_path, std::ostream& out)
{
	auto options = measure_options(spec);
	auto an = analyze(spec.matrix, spec.digits, options);
	MeasureReport report;
	report.value = an.value;
	report.decimal = to_decimal(an.value);
	report.nucleus_vertices = an.nucleus.nucleus.vertex_count();
	report.nucleus_edges = an.nucleus.nucleus.edge_count();
	report.subset_states = an.resolved.graph.vertex_count();
	report.transversal = an.nucleus.system.c;
	if (!dot_path.empty())
		write_text(dot_path, export_dot(an.digit_graph));
	out << to_json(make_result("measure", report, echo_input(spec))).dump() << '\n';
	return kOk;
}

int cmd_intersect(const ProblemSpec& spec, std::ostream& out)
{
	if (spec.translate.has_value() == spec.digits2.has_value())
		parse_fail("intersect needs exactly one of 'translate' and 'digits2'");
	auto options = measure_options(spec);
	if (spec.translate) {
		auto r = translate_intersection(spec.matrix, spec.digits, *spec.translate, options);
		out << to_json(make_result("translate_intersection", r, echo_input(spec))).dump() << '\n';
	} else {
		auto r = pair_intersection(spec.matrix, spec.digits, *spec.digits2, options);
		out << to_json(make_result("pair_intersection", r, echo_input(spec))).dump() << '\n';
	}
	return kOk;
}

int cmd_nucleus(const ProblemSpec& spec, bool restricted, const std::string& dot_path, std::ostream& out)
{
	auto nd = build_nucleus(spec.matrix, spec.digits, measure_options(spec));
	std::string dot;
	std::size_t vertices = 0, edges = 0;
	if (restricted) {
		auto g = restrict_to_cd(nd.nucleus, nd.system.c, spec.digits);
		dot = export_dot(g);
		vertices = g.vertex_count();
		edges = g.edge_count();
	} else {
		dot = export_dot(nd.nucleus);
		vertices = nd.nucleus.vertex_count();
		edges = nd.nucleus.edge_count();
	}
	if (!dot_path.empty()) {
		write_text(dot_path, dot);
		json counts = {{"op", restricted ? "nucleus_restricted" : "nucleus"},
			{"vertices", vertices}, {"edges", edges}};
		out << counts.dump() << '\n';
	} else {
		out << "// vertices: " << vertices << "\n// edges: " << edges << '\n' << dot;
	}
	return kOk;
}

int cmd_check(const ProblemSpec& spec, std::ostream& out)
{
	const auto& opt = spec.options;
	auto options = measure_options(spec);
	auto an = analyze(spec.matrix, spec.digits, options);
	const Rational exact = an.value;
	bool pass = true;
	auto verdict = [&](bool ok) {
		pass = pass && ok;
		return ok ? "PASS" : "FAIL";
	};
	auto show = [](const Rational& q) { return to_fraction_string(q) + " (" + to_decimal(q) + ")"; };

	out << "op: check\n";
	out << "exact: " << show(exact) << '\n';

	// Cylinder counts bound each mu(F_v) from above.
	const Rational cyl_tol = parse_fraction(opt.cylinder_tolerance);
	auto bounds = cylinder_bounds(an.resolved.graph, opt.oracle_length);
	Rational cyl_total = 0, worst_gap = 0;
	bool above = true;
	for (std::size_t v = 0; v < an.resolved.embed.size(); ++v) {
		const auto& b = bounds[an.resolved.embed[v]].bound;
		cyl_total += b;
		above = above && b >= an.vertex_mu[v];
		worst_gap = std::max(worst_gap, Rational(b - an.vertex_mu[v]));
	}
	out << "cylinder[L=" << opt.oracle_length << "]: " << show(cyl_total) << " max_gap=" << to_decimal(worst_gap)
		<< " tol=" << to_decimal(cyl_tol) << ' ' << verdict(above && worst_gap <= cyl_tol) << '\n';

	CoverOptions cover;
	cover.depth = opt.oracle_depth;
	cover.grid_exponent = opt.grid_exponent;
	const Rational cover_tol = parse_fraction(opt.cover_tolerance);
	auto est = box_cover_estimate(spec.matrix, spec.digits, cover);
	Rational err = est.estimate - exact;
	Rational allowed = cover_tol * std::max(exact, Rational(1));
	out << "cover[depth=" << est.depth << ",grid=2^-" << est.grid_exponent << "]: " << show(est.estimate)
		<< " cells=" << est.cell_count << " tol=" << to_decimal(cover_tol) << ' '
		<< verdict(err >= 0 && err <= allowed) << '\n';

	bool tile_shape = Integer(static_cast<unsigned long>(spec.digits.size())) == an.nucleus.system.absdet;
	if (tile_shape && exact > 0)
		out << "tile: integer measure " << verdict(exact.get_den() == 1) << '\n';
	else
		out << "tile: no\n";

	if (opt.expected) {
		Rational want = parse_fraction(*opt.expected);
		out << "expected: " << to_fraction_string(want) << ' ' << verdict(want == exact) << '\n';
	}
	out << "result: " << (pass ? "PASS" : "FAIL") << '\n';
	return pass ? kOk : kCheckFailed;
}

int cmd_sample(const ProblemSpec& spec, std::size_t depth, const std::string& csv_path, std::ostream& out)
{
	if (csv_path.empty()) {
		write_samples_csv(out, spec.matrix, spec.digits, depth);
	} else {
		std::ostringstream buf;
		write_samples_csv(buf, spec.matrix, spec.digits, depth);
		write_text(csv_path, buf.str());
	}
	return kOk;
}

int exit_code_for(ErrorCode code)
{
	switch (code) {
	case ErrorCode::ParseError:
	case ErrorCode::InvalidDigits:
	case ErrorCode::DimensionMismatch:
	case ErrorCode::AlphabetMismatch:
		return kParseError;
	case ErrorCode::NotExpanding:
	case ErrorCode::SingularMatrix:
		return kNotExpanding;
	case ErrorCode::SubsetBlowup:
	case ErrorCode::ExpansionPowerExceeded:
	case ErrorCode::EnumerationCapExceeded:
		return kCapExceeded;
	case ErrorCode::InternalInconsistency:
		return kInternalError;
	}
	return kInternalError;
}

void report_error(std::ostream& err, std::string_view reason, const std::string& message)
{
	json line = {{"error", std::string(reason)}, {"message", message}};
	err << line.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Exact Lebesgue measure of integral self-affine sets"};
	app.require_subcommand(1);
	std::string spec_path;
	std::string dot_path;
	std::string csv_path;
	bool restricted = false;
	std::size_t sample_depth = 6;

	auto* measure = app.add_subcommand("measure", "lambda(T(A, D))");
	auto* intersect = app.add_subcommand("intersect", "lambda(T n (T + u)) or lambda(T(A, D1) n T(A, D2))");
	auto* nucleus_cmd = app.add_subcommand("nucleus", "DOT rendering of the nucleus");
	auto* check = app.add_subcommand("check", "exact value against the brute-force oracles");
	auto* sample = app.add_subcommand("sample", "CSV of truncated digit expansions");
	for (auto* sub : {measure, intersect, nucleus_cmd, check, sample})
		sub->add_option("spec", spec_path, "problem JSON file, or - for stdin")->required();
	measure->add_option("--dot", dot_path, "write the digit-restricted nucleus as DOT");
	nucleus_cmd->add_option("--dot", dot_path, "write DOT to this file and print counts as JSON");
	nucleus_cmd->add_flag("--restricted", restricted, "render the digit-restricted nucleus");
	sample->add_option("--depth", sample_depth, "expansion length");
	sample->add_option("--csv", csv_path, "output file (default stdout)");

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	} catch (const CLI::ParseError& e) {
		int code = app.exit(e, out, err);
		return code == 0 ? kOk : kParseError;
	}

	try {
		std::string text;
		if (spec_path == "-") {
			std::ostringstream buf;
			buf << in.rdbuf();
			text = buf.str();
		} else {
			std::ifstream f(spec_path, std::ios::binary);
			if (!f)
				parse_fail("cannot read '" + spec_path + "'");
			std::ostringstream buf;
			buf << f.rdbuf();
			text = buf.str();
		}
		ProblemSpec spec = parse_problem_text(text);
		if (*measure)
			return cmd_measure(spec, dot_path, out);
		if (*intersect)
			return cmd_intersect(spec, out);
		if (*nucleus_cmd)
			return cmd_nucleus(spec, restricted, dot_path, out);
		if (*check)
			return cmd_check(spec, out);
		return cmd_sample(spec, sample_depth, csv_path, out);
	} catch (const Error& e) {
		report_error(err, to_string(e.code()), e.what());
		return exit_code_for(e.code());
	} catch (const std::exception& e) {
		report_error(err, "IOError", e.what());
		return kParseError;
	}
}

} // namespace tilemeasure::cli

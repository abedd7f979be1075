#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tilemeasure/lattice.hpp"
#include "tilemeasure/measure.hpp"

namespace tilemeasure::cli {

enum ExitCode : int {
	kOk = 0,
	kCheckFailed = 1,
	kParseError = 2,
	kNotExpanding = 3,
	kCapExceeded = 4,
	kInternalError = 5,
};

struct ProblemOptions {
	std::size_t subset_cap = 1'000'000;
	std::size_t power_cap = 64;
	std::size_t oracle_depth = 10;
	std::size_t oracle_length = 12;
	int grid_exponent = -1;
	std::string cylinder_tolerance = "1/20";
	std::string cover_tolerance = "1/20";
	std::optional<std::string> expected;
};

struct ProblemSpec {
	IntMatrix matrix;
	std::vector<std::vector<std::int64_t>> rows;
	DigitSet digits;
	std::optional<DigitSet> digits2;
	std::optional<LatticeVector> translate;
	ProblemOptions options;
};

/// Throws Error(ParseError) or Error(InvalidDigits) on malformed input.
ProblemSpec parse_problem(const nlohmann::json& doc);
ProblemSpec parse_problem_text(const std::string& text);

struct ResultDocument {
	std::string op;
	std::string value; ///< "p/q"
	std::string decimal;
	std::size_t nucleus_vertices = 0;
	std::size_t nucleus_edges = 0;
	std::size_t subset_states = 0;
	std::vector<LatticeVector> transversal;
	nlohmann::json input;

	bool operator==(const ResultDocument&) const = default;
};

nlohmann::json to_json(const ResultDocument& doc);
ResultDocument parse_result(const nlohmann::json& doc);

ResultDocument make_result(const std::string& op, const MeasureReport& report, const nlohmann::json& input);

/// Runs a command line (args excludes the program name). Output goes to out,
/// diagnostics to err; stdin is read when the spec path is "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace tilemeasure::cli

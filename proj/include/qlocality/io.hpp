#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qlocality/errors.hpp"
#include "qlocality/locality.hpp"
#include "qlocality/quantum.hpp"
#include "qlocality/separability.hpp"

namespace qlocality::io {

using Json = nlohmann::json;

// Malformed or invalid input files. The message names the offending field or residual.
class FormatError : public Error {
public:
    using Error::Error;
};

// Matrices are nested row arrays of [re, im] pairs.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// {"dims": [dimA, dimB], "matrix": [[[re, im], ...], ...]}
Json to_json(const DensityOperator& rho);
DensityOperator state_from_json(const Json& j, double tol = kDefaultTolerance);

// {"dims": [dimA, dimB], "components": [{"weight": w, "rhoA": M, "rhoB": M}, ...]}
Json to_json(const SeparableComponents& c);
SeparableComponents decomposition_from_json(const Json& j);

// {"scenario": {"settings": [sA, sB], "outcomes": [oA, oB]}, "weights": [...],
//  "responseA": [mu][x][a], "responseB": [mu][y][b]}
Json to_json(const LocalModel& model);
LocalModel model_from_json(const Json& j);

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// {"scenario": ..., "p": [x][y][a][b]}
Json to_json(const BehaviorTable& b);
BehaviorTable behavior_from_json(const Json& j);

Json to_json(const DensityValidation& v);
Json to_json(const PptReport& r);
Json to_json(const LhvResult& r);
Json to_json(const ScanResult& r);
Json to_json(const SampleResult& r);
Json to_json(const ChshOptimum& o);

// Two-space indented text with a trailing newline. Doubles use the shortest representation
// that reads back to the same value.
std::string dump(const Json& j);
Json parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

// "fnv1a64:" followed by 16 hex digits.
std::string digest(std::string_view bytes);

// "start:stop:step" (inclusive, step > 0) or a comma-separated list of values.
std::vector<double> parse_grid(std::string_view text);

}  // namespace qlocality::io

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "consonance/bsa.hpp"
#include "consonance/contour.hpp"
#include "consonance/harness.hpp"
#include "consonance/outcome.hpp"
#include "consonance/possibility.hpp"
#include "consonance/rational.hpp"
#include "consonance/transducer.hpp"

// JSON and CSV encodings shared by the command-line tool and its callers.
namespace consonance::io {

using nlohmann::json;

enum class NumericMode { rational, decimal };

// "num/den" string in rational mode, JSON number otherwise.
json render(const Rational& r, NumericMode mode);
// Accepts "num/den" strings, decimal strings and JSON numbers.
Rational parse_rational(const json& j);

// {"labels":[...]} or {"lo":..,"hi":..,"num_points":..}
json space_to_json(const OutcomeSpace& space);
OutcomeSpace space_from_json(const json& j);

// Labels in index order; grid events as their point values.
json event_to_json(const Event& e, const OutcomeSpace& space);
Event event_from_json(const json& j, const FiniteOutcomeSpace& space);

// {"labels":[...]} or {"grid":{...}}, plus "pi" and "provenance".
json contour_to_json(const Contour& c, NumericMode mode);
Contour contour_from_json(const json& j);

// [{"event":["C"],"mass":"50/101"}, ...] in canonical event order.
json mass_to_json(const MassFunction& m, const FiniteOutcomeSpace& space, NumericMode mode);

// One observation per line under a `y` header. Labels are resolved against a
// finite space; grid spaces read real values.
Observations read_observations_csv(std::istream& in, const OutcomeSpace& space);
std::vector<std::int64_t> read_counts_csv(std::istream& in);

// Object or array of objects: {"family":"categorical","weights":[..]},
// {"family":"gaussian","mu":..,"sigma":..}, {"family":"poisson","lambda":..},
// {"family":"polya-urn","initial":[..],"reinforcement":..}.
std::vector<ProcessSpec> process_specs_from_json(const json& j);
json process_spec_to_json(const ProcessSpec& spec);

// [{"a":2,"b":1}, ...]
std::vector<GammaParams> gamma_params_from_json(const json& j);

// family,n,alpha,trials,hits,coverage,se,pass
void write_coverage_csv(std::ostream& out, std::span<const CoverageReport> reports);

json read_json_file(const std::string& path);

}  // namespace consonance::io

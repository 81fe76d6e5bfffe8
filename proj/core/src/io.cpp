#include "consonance/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "consonance/error.hpp"

namespace consonance::io {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> read_y_column(std::istream& in) {
  std::string line;
  bool header = false;
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      CONSONANCE_REQUIRE(line == "y", ErrorCode::Parse, "data CSV must start with a 'y' header, got '" + line + "'");
      header = true;
      continue;
    }
    out.push_back(line);
  }
  CONSONANCE_REQUIRE(header, ErrorCode::Parse, "data CSV is missing its 'y' header");
  return out;
}

json grid_json(const GridOutcomeSpace& g) { return {{"lo", g.lo()}, {"hi", g.hi()}, {"num_points", g.size()}}; }

}  // namespace

json render(const Rational& r, NumericMode mode) {
  if (mode == NumericMode::rational) return r.str();
  return r.to_double();
}

Rational parse_rational(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return Rational::from_double(j.get<double>());
  throw Error(ErrorCode::Parse, "expected a number or \"num/den\" string, got " + j.dump());
}

json space_to_json(const OutcomeSpace& space) {
  if (const auto* fs = std::get_if<FiniteOutcomeSpace>(&space)) return {{"labels", fs->labels()}};
  return grid_json(std::get<GridOutcomeSpace>(space));
}

OutcomeSpace space_from_json(const json& j) {
  try {
    if (j.contains("labels")) return FiniteOutcomeSpace(j.at("labels").get<std::vector<std::string>>());
    const json& g = j.contains("grid") ? j.at("grid") : j;
    return GridOutcomeSpace(g.at("lo").get<double>(), g.at("hi").get<double>(), g.at("num_points").get<std::size_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad space JSON: ") + e.what());
  }
}

json event_to_json(const Event& e, const OutcomeSpace& space) {
  json out = json::array();
  if (const auto* fs = std::get_if<FiniteOutcomeSpace>(&space)) {
    for (auto i : e) out.push_back(fs->label(i));
  } else {
    const auto& g = std::get<GridOutcomeSpace>(space);
    for (auto i : e) out.push_back(g.point(i));
  }
  return out;
}

Event event_from_json(const json& j, const FiniteOutcomeSpace& space) {
  try {
    return event_from_labels(j.get<std::vector<std::string>>(), space);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad event JSON: ") + e.what());
  }
}

json contour_to_json(const Contour& c, NumericMode mode) {
  json out;
  if (const auto* fs = std::get_if<FiniteOutcomeSpace>(&c.space())) {
    out["labels"] = fs->labels();
  } else {
    out["grid"] = grid_json(std::get<GridOutcomeSpace>(c.space()));
  }
  json pi = json::array();
  for (const auto& v : c.values()) pi.push_back(render(v, mode));
  out["pi"] = std::move(pi);
  out["provenance"] = std::string(to_string(c.provenance()));
  return out;
}

Contour contour_from_json(const json& j) {
  try {
    auto space = space_from_json(j);
    std::vector<Rational> values;
    for (const auto& v : j.at("pi")) values.push_back(parse_rational(v));
    const auto provenance =
        j.contains("provenance") ? provenance_from_string(j.at("provenance").get<std::string>()) : Provenance::analytic;
    return {std::move(space), std::move(values), provenance};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad contour JSON: ") + e.what());
  }
}

json mass_to_json(const MassFunction& m, const FiniteOutcomeSpace& space, NumericMode mode) {
  const auto order = canonical_masks(m.space_size());
  json out = json::array();
  for (auto mask : order) {
    const auto it = m.by_mask().find(mask);
    if (it == m.by_mask().end()) continue;
    out.push_back({{"event", event_labels(Event::from_mask(mask, m.space_size()), space)},
                   {"mass", render(it->second, mode)}});
  }
  return out;
}

Observations read_observations_csv(std::istream& in, const OutcomeSpace& space) {
  const auto cells = read_y_column(in);
  if (const auto* fs = std::get_if<FiniteOutcomeSpace>(&space)) {
    std::vector<std::size_t> labels;
    labels.reserve(cells.size());
    for (const auto& c : cells) labels.push_back(fs->index_of(c));
    return labels;
  }
  std::vector<double> values;
  values.reserve(cells.size());
  for (const auto& c : cells) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(c, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    CONSONANCE_REQUIRE(used == c.size(), ErrorCode::Parse, "not a number: '" + c + "'");
    values.push_back(v);
  }
  return values;
}

std::vector<std::int64_t> read_counts_csv(std::istream& in) {
  std::vector<std::int64_t> out;
  for (const auto& c : read_y_column(in)) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(c, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    CONSONANCE_REQUIRE(used == c.size(), ErrorCode::Parse, "not an integer count: '" + c + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<ProcessSpec> process_specs_from_json(const json& j) {
  if (j.is_array()) {
    std::vector<ProcessSpec> out;
    for (const auto& item : j) {
      auto one = process_specs_from_json(item);
      out.insert(out.end(), one.begin(), one.end());
    }
    return out;
  }
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "categorical") return {ProcessSpec::categorical(j.at("weights").get<std::vector<double>>())};
    if (family == "gaussian") return {ProcessSpec::gaussian(j.value("mu", 0.0), j.value("sigma", 1.0))};
    if (family == "poisson") return {ProcessSpec::poisson(j.at("lambda").get<double>())};
    if (family == "polya-urn") {
      return {ProcessSpec::polya_urn(j.at("initial").get<std::vector<double>>(), j.value("reinforcement", 1.0))};
    }
    throw Error(ErrorCode::InvalidSpec, "unknown process family '" + family + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("bad process spec: ") + e.what());
  }
}

json process_spec_to_json(const ProcessSpec& spec) {
  json out{{"family", std::string(to_string(spec.family))}};
  switch (spec.family) {
    case ProcessFamily::categorical: out["weights"] = spec.weights; break;
    case ProcessFamily::gaussian:
      out["mu"] = spec.mu;
      out["sigma"] = spec.sigma;
      break;
    case ProcessFamily::poisson: out["lambda"] = spec.lambda; break;
    case ProcessFamily::polya_urn:
      out["initial"] = spec.weights;
      out["reinforcement"] = spec.reinforcement;
      break;
  }
  return out;
}

std::vector<GammaParams> gamma_params_from_json(const json& j) {
  CONSONANCE_REQUIRE(j.is_array() && !j.empty(), ErrorCode::Parse, "priors must be a non-empty JSON array");
  std::vector<GammaParams> out;
  try {
    for (const auto& item : j) {
      GammaParams g{item.at("a").get<double>(), item.at("b").get<double>()};
      g.validate();
      out.push_back(g);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad prior JSON: ") + e.what());
  }
  return out;
}

void write_coverage_csv(std::ostream& out, std::span<const CoverageReport> reports) {
  out << "family,n,alpha,trials,hits,coverage,se,pass\n";
  for (const auto& r : reports) {
    out << r.family << ',' << r.n << ',' << r.alpha.to_double() << ',' << r.trials << ',' << r.hits << ','
        << std::setprecision(6) << r.empirical_coverage << ',' << r.standard_error << ',' << (r.pass ? "true" : "false")
        << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

}  // namespace consonance::io

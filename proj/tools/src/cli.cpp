#include "consonance_cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "consonance/consonance.hpp"

namespace consonance::cli {
namespace {

using io::json;

// Fixed so that `table1` is reproducible without flags; --seed overrides it.
constexpr std::uint64_t kTable1Seed = 101;

Rational parse_alpha(const std::string& text) {
  Rational a;
  try {
    a = Rational::parse(text);
  } catch (const Error&) {
    throw UsageError("BadValue", "--alpha expects a number, got '" + text + "'");
  }
  if (a < Rational(0) || a > Rational(1)) throw UsageError("AlphaOutOfRange", "--alpha must lie in [0, 1], got " + text);
  return a;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(10) << v;
  return o.str();
}

std::string fmt(const Rational& r, NumericMode mode) { return mode == NumericMode::rational ? r.str() : fmt(r.to_double()); }

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) out << std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << '\n';
  }
}

std::string braces(const std::vector<std::string>& labels) {
  std::string s = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i];
  return s + "}";
}

std::string event_text(const Event& e, const OutcomeSpace& space) {
  std::vector<std::string> parts;
  for (const auto& v : io::event_to_json(e, space)) parts.push_back(v.is_string() ? v.get<std::string>() : fmt(v.get<double>()));
  return braces(parts);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return in;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  f << text;
  if (!f) throw std::ios_base::failure("write failed for " + path);
}

Contour load_contour(const std::string& path) { return io::contour_from_json(io::read_json_file(path)); }

// Emits `doc` as JSON on stdout when --json is set; otherwise runs `human`.
template <class F>
void emit(const RunConfig& cfg, std::ostream& out, const json& doc, F&& human) {
  if (cfg.json) {
    out << doc.dump(2) << '\n';
  } else {
    human();
  }
}

json event_list(const std::vector<Event>& events, const OutcomeSpace& space) {
  json out = json::array();
  for (const auto& e : events) out.push_back(io::event_to_json(e, space));
  return out;
}

// ---------------------------------------------------------------- transduce

int run_transduce(const RunConfig& cfg, std::ostream& out) {
  const auto space = io::space_from_json(io::read_json_file(cfg.space));
  const bool finite = std::holds_alternative<FiniteOutcomeSpace>(space);
  if (!finite && cfg.numeric_explicit && cfg.numeric == NumericMode::rational) {
    throw UsageError("BadValue", "rational output is only available for finite label spaces");
  }
  const NumericMode mode = finite ? cfg.numeric : NumericMode::decimal;

  auto in = open_input(cfg.data);
  const auto data = io::read_observations_csv(in, space);
  const auto psi =
      cfg.psi == "mean-abs" ? NonconformityMeasure::mean_abs() : NonconformityMeasure::one_minus_empirical();

  ConformalResult result = finite
      ? transduce_grid(std::get<std::vector<std::size_t>>(data), std::get<FiniteOutcomeSpace>(space), psi)
      : transduce_grid(std::get<std::vector<double>>(data), std::get<GridOutcomeSpace>(space), psi);
  Contour contour = result.contour;
  if (cfg.adjust == "prime") contour = adjust_prime(contour);
  if (cfg.adjust == "double-prime") contour = adjust_double_prime(contour);

  const json doc = io::contour_to_json(contour, mode);
  if (!cfg.out.empty()) write_file(cfg.out, doc.dump(2) + "\n");
  emit(cfg, out, doc, [&] {
    std::vector<std::vector<std::string>> rows{{"outcome", "pi"}};
    for (std::size_t i = 0; i < contour.size(); ++i) {
      rows.push_back({event_text(Event({i}, contour.size()), contour.space()), fmt(contour[i], mode)});
    }
    print_table(out, rows);
    out << "n = " << result.n << ", provenance = " << to_string(contour.provenance())
        << (contour.is_consonant() ? ", consonant\n" : ", not consonant\n");
  });
  return kExitOk;
}

// -------------------------------------------------------------- possibility

int run_possibility(const RunConfig& cfg, std::ostream& out) {
  const Contour c = load_contour(cfg.contour);
  const auto& space = c.finite_space();
  const std::size_t k = space.size();
  const NumericMode mode = cfg.numeric;

  if (cfg.action == "upper" || cfg.action == "lower") {
    const bool upper = cfg.action == "upper";
    std::vector<Event> events;
    if (!cfg.event.empty()) {
      events.push_back(event_from_labels(split(cfg.event, ','), space));
    } else {
      events = enumerate_events(space);
    }
    json doc = json::array();
    std::vector<std::vector<std::string>> rows{{"event", cfg.action}};
    for (const auto& e : events) {
      const Rational v = upper ? upper_prob(c, e) : lower_prob(c, e);
      doc.push_back({{"event", event_labels(e, space)}, {cfg.action, io::render(v, mode)}});
      rows.push_back({braces(event_labels(e, space)), fmt(v, mode)});
    }
    emit(cfg, out, doc, [&] { print_table(out, rows); });
    return kExitOk;
  }

  if (cfg.action == "mass" || cfg.action == "focal") {
    const auto bel = lower_table(c);
    const auto m = mass_from_belief<Rational>(bel, k);
    if (cfg.action == "mass") {
      const json doc = io::mass_to_json(m, space, mode);
      emit(cfg, out, doc, [&] {
        std::vector<std::vector<std::string>> rows{{"event", "mass"}};
        for (const auto& item : doc) {
          rows.push_back({braces(item["event"].get<std::vector<std::string>>()),
                          item["mass"].is_string() ? item["mass"].get<std::string>() : fmt(item["mass"].get<double>())});
        }
        print_table(out, rows);
      });
      return kExitOk;
    }
    const auto report = focal_elements(m);
    const json doc{{"focal", event_list(report.focal, c.space())}, {"nested", report.nested}};
    emit(cfg, out, doc, [&] {
      for (const auto& e : report.focal) out << event_text(e, c.space()) << '\n';
      out << (report.nested ? "focal elements are nested\n" : "focal elements are NOT nested\n");
    });
    return report.nested ? kExitOk : kExitCheckFailed;
  }

  if (cfg.action == "check-alt" || cfg.action == "check-mon") {
    const bool alt = cfg.action == "check-alt";
    const auto table = alt ? upper_table(c) : lower_table(c);
    const auto check = alt ? check_k_alternating(table, cfg.order, k) : check_k_monotone(table, cfg.order, k);
    json doc{{"property", alt ? "k-alternating" : "k-monotone"}, {"k", cfg.order}, {"holds", check.holds}};
    if (check.witness) {
      const auto& w = *check.witness;
      doc["witness"] = {{"event", event_labels(w.a, space)},
                        {"parts", event_list(w.parts, c.space())},
                        {"lhs", io::render(w.lhs, mode)},
                        {"rhs", io::render(w.rhs, mode)}};
    }
    emit(cfg, out, doc, [&] {
      out << (alt ? "upper probability " : "lower probability ") << (check.holds ? "is " : "is NOT ") << cfg.order
          << (alt ? "-alternating\n" : "-monotone\n");
      if (check.witness) {
        const auto& w = *check.witness;
        out << "witness: A = " << event_text(w.a, c.space()) << ", parts =";
        for (const auto& p : w.parts) out << ' ' << event_text(p, c.space());
        out << ", nu(A) = " << fmt(w.lhs, mode) << ", bound = " << fmt(w.rhs, mode) << '\n';
      }
    });
    return check.holds ? kExitOk : kExitCheckFailed;
  }

  // cloud
  const Cloud cloud = cloud_gamma(c);
  const bool valid = is_valid_cloud(cloud);
  const json doc{{"gamma", io::contour_to_json(cloud.gamma, mode)}, {"pi", io::contour_to_json(cloud.pi, mode)},
                 {"valid", valid}};
  emit(cfg, out, doc, [&] {
    std::vector<std::vector<std::string>> rows{{"outcome", "gamma", "pi"}};
    for (std::size_t i = 0; i < k; ++i) rows.push_back({space.label(i), fmt(cloud.gamma[i], mode), fmt(cloud.pi[i], mode)});
    print_table(out, rows);
    out << (valid ? "valid cloud\n" : "NOT a valid cloud\n");
  });
  return valid ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------- region

int run_region(const RunConfig& cfg, std::ostream& out) {
  const Contour c = load_contour(cfg.contour);
  const bool finite = std::holds_alternative<FiniteOutcomeSpace>(c.space());
  const NumericMode mode = finite ? cfg.numeric : NumericMode::decimal;

  if (cfg.action == "prop1") {
    const auto report = check_region_equivalence(c, cfg.alphas);
    json violations = json::array();
    for (const auto& v : report.violations) {
      violations.push_back({{"alpha", io::render(v.alpha, mode)},
                            {"cpr", io::event_to_json(v.cpr, c.space())},
                            {"cut", io::event_to_json(v.cut, c.space())},
                            {"intersection", io::event_to_json(v.intersection, c.space())}});
    }
    const json doc{{"consonant", report.consonant},
                   {"levels_checked", report.alphas.size()},
                   {"violations", violations},
                   {"pass", report.passed()}};
    emit(cfg, out, doc, [&] {
      out << "consonant: " << (report.consonant ? "yes" : "no") << '\n';
      out << "levels checked: " << report.alphas.size() << '\n';
      for (const auto& v : report.violations) {
        out << "alpha " << fmt(v.alpha, mode) << ": cpr " << event_text(v.cpr, c.space()) << ", cut "
            << event_text(v.cut, c.space()) << ", intersection " << event_text(v.intersection, c.space()) << '\n';
      }
      out << (report.passed() ? "PASS\n" : "FAIL\n");
    });
    return report.passed() ? kExitOk : kExitCheckFailed;
  }

  const Rational& alpha = cfg.alphas.front();
  PredictionRegion region = cfg.kind == "cut"            ? ihdr_cut(c, alpha)
                            : cfg.kind == "intersection" ? ihdr_intersection(c, alpha)
                                                         : cpr(c, alpha);
  json doc{{"alpha", alpha.to_double()}, {"kind", std::string(to_string(region.kind))}};
  doc[finite ? "labels" : "points"] = io::event_to_json(region.event, c.space());
  if (!cfg.out.empty()) write_file(cfg.out, doc.dump(2) + "\n");
  emit(cfg, out, doc, [&] {
    out << to_string(region.kind) << " at alpha = " << fmt(alpha, mode) << ": " << event_text(region.event, c.space())
        << '\n';
  });
  return kExitOk;
}

// ------------------------------------------------------------------- credal

std::string coords_csv(const std::vector<std::pair<ProbabilityVector, std::string>>& points) {
  std::ostringstream o;
  o << std::setprecision(12) << "x,y,label\n";
  for (const auto& [p, label] : points) {
    const auto [x, y] = ternary_coords(p);
    o << x << ',' << y << ',' << label << '\n';
  }
  return o.str();
}

int run_credal(const RunConfig& cfg, std::ostream& out) {
  const Contour c = load_contour(cfg.contour);
  const auto& space = c.finite_space();
  const NumericMode mode = cfg.numeric;
  auto render_vec = [&](std::span<const Rational> w) {
    json a = json::array();
    for (const auto& v : w) a.push_back(io::render(v, mode));
    return a;
  };
  auto text_vec = [&](std::span<const Rational> w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ", " : "") + fmt(w[i], mode);
    return s + ")";
  };

  if (cfg.action == "check") {
    if (cfg.p.size() != space.size()) {
      throw UsageError("BadValue", "--p needs " + std::to_string(space.size()) + " weights");
    }
    const ExactProbabilityVector p(cfg.p);
    const bool member = in_credal_set(p, c);
    const bool prop2 = prop2_membership(p, c);
    const json doc{{"p", render_vec(p.weights())}, {"member", member}, {"cut_criterion", prop2}, {"agree", member == prop2}};
    emit(cfg, out, doc, [&] {
      out << "p = " << text_vec(p.weights()) << (member ? " is " : " is NOT ") << "in the credal set\n";
      out << "strong-cut criterion: " << (prop2 ? "member" : "not a member")
          << (member == prop2 ? " (agrees)\n" : " (DISAGREES)\n");
    });
    return member && prop2 ? kExitOk : kExitCheckFailed;
  }

  if (cfg.action == "extremes") {
    const auto pts = extreme_points(c);
    json doc = json::array();
    std::vector<std::vector<std::string>> rows{space.labels()};
    for (const auto& p : pts) {
      doc.push_back(render_vec(p.weights()));
      std::vector<std::string> row;
      for (const auto& v : p.weights()) row.push_back(fmt(v, mode));
      rows.push_back(std::move(row));
    }
    emit(cfg, out, doc, [&] { print_table(out, rows); });
    return kExitOk;
  }

  if (cfg.action == "entropy") {
    const auto le = lower_entropy(c);
    const json doc{{"lower_entropy_nats", le.nats}, {"minimizer", render_vec(le.minimizer.weights())}};
    emit(cfg, out, doc, [&] {
      out << "lower entropy = " << fmt(le.nats) << " nats at " << text_vec(le.minimizer.weights()) << '\n';
    });
    return kExitOk;
  }

  const auto samples = sample_credal(c, cfg.count, *cfg.seed);
  if (cfg.action == "sample") {
    json doc = json::array();
    std::vector<std::vector<std::string>> rows{space.labels()};
    for (const auto& p : samples) {
      doc.push_back(std::vector<double>(p.weights().begin(), p.weights().end()));
      std::vector<std::string> row;
      for (double v : p.weights()) row.push_back(fmt(v));
      rows.push_back(std::move(row));
    }
    if (!cfg.out.empty()) write_file(cfg.out, doc.dump() + "\n");
    emit(cfg, out, doc, [&] { print_table(out, rows); });
    return kExitOk;
  }

  // ternary
  CONSONANCE_REQUIRE(space.size() == 3, ErrorCode::WrongDimension, "ternary coordinates need exactly 3 outcomes");
  std::vector<std::pair<ProbabilityVector, std::string>> points;
  for (const auto& p : samples) points.emplace_back(p, "sample");
  for (const auto& v : extreme_points(c)) points.emplace_back(to_real(v), "vertex");
  const std::string csv = coords_csv(points);
  if (!cfg.out.empty()) {
    write_file(cfg.out, csv);
    if (!cfg.json) out << "wrote " << points.size() << " points to " << cfg.out << '\n';
  } else {
    out << csv;
  }
  if (cfg.json && !cfg.out.empty()) out << json{{"points", points.size()}, {"out", cfg.out}}.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------- bsa

int run_bsa(const RunConfig& cfg, std::ostream& out) {
  const std::string& priors_arg = cfg.priors;
  const auto first = priors_arg.find_first_not_of(" \t\n");
  json priors_json;
  if (first != std::string::npos && priors_arg[first] == '[') {
    try {
      priors_json = json::parse(priors_arg);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, std::string("--priors: ") + e.what());
    }
  } else {
    priors_json = io::read_json_file(priors_arg);
  }
  const auto priors = io::gamma_params_from_json(priors_json);
  std::vector<std::int64_t> counts;
  if (!cfg.data.empty()) {
    auto in = open_input(cfg.data);
    counts = io::read_counts_csv(in);
  }
  std::vector<GammaParams> posts;
  for (const auto& p : priors) posts.push_back(posterior_update(p, counts));
  const PredictiveFGCS fgcs(posts);
  const double alpha = cfg.alphas.front().to_double();
  const auto region = bsa_ihdr(fgcs, alpha);

  json components = json::array();
  for (std::size_t j = 0; j < posts.size(); ++j) {
    components.push_back({{"a", posts[j].shape}, {"b", posts[j].rate}, {"probability", region.component_probs[j]}});
  }
  const bool ok = region.lower_prob >= 1.0 - alpha;
  const json doc{{"alpha", alpha},
                 {"set", region.set},
                 {"greedy", region.greedy},
                 {"components", components},
                 {"lower_prob", region.lower_prob},
                 {"improved", region.improved},
                 {"exhaustive_verified", region.exhaustive_verified}};
  if (!cfg.out.empty()) write_file(cfg.out, doc.dump(2) + "\n");
  emit(cfg, out, doc, [&] {
    out << "region (" << region.set.size() << " values): {";
    for (std::size_t i = 0; i < region.set.size(); ++i) out << (i ? "," : "") << region.set[i];
    out << "}\n";
    std::vector<std::vector<std::string>> rows{{"component", "posterior a", "posterior b", "P(region)"}};
    for (std::size_t j = 0; j < posts.size(); ++j) {
      rows.push_back({std::to_string(j), fmt(posts[j].shape), fmt(posts[j].rate), fmt(region.component_probs[j])});
    }
    print_table(out, rows);
    out << "lower probability = " << fmt(region.lower_prob) << " (target " << fmt(1.0 - alpha) << ")\n";
    out << "minimality " << (region.exhaustive_verified ? "verified exhaustively\n" : "not verified (heuristic)\n");
  });
  return ok ? kExitOk : kExitCheckFailed;
}

// ----------------------------------------------------------------- coverage

int run_coverage_cmd(const RunConfig& cfg, std::ostream& out) {
  const auto specs = io::process_specs_from_json(io::read_json_file(cfg.spec));
  CONSONANCE_REQUIRE(!specs.empty(), ErrorCode::InvalidSpec, "spec file lists no processes");
  std::vector<CoverageReport> reports;
  if (cfg.psi.empty() || cfg.psi == "default") {
    reports = run_uniformity_sweep(specs, cfg.ns, cfg.alphas, cfg.trials, *cfg.seed);
  } else {
    const auto psi =
        cfg.psi == "mean-abs" ? NonconformityMeasure::mean_abs() : NonconformityMeasure::one_minus_empirical();
    reports = run_uniformity_sweep(specs, cfg.ns, cfg.alphas, psi, cfg.trials, *cfg.seed);
  }
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.pass && r.mismatches == 0;

  if (!cfg.out.empty()) {
    std::ostringstream csv;
    io::write_coverage_csv(csv, reports);
    write_file(cfg.out, csv.str());
  }
  json doc = json::array();
  for (const auto& r : reports) {
    doc.push_back({{"family", r.family},
                   {"n", r.n},
                   {"alpha", r.alpha.to_double()},
                   {"trials", r.trials},
                   {"hits", r.hits},
                   {"ihdr_hits", r.ihdr_hits},
                   {"mismatches", r.mismatches},
                   {"coverage", r.empirical_coverage},
                   {"se", r.standard_error},
                   {"pass", r.pass}});
  }
  emit(cfg, out, doc, [&] {
    std::vector<std::vector<std::string>> rows{
        {"family", "n", "alpha", "trials", "hits", "coverage", "se", "bound", "cpr=ihdr", "pass"}};
    for (const auto& r : reports) {
      const double bound = 1.0 - r.alpha.to_double() - 3.0 * r.standard_error;
      rows.push_back({r.family, std::to_string(r.n), fmt(r.alpha.to_double()), std::to_string(r.trials),
                      std::to_string(r.hits), fmt(r.empirical_coverage), fmt(r.standard_error), fmt(bound),
                      r.mismatches == 0 ? "yes" : "no", r.pass ? "PASS" : "FAIL"});
    }
    print_table(out, rows);
  });
  return ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------- table1

struct Fixture {
  std::vector<std::string> labels;
  std::vector<Rational> lower;
  std::vector<Rational> upper;
};

int run_table1(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const NumericMode mode = cfg.numeric;
  const FiniteOutcomeSpace space({"A", "B", "C"});
  std::vector<std::size_t> data;
  data.insert(data.end(), 20, 0);
  data.insert(data.end(), 30, 1);
  data.insert(data.end(), 50, 2);
  const auto result = transduce_grid(data, space, NonconformityMeasure::one_minus_empirical());
  const Contour& c = result.contour;

  std::vector<std::string> mismatches;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) mismatches.push_back(what);
  };

  const std::vector<Rational> want_pi{Rational(21, 101), Rational(51, 101), Rational(1)};
  expect(std::ranges::equal(c.values(), want_pi), "contour");

  const std::vector<Fixture> rows_want{
      {{"A"}, {Rational(0)}, {Rational(21, 101)}},       {{"B"}, {Rational(0)}, {Rational(51, 101)}},
      {{"C"}, {Rational(50, 101)}, {Rational(1)}},       {{"A", "B"}, {Rational(0)}, {Rational(51, 101)}},
      {{"B", "C"}, {Rational(80, 101)}, {Rational(1)}}, {{"A", "C"}, {Rational(50, 101)}, {Rational(1)}},
  };
  json table = json::array();
  std::vector<std::vector<std::string>> table_rows{{"event", "lower", "upper"}};
  for (const auto& row : rows_want) {
    const Event e = event_from_labels(row.labels, space);
    const Rational lo = lower_prob(c, e);
    const Rational up = upper_prob(c, e);
    expect(lo == row.lower.front() && up == row.upper.front(), "row " + braces(row.labels));
    table.push_back({{"event", row.labels}, {"lower", io::render(lo, mode)}, {"upper", io::render(up, mode)}});
    table_rows.push_back({braces(row.labels), fmt(lo, mode), fmt(up, mode)});
  }

  const auto m = mass_from_belief<Rational>(lower_table(c), space.size());
  const auto focal = focal_elements(m);
  expect(m.by_mask().size() == 3 && m.mass(event_from_labels({"C"}, space)) == Rational(50, 101) &&
             m.mass(event_from_labels({"B", "C"}, space)) == Rational(30, 101) &&
             m.mass(Event::full(3)) == Rational(21, 101),
         "mass function");
  expect(focal.nested, "focal chain");

  const ExactProbabilityVector p_emp({Rational(1, 5), Rational(3, 10), Rational(1, 2)});
  const bool emp_member = in_credal_set(p_emp, c);
  expect(emp_member && prop2_membership(p_emp, c), "empirical pmf membership");

  const auto le = lower_entropy(c);
  expect(le.nats == 0.0, "lower entropy");

  const std::uint64_t seed = cfg.seed.value_or(kTable1Seed);
  std::vector<std::pair<ProbabilityVector, std::string>> points;
  for (const auto& p : sample_credal(c, cfg.count, seed)) points.emplace_back(p, "sample");
  for (const auto& v : extreme_points(c)) points.emplace_back(to_real(v), "vertex");
  points.emplace_back(to_real(p_emp), "p_emp");
  if (!cfg.out.empty()) write_file(cfg.out, coords_csv(points));

  const auto [ex, ey] = ternary_coords(to_real(p_emp));
  json pi = json::array();
  for (const auto& v : c.values()) pi.push_back(io::render(v, mode));
  const json doc{{"contour", io::contour_to_json(c, mode)},
                 {"table", table},
                 {"mass", io::mass_to_json(m, space, mode)},
                 {"focal_nested", focal.nested},
                 {"p_emp", {{"p", {0.2, 0.3, 0.5}}, {"member", emp_member}, {"x", ex}, {"y", ey}}},
                 {"ternary_points", points.size()},
                 {"seed", seed},
                 {"lower_entropy", le.nats},
                 {"fixture_match", mismatches.empty()}};
  emit(cfg, out, doc, [&] {
    out << "data: 20 A, 30 B, 50 C\n\ncontour\n";
    print_table(out, {{"A", "B", "C"}, {fmt(c[0], mode), fmt(c[1], mode), fmt(c[2], mode)}});
    out << "\nlower and upper probabilities\n";
    print_table(out, table_rows);
    out << "\nmass function\n";
    std::vector<std::vector<std::string>> mass_rows{{"event", "mass"}};
    for (const auto& item : io::mass_to_json(m, space, NumericMode::rational)) {
      mass_rows.push_back({braces(item["event"].get<std::vector<std::string>>()),
                           fmt(Rational::parse(item["mass"].get<std::string>()), mode)});
    }
    print_table(out, mass_rows);
    out << "focal elements " << (focal.nested ? "nested" : "NOT nested") << "\n\n";
    out << "p_emp = (0.2, 0.3, 0.5) " << (emp_member ? "is" : "is NOT") << " in the credal set; ternary (" << fmt(ex)
        << ", " << fmt(ey) << ")\n";
    out << points.size() << " ternary points (seed " << seed << ")" << (cfg.out.empty() ? "" : " written to " + cfg.out)
        << '\n';
    out << "lower entropy = " << fmt(le.nats) << " nats\n";
  });
  if (!mismatches.empty()) {
    for (const auto& w : mismatches) err << to_string(ErrorCode::FixtureMismatch) << ": " << w << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

std::string joined_error(const CLI::ParseError& e) { return e.what(); }

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Conformal prediction regions as consonant possibility measures", "consonance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "consonance 0.1.0");

  RunConfig cfg;
  std::string numeric;
  std::vector<std::string> alpha_text;
  std::string p_text;
  std::uint64_t seed = 0;
  std::vector<CLI::Option*> seed_opts;

  auto common = [&](CLI::App* s) {
    s->add_flag("--json", cfg.json, "Machine-readable JSON on stdout");
    s->add_option("--numeric", numeric, "Number rendering")->check(CLI::IsMember({"rational", "float"}));
  };

  auto* transduce = app.add_subcommand("transduce", "Conformal transducer contour from data");
  common(transduce);
  transduce->add_option("--data", cfg.data, "CSV with a 'y' header")->required();
  transduce->add_option("--space", cfg.space, "Outcome space JSON")->required();
  transduce->add_option("--psi", cfg.psi, "Nonconformity measure")
      ->required()
      ->check(CLI::IsMember({"mean-abs", "one-minus-emp"}));
  transduce->add_option("--adjust", cfg.adjust, "Consonance adjustment")
      ->check(CLI::IsMember({"none", "prime", "double-prime"}));
  transduce->add_option("--out", cfg.out, "Write contour JSON here");

  auto* possibility = app.add_subcommand("possibility", "Upper/lower probabilities and their structure");
  common(possibility);
  possibility->add_option("--contour", cfg.contour, "Contour JSON")->required();
  possibility->require_subcommand(1);
  for (const char* name : {"upper", "lower"}) {
    auto* s = possibility->add_subcommand(name, std::string(name) + " probability of every event");
    s->add_option("--event", cfg.event, "Comma-separated labels of a single event");
    s->fallthrough();
  }
  for (const char* name : {"mass", "focal", "cloud"}) possibility->add_subcommand(name)->fallthrough();
  for (const char* name : {"check-alt", "check-mon"}) {
    auto* s = possibility->add_subcommand(name, "Brute-force capacity check of order K");
    s->add_option("K", cfg.order, "Order (2..4)")->required()->check(CLI::Range(2, 4));
    s->fallthrough();
  }

  auto* region = app.add_subcommand("region", "Prediction regions at level alpha");
  common(region);
  region->add_option("--contour", cfg.contour, "Contour JSON")->required();
  region->add_option("--alpha", alpha_text, "Significance level in [0, 1]");
  region->add_option("--kind", cfg.kind, "Region construction")->check(CLI::IsMember({"cpr", "cut", "intersection"}));
  region->add_option("--out", cfg.out, "Write region JSON here");
  region->require_subcommand(0, 1);
  auto* prop1 = region->add_subcommand("prop1", "Check CPR = IHDR cut = IHDR intersection over an alpha sweep");
  prop1->fallthrough();

  auto* credal = app.add_subcommand("credal", "Credal set of the upper probability");
  common(credal);
  credal->add_option("--contour", cfg.contour, "Contour JSON")->required();
  credal->require_subcommand(1);
  auto* check = credal->add_subcommand("check", "Membership of a probability vector");
  check->add_option("--p", p_text, "Comma-separated weights")->required();
  check->fallthrough();
  credal->add_subcommand("extremes", "Extreme points")->fallthrough();
  credal->add_subcommand("entropy", "Lower entropy")->fallthrough();
  for (const char* name : {"sample", "ternary"}) {
    auto* s = credal->add_subcommand(name);
    s->add_option("--count", cfg.count, "Number of samples");
    seed_opts.push_back(s->add_option("--seed", seed, "RNG seed")->required());
    s->add_option("--out", cfg.out, std::string(name) == "ternary" ? "Coordinates CSV" : "Samples JSON");
    s->fallthrough();
  }

  auto* bsa = app.add_subcommand("bsa", "Imprecise HDR for Poisson counts under a set of Gamma priors");
  common(bsa);
  bsa->add_option("--priors", cfg.priors, "JSON array of {a, b} or a path to one")->required();
  bsa->add_option("--data", cfg.data, "Counts CSV with a 'y' header");
  bsa->add_option("--alpha", alpha_text, "Significance level in (0, 1)")->required();
  bsa->add_option("--out", cfg.out, "Write region JSON here");

  auto* coverage = app.add_subcommand("coverage", "Monte-Carlo coverage of conformal regions");
  common(coverage);
  coverage->add_option("--spec", cfg.spec, "Process spec JSON")->required();
  coverage->add_option("--n", cfg.ns, "Sample sizes")->required()->delimiter(',');
  coverage->add_option("--alpha", alpha_text, "Significance levels")->required()->delimiter(',');
  coverage->add_option("--psi", cfg.psi, "Nonconformity measure")
      ->check(CLI::IsMember({"default", "mean-abs", "one-minus-emp"}));
  coverage->add_option("--trials", cfg.trials, "Trials per cell")->check(CLI::PositiveNumber);
  seed_opts.push_back(coverage->add_option("--seed", seed, "Master RNG seed")->required());
  coverage->add_option("--out", cfg.out, "Report CSV");

  auto* table1 = app.add_subcommand("table1", "Reproduce the 20/30/50 worked example end to end");
  common(table1);
  seed_opts.push_back(table1->add_option("--seed", seed, "Seed for the credal sample"));
  table1->add_option("--count", cfg.count, "Credal samples for the ternary export");
  table1->add_option("--out", cfg.out, "Ternary coordinates CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion& e) {
    throw HelpRequested{e.what()};
  } catch (const CLI::RequiredError& e) {
    throw UsageError("MissingInput", joined_error(e));
  } catch (const CLI::ExtrasError& e) {
    throw UsageError("UnknownFlag", joined_error(e));
  } catch (const CLI::ParseError& e) {
    throw UsageError("BadValue", joined_error(e));
  }

  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "transduce") cfg.subcommand = Subcommand::transduce;
  if (name == "possibility") cfg.subcommand = Subcommand::possibility;
  if (name == "region") cfg.subcommand = Subcommand::region;
  if (name == "credal") cfg.subcommand = Subcommand::credal;
  if (name == "bsa") cfg.subcommand = Subcommand::bsa;
  if (name == "coverage") cfg.subcommand = Subcommand::coverage;
  if (name == "table1") cfg.subcommand = Subcommand::table1;
  if (!chosen->get_subcommands().empty()) cfg.action = chosen->get_subcommands().front()->get_name();

  const bool float_only = cfg.subcommand == Subcommand::bsa || cfg.subcommand == Subcommand::coverage;
  if (!numeric.empty()) {
    cfg.numeric_explicit = true;
    cfg.numeric = numeric == "rational" ? NumericMode::rational : NumericMode::decimal;
    if (float_only && cfg.numeric == NumericMode::rational) {
      throw UsageError("BadValue", "rational output is only available for finite label pipelines");
    }
  } else if (float_only) {
    cfg.numeric = NumericMode::decimal;
  }

  for (const auto& a : alpha_text) cfg.alphas.push_back(parse_alpha(a));
  if (cfg.subcommand == Subcommand::region && cfg.action.empty()) {
    if (cfg.alphas.size() != 1) throw UsageError("MissingInput", "region needs exactly one --alpha");
  }
  if (cfg.subcommand == Subcommand::bsa) {
    if (cfg.alphas.size() != 1) throw UsageError("BadValue", "bsa takes exactly one --alpha");
    if (cfg.alphas.front() == Rational(0) || cfg.alphas.front() == Rational(1)) {
      throw UsageError("AlphaOutOfRange", "bsa needs 0 < alpha < 1");
    }
  }
  if (cfg.subcommand == Subcommand::coverage) {
    for (const auto& a : cfg.alphas) {
      if (a == Rational(1)) throw UsageError("AlphaOutOfRange", "coverage needs alpha < 1");
    }
  }
  if (!p_text.empty()) {
    for (const auto& w : split(p_text, ',')) {
      try {
        cfg.p.push_back(Rational::parse(w));
      } catch (const Error&) {
        throw UsageError("BadValue", "--p weight '" + w + "' is not a number");
      }
    }
  }
  if (std::ranges::any_of(seed_opts, [](const CLI::Option* o) { return o->count() > 0; })) cfg.seed = seed;
  return cfg;
}

RunConfig parse_args(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_args(args);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.subcommand) {
    case Subcommand::transduce: return run_transduce(cfg, out);
    case Subcommand::possibility: return run_possibility(cfg, out);
    case Subcommand::region: return run_region(cfg, out);
    case Subcommand::credal: return run_credal(cfg, out);
    case Subcommand::bsa: return run_bsa(cfg, out);
    case Subcommand::coverage: return run_coverage_cmd(cfg, out);
    case Subcommand::table1: return run_table1(cfg, out, err);
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.text << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun 'consonance --help' for usage\n";
    return kExitUsage;
  }
  try {
    return run(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::Parse: return kExitIo;
      case ErrorCode::FixtureMismatch:
      case ErrorCode::NonConsonantContour: return kExitCheckFailed;
      default: return kExitUsage;
    }
  }
}

}  // namespace consonance::cli

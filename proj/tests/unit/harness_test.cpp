#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "consonance/error.hpp"
#include "consonance/harness.hpp"

using namespace consonance;

namespace {

// Exact probability that a fresh categorical draw lands in the CPR built from
// n i.i.d. draws, by summing over every count vector. The contour comes from
// the closed form of the leave-one-out empirical score: a point with label k
// scores 1 - (c_k - 1)/n in the augmented bag, so label k is at least as
// strange as the candidate label y exactly when c_k <= c_y.
double exact_categorical_coverage(const std::vector<double>& w, std::size_t n, double alpha) {
  const std::size_t k = w.size();
  double total = 0.0;
  std::vector<std::size_t> c(k, 0);
  auto visit = [&](auto&& self, std::size_t i, std::size_t left, double log_p) -> void {
    if (i + 1 == k) {
      c[i] = left;
      const double lp = log_p + static_cast<double>(left) * std::log(w[i]) - std::lgamma(static_cast<double>(left) + 1);
      const double prob = std::exp(std::lgamma(static_cast<double>(n) + 1) + lp);
      for (std::size_t y = 0; y < k; ++y) {
        std::size_t hits = 0;
        for (std::size_t j = 0; j < k; ++j) {
          const std::size_t cj = c[j] + (j == y ? 1 : 0);
          if (cj <= c[y] + 1) hits += cj;
        }
        if (static_cast<double>(hits) / static_cast<double>(n + 1) > alpha) total += prob * w[y];
      }
      return;
    }
    for (std::size_t m = 0; m <= left; ++m) {
      c[i] = m;
      self(self, i + 1, left - m,
           log_p + (m ? static_cast<double>(m) * std::log(w[i]) : 0.0) - std::lgamma(static_cast<double>(m) + 1));
    }
  };
  visit(visit, 0, n, 0.0);
  return total;
}

}  // namespace

TEST_CASE("process specs validate their parameters") {
  CHECK_NOTHROW(ProcessSpec::categorical({0.2, 0.3, 0.5}));
  CHECK_THROWS_AS(ProcessSpec::categorical({0.2, 0.3}), Error);
  CHECK_THROWS_AS(ProcessSpec::categorical({}), Error);
  CHECK_THROWS_AS(ProcessSpec::categorical({1.2, -0.2}), Error);
  CHECK_THROWS_AS(ProcessSpec::gaussian(0, 0), Error);
  CHECK_THROWS_AS(ProcessSpec::poisson(-1), Error);
  CHECK_THROWS_AS(ProcessSpec::polya_urn({1, 0}, 0.0), Error);
  CHECK_THROWS_AS(ProcessSpec::polya_urn({}, 1.0), Error);
  try {
    ProcessSpec s;
    s.family = ProcessFamily::gaussian;
    s.sigma = -1;
    s.validate();
    FAIL("expected InvalidSpec");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
  CHECK(ProcessSpec::polya_urn({2, 3, 5}).is_label_valued());
  CHECK_FALSE(ProcessSpec::gaussian(0, 1).is_label_valued());
}

TEST_CASE("per-trial seeds are deterministic and distinct") {
  CHECK(trial_seed(42, 7) == trial_seed(42, 7));
  CHECK(trial_seed(42, 7) != trial_seed(42, 8));
  CHECK(trial_seed(42, 7) != trial_seed(43, 7));
}

TEST_CASE("report arithmetic") {
  const auto spec = ProcessSpec::categorical({0.2, 0.3, 0.5});
  const auto r = run_coverage(spec, 30, Rational(1, 5), NonconformityMeasure::one_minus_empirical(), 2000, 5);
  CHECK(r.trials == 2000);
  CHECK(r.empirical_coverage == doctest::Approx(static_cast<double>(r.hits) / 2000.0));
  CHECK(r.standard_error ==
        doctest::Approx(std::sqrt(r.empirical_coverage * (1 - r.empirical_coverage) / 2000.0)));
  CHECK(r.pass == (r.empirical_coverage >= 0.8 - 3 * r.standard_error));
  CHECK(r.mismatches == 0);
  CHECK(r.ihdr_hits == r.hits);
}

TEST_CASE("Monte Carlo coverage matches the exact categorical coverage probability") {
  const std::vector<double> w{0.2, 0.3, 0.5};
  for (std::size_t n : {5, 20, 60}) {
    for (double alpha : {0.1, 0.2, 0.5}) {
      const double exact = exact_categorical_coverage(w, n, alpha);
      CHECK(exact >= 1.0 - alpha);
      const auto r = run_coverage(ProcessSpec::categorical(w), n, Rational::from_double(alpha),
                                  NonconformityMeasure::one_minus_empirical(), 4000, 99);
      const double p = std::clamp(exact, 0.0, 1.0);
      const double se = std::sqrt(p * (1 - p) / 4000.0);
      CHECK(std::abs(r.empirical_coverage - exact) <= 4.5 * se + 1e-12);
    }
  }
}

TEST_CASE("trivial regimes: alpha = 0 and n = 0 always cover") {
  for (const auto& spec : {ProcessSpec::categorical({0.2, 0.3, 0.5}), ProcessSpec::gaussian(0, 1),
                           ProcessSpec::poisson(3), ProcessSpec::polya_urn({2, 3, 5})}) {
    const auto psi = default_measure(spec);
    const auto zero_alpha = run_coverage(spec, 15, Rational(0), psi, 300, 1);
    CHECK(zero_alpha.hits == 300);
    const auto no_data = run_coverage(spec, 0, Rational(1, 2), psi, 300, 1);
    CHECK(no_data.hits == 300);
  }
}

TEST_CASE("coverage guarantee holds on every family at moderate scale") {
  for (const auto& spec : {ProcessSpec::categorical({0.2, 0.3, 0.5}), ProcessSpec::gaussian(1.5, 2.0),
                           ProcessSpec::poisson(4), ProcessSpec::polya_urn({1, 1}, 2.0)}) {
    for (std::size_t n : {10, 40}) {
      const auto r = run_coverage(spec, n, Rational(1, 5), default_measure(spec), 2000, 17);
      CHECK(r.pass);
      CHECK(r.mismatches == 0);
    }
  }
}

TEST_CASE("results do not depend on the number of worker threads") {
  const auto spec = ProcessSpec::gaussian(0, 1);
  CoverageOptions one;
  one.threads = 1;
  CoverageOptions many;
  many.threads = 4;
  const auto a = run_coverage(spec, 20, Rational(1, 5), NonconformityMeasure::mean_abs(), 1000, 3, one);
  const auto b = run_coverage(spec, 20, Rational(1, 5), NonconformityMeasure::mean_abs(), 1000, 3, many);
  CHECK(a.hits == b.hits);
  CHECK(a.ihdr_hits == b.ihdr_hits);
  const auto c = run_coverage(spec, 20, Rational(1, 5), NonconformityMeasure::mean_abs(), 1000, 3, one);
  CHECK(c.hits == a.hits);
}

TEST_CASE("seeded regression fixture for the categorical cell") {
  const auto r = run_coverage(ProcessSpec::categorical({0.2, 0.3, 0.5}), 100, Rational(1, 5),
                              NonconformityMeasure::one_minus_empirical(), 10000, 42);
  CHECK(r.empirical_coverage >= 0.788);
  CHECK(r.pass);
  CHECK(r.hits == 9088U);
}

TEST_CASE("alpha and measure preconditions") {
  const auto spec = ProcessSpec::categorical({0.5, 0.5});
  CHECK_THROWS_AS(run_coverage(spec, 5, Rational(1), NonconformityMeasure::one_minus_empirical(), 10, 1), Error);
  CHECK_THROWS_AS(run_coverage(spec, 5, Rational(-1, 2), NonconformityMeasure::one_minus_empirical(), 10, 1), Error);
  CHECK_THROWS_AS(run_coverage(spec, 5, Rational(1, 2), NonconformityMeasure::mean_abs(), 10, 1), Error);
}

TEST_CASE("sweeps take the cartesian product in a fixed order") {
  const std::vector<ProcessSpec> specs{ProcessSpec::categorical({0.2, 0.3, 0.5}), ProcessSpec::gaussian(0, 1),
                                       ProcessSpec::polya_urn({2, 3, 5})};
  const std::vector<std::size_t> ns{20, 100};
  const std::vector<Rational> alphas{Rational(1, 20), Rational(1, 5), Rational(1, 2)};
  const auto reports = run_uniformity_sweep(specs, ns, alphas, 1000, 8);
  REQUIRE(reports.size() == 18);
  CHECK(reports[0].family == "categorical");
  CHECK(reports[0].n == 20);
  CHECK(reports[0].alpha == Rational(1, 20));
  CHECK(reports[1].alpha == Rational(1, 5));
  CHECK(reports[3].n == 100);
  CHECK(reports[6].family == "gaussian");
  CHECK(reports[17].family == "polya-urn");
  for (const auto& r : reports) {
    CHECK(r.pass);
    CHECK(r.mismatches == 0);
  }

  CHECK(run_uniformity_sweep(specs, ns, std::span<const Rational>{}, 1000, 8).empty());

  const std::vector<ProcessSpec> one{specs[1]};
  const std::vector<std::size_t> n1{20};
  const std::vector<Rational> a1{Rational(1, 5)};
  const auto single = run_uniformity_sweep(one, n1, a1, 1000, 8);
  const auto direct = run_coverage(specs[1], 20, Rational(1, 5), default_measure(specs[1]), 1000, 8);
  REQUIRE(single.size() == 1);
  CHECK(single[0].hits == direct.hits);
  CHECK(single[0].standard_error == direct.standard_error);
}

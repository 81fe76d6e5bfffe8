#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "consonance/credal.hpp"
#include "consonance/error.hpp"
#include "consonance/possibility.hpp"
#include "generators.hpp"

using namespace consonance;

namespace {

const FiniteOutcomeSpace kAbc({"A", "B", "C"});

Contour table1_contour() { return {kAbc, {Rational(21, 101), Rational(51, 101), Rational(1)}}; }

ExactProbabilityVector exact(std::initializer_list<Rational> w) { return ExactProbabilityVector(std::vector<Rational>(w)); }

// Membership straight from the definition, event by event.
bool oracle_member(const ExactProbabilityVector& p, const Contour& c) {
  const std::size_t k = c.size();
  for (EventMask a = 0; a < (EventMask{1} << k); ++a) {
    Rational mass(0);
    Rational sup(0);
    for (std::size_t i = 0; i < k; ++i) {
      if (a & (EventMask{1} << i)) {
        mass += p[i];
        sup = std::max(sup, c[i]);
      }
    }
    if (mass > sup) return false;
  }
  return true;
}

using Pt = std::pair<Rational, Rational>;

Rational cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Andrew's monotone chain on exact points; returns the hull counter-clockwise.
std::vector<Pt> hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Pt> h(2 * pts.size());
  std::size_t n = 0;
  for (const auto& p : pts) {
    while (n >= 2 && cross(h[n - 2], h[n - 1], p) <= Rational(0)) --n;
    h[n++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = n + 1; i-- > 0;) {
    while (n >= lo && cross(h[n - 2], h[n - 1], pts[i]) <= Rational(0)) --n;
    h[n++] = pts[i];
  }
  h.resize(n - 1);
  return h;
}

bool on_segment(const Pt& a, const Pt& b, const Pt& p) {
  return cross(a, b, p) == Rational(0) && std::min(a.first, b.first) <= p.first && p.first <= std::max(a.first, b.first) &&
         std::min(a.second, b.second) <= p.second && p.second <= std::max(a.second, b.second);
}

bool in_hull(const std::vector<Pt>& h, const Pt& p) {
  if (h.size() == 1) return h[0] == p;
  if (h.size() == 2) return on_segment(h[0], h[1], p);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (cross(h[i], h[(i + 1) % h.size()], p) < Rational(0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("worked-example memberships") {
  const auto c = table1_contour();
  const auto delta_c = exact({Rational(0), Rational(0), Rational(1)});
  CHECK(in_credal_set(delta_c, c));
  CHECK(prop2_membership(delta_c, c));

  // The empirical pmf sits inside: every event is dominated, the tightest
  // being {A,B} at 1/2 <= 51/101 and {A} at 1/5 <= 21/101.
  const auto emp = exact({Rational(1, 5), Rational(3, 10), Rational(1, 2)});
  CHECK(oracle_member(emp, c));
  CHECK(in_credal_set(emp, c));
  CHECK(prop2_membership(emp, c));

  const auto uniform = exact({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK_FALSE(in_credal_set(uniform, c));
  CHECK_FALSE(prop2_membership(uniform, c));

  const Contour vacuous(kAbc, {Rational(1), Rational(1), Rational(1)});
  CHECK(in_credal_set(uniform, vacuous));
  CHECK(prop2_membership(uniform, vacuous));
}

TEST_CASE("real-valued membership path") {
  const auto c = table1_contour();
  CHECK(in_credal_set(ProbabilityVector({0.2, 0.3, 0.5}), c));
  CHECK_FALSE(in_credal_set(ProbabilityVector({0.3, 0.3, 0.4}), c));
  CHECK_THROWS_AS(in_credal_set(ProbabilityVector({0.5, 0.5}), c), Error);
  CHECK_THROWS_AS(ProbabilityVector({0.5, 0.6}), Error);
  CHECK_THROWS_AS(ExactProbabilityVector({Rational(-1, 2), Rational(3, 2)}), Error);
}

TEST_CASE("membership agrees with the definition and with the cut criterion") {
  testgen::Rng rng(41);
  int members = 0;
  int outsiders = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.below(6);
    const auto c = testgen::random_consonant(rng, k);
    const auto vertices = extreme_points(c);
    for (int j = 0; j < 30; ++j) {
      ExactProbabilityVector p = j % 3 == 0   ? testgen::random_simplex_point(rng, k, rng.between(1, 60))
                                 : j % 3 == 1 ? testgen::random_mixture(rng, vertices)
                                              : testgen::nudge(testgen::random_mixture(rng, vertices), rng.below(k),
                                                               rng.below(k), Rational(1, rng.between(20, 400)));
      const bool want = oracle_member(p, c);
      CHECK(in_credal_set(p, c) == want);
      CHECK(prop2_membership(p, c) == want);
      CHECK(in_credal_set(to_real(p), c) == want);
      (want ? members : outsiders) += 1;
    }
  }
  CHECK(members > 100);
  CHECK(outsiders > 100);
}

TEST_CASE("extreme points examples") {
  const auto pts = extreme_points(table1_contour());
  CHECK(std::ranges::find(pts, exact({Rational(0), Rational(0), Rational(1)})) != pts.end());
  CHECK(pts.size() == 4);

  const Contour vac(FiniteOutcomeSpace::indexed(2), {Rational(1), Rational(1)});
  const auto v = extreme_points(vac);
  CHECK(std::ranges::find(v, exact({Rational(1), Rational(0)})) != v.end());
  CHECK(std::ranges::find(v, exact({Rational(0), Rational(1)})) != v.end());

  const Contour dirac(FiniteOutcomeSpace::indexed(4), {Rational(1), Rational(0), Rational(0), Rational(0)});
  const auto d = extreme_points(dirac);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == exact({Rational(1), Rational(0), Rational(0), Rational(0)}));

  CHECK_THROWS_AS(extreme_points(Contour(FiniteOutcomeSpace::indexed(9), std::vector<Rational>(9, Rational(1)))), Error);
}

TEST_CASE("extreme points are members and recover the upper envelope") {
  testgen::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + rng.below(6);
    const auto c = testgen::random_consonant(rng, k);
    const auto pts = extreme_points(c);
    for (const auto& p : pts) CHECK(oracle_member(p, c));
    const auto up = upper_table(c);
    for (EventMask a = 0; a < up.size(); ++a) {
      Rational best(0);
      for (const auto& p : pts) {
        Rational mass(0);
        for (std::size_t i = 0; i < k; ++i) {
          if (a & (EventMask{1} << i)) mass += p[i];
        }
        best = std::max(best, mass);
      }
      CHECK(best == up[a]);
    }
  }
}

TEST_CASE("three outcomes: membership is exactly the convex hull of the extreme points") {
  testgen::Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = testgen::random_consonant(rng, 3);
    std::vector<Pt> corners;
    for (const auto& p : extreme_points(c)) corners.emplace_back(p[0], p[1]);
    const auto h = hull(corners);
    for (int j = 0; j < 60; ++j) {
      const auto p = testgen::random_simplex_point(rng, 3, rng.between(1, 40));
      CHECK(in_credal_set(p, c) == in_hull(h, {p[0], p[1]}));
    }
    for (const auto& s : sample_credal(c, 20, 100 + trial)) {
      // Sampled members are doubles; test the hull edges with a rounding margin.
      bool inside = true;
      for (std::size_t i = 0; i < h.size() && h.size() >= 3; ++i) {
        const auto& a = h[i];
        const auto& b = h[(i + 1) % h.size()];
        const double cr = (b.first.to_double() - a.first.to_double()) * (s[1] - a.second.to_double()) -
                          (b.second.to_double() - a.second.to_double()) * (s[0] - a.first.to_double());
        inside = inside && cr >= -1e-9;
      }
      CHECK(inside);
    }
  }
}

TEST_CASE("lower entropy vanishes on consonant contours") {
  const auto le = lower_entropy(table1_contour());
  CHECK(le.nats == 0.0);
  CHECK(le.minimizer == exact({Rational(0), Rational(0), Rational(1)}));

  const Contour dirac(FiniteOutcomeSpace::indexed(3), {Rational(0), Rational(1), Rational(0)});
  CHECK(lower_entropy(dirac).nats == 0.0);
  const Contour vac(FiniteOutcomeSpace::indexed(2), {Rational(1), Rational(1)});
  CHECK(lower_entropy(vac).nats == 0.0);

  testgen::Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = testgen::random_transducer_like(rng, 1 + rng.below(8));
    const auto l = lower_entropy(c);
    CHECK(l.nats == 0.0);
    CHECK(in_credal_set(l.minimizer, c));
  }
}

TEST_CASE("Shannon entropy in nats") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(shannon_entropy(half) == doctest::Approx(std::log(2.0)));
  const std::vector<double> point{0.0, 1.0, 0.0};
  CHECK(shannon_entropy(point) == 0.0);
  const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(shannon_entropy(third) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("sampling the credal set") {
  const auto c = table1_contour();
  const auto s = sample_credal(c, 100, 7);
  CHECK(s.size() == 100);
  for (const auto& p : s) CHECK(in_credal_set(p, c));
  CHECK(sample_credal(c, 100, 7) == s);
  CHECK(sample_credal(c, 100, 8) != s);

  const Contour dirac(FiniteOutcomeSpace::indexed(3), {Rational(0), Rational(0), Rational(1)});
  for (const auto& p : sample_credal(dirac, 20, 1)) CHECK(p == ProbabilityVector({0.0, 0.0, 1.0}));

  const Contour vac(kAbc, {Rational(1), Rational(1), Rational(1)});
  const auto spread = sample_credal(vac, 100, 3);
  double widest = 0.0;
  for (const auto& a : spread) {
    for (const auto& b : spread) {
      double d = 0.0;
      for (std::size_t i = 0; i < 3; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
      widest = std::max(widest, std::sqrt(d));
    }
  }
  CHECK(widest > 0.5);
}

TEST_CASE("sampling stays inside the credal set for random and large contours") {
  testgen::Rng rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 1 + rng.below(12);
    const auto c = testgen::random_consonant(rng, k);
    for (const auto& p : sample_credal(c, 25, trial)) CHECK(in_credal_set(p, c));
  }
}

TEST_CASE("ternary coordinates") {
  auto [x0, y0] = ternary_coords(ProbabilityVector({1.0, 0.0, 0.0}));
  CHECK(x0 == doctest::Approx(0.0));
  CHECK(y0 == doctest::Approx(0.0));
  auto [x1, y1] = ternary_coords(ProbabilityVector({0.0, 1.0, 0.0}));
  CHECK(x1 == doctest::Approx(1.0));
  CHECK(y1 == doctest::Approx(0.0));
  auto [x2, y2] = ternary_coords(ProbabilityVector({0.0, 0.0, 1.0}));
  CHECK(x2 == doctest::Approx(0.5));
  CHECK(y2 == doctest::Approx(std::sqrt(3.0) / 2));
  auto [xc, yc] = ternary_coords(ProbabilityVector({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(xc == doctest::Approx(0.5));
  CHECK(yc == doctest::Approx(std::sqrt(3.0) / 6));
  try {
    (void)ternary_coords(ProbabilityVector({0.5, 0.5}));
    FAIL("expected WrongDimension");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongDimension);
  }
}

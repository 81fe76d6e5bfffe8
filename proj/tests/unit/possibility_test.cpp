#include <doctest.h>

#include <algorithm>
#include <bit>
#include <vector>

#include "consonance/error.hpp"
#include "consonance/possibility.hpp"
#include "generators.hpp"

using namespace consonance;

namespace {

const FiniteOutcomeSpace kAbc({"A", "B", "C"});

Contour table1_contour() { return {kAbc, {Rational(21, 101), Rational(51, 101), Rational(1)}}; }

Event ev(std::initializer_list<const char*> labels) {
  std::vector<std::string> v(labels.begin(), labels.end());
  return event_from_labels(v, kAbc);
}

// Direct subset-sum Möbius inversion, one event at a time.
std::vector<Rational> naive_mobius(const std::vector<Rational>& bel, std::size_t k) {
  const EventMask count = EventMask{1} << k;
  std::vector<Rational> m(count, Rational(0));
  for (EventMask a = 0; a < count; ++a) {
    for (EventMask b = a;; b = (b - 1) & a) {
      const int sign = (std::popcount(a & ~b) % 2 == 0) ? 1 : -1;
      m[a] += Rational(sign) * bel[b];
      if (b == 0) break;
    }
  }
  return m;
}

// Literal inequality families over ordered k-tuples, straight from the
// definitions with no pruning.
bool naive_alternating(const std::vector<Rational>& nu, std::size_t k, std::size_t space) {
  const EventMask count = EventMask{1} << space;
  std::vector<EventMask> parts(k, 0);
  while (true) {
    Rational rhs(0);
    for (std::size_t s = 1; s < (std::size_t{1} << k); ++s) {
      EventMask u = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (s & (std::size_t{1} << i)) u |= parts[i];
      }
      rhs += (std::popcount(s) % 2 == 1) ? nu[u] : -nu[u];
    }
    EventMask meet = count - 1;
    for (auto p : parts) meet &= p;
    for (EventMask a = 0; a < count; ++a) {
      if ((a & meet) == a && nu[a] > rhs) return false;
    }
    std::size_t pos = 0;
    while (pos < k && ++parts[pos] == count) parts[pos++] = 0;
    if (pos == k) return true;
  }
}

bool naive_monotone(const std::vector<Rational>& nu, std::size_t k, std::size_t space) {
  const EventMask count = EventMask{1} << space;
  std::vector<EventMask> parts(k, 0);
  while (true) {
    Rational rhs(0);
    for (std::size_t s = 1; s < (std::size_t{1} << k); ++s) {
      EventMask meet = count - 1;
      for (std::size_t i = 0; i < k; ++i) {
        if (s & (std::size_t{1} << i)) meet &= parts[i];
      }
      rhs += (std::popcount(s) % 2 == 1) ? nu[meet] : -nu[meet];
    }
    EventMask join = 0;
    for (auto p : parts) join |= p;
    for (EventMask a = 0; a < count; ++a) {
      if ((a & join) == join && nu[a] < rhs) return false;
    }
    std::size_t pos = 0;
    while (pos < k && ++parts[pos] == count) parts[pos++] = 0;
    if (pos == k) return true;
  }
}

// Belief function of random non-negative masses.
std::vector<Rational> random_belief(testgen::Rng& rng, std::size_t k) {
  const EventMask count = EventMask{1} << k;
  std::vector<std::int64_t> w(count, 0);
  std::int64_t total = 0;
  for (EventMask m = 1; m < count; ++m) {
    if (rng.coin(0.4)) total += (w[m] = rng.between(1, 9));
  }
  if (total == 0) total = w[count - 1] = 1;
  std::vector<Rational> bel(count, Rational(0));
  for (EventMask a = 0; a < count; ++a) {
    for (EventMask b = a;; b = (b - 1) & a) {
      bel[a] += Rational(w[b], total);
      if (b == 0) break;
    }
  }
  return bel;
}

std::vector<Rational> dual(const std::vector<Rational>& nu) {
  const EventMask full = nu.size() - 1;
  std::vector<Rational> out(nu.size());
  for (EventMask m = 0; m < nu.size(); ++m) out[m] = Rational(1) - nu[full & ~m];
  return out;
}

// Arbitrary normalized set function, not necessarily monotone.
std::vector<Rational> random_set_function(testgen::Rng& rng, std::size_t k) {
  const EventMask count = EventMask{1} << k;
  std::vector<Rational> nu(count);
  for (auto& v : nu) v = Rational(rng.between(0, 6), 6);
  nu[0] = Rational(0);
  nu[count - 1] = Rational(1);
  return nu;
}

}  // namespace

TEST_CASE("worked-example upper and lower probabilities") {
  const auto c = table1_contour();
  CHECK(upper_prob(c, ev({"A"})) == Rational(21, 101));
  CHECK(upper_prob(c, ev({"A", "B"})) == Rational(51, 101));
  CHECK(upper_prob(c, Event(3)) == Rational(0));
  CHECK(lower_prob(c, ev({"C"})) == Rational(50, 101));
  CHECK(lower_prob(c, ev({"B", "C"})) == Rational(80, 101));
  CHECK(lower_prob(c, ev({"A", "B"})) == Rational(0));
}

TEST_CASE("consonance predicate") {
  CHECK(is_consonant(table1_contour()));
  CHECK_FALSE(is_consonant(Contour(FiniteOutcomeSpace::indexed(2), {Rational(1, 2), Rational(7, 10)})));
  CHECK(is_consonant(Contour(FiniteOutcomeSpace::indexed(1), {Rational(1)})));
  const Contour bad(FiniteOutcomeSpace::indexed(2), {Rational(1, 2), Rational(7, 10)});
  try {
    (void)upper_prob(bad, Event::full(2));
    FAIL("expected NonConsonantContour");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConsonantContour);
  }
}

TEST_CASE("upper and lower probabilities are dual, monotone and normalized") {
  testgen::Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + rng.below(7);
    const auto c = testgen::random_consonant(rng, k);
    const auto up = upper_table(c);
    const auto lo = lower_table(c);
    const EventMask full = up.size() - 1;
    CHECK(up[0] == Rational(0));
    CHECK(up[full] == Rational(1));
    CHECK(lo[0] == Rational(0));
    CHECK(lo[full] == Rational(1));
    for (EventMask a = 0; a <= full; ++a) {
      const auto e = Event::from_mask(a, k);
      CHECK(up[a] == upper_prob(c, e));
      CHECK(lo[a] == lower_prob(c, e));
      CHECK(lo[a] == Rational(1) - up[full & ~a]);
      CHECK(lo[a] <= up[a]);
      for (std::size_t bit = 0; bit < k; ++bit) CHECK(up[a] <= up[a | (EventMask{1} << bit)]);
    }
  }
}

TEST_CASE("maxitivity holds for every pair of events on small spaces") {
  testgen::Rng rng(22);
  for (std::size_t k = 1; k <= 6; ++k) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto c = testgen::random_consonant(rng, k);
      const auto up = upper_table(c);
      for (EventMask a = 0; a < up.size(); ++a) {
        for (EventMask b = 0; b < up.size(); ++b) CHECK(up[a | b] == std::max(up[a], up[b]));
      }
    }
  }
}

TEST_CASE("tropical sum") {
  const std::vector<double> a{0.2, 0.9};
  CHECK(tropical_sum(a) == 0.9);
  const std::vector<double> b{0.37};
  CHECK(tropical_sum(b) == 0.37);
  const std::vector<Rational> z{Rational(0), Rational(0)};
  CHECK(tropical_sum(z) == Rational(0));
  try {
    (void)tropical_sum(std::span<const Rational>{});
    FAIL("expected EmptyList");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyList);
  }
}

TEST_CASE("worked-example mass function and focal chain") {
  const auto bel = lower_table(table1_contour());
  const auto m = mass_from_belief<Rational>(bel, 3);
  const auto oracle = naive_mobius(bel, 3);
  for (EventMask a = 0; a < 8; ++a) CHECK(m.by_mask().count(a) == (oracle[a] != Rational(0) ? 1U : 0U));
  CHECK(m.mass(ev({"C"})) == Rational(50, 101));
  CHECK(m.mass(ev({"B", "C"})) == Rational(30, 101));
  CHECK(m.mass(Event::full(3)) == Rational(21, 101));
  CHECK(m.by_mask().size() == 3);
  const auto rebuilt = m.belief_table();
  CHECK(std::ranges::equal(rebuilt, bel));

  const auto focal = focal_elements(m);
  REQUIRE(focal.focal.size() == 3);
  CHECK(focal.focal[0] == ev({"C"}));
  CHECK(focal.focal[1] == ev({"B", "C"}));
  CHECK(focal.focal[2] == Event::full(3));
  CHECK(focal.nested);
}

TEST_CASE("Dirac and additive belief functions") {
  // bel(A) = 1 iff A contains outcome 1.
  std::vector<Rational> dirac(8);
  for (EventMask a = 0; a < 8; ++a) dirac[a] = Rational((a & 0b010) ? 1 : 0);
  const auto md = mass_from_belief<Rational>(dirac, 3);
  CHECK(md.by_mask().size() == 1);
  CHECK(md.mass(Event({1}, 3)) == Rational(1));
  const auto fd = focal_elements(md);
  CHECK(fd.focal.size() == 1);
  CHECK(fd.nested);

  const std::vector<Rational> uniform{Rational(0), Rational(1, 2), Rational(1, 2), Rational(1)};
  const auto mu = mass_from_belief<Rational>(uniform, 2);
  CHECK(mu.mass(Event({0}, 2)) == Rational(1, 2));
  CHECK(mu.mass(Event({1}, 2)) == Rational(1, 2));
  CHECK(mu.mass(Event::full(2)) == Rational(0));
  CHECK_FALSE(focal_elements(mu).nested);
}

TEST_CASE("non-belief input is rejected with NegativeMass") {
  // Fails 2-monotonicity: nu({A,B}) < nu({A}) + nu({B}).
  const std::vector<Rational> nu{Rational(0), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  CHECK_THROWS_AS(mass_from_belief<Rational>(nu, 2), Error);
  const std::vector<Rational> plaus{Rational(0), Rational(1), Rational(1), Rational(1)};
  try {
    (void)mass_from_belief<Rational>(plaus, 2);
    FAIL("expected NegativeMass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeMass);
  }
  const std::vector<Rational> unnormalized{Rational(0), Rational(0), Rational(0), Rational(1, 2)};
  CHECK_THROWS_AS(mass_from_belief<Rational>(unnormalized, 2), Error);
}

TEST_CASE("real-valued Möbius path tolerates rounding but not real negativity") {
  std::vector<double> bel{0.0, 0.1, 0.2, 0.3 + 1e-14, 0.3, 0.4, 0.5, 1.0};
  // Make it a genuine belief function: bel(A) = sum of masses.
  const std::vector<double> mass{0.0, 0.1, 0.2, 0.0, 0.3, 0.0, 0.0, 0.4};
  for (EventMask a = 0; a < 8; ++a) {
    bel[a] = 0.0;
    for (EventMask b = 0; b < 8; ++b) {
      if ((b & a) == b) bel[a] += mass[b];
    }
  }
  const auto m = mass_from_belief<double>(bel, 3);
  for (EventMask a = 0; a < 8; ++a) CHECK(m.mass(Event::from_mask(a, 3)) == doctest::Approx(mass[a]).epsilon(1e-12));
  bel[3] -= 0.01;
  CHECK_THROWS_AS(mass_from_belief<double>(bel, 3), Error);
}

TEST_CASE("Möbius transform matches the subset-sum oracle and round-trips exactly") {
  testgen::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.below(6);
    const auto bel = random_belief(rng, k);
    const auto m = mass_from_belief<Rational>(bel, k);
    const auto oracle = naive_mobius(bel, k);
    for (EventMask a = 0; a < bel.size(); ++a) CHECK(m.mass(Event::from_mask(a, k)) == oracle[a]);
    CHECK(std::ranges::equal(m.belief_table(), bel));
  }
}

TEST_CASE("focal elements of every consonant contour form a chain") {
  testgen::Rng rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng.below(8);
    const auto c = trial % 2 ? testgen::random_consonant(rng, k) : testgen::random_transducer_like(rng, k);
    const auto m = mass_from_belief<Rational>(lower_table(c), k);
    const auto f = focal_elements(m);
    CHECK(f.nested);
    for (std::size_t i = 0; i + 1 < f.focal.size(); ++i) CHECK(f.focal[i].is_subset_of(f.focal[i + 1]));
  }
}

TEST_CASE("capacity checker examples") {
  const auto c = table1_contour();
  CHECK(check_k_alternating(upper_table(c), 2, 3).holds);
  CHECK(check_k_monotone(lower_table(c), 2, 3).holds);

  const std::vector<Rational> prob{Rational(0), Rational(1, 5), Rational(3, 10), Rational(1, 2),
                                   Rational(1, 2), Rational(7, 10), Rational(4, 5), Rational(1)};
  CHECK(check_k_alternating(prob, 2, 3).holds);
  CHECK(check_k_monotone(prob, 2, 3).holds);

  const std::vector<Rational> nu{Rational(0), Rational(0), Rational(0), Rational(1)};
  const auto alt = check_k_alternating(nu, 2, 2);
  CHECK_FALSE(alt.holds);
  REQUIRE(alt.witness.has_value());
  CHECK(alt.witness->lhs > alt.witness->rhs);
  const auto mon = check_k_monotone(dual(nu), 2, 2);
  CHECK_FALSE(mon.holds);
  REQUIRE(mon.witness.has_value());
  CHECK(mon.witness->lhs < mon.witness->rhs);
}

TEST_CASE("capacity checker guards") {
  const std::vector<Rational> nu(1 << 7, Rational(0));
  try {
    (void)check_k_alternating(nu, 2, 7);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  const std::vector<Rational> small(4, Rational(0));
  CHECK_THROWS_AS(check_k_monotone(small, 5, 2), Error);
  CHECK_THROWS_AS(check_k_monotone(small, 1, 2), Error);
}

TEST_CASE("capacity checkers agree with the literal definition") {
  testgen::Rng rng(25);
  int violations_seen = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t order = k <= 2 && rng.coin() ? 3 : 2;
    std::vector<Rational> nu;
    switch (trial % 3) {
      case 0: nu = random_set_function(rng, k); break;
      case 1: nu = random_belief(rng, k); break;
      default: nu = upper_table(testgen::random_consonant(rng, k)); break;
    }
    const bool alt = check_k_alternating(nu, order, k).holds;
    const bool mon = check_k_monotone(nu, order, k).holds;
    CHECK(alt == naive_alternating(nu, order, k));
    CHECK(mon == naive_monotone(nu, order, k));
    violations_seen += alt ? 0 : 1;
  }
  CHECK(violations_seen > 0);
}

TEST_CASE("belief functions are monotone and their duals alternating of every order") {
  testgen::Rng rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 1 + rng.below(4);
    const auto bel = random_belief(rng, k);
    for (std::size_t order = 2; order <= 3; ++order) {
      CHECK(check_k_monotone(bel, order, k).holds);
      CHECK(check_k_alternating(dual(bel), order, k).holds);
    }
  }
}

TEST_CASE("cloud construction") {
  const auto cloud = cloud_gamma(table1_contour());
  CHECK(cloud.gamma[0] == Rational(21, 101));
  CHECK(cloud.gamma[1] == Rational(50, 101));
  CHECK(cloud.gamma[2] == Rational(0));
  CHECK(is_valid_cloud(cloud));

  const auto single = cloud_gamma(Contour(FiniteOutcomeSpace::indexed(1), {Rational(1)}));
  CHECK(single.gamma[0] == Rational(0));

  const auto boundary = cloud_gamma(Contour(FiniteOutcomeSpace::indexed(2), {Rational(1), Rational(1, 2)}));
  CHECK(boundary.gamma[0] == Rational(0));
  CHECK(boundary.gamma[1] == Rational(1, 2));

  testgen::Rng rng(27);
  for (int trial = 0; trial < 200; ++trial) {
    CHECK(is_valid_cloud(cloud_gamma(testgen::random_consonant(rng, 1 + rng.below(8)))));
  }
  CHECK_THROWS_AS(cloud_gamma(Contour(FiniteOutcomeSpace::indexed(2), {Rational(1, 3), Rational(1, 3)})), Error);
}

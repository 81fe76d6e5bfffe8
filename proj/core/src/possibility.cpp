#include "consonance/possibility.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace consonance {
namespace {

void require_consonant(const Contour& c) {
  CONSONANCE_REQUIRE(c.is_consonant(), ErrorCode::NonConsonantContour,
                     "contour maximum is " + c.max_value().str() + ", not 1");
}

// Set-function values scaled to a common denominator so that the
// inclusion-exclusion sums below run in exact integer arithmetic.
struct ScaledTable {
  std::vector<__int128> values;
  std::int64_t denominator = 1;
};

ScaledTable scale(std::span<const Rational> nu) {
  std::int64_t lcm = 1;
  for (const auto& v : nu) {
    const auto g = std::gcd(lcm, v.den());
    const __int128 next = static_cast<__int128>(lcm / g) * v.den();
    CONSONANCE_REQUIRE(next <= std::numeric_limits<std::int64_t>::max(), ErrorCode::Overflow,
                       "common denominator of the set function exceeds 64 bits");
    lcm = static_cast<std::int64_t>(next);
  }
  ScaledTable out;
  out.denominator = lcm;
  out.values.reserve(nu.size());
  for (const auto& v : nu) out.values.push_back(static_cast<__int128>(v.num()) * (lcm / v.den()));
  return out;
}

Rational unscale(__int128 v, std::int64_t den) {
  CONSONANCE_REQUIRE(v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min(),
                     ErrorCode::Overflow, "inclusion-exclusion sum exceeds 64 bits");
  return {static_cast<std::int64_t>(v), den};
}

enum class Direction { alternating, monotone };

CapacityCheck check_capacity(std::span<const Rational> nu, std::size_t k, std::size_t space_size, Direction dir) {
  CONSONANCE_REQUIRE(k >= 2, ErrorCode::InvalidArgument, "k must be at least 2");
  CONSONANCE_REQUIRE(space_size <= kMaxCheckerOutcomes && k <= kMaxCheckerOrder, ErrorCode::BudgetExceeded,
                     "brute-force capacity check limited to K <= 6 and k <= 4");
  const std::size_t count = std::size_t{1} << space_size;
  CONSONANCE_REQUIRE(nu.size() == count, ErrorCode::InvalidArgument, "set function must have 2^K entries");

  const auto table = scale(nu);
  const auto order = canonical_masks(space_size);
  const EventMask full = count - 1;

  // Tightest A for a given union / intersection: the extreme nu over the
  // admissible family, so one comparison decides the whole family.
  std::vector<__int128> bound(table.values);
  if (dir == Direction::monotone) {
    // min over supersets
    for (std::size_t bit = 0; bit < space_size; ++bit) {
      const EventMask b = EventMask{1} << bit;
      for (EventMask m = 0; m < count; ++m) {
        if ((m & b) == 0) bound[m] = std::min(bound[m], bound[m | b]);
      }
    }
  } else {
    // max over subsets
    for (std::size_t bit = 0; bit < space_size; ++bit) {
      const EventMask b = EventMask{1} << bit;
      for (EventMask m = 0; m < count; ++m) {
        if ((m & b) != 0) bound[m] = std::max(bound[m], bound[m ^ b]);
      }
    }
  }

  const std::size_t subsets = std::size_t{1} << k;
  std::vector<EventMask> combined(subsets);
  std::vector<std::size_t> pick(k, 0);  // nondecreasing indices into `order`
  while (true) {
    __int128 rhs = 0;
    for (std::size_t s = 1; s < subsets; ++s) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
      const std::size_t prev = s & (s - 1);
      const EventMask part = order[pick[low]];
      if (prev == 0) {
        combined[s] = part;
      } else {
        combined[s] = dir == Direction::alternating ? (combined[prev] | part) : (combined[prev] & part);
      }
      const __int128 term = table.values[combined[s]];
      rhs += (std::popcount(s) % 2 == 1) ? term : -term;
    }
    EventMask joined = 0;
    EventMask met = full;
    for (auto p : pick) {
      joined |= order[p];
      met &= order[p];
    }
    const bool violated = dir == Direction::monotone ? bound[joined] < rhs : bound[met] > rhs;
    if (violated) {
      CapacityCheck result;
      result.holds = false;
      CapacityWitness w{Event(space_size), {}, Rational(0), unscale(rhs, table.denominator)};
      for (auto m : order) {
        const bool admissible = dir == Direction::monotone ? (m & joined) == joined : (m & met) == m;
        const bool breaks = dir == Direction::monotone ? table.values[m] < rhs : table.values[m] > rhs;
        if (admissible && breaks) {
          w.a = Event::from_mask(m, space_size);
          w.lhs = nu[m];
          break;
        }
      }
      for (auto p : pick) w.parts.push_back(Event::from_mask(order[p], space_size));
      result.witness = std::move(w);
      return result;
    }

    // next nondecreasing tuple
    std::size_t pos = k;
    while (pos > 0 && pick[pos - 1] == order.size() - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t i = pos; i < k; ++i) pick[i] = pick[pos - 1];
  }
  return {};
}

}  // namespace

bool is_consonant(const Contour& c) { return c.is_consonant(); }

Rational upper_prob(const Contour& c, const Event& a) {
  require_consonant(c);
  CONSONANCE_REQUIRE(a.space_size() == c.size(), ErrorCode::InvalidArgument, "event/contour size mismatch");
  Rational best(0);
  for (auto i : a) best = std::max(best, c[i]);
  return best;
}

Rational lower_prob(const Contour& c, const Event& a) { return Rational(1) - upper_prob(c, complement(a)); }

Rational tropical_sum(std::span<const Rational> values) {
  CONSONANCE_REQUIRE(!values.empty(), ErrorCode::EmptyList, "tropical sum of an empty list");
  return std::accumulate(values.begin(), values.end(), Rational(0),
                         [](const Rational& a, const Rational& b) { return std::max(a, b); });
}

double tropical_sum(std::span<const double> values) {
  CONSONANCE_REQUIRE(!values.empty(), ErrorCode::EmptyList, "tropical sum of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0, [](double a, double b) { return std::max(a, b); });
}

std::vector<Rational> upper_table(const Contour& c) {
  require_consonant(c);
  CONSONANCE_REQUIRE(c.size() <= kMaxEnumerableOutcomes, ErrorCode::SpaceTooLarge, "set-function table needs K <= 20");
  const std::size_t count = std::size_t{1} << c.size();
  std::vector<Rational> table(count, Rational(0));
  for (EventMask m = 1; m < count; ++m) {
    const auto low = static_cast<std::size_t>(std::countr_zero(m));
    table[m] = std::max(table[m & (m - 1)], c[low]);
  }
  return table;
}

std::vector<Rational> lower_table(const Contour& c) {
  auto upper = upper_table(c);
  const EventMask full = upper.size() - 1;
  std::vector<Rational> table(upper.size());
  for (EventMask m = 0; m < upper.size(); ++m) table[m] = Rational(1) - upper[full & ~m];
  return table;
}

CapacityCheck check_k_alternating(std::span<const Rational> nu, std::size_t k, std::size_t space_size) {
  return check_capacity(nu, k, space_size, Direction::alternating);
}

CapacityCheck check_k_monotone(std::span<const Rational> nu, std::size_t k, std::size_t space_size) {
  return check_capacity(nu, k, space_size, Direction::monotone);
}

bool is_valid_cloud(const Cloud& cloud) {
  if (cloud.gamma.size() != cloud.pi.size()) return false;
  bool has_zero = false;
  bool has_one = false;
  for (std::size_t i = 0; i < cloud.pi.size(); ++i) {
    if (cloud.gamma[i] > cloud.pi[i]) return false;
    has_zero = has_zero || cloud.gamma[i] == Rational(0);
    has_one = has_one || cloud.pi[i] == Rational(1);
  }
  return has_zero && has_one;
}

Cloud cloud_gamma(const Contour& c) {
  require_consonant(c);
  const Rational half(1, 2);
  std::vector<Rational> gamma;
  gamma.reserve(c.size());
  for (const auto& v : c.values()) gamma.push_back(v <= half ? v : Rational(1) - v);
  return {Contour(c.space_ptr(), std::move(gamma), Provenance::analytic), c};
}

}  // namespace consonance

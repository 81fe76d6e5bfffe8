#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "consonance/contour.hpp"
#include "consonance/error.hpp"
#include "consonance/outcome.hpp"
#include "consonance/rational.hpp"

namespace consonance {

bool is_consonant(const Contour& c);

// sup of the contour over `a`; zero on the empty event.
Rational upper_prob(const Contour& c, const Event& a);
// 1 - upper_prob(c, complement(a)).
Rational lower_prob(const Contour& c, const Event& a);

// Tropical (max-plus) addition with identity 0.
Rational tropical_sum(std::span<const Rational> values);
double tropical_sum(std::span<const double> values);

// Dense set-function tables indexed by EventMask, 2^K entries.
std::vector<Rational> upper_table(const Contour& c);
std::vector<Rational> lower_table(const Contour& c);

// Möbius masses over events. Only strictly nonzero masses are stored.
template <class T>
class BasicMassFunction {
 public:
  explicit BasicMassFunction(std::size_t space_size) : space_size_(space_size) {}

  [[nodiscard]] std::size_t space_size() const noexcept { return space_size_; }

  [[nodiscard]] T mass(const Event& e) const {
    const auto it = masses_.find(e.mask());
    return it == masses_.end() ? T{} : it->second;
  }

  void set(EventMask mask, T value) {
    if (value == T{}) {
      masses_.erase(mask);
    } else {
      masses_[mask] = value;
    }
  }

  [[nodiscard]] const std::map<EventMask, T>& by_mask() const noexcept { return masses_; }

  // bel(A) = sum of m(B) over B subset of A, for every A (zeta transform).
  [[nodiscard]] std::vector<T> belief_table() const {
    CONSONANCE_REQUIRE(space_size_ <= kMaxEnumerableOutcomes, ErrorCode::SpaceTooLarge, "belief table needs K <= 20");
    std::vector<T> table(std::size_t{1} << space_size_, T{});
    for (const auto& [mask, value] : masses_) table[mask] = value;
    for (std::size_t bit = 0; bit < space_size_; ++bit) {
      const EventMask b = EventMask{1} << bit;
      for (EventMask m = 0; m < table.size(); ++m) {
        if ((m & b) != 0) table[m] += table[m ^ b];
      }
    }
    return table;
  }

 private:
  std::size_t space_size_;
  std::map<EventMask, T> masses_;
};

using MassFunction = BasicMassFunction<Rational>;

// Mass below which a real-valued Möbius coefficient counts as negative.
inline constexpr double kMassTolerance = 1e-12;

// Möbius transform m(A) = sum_{B subset A} (-1)^{|A-B|} bel(B) of a belief
// table indexed by EventMask. Throws NegativeMass when any coefficient is
// negative (exactly for Rational, beyond -1e-12 for double).
template <class T>
BasicMassFunction<T> mass_from_belief(std::span<const T> bel, std::size_t space_size) {
  CONSONANCE_REQUIRE(space_size <= kMaxEnumerableOutcomes, ErrorCode::SpaceTooLarge, "Möbius transform needs K <= 20");
  const std::size_t count = std::size_t{1} << space_size;
  CONSONANCE_REQUIRE(bel.size() == count, ErrorCode::InvalidArgument, "belief table must have 2^K entries");

  constexpr bool exact = std::is_same_v<T, Rational>;
  auto near = [](const T& a, const T& b) {
    if constexpr (exact) {
      return a == b;
    } else {
      return std::abs(a - b) <= kMassTolerance;
    }
  };
  CONSONANCE_REQUIRE(near(bel[0], T{0}), ErrorCode::InvalidArgument, "bel(empty) must be 0");
  CONSONANCE_REQUIRE(near(bel[count - 1], T{1}), ErrorCode::InvalidArgument, "bel(full space) must be 1");

  std::vector<T> m(bel.begin(), bel.end());
  for (std::size_t bit = 0; bit < space_size; ++bit) {
    const EventMask b = EventMask{1} << bit;
    for (EventMask mask = 0; mask < count; ++mask) {
      if ((mask & b) != 0) m[mask] -= m[mask ^ b];
    }
  }

  BasicMassFunction<T> out(space_size);
  for (EventMask mask = 0; mask < count; ++mask) {
    bool negative = false;
    if constexpr (exact) {
      negative = m[mask] < Rational(0);
    } else {
      negative = m[mask] < -kMassTolerance;
    }
    if (negative) {
      throw Error(ErrorCode::NegativeMass,
                  "Möbius mass of event mask " + std::to_string(mask) + " is negative; input is not a belief function");
    }
    if constexpr (exact) {
      out.set(mask, m[mask]);
    } else {
      out.set(mask, std::abs(m[mask]) <= kMassTolerance ? 0.0 : m[mask]);
    }
  }
  return out;
}

struct FocalReport {
  std::vector<Event> focal;  // by cardinality, then lexicographic
  bool nested = true;        // focal elements form a chain under inclusion
};

template <class T>
FocalReport focal_elements(const BasicMassFunction<T>& m) {
  std::vector<EventMask> masks;
  for (const auto& [mask, value] : m.by_mask()) {
    if (value > T{}) masks.push_back(mask);
  }
  const auto order = canonical_masks(m.space_size());
  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::sort(masks.begin(), masks.end(), [&](EventMask a, EventMask b) { return rank[a] < rank[b]; });

  FocalReport report;
  for (std::size_t i = 0; i + 1 < masks.size(); ++i) {
    if ((masks[i] & ~masks[i + 1]) != 0) report.nested = false;
  }
  for (auto mask : masks) report.focal.push_back(Event::from_mask(mask, m.space_size()));
  return report;
}

// Counterexample to a k-monotone / k-alternating inequality.
struct CapacityWitness {
  Event a;
  std::vector<Event> parts;
  Rational lhs;  // nu(A)
  Rational rhs;  // inclusion-exclusion sum
};

struct CapacityCheck {
  bool holds = true;
  std::optional<CapacityWitness> witness;
};

inline constexpr std::size_t kMaxCheckerOutcomes = 6;
inline constexpr std::size_t kMaxCheckerOrder = 4;

// nu(A) <= sum_{I} (-1)^{|I|-1} nu(union_{i in I} A_i) for every A with
// A subset of every A_i. Collections are scanned in canonical event order and
// the first violation is returned.
CapacityCheck check_k_alternating(std::span<const Rational> nu, std::size_t k, std::size_t space_size);
// nu(A) >= sum_{I} (-1)^{|I|-1} nu(intersection_{i in I} A_i) for every A
// containing every A_i.
CapacityCheck check_k_monotone(std::span<const Rational> nu, std::size_t k, std::size_t space_size);

// Lower/upper contour pair [gamma, pi].
struct Cloud {
  Contour gamma;
  Contour pi;
};

bool is_valid_cloud(const Cloud& cloud);

// gamma(y) = pi(y) when pi(y) <= 1/2, else 1 - pi(y).
Cloud cloud_gamma(const Contour& c);

}  // namespace consonance

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "consonance/contour.hpp"
#include "consonance/outcome.hpp"
#include "consonance/rational.hpp"
#include "consonance/transducer.hpp"

namespace consonance {

enum class RegionKind : std::uint8_t { cpr, ihdr_cut, ihdr_intersection };

std::string_view to_string(RegionKind kind) noexcept;

struct PredictionRegion {
  Event event;
  Rational alpha;
  RegionKind kind = RegionKind::cpr;
};

// {y : pi(y) > alpha}. Any contour, consonant or not.
PredictionRegion cpr(const Contour& c, const Rational& alpha);

// Strong alpha-cut of a consonant contour; the operational IHDR.
PredictionRegion ihdr_cut(const Contour& c, const Rational& alpha);

// Intersection of every event whose lower probability reaches 1 - alpha,
// by brute force over 2^K events.
PredictionRegion ihdr_intersection(const Contour& c, const Rational& alpha);

// {0, 1} plus every contour value and the midpoint between consecutive
// values. Regions are piecewise constant in alpha, so this grid sees every
// distinct region.
std::vector<Rational> alpha_sweep(const Contour& c);

struct RegionMismatch {
  Rational alpha;
  Event cpr;
  Event cut;
  Event intersection;
};

struct RegionEquivalenceReport {
  bool consonant = false;
  std::vector<Rational> alphas;  // every level compared
  std::vector<RegionMismatch> violations;

  [[nodiscard]] bool passed() const noexcept { return consonant && violations.empty(); }
};

// Compares cpr, ihdr_cut and ihdr_intersection event-for-event at `alphas`
// and the full alpha_sweep. A non-consonant contour is rejected with
// consonant == false and nothing compared.
RegionEquivalenceReport check_region_equivalence(const Contour& c, std::span<const Rational> alphas = {});

enum class Inclusion : std::uint8_t { equal, subset, superset, incomparable };

std::string_view to_string(Inclusion rel) noexcept;

// Relation of `a` to `b`: subset means a is a strict subset of b.
Inclusion inclusion(const Event& a, const Event& b);

// Cardinality on label spaces, point count times cell width on grids.
double region_size(const Event& e, const OutcomeSpace& space);

struct MeasureComparison {
  PredictionRegion first;
  PredictionRegion second;
  double first_size = 0.0;
  double second_size = 0.0;
  Inclusion relation = Inclusion::equal;  // of first relative to second
};

MeasureComparison compare_measures(std::span<const std::size_t> data, const FiniteOutcomeSpace& space,
                                   const NonconformityMeasure& psi1, const NonconformityMeasure& psi2,
                                   const Rational& alpha);
MeasureComparison compare_measures(std::span<const double> data, const GridOutcomeSpace& space,
                                   const NonconformityMeasure& psi1, const NonconformityMeasure& psi2,
                                   const Rational& alpha);

}  // namespace consonance

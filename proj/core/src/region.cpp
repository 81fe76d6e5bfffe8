#include "consonance/region.hpp"

#include <algorithm>

#include "consonance/error.hpp"
#include "consonance/possibility.hpp"

namespace consonance {
namespace {

void require_alpha(const Rational& alpha) {
  CONSONANCE_REQUIRE(alpha >= Rational(0) && alpha <= Rational(1), ErrorCode::AlphaOutOfRange,
                     "alpha " + alpha.str() + " outside [0, 1]");
}

Event strong_cut(const Contour& c, const Rational& alpha) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > alpha) idx.push_back(i);
  }
  return Event(std::move(idx), c.size());
}

MeasureComparison compare(const Contour& c1, const Contour& c2, const Rational& alpha) {
  MeasureComparison out{cpr(c1, alpha), cpr(c2, alpha)};
  out.first_size = region_size(out.first.event, c1.space());
  out.second_size = region_size(out.second.event, c2.space());
  out.relation = inclusion(out.first.event, out.second.event);
  return out;
}

}  // namespace

std::string_view to_string(RegionKind kind) noexcept {
  switch (kind) {
    case RegionKind::cpr: return "cpr";
    case RegionKind::ihdr_cut: return "cut";
    case RegionKind::ihdr_intersection: return "intersection";
  }
  return "cpr";
}

std::string_view to_string(Inclusion rel) noexcept {
  switch (rel) {
    case Inclusion::equal: return "equal";
    case Inclusion::subset: return "subset";
    case Inclusion::superset: return "superset";
    case Inclusion::incomparable: return "incomparable";
  }
  return "incomparable";
}

PredictionRegion cpr(const Contour& c, const Rational& alpha) {
  require_alpha(alpha);
  return {strong_cut(c, alpha), alpha, RegionKind::cpr};
}

PredictionRegion ihdr_cut(const Contour& c, const Rational& alpha) {
  require_alpha(alpha);
  CONSONANCE_REQUIRE(c.is_consonant(), ErrorCode::NonConsonantContour, "IHDR needs a consonant contour");
  return {strong_cut(c, alpha), alpha, RegionKind::ihdr_cut};
}

PredictionRegion ihdr_intersection(const Contour& c, const Rational& alpha) {
  require_alpha(alpha);
  const auto lower = lower_table(c);  // checks consonance and K
  const Rational threshold = Rational(1) - alpha;
  EventMask meet = lower.size() - 1;
  for (EventMask m = 0; m < lower.size(); ++m) {
    if (lower[m] >= threshold) meet &= m;
  }
  return {Event::from_mask(meet, c.size()), alpha, RegionKind::ihdr_intersection};
}

std::vector<Rational> alpha_sweep(const Contour& c) {
  auto levels = c.breakpoints();
  std::vector<Rational> out{Rational(0), Rational(1)};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.push_back(levels[i]);
    if (i + 1 < levels.size()) out.push_back((levels[i] + levels[i + 1]) / Rational(2));
  }
  if (!levels.empty() && levels.front() > Rational(0)) out.push_back(levels.front() / Rational(2));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RegionEquivalenceReport check_region_equivalence(const Contour& c, std::span<const Rational> alphas) {
  RegionEquivalenceReport report;
  report.consonant = c.is_consonant();
  if (!report.consonant) return report;

  report.alphas.assign(alphas.begin(), alphas.end());
  const auto sweep = alpha_sweep(c);
  report.alphas.insert(report.alphas.end(), sweep.begin(), sweep.end());
  std::sort(report.alphas.begin(), report.alphas.end());
  report.alphas.erase(std::unique(report.alphas.begin(), report.alphas.end()), report.alphas.end());

  for (const auto& alpha : report.alphas) {
    auto a = cpr(c, alpha).event;
    auto b = ihdr_cut(c, alpha).event;
    auto d = ihdr_intersection(c, alpha).event;
    if (!(a == b && b == d)) report.violations.push_back({alpha, std::move(a), std::move(b), std::move(d)});
  }
  return report;
}

Inclusion inclusion(const Event& a, const Event& b) {
  const bool ab = a.is_subset_of(b);
  const bool ba = b.is_subset_of(a);
  if (ab && ba) return Inclusion::equal;
  if (ab) return Inclusion::subset;
  if (ba) return Inclusion::superset;
  return Inclusion::incomparable;
}

double region_size(const Event& e, const OutcomeSpace& space) {
  if (const auto* grid = std::get_if<GridOutcomeSpace>(&space)) {
    return static_cast<double>(e.size()) * grid->cell_width();
  }
  return static_cast<double>(e.size());
}

MeasureComparison compare_measures(std::span<const std::size_t> data, const FiniteOutcomeSpace& space,
                                   const NonconformityMeasure& psi1, const NonconformityMeasure& psi2,
                                   const Rational& alpha) {
  return compare(transduce_grid(data, space, psi1).contour, transduce_grid(data, space, psi2).contour, alpha);
}

MeasureComparison compare_measures(std::span<const double> data, const GridOutcomeSpace& space,
                                   const NonconformityMeasure& psi1, const NonconformityMeasure& psi2,
                                   const Rational& alpha) {
  return compare(transduce_grid(data, space, psi1).contour, transduce_grid(data, space, psi2).contour, alpha);
}

}  // namespace consonance

#include "consonance/outcome.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "consonance/error.hpp"

namespace consonance {

FiniteOutcomeSpace::FiniteOutcomeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  CONSONANCE_REQUIRE(!labels_.empty(), ErrorCode::InvalidArgument, "outcome space needs at least one label");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    CONSONANCE_REQUIRE(seen.insert(l).second, ErrorCode::InvalidArgument, "duplicate label '" + l + "'");
  }
}

FiniteOutcomeSpace FiniteOutcomeSpace::indexed(std::size_t size) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) labels.push_back(std::to_string(i));
  return FiniteOutcomeSpace(std::move(labels));
}

const std::string& FiniteOutcomeSpace::label(std::size_t index) const {
  CONSONANCE_REQUIRE(index < labels_.size(), ErrorCode::UnknownLabel, "label index out of range");
  return labels_[index];
}

std::size_t FiniteOutcomeSpace::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  CONSONANCE_REQUIRE(it != labels_.end(), ErrorCode::UnknownLabel, "unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

GridOutcomeSpace::GridOutcomeSpace(double lo, double hi, std::size_t num_points)
    : lo_(lo), hi_(hi), num_points_(num_points) {
  CONSONANCE_REQUIRE(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorCode::InvalidArgument,
                     "grid needs finite lo < hi");
  CONSONANCE_REQUIRE(num_points >= 2, ErrorCode::InvalidArgument, "grid needs at least two points");
}

double GridOutcomeSpace::point(std::size_t index) const {
  CONSONANCE_REQUIRE(index < num_points_, ErrorCode::InvalidArgument, "grid index out of range");
  if (index + 1 == num_points_) return hi_;
  return lo_ + static_cast<double>(index) * (hi_ - lo_) / static_cast<double>(num_points_ - 1);
}

double GridOutcomeSpace::cell_width() const noexcept {
  return (hi_ - lo_) / static_cast<double>(num_points_ - 1);
}

std::vector<double> GridOutcomeSpace::points() const {
  std::vector<double> out(num_points_);
  for (std::size_t i = 0; i < num_points_; ++i) out[i] = point(i);
  return out;
}

std::size_t space_size(const OutcomeSpace& space) noexcept {
  return std::visit([](const auto& s) { return s.size(); }, space);
}

Event::Event(std::vector<std::size_t> indices, std::size_t space_size)
    : indices_(std::move(indices)), space_size_(space_size) {
  std::sort(indices_.begin(), indices_.end());
  CONSONANCE_REQUIRE(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(),
                     ErrorCode::InvalidArgument, "duplicate outcome index in event");
  CONSONANCE_REQUIRE(indices_.empty() || indices_.back() < space_size_, ErrorCode::InvalidArgument,
                     "outcome index outside the space");
}

Event Event::full(std::size_t space_size) {
  std::vector<std::size_t> idx(space_size);
  for (std::size_t i = 0; i < space_size; ++i) idx[i] = i;
  Event e(space_size);
  e.indices_ = std::move(idx);
  return e;
}

Event Event::from_mask(EventMask mask, std::size_t space_size) {
  CONSONANCE_REQUIRE(space_size <= 64, ErrorCode::SpaceTooLarge, "bitmask events need K <= 64");
  CONSONANCE_REQUIRE(space_size == 64 || (mask >> space_size) == 0, ErrorCode::InvalidArgument,
                     "mask has bits outside the space");
  Event e(space_size);
  e.indices_.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    e.indices_.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return e;
}

bool Event::contains(std::size_t index) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool Event::is_subset_of(const Event& other) const {
  CONSONANCE_REQUIRE(space_size_ == other.space_size_, ErrorCode::InvalidArgument, "events from different spaces");
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

EventMask Event::mask() const {
  CONSONANCE_REQUIRE(space_size_ <= 64, ErrorCode::SpaceTooLarge, "bitmask events need K <= 64");
  EventMask m = 0;
  for (auto i : indices_) m |= EventMask{1} << i;
  return m;
}

Event complement(const Event& e) {
  Event out(e.space_size());
  std::vector<std::size_t> idx;
  idx.reserve(e.space_size() - e.size());
  auto it = e.begin();
  for (std::size_t i = 0; i < e.space_size(); ++i) {
    if (it != e.end() && *it == i) {
      ++it;
    } else {
      idx.push_back(i);
    }
  }
  return Event(std::move(idx), e.space_size());
}

Event set_union(const Event& a, const Event& b) {
  CONSONANCE_REQUIRE(a.space_size() == b.space_size(), ErrorCode::InvalidArgument, "events from different spaces");
  std::vector<std::size_t> idx;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(idx));
  return Event(std::move(idx), a.space_size());
}

Event set_intersection(const Event& a, const Event& b) {
  CONSONANCE_REQUIRE(a.space_size() == b.space_size(), ErrorCode::InvalidArgument, "events from different spaces");
  std::vector<std::size_t> idx;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(idx));
  return Event(std::move(idx), a.space_size());
}

std::vector<EventMask> canonical_masks(std::size_t space_size) {
  CONSONANCE_REQUIRE(space_size <= kMaxEnumerableOutcomes, ErrorCode::SpaceTooLarge,
                     "2^K enumeration limited to K <= 20, got K=" + std::to_string(space_size));
  const EventMask count = EventMask{1} << space_size;
  std::vector<EventMask> masks(count);
  for (EventMask m = 0; m < count; ++m) masks[m] = m;
  // Lexicographic on the increasing index list == reversed bit order on the
  // lowest set bits; compare index lists directly.
  std::stable_sort(masks.begin(), masks.end(), [](EventMask a, EventMask b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    while (a != 0 && b != 0) {
      const int ia = std::countr_zero(a);
      const int ib = std::countr_zero(b);
      if (ia != ib) return ia < ib;
      a &= a - 1;
      b &= b - 1;
    }
    return false;
  });
  return masks;
}

std::vector<Event> enumerate_events(const FiniteOutcomeSpace& space) {
  const auto masks = canonical_masks(space.size());
  std::vector<Event> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(Event::from_mask(m, space.size()));
  return out;
}

std::vector<std::string> event_labels(const Event& e, const FiniteOutcomeSpace& space) {
  CONSONANCE_REQUIRE(e.space_size() == space.size(), ErrorCode::InvalidArgument, "event/space size mismatch");
  std::vector<std::string> out;
  out.reserve(e.size());
  for (auto i : e) out.push_back(space.label(i));
  return out;
}

Event event_from_labels(const std::vector<std::string>& labels, const FiniteOutcomeSpace& space) {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& l : labels) idx.push_back(space.index_of(l));
  return Event(std::move(idx), space.size());
}

}  // namespace consonance

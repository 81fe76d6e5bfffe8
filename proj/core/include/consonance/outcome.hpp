#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace consonance {

// Largest finite space for which 2^K scans are permitted.
inline constexpr std::size_t kMaxEnumerableOutcomes = 20;

// Bitset form of an event on a space with at most 64 outcomes.
using EventMask = std::uint64_t;

class FiniteOutcomeSpace {
 public:
  explicit FiniteOutcomeSpace(std::vector<std::string> labels);

  // Labels "0", "1", ..., "K-1".
  static FiniteOutcomeSpace indexed(std::size_t size);

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::string& label(std::size_t index) const;
  [[nodiscard]] std::size_t index_of(const std::string& label) const;

  friend bool operator==(const FiniteOutcomeSpace&, const FiniteOutcomeSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

// Uniform grid lo + i*(hi-lo)/(num_points-1). Points are computed on demand
// from the endpoints so they reproduce bit-for-bit.
class GridOutcomeSpace {
 public:
  GridOutcomeSpace(double lo, double hi, std::size_t num_points);

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] std::size_t size() const noexcept { return num_points_; }
  [[nodiscard]] double point(std::size_t index) const;
  [[nodiscard]] double cell_width() const noexcept;
  [[nodiscard]] std::vector<double> points() const;

  friend bool operator==(const GridOutcomeSpace&, const GridOutcomeSpace&) = default;

 private:
  double lo_;
  double hi_;
  std::size_t num_points_;
};

using OutcomeSpace = std::variant<FiniteOutcomeSpace, GridOutcomeSpace>;

std::size_t space_size(const OutcomeSpace& space) noexcept;

// A subset of {0, ..., K-1}, stored as strictly increasing indices.
class Event {
 public:
  explicit Event(std::size_t space_size) : space_size_(space_size) {}
  Event(std::vector<std::size_t> indices, std::size_t space_size);

  static Event full(std::size_t space_size);
  static Event from_mask(EventMask mask, std::size_t space_size);

  [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  [[nodiscard]] std::size_t space_size() const noexcept { return space_size_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] bool contains(std::size_t index) const noexcept;
  [[nodiscard]] bool is_subset_of(const Event& other) const;
  [[nodiscard]] EventMask mask() const;

  [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
  [[nodiscard]] auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const Event&, const Event&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t space_size_;
};

Event complement(const Event& e);
Event set_union(const Event& a, const Event& b);
Event set_intersection(const Event& a, const Event& b);

// All 2^K events of `space`, ordered by cardinality and then lexicographically
// by index list. Throws SpaceTooLarge for K > 20.
std::vector<Event> enumerate_events(const FiniteOutcomeSpace& space);

// Same order as enumerate_events, as bitmasks over K outcomes.
std::vector<EventMask> canonical_masks(std::size_t space_size);

std::vector<std::string> event_labels(const Event& e, const FiniteOutcomeSpace& space);
Event event_from_labels(const std::vector<std::string>& labels, const FiniteOutcomeSpace& space);

}  // namespace consonance

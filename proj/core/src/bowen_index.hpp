#pragma once

// Bucket grid over selected (time, axis) coordinates of an orbit table.
// If two orbits are within Bowen distance eps then every coordinate at every
// time differs by at most eps, so their buckets differ by at most one step on
// each key axis.

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "entrocode/entropy.hpp"

namespace entrocode::detail {

class BowenIndex {
 public:
  BowenIndex(const OrbitTable& orbits, const StateSpace& space, int n,
             double eps)
      : orbits_(orbits) {
    const std::size_t d = space.dimension();
    std::vector<int> times = {0};
    if (n > 1) times.push_back(n - 1);
    for (int t : times) {
      for (std::size_t axis = 0; axis < d && axes_.size() < 4; ++axis) {
        Axis a;
        a.time = t;
        a.axis = axis;
        a.periodic = space.axis_periodic(axis);
        a.lo = space.axis_lo(axis);
        if (a.periodic) {
          a.bins = std::max(1, static_cast<int>(std::floor(1.0 / eps)));
          a.width = 1.0 / a.bins;
        } else {
          a.width = eps;
          a.bins = static_cast<int>(std::floor(space.axis_extent(axis) / eps)) + 1;
        }
        axes_.push_back(a);
      }
    }
  }

  void insert(std::size_t sample) {
    buckets_[key_of(bins_of(sample))].push_back(
        static_cast<std::uint32_t>(sample));
  }

  /// Calls visit(candidate) for indexed samples in neighbouring buckets until
  /// visit returns true. Returns whether any visit returned true.
  template <class Visit>
  bool any_neighbour(std::size_t sample, Visit&& visit) const {
    const auto centre = bins_of(sample);
    std::vector<int> bins(centre.size());
    return recurse(centre, bins, 0, visit);
  }

 private:
  struct Axis {
    int time = 0;
    std::size_t axis = 0;
    bool periodic = false;
    double lo = 0.0;
    double width = 1.0;
    int bins = 1;
  };

  std::vector<int> bins_of(std::size_t sample) const {
    std::vector<int> out;
    out.reserve(axes_.size());
    for (const Axis& a : axes_) {
      const double c = orbits_.at(sample, a.time)[a.axis];
      int b = static_cast<int>(std::floor((c - a.lo) / a.width));
      b = std::clamp(b, 0, a.bins - 1);
      out.push_back(b);
    }
    return out;
  }

  std::uint64_t key_of(const std::vector<int>& bins) const {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      key = key * static_cast<std::uint64_t>(axes_[i].bins + 2) +
            static_cast<std::uint64_t>(bins[i]);
    }
    return key;
  }

  template <class Visit>
  bool recurse(const std::vector<int>& centre, std::vector<int>& bins,
               std::size_t depth, Visit& visit) const {
    if (depth == axes_.size()) {
      auto it = buckets_.find(key_of(bins));
      if (it == buckets_.end()) return false;
      for (std::uint32_t c : it->second) {
        if (visit(static_cast<std::size_t>(c))) return true;
      }
      return false;
    }
    const Axis& a = axes_[depth];
    int offsets[3] = {-1, 0, 1};
    int seen[3];
    int n_seen = 0;
    for (int off : offsets) {
      int b = centre[depth] + off;
      if (a.periodic) {
        b = ((b % a.bins) + a.bins) % a.bins;
      } else if (b < 0 || b >= a.bins) {
        continue;
      }
      bool dup = false;
      for (int k = 0; k < n_seen; ++k) dup = dup || seen[k] == b;
      if (dup) continue;
      seen[n_seen++] = b;
      bins[depth] = b;
      if (recurse(centre, bins, depth + 1, visit)) return true;
    }
    return false;
  }

  const OrbitTable& orbits_;
  std::vector<Axis> axes_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

}  // namespace entrocode::detail

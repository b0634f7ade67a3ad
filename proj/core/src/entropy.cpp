#include "entrocode/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <queue>

#include "bowen_index.hpp"
#include "entrocode/error.hpp"

namespace entrocode {

std::string_view to_string(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::kSpanning:
      return "spanning";
    case EntropyMethod::kSeparated:
      return "separated";
    case EntropyMethod::kKatok:
      return "katok";
    case EntropyMethod::kPartition:
      return "partition";
    case EntropyMethod::kRea:
      return "rea";
    case EntropyMethod::kRestricted:
      return "restricted";
  }
  return "unknown";
}

void write_entropy_csv(std::ostream& out,
                       std::span<const EntropyEstimate> estimates) {
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  out << "method,eps,n,log2_count\n";
  for (const EntropyEstimate& e : estimates) {
    for (const auto& [n, v] : e.per_n) {
      out << to_string(e.method) << ',' << num(e.epsilon) << ',' << n << ','
          << num(v) << '\n';
    }
    out << to_string(e.method) << ',' << num(e.epsilon) << ",summary,"
        << num(e.value) << '\n';
  }
}

double least_squares_slope(std::span<const double> xs,
                           std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return 0.0;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

OrbitTable::OrbitTable(const SystemSpec& system, const SampleSet& samples,
                       int length)
    : count_(samples.size()), length_(length) {
  if (length < 1) throw Error(ErrorCode::kBadParams, "orbit length must be >= 1");
  states_.reserve(count_ * static_cast<std::size_t>(length));
  for (const State& x0 : samples.points) {
    State x = x0;
    for (int t = 0; t < length; ++t) {
      if (t) x = system.map(x);
      states_.push_back(x);
    }
  }
}

bool OrbitTable::within(const StateSpace& space, std::size_t a, std::size_t b,
                        int n, double eps) const noexcept {
  const State* pa = &states_[a * static_cast<std::size_t>(length_)];
  const State* pb = &states_[b * static_cast<std::size_t>(length_)];
  for (int t = 0; t < n; ++t) {
    if (space.distance(pa[t], pb[t]) > eps) return false;
  }
  return true;
}

std::vector<std::size_t> greedy_cover_indices(const SystemSpec& system,
                                              const OrbitTable& orbits,
                                              const StateSpace& space, int n,
                                              double eps) {
  (void)system;
  if (n < 1 || n > orbits.length()) {
    throw Error(ErrorCode::kBadParams, "depth outside orbit table");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::kBadParams, "eps must be > 0");
  detail::BowenIndex index(orbits, space, n, eps);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < orbits.samples(); ++i) {
    const bool covered = index.any_neighbour(
        i, [&](std::size_t c) { return orbits.within(space, i, c, n, eps); });
    if (!covered) {
      chosen.push_back(i);
      index.insert(i);
    }
  }
  return chosen;
}

namespace {

std::vector<State> pick(const SampleSet& s, const std::vector<std::size_t>& idx) {
  std::vector<State> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(s.points[i]);
  return out;
}

void require_region(const SampleSet& region, int n, double eps) {
  if (region.empty()) throw Error(ErrorCode::kBadParams, "empty region samples");
  if (n < 1) throw Error(ErrorCode::kBadParams, "n must be >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::kBadParams, "eps must be > 0");
}

}  // namespace

std::vector<State> greedy_spanning(const SystemSpec& system,
                                   const SampleSet& region, int n, double eps) {
  require_region(region, n, eps);
  OrbitTable orbits(system, region, n);
  return pick(region,
              greedy_cover_indices(system, orbits, system.space, n, eps));
}

std::vector<State> greedy_separated(const SystemSpec& system,
                                    const SampleSet& region, int n, double eps) {
  // Scan-order maximal separated sets and scan-order greedy covers coincide.
  return greedy_spanning(system, region, n, eps);
}

bool verify_spanning(const SystemSpec& system, const SampleSet& region,
                     std::span<const State> centers, int n, double eps) {
  SampleSet joint;
  joint.points.assign(centers.begin(), centers.end());
  joint.points.insert(joint.points.end(), region.points.begin(),
                      region.points.end());
  OrbitTable orbits(system, joint, n);
  detail::BowenIndex index(orbits, system.space, n, eps);
  for (std::size_t c = 0; c < centers.size(); ++c) index.insert(c);
  for (std::size_t i = centers.size(); i < joint.size(); ++i) {
    const bool covered = index.any_neighbour(
        i, [&](std::size_t c) { return orbits.within(system.space, i, c, n, eps); });
    if (!covered) return false;
  }
  return true;
}

bool verify_separated(const SystemSpec& system, std::span<const State> points,
                      int n, double eps) {
  SampleSet s;
  s.points.assign(points.begin(), points.end());
  OrbitTable orbits(system, s, n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (orbits.within(system.space, i, j, n, eps)) return false;
    }
  }
  return true;
}

EntropyEstimate fit_counts(EntropyMethod method, double eps,
                           const std::vector<std::pair<int, std::size_t>>& counts,
                           std::size_t sample_count, double saturation) {
  if (!(saturation > 0.0 && saturation <= 1.0)) {
    throw Error(ErrorCode::kBadParams, "saturation must lie in (0, 1]");
  }
  EntropyEstimate est;
  est.method = method;
  est.epsilon = eps;
  std::vector<std::pair<int, double>> reliable;
  for (const auto& [n, c] : counts) {
    const double lc = std::log2(static_cast<double>(std::max<std::size_t>(c, 1)));
    est.per_n.emplace_back(n, lc);
    if (static_cast<double>(c) <= saturation * sample_count) {
      reliable.emplace_back(n, lc);
    } else {
      est.unreliable = true;
    }
  }
  if (reliable.size() < 3) est.unreliable = true;
  if (reliable.empty()) return est;
  // Upper half of the reliable depths, at least three points when available.
  const std::size_t take = std::min(
      reliable.size(),
      std::max<std::size_t>(3, (reliable.size() + 1) / 2));
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = reliable.size() - take; i < reliable.size(); ++i) {
    xs.push_back(reliable[i].first);
    ys.push_back(reliable[i].second);
  }
  est.fit_window = {static_cast<int>(xs.front()), static_cast<int>(xs.back())};
  est.value = std::max(0.0, least_squares_slope(xs, ys));
  return est;
}

EntropyEstimate estimate_topological_entropy(const SystemSpec& system,
                                             const SampleSet& region,
                                             std::span<const double> eps_list,
                                             int n_lo, int n_hi,
                                             const TopologicalOptions& options) {
  if (eps_list.empty()) throw Error(ErrorCode::kBadParams, "empty eps list");
  if (n_hi - n_lo + 1 < 3 || n_lo < 1) {
    throw Error(ErrorCode::kBadParams, "n range needs at least three depths");
  }
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw Error(ErrorCode::kBadParams, "eps list must be decreasing");
    }
  }
  require_region(region, n_lo, eps_list.back());
  OrbitTable orbits(system, region, n_hi);
  std::vector<BracketRow> bracket;
  EntropyEstimate last;
  for (double eps : eps_list) {
    std::vector<std::pair<int, std::size_t>> counts;
    for (int n = n_lo; n <= n_hi; ++n) {
      BracketRow row;
      row.eps = eps;
      row.n = n;
      row.separated =
          greedy_cover_indices(system, orbits, system.space, n, eps).size();
      if (options.bracket) {
        row.spanning_half =
            greedy_cover_indices(system, orbits, system.space, n, eps / 2).size();
      }
      counts.emplace_back(n, row.separated);
      bracket.push_back(row);
    }
    last = fit_counts(EntropyMethod::kSeparated, eps, counts, region.size(),
                      options.saturation);
  }
  last.bracket = std::move(bracket);
  return last;
}

namespace {

// Max-gain greedy cover of sample mass >= 1 - delta. neighbours[i] lists the
// samples covered by a ball centred at sample i (including i).
std::size_t max_gain_cover(const std::vector<std::vector<std::uint32_t>>& nbrs,
                           const std::vector<double>& weights, double delta) {
  const std::size_t n = nbrs.size();
  std::vector<char> covered(n, 0);
  auto gain_of = [&](std::size_t i) {
    double g = 0.0;
    for (std::uint32_t j : nbrs[i]) {
      if (!covered[j]) g += weights[j];
    }
    return g;
  };
  using Entry = std::pair<double, std::size_t>;
  // Larger gain first; ties go to the smaller sample index.
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < n; ++i) heap.emplace(gain_of(i), i);

  const double target = 1.0 - delta;
  double mass = 0.0;
  std::size_t picked = 0;
  while (mass < target - 1e-12 && !heap.empty()) {
    auto [g, i] = heap.top();
    heap.pop();
    const double fresh = gain_of(i);
    if (fresh <= 0.0) continue;
    if (fresh < g && !heap.empty() && cmp(Entry{fresh, i}, heap.top())) {
      heap.emplace(fresh, i);
      continue;
    }
    for (std::uint32_t j : nbrs[i]) {
      if (!covered[j]) {
        covered[j] = 1;
        mass += weights[j];
      }
    }
    ++picked;
  }
  return picked;
}

std::vector<std::vector<std::uint32_t>> bowen_neighbours(
    const SystemSpec& system, const OrbitTable& orbits, int n, double eps) {
  detail::BowenIndex index(orbits, system.space, n, eps);
  for (std::size_t i = 0; i < orbits.samples(); ++i) index.insert(i);
  std::vector<std::vector<std::uint32_t>> nbrs(orbits.samples());
  for (std::size_t i = 0; i < orbits.samples(); ++i) {
    index.any_neighbour(i, [&](std::size_t c) {
      if (orbits.within(system.space, i, c, n, eps)) {
        nbrs[i].push_back(static_cast<std::uint32_t>(c));
      }
      return false;
    });
    std::sort(nbrs[i].begin(), nbrs[i].end());
  }
  return nbrs;
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kBadParams, "delta must lie in (0,1)");
  }
}

}  // namespace

std::size_t katok_spanning(const SystemSpec& system, const SampleSet& samples,
                           int n, double eps, double delta) {
  require_region(samples, n, eps);
  require_delta(delta);
  OrbitTable orbits(system, samples, n);
  return max_gain_cover(bowen_neighbours(system, orbits, n, eps),
                        samples.weights, delta);
}

EntropyEstimate katok_entropy(const SystemSpec& system,
                              const SampleSet& samples, int n_lo, int n_hi,
                              double eps, double delta) {
  require_region(samples, n_lo, eps);
  require_delta(delta);
  OrbitTable orbits(system, samples, n_hi);
  std::vector<std::pair<int, std::size_t>> counts;
  for (int n = n_lo; n <= n_hi; ++n) {
    counts.emplace_back(
        n, max_gain_cover(bowen_neighbours(system, orbits, n, eps),
                          samples.weights, delta));
  }
  return fit_counts(EntropyMethod::kKatok, eps, counts, samples.size());
}

namespace {

std::vector<std::vector<std::uint32_t>> density_neighbours(
    const SystemSpec& system, const OrbitTable& orbits, int n, double eps,
    double r) {
  // y is in B(x, n, eps, r) iff the number of matching times exceeds (1-r)n.
  const int need = static_cast<int>(std::floor((1.0 - r) * n)) + 1;
  const int allowed_misses = n - need;
  const std::size_t count = orbits.samples();
  std::vector<std::vector<std::uint32_t>> nbrs(count);
  for (std::size_t i = 0; i < count; ++i) {
    nbrs[i].push_back(static_cast<std::uint32_t>(i));
    for (std::size_t j = i + 1; j < count; ++j) {
      int misses = 0;
      for (int t = 0; t < n && misses <= allowed_misses; ++t) {
        if (system.space.distance(orbits.at(i, t), orbits.at(j, t)) > eps) {
          ++misses;
        }
      }
      if (misses <= allowed_misses) {
        nbrs[i].push_back(static_cast<std::uint32_t>(j));
        nbrs[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  for (auto& v : nbrs) std::sort(v.begin(), v.end());
  return nbrs;
}

void require_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::kBadParams, "r must lie in (0,1)");
}

}  // namespace

std::size_t rea_spanning(const SystemSpec& system, const SampleSet& samples,
                         int n, double eps, double r, double delta) {
  require_region(samples, n, eps);
  require_delta(delta);
  require_r(r);
  OrbitTable orbits(system, samples, n);
  return max_gain_cover(density_neighbours(system, orbits, n, eps, r),
                        samples.weights, delta);
}

EntropyEstimate rea_entropy(const SystemSpec& system, const SampleSet& samples,
                            int n_lo, int n_hi, double eps, double r,
                            double delta) {
  require_region(samples, n_lo, eps);
  require_delta(delta);
  require_r(r);
  OrbitTable orbits(system, samples, n_hi);
  std::vector<std::pair<int, std::size_t>> counts;
  for (int n = n_lo; n <= n_hi; ++n) {
    counts.emplace_back(
        n, max_gain_cover(density_neighbours(system, orbits, n, eps, r),
                          samples.weights, delta));
  }
  return fit_counts(EntropyMethod::kRea, eps, counts, samples.size());
}

RestrictedEntropy restricted_entropy(const SystemSpec& system,
                                     const SampleSet& parent,
                                     const std::vector<std::size_t>& subset_idx,
                                     int n_lo, int n_hi, double scale) {
  RestrictedEntropy out;
  for (std::size_t i : subset_idx) out.mass_fraction += parent.weights.at(i);
  const SampleSet sub = subset(parent, subset_idx);
  require_region(sub, n_lo, scale);
  OrbitTable orbits(system, sub, n_hi);
  std::vector<std::pair<int, std::size_t>> counts;
  for (int n = n_lo; n <= n_hi; ++n) {
    counts.emplace_back(
        n, greedy_cover_indices(system, orbits, system.space, n, scale).size());
  }
  out.estimate = fit_counts(EntropyMethod::kRestricted, scale, counts, sub.size());
  return out;
}

CylinderTable::CylinderTable(const SystemSpec& system, const SampleSet& samples,
                             const Partition& partition, int depth)
    : depth_(depth), weights_(samples.weights) {
  if (depth < 1) throw Error(ErrorCode::kBadParams, "depth must be >= 1");
  const std::size_t n = samples.size();
  symbols_.resize(n * static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < n; ++i) {
    itinerary_into(system, partition, samples.points[i],
                   {symbols_.data() + i * static_cast<std::size_t>(depth),
                    static_cast<std::size_t>(depth)});
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    auto sa = string(a);
    auto sb = string(b);
    if (std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end())) {
      return true;
    }
    if (std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end())) {
      return false;
    }
    return a < b;
  });
}

bool CylinderTable::same_prefix(std::size_t a, std::size_t b, int n) const noexcept {
  auto sa = string(a);
  auto sb = string(b);
  return std::equal(sa.begin(), sa.begin() + n, sb.begin());
}

PartitionEntropy partition_entropy(const SystemSpec& system,
                                   const SampleSet& samples,
                                   const Partition& partition, int n_max) {
  if (n_max < 2) throw Error(ErrorCode::kBadParams, "n_max must be >= 2");
  if (samples.empty()) throw Error(ErrorCode::kBadParams, "empty samples");
  CylinderTable table(system, samples, partition, n_max);
  PartitionEntropy out;
  out.estimate.method = EntropyMethod::kPartition;
  const double guard = kCylinderGuard * static_cast<double>(samples.size());
  for (int n = 1; n <= n_max; ++n) {
    double h = 0.0;
    std::size_t distinct = 0;
    table.for_each_cylinder(n, [&](std::size_t first, std::size_t last) {
      double mass = 0.0;
      for (std::size_t k = first; k < last; ++k) {
        mass += table.weights()[table.order()[k]];
      }
      if (mass > 0.0) h -= mass * std::log2(mass);
      ++distinct;
    });
    h = std::max(0.0, h);
    out.estimate.per_n.emplace_back(n, h);
    out.rate.push_back(h / n);
    out.cylinders.push_back(distinct);
    if (static_cast<double>(distinct) <= guard) {
      if (out.reliable_depth == n - 1) out.reliable_depth = n;
    } else {
      out.under_sampled = true;
    }
  }
  for (std::size_t i = 1; i < out.estimate.per_n.size(); ++i) {
    out.increments.push_back(out.estimate.per_n[i].second -
                             out.estimate.per_n[i - 1].second);
  }
  // Slope of H(P^n) over the upper half of the guarded depths.
  const int reliable = std::max(out.reliable_depth, 1);
  const int take = std::max(2, (reliable + 1) / 2);
  const int lo = std::max(1, reliable - take + 1);
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n = lo; n <= std::max(reliable, lo + 1) && n <= n_max; ++n) {
    xs.push_back(n);
    ys.push_back(out.estimate.per_n[static_cast<std::size_t>(n - 1)].second);
  }
  out.estimate.fit_window = {static_cast<int>(xs.front()),
                             static_cast<int>(xs.back())};
  out.estimate.value = std::max(0.0, least_squares_slope(xs, ys));
  out.estimate.unreliable = out.reliable_depth < 2;
  return out;
}

TypicalSet::TypicalSet(int depth, double delta, double entropy_ref,
                       std::vector<ItineraryString> strings,
                       double covered_mass)
    : depth_(depth),
      delta_(delta),
      entropy_ref_(entropy_ref),
      strings_(std::move(strings)),
      covered_mass_(covered_mass) {
  if (static_cast<double>(strings_.size()) > cardinality_bound() * (1.0 + 1e-9)) {
    throw Error(ErrorCode::kBadParams, "typical set exceeds 2^{n(h+delta)}");
  }
}

std::optional<std::size_t> TypicalSet::index_of(std::span<const Symbol> s) const {
  auto it = std::lower_bound(
      strings_.begin(), strings_.end(), s,
      [](const ItineraryString& a, std::span<const Symbol> b) {
        return std::lexicographical_compare(a.symbols.begin(), a.symbols.end(),
                                            b.begin(), b.end());
      });
  if (it == strings_.end() ||
      !std::equal(it->symbols.begin(), it->symbols.end(), s.begin(), s.end())) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - strings_.begin());
}

double TypicalSet::cardinality_bound() const {
  return std::exp2(depth_ * (entropy_ref_ + delta_));
}

TypicalSet typical_set_from(const CylinderTable& table, int n, double delta,
                            double entropy_ref) {
  if (n < 1 || n > table.depth()) {
    throw Error(ErrorCode::kBadParams, "typical-set depth outside table");
  }
  if (!(delta > 0.0)) throw Error(ErrorCode::kBadParams, "delta must be > 0");
  const double lo = std::exp2(-n * (entropy_ref + delta));
  const double hi = std::exp2(-n * (entropy_ref - delta));
  std::vector<ItineraryString> strings;
  double covered = 0.0;
  table.for_each_cylinder(n, [&](std::size_t first, std::size_t last) {
    double mass = 0.0;
    for (std::size_t k = first; k < last; ++k) {
      mass += table.weights()[table.order()[k]];
    }
    if (mass >= lo && mass <= hi) {
      auto s = table.string(table.order()[first]);
      strings.push_back({{s.begin(), s.begin() + n}});
      covered += mass;
    }
  });
  return TypicalSet(n, delta, entropy_ref, std::move(strings), covered);
}

TypicalSet typical_set(const SystemSpec& system, const SampleSet& samples,
                       const Partition& partition, int n, double delta) {
  const double h =
      partition_entropy(system, samples, partition, std::max(n, 2)).estimate.value;
  return typical_set(system, samples, partition, n, delta, h);
}

TypicalSet typical_set(const SystemSpec& system, const SampleSet& samples,
                       const Partition& partition, int n, double delta,
                       double entropy_ref) {
  CylinderTable table(system, samples, partition, n);
  TypicalSet out = typical_set_from(table, n, delta, entropy_ref);
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyTypicalSet,
                "no string of depth " + std::to_string(n) + " is typical");
  }
  return out;
}

SmbDeviation smb_deviation(const SystemSpec& system, const SampleSet& samples,
                           const Partition& partition,
                           std::span<const int> n_list, double delta) {
  if (n_list.empty()) throw Error(ErrorCode::kBadParams, "empty depth list");
  const int n_max = std::max(2, *std::max_element(n_list.begin(), n_list.end()));
  const double h =
      partition_entropy(system, samples, partition, n_max).estimate.value;
  return smb_deviation(system, samples, partition, n_list, delta, h);
}

SmbDeviation smb_deviation(const SystemSpec& system, const SampleSet& samples,
                           const Partition& partition,
                           std::span<const int> n_list, double delta,
                           double entropy_ref) {
  if (n_list.empty()) throw Error(ErrorCode::kBadParams, "empty depth list");
  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  CylinderTable table(system, samples, partition, n_max);
  SmbDeviation out;
  out.entropy_ref = entropy_ref;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n : n_list) {
    double deviant = 0.0;
    table.for_each_cylinder(n, [&](std::size_t first, std::size_t last) {
      double mass = 0.0;
      for (std::size_t k = first; k < last; ++k) {
        mass += table.weights()[table.order()[k]];
      }
      const double rate = -std::log2(mass) / n;
      if (std::abs(rate - entropy_ref) > delta) deviant += mass;
    });
    out.mass.emplace_back(n, deviant);
    out.exact_zero.push_back(deviant == 0.0);
    if (deviant > 0.0) {
      xs.push_back(n);
      ys.push_back(std::log2(deviant));
    }
  }
  if (xs.size() >= 2) out.rate = least_squares_slope(xs, ys);
  return out;
}

}  // namespace entrocode

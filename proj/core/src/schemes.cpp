#include "entrocode/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>
#include <memory>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "entrocode/error.hpp"

namespace entrocode {
namespace {

// Codeword orbits stored flat, plus a bucket grid on the time-0 state. Two
// orbits within Bowen distance eps are within eps at time 0, so their
// buckets differ by at most one step per axis.
class Codebook {
 public:
  Codebook(const SystemSpec& system, std::vector<State> words, int k, double eps)
      : space_(system.space), k_(k), eps_(eps), words_(std::move(words)) {
    orbits_.reserve(words_.size() * static_cast<std::size_t>(k));
    for (const State& w : words_) {
      State x = w;
      for (int t = 0; t < k; ++t) {
        if (t) x = system.map(x);
        orbits_.push_back(x);
      }
    }
    for (std::size_t a = 0; a < space_.dimension(); ++a) {
      Axis ax;
      ax.periodic = space_.axis_periodic(a);
      ax.lo = space_.axis_lo(a);
      if (ax.periodic) {
        ax.bins = std::max(1, static_cast<int>(std::floor(1.0 / eps)));
        ax.width = 1.0 / ax.bins;
      } else {
        ax.width = eps;
        ax.bins = static_cast<int>(std::floor(space_.axis_extent(a) / eps)) + 1;
      }
      axes_.push_back(ax);
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
      buckets_[key(bins_of(orbits_[i * static_cast<std::size_t>(k_)]))]
          .push_back(static_cast<std::uint32_t>(i));
    }
  }

  std::size_t size() const noexcept { return words_.size(); }
  const State& word(std::size_t i) const { return words_.at(i); }

  /// Smallest codeword index within Bowen-k distance eps of the orbit, or
  /// the index with the smallest Bowen distance when none is.
  std::size_t choose(std::span<const State> orbit, bool& covered) const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<int> centre = bins_of(orbit[0]);
    std::vector<int> cur(centre.size());
    visit(centre, cur, 0, [&](std::uint32_t c) {
      if (c < best && distance(orbit, c, eps_) <= eps_) best = c;
    });
    if (best != std::numeric_limits<std::size_t>::max()) {
      covered = true;
      return best;
    }
    covered = false;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < words_.size(); ++c) {
      const double d = distance(orbit, c, best_d);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

 private:
  struct Axis {
    bool periodic = false;
    double lo = 0.0;
    double width = 1.0;
    int bins = 1;
  };

  // Bowen distance, stopping early once it exceeds `cap`.
  double distance(std::span<const State> orbit, std::size_t c, double cap) const {
    double d = 0.0;
    const State* w = &orbits_[c * static_cast<std::size_t>(k_)];
    for (int t = 0; t < k_ && d <= cap; ++t) {
      d = std::max(d, space_.distance(orbit[static_cast<std::size_t>(t)], w[t]));
    }
    return d;
  }

  std::vector<int> bins_of(const State& x) const {
    std::vector<int> out;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      int b = static_cast<int>(std::floor((x[a] - axes_[a].lo) / axes_[a].width));
      out.push_back(std::clamp(b, 0, axes_[a].bins - 1));
    }
    return out;
  }

  std::uint64_t key(const std::vector<int>& bins) const {
    std::uint64_t k = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      k = k * static_cast<std::uint64_t>(axes_[a].bins) +
          static_cast<std::uint64_t>(bins[a]);
    }
    return k;
  }

  template <class F>
  void visit(const std::vector<int>& centre, std::vector<int>& cur,
             std::size_t depth, F&& f) const {
    if (depth == axes_.size()) {
      auto it = buckets_.find(key(cur));
      if (it != buckets_.end()) {
        for (std::uint32_t c : it->second) f(c);
      }
      return;
    }
    const Axis& a = axes_[depth];
    int seen[3];
    int n_seen = 0;
    for (int off = -1; off <= 1; ++off) {
      int b = centre[depth] + off;
      if (a.periodic) {
        b = ((b % a.bins) + a.bins) % a.bins;
      } else if (b < 0 || b >= a.bins) {
        continue;
      }
      if (std::find(seen, seen + n_seen, b) != seen + n_seen) continue;
      seen[n_seen++] = b;
      cur[depth] = b;
      visit(centre, cur, depth + 1, f);
    }
  }

  StateSpace space_;
  int k_;
  double eps_;
  std::vector<State> words_;
  std::vector<State> orbits_;
  std::vector<Axis> axes_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

class E1Coder final : public Coder {
 public:
  E1Coder(SystemSpec system, std::shared_ptr<const Codebook> book, int k, int base)
      : system_(std::move(system)), book_(std::move(book)), k_(k), base_(base) {}

  Symbol encode(std::span<const State> history) override {
    const std::size_t t = history.size() - 1;
    const int phase = static_cast<int>(t % static_cast<std::size_t>(k_));
    if (phase == 0) {
      std::vector<State> orbit;
      orbit.reserve(static_cast<std::size_t>(k_));
      State x = history.back();
      for (int i = 0; i < k_; ++i) x = system_.map(x);
      for (int i = 0; i < k_; ++i) {
        if (i) x = system_.map(x);
        orbit.push_back(x);
      }
      bool covered = false;
      const std::size_t idx = book_->choose(orbit, covered);
      digits_ = index_encode(idx, base_, k_);
    }
    return digits_[static_cast<std::size_t>(phase)];
  }

 private:
  SystemSpec system_;
  std::shared_ptr<const Codebook> book_;
  int k_;
  int base_;
  std::vector<Symbol> digits_;
};

class E1Estimator final : public Estimator {
 public:
  E1Estimator(SystemSpec system, std::shared_ptr<const Codebook> book, int k,
              int base, State centroid)
      : system_(std::move(system)),
        book_(std::move(book)),
        k_(k),
        base_(base),
        current_(centroid) {}

  State receive(Symbol q) override {
    const std::size_t t = t_++;
    const int phase = static_cast<int>(t % static_cast<std::size_t>(k_));
    if (phase == 0 && !complete_.empty()) {
      const std::uint64_t idx = index_decode(complete_, base_);
      current_ = book_->word(std::min<std::size_t>(idx, book_->size() - 1));
      decoded_ = true;
    } else if (decoded_) {
      current_ = system_.map(current_);
    }
    pending_.push_back(q);
    if (pending_.size() == static_cast<std::size_t>(k_)) {
      complete_ = std::move(pending_);
      pending_.clear();
    }
    return current_;
  }

 private:
  SystemSpec system_;
  std::shared_ptr<const Codebook> book_;
  int k_;
  int base_;
  State current_;
  bool decoded_ = false;
  std::size_t t_ = 0;
  std::vector<Symbol> pending_;
  std::vector<Symbol> complete_;
};

}  // namespace

E1Scheme build_e1_coder(const SystemSpec& system, const SampleSet& region,
                        double eps, const Channel& channel,
                        const E1Options& options) {
  if (channel.alphabet_size < 2) {
    throw Error(ErrorCode::kBadParams, "alphabet size must be >= 2");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::kBadParams, "eps must be > 0");
  if (region.empty()) throw Error(ErrorCode::kBadParams, "empty region samples");
  if (options.k_max < 1) throw Error(ErrorCode::kBadParams, "k_max must be >= 1");

  OrbitTable orbits(system, region, options.k_max);
  const double saturation = kSaturationFraction * static_cast<double>(region.size());
  for (int k = 1; k <= options.k_max; ++k) {
    const double margin =
        region.covering_radius * std::pow(system.lipschitz, k - 1);
    const double eps_cover = eps - margin;
    if (!(eps_cover > 0.0)) {
      throw Error(ErrorCode::kInfeasibleBlockLength,
                  "region samples too sparse for block length " +
                      std::to_string(k));
    }
    const auto idx = greedy_cover_indices(system, orbits, system.space, k, eps_cover);
    if (idx.size() > 1 && static_cast<double>(idx.size()) >= saturation) {
      throw Error(ErrorCode::kInfeasibleBlockLength,
                  "codebook of " + std::to_string(idx.size()) +
                      " words saturates the region samples at k=" +
                      std::to_string(k) + " before fitting the channel");
    }
    if (idx.size() > checked_power(channel.alphabet_size, k)) continue;

    E1Scheme out;
    out.k = k;
    out.eps_cover = eps_cover;
    for (std::size_t i : idx) out.codebook.push_back(region.points[i]);
    auto book = std::make_shared<const Codebook>(system, out.codebook, k, eps);
    const State c = centroid(system.space, region);
    const int base = channel.alphabet_size;
    out.scheme.kind = SchemeKind::kE1Spanning;
    out.scheme.channel = channel;
    out.scheme.block_length = k;
    out.scheme.transient = k;
    out.scheme.codebook_size = out.codebook.size();
    out.scheme.make_coder = [system, book, k, base] {
      return std::make_unique<E1Coder>(system, book, k, base);
    };
    out.scheme.make_estimator = [system, book, k, base, c] {
      return std::make_unique<E1Estimator>(system, book, k, base, c);
    };
    return out;
  }
  throw Error(ErrorCode::kInfeasibleBlockLength,
              "no block length <= " + std::to_string(options.k_max) +
                  " fits the codebook in the channel");
}

std::vector<TypicalSet> typical_set_family(const SystemSpec& system,
                                           const SampleSet& samples,
                                           const Partition& partition, int n_lo,
                                           int n_hi, double delta,
                                           double entropy_ref) {
  if (n_lo < 1 || n_hi < n_lo) throw Error(ErrorCode::kBadParams, "depth range");
  CylinderTable table(system, samples, partition, n_hi);
  std::vector<TypicalSet> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    out.push_back(typical_set_from(table, n, delta, entropy_ref));
  }
  return out;
}

std::vector<int> e2_block_starts(const E2Options& options, int horizon) {
  std::vector<int> starts;
  int tau = 0;
  for (int b = 0; tau < horizon; ++b) {
    starts.push_back(tau);
    tau += std::min(options.first_block + b, options.j_max) + 1;
  }
  return starts;
}

namespace {

using TypicalTable = std::vector<TypicalSet>;

const TypicalSet& set_of_depth(const TypicalTable& sets, int n) {
  for (const TypicalSet& s : sets) {
    if (s.depth() == n) return s;
  }
  throw Error(ErrorCode::kBadParams,
              "no typical set of depth " + std::to_string(n));
}

class E2Coder final : public Coder {
 public:
  E2Coder(SystemSpec system, Partition partition,
          std::shared_ptr<const TypicalTable> sets, E2Options options, int base)
      : system_(std::move(system)),
        partition_(std::move(partition)),
        sets_(std::move(sets)),
        options_(options),
        base_(base) {}

  Symbol encode(std::span<const State> history) override {
    if (length_ > 0 && phase_ == length_) {
      ++block_;
      phase_ = 0;
    }
    if (phase_ == 0) {
      length_ = std::min(options_.first_block + block_, options_.j_max) + 1;
      State z = history.back();
      for (int i = 0; i < length_; ++i) z = system_.map(z);
      std::vector<Symbol> s(static_cast<std::size_t>(length_));
      itinerary_into(system_, partition_, z, s);
      const auto idx = set_of_depth(*sets_, length_).index_of(s);
      digits_ = index_encode(idx ? *idx + 1 : 0, base_, length_);
    }
    return digits_[static_cast<std::size_t>(phase_++)];
  }

 private:
  SystemSpec system_;
  Partition partition_;
  std::shared_ptr<const TypicalTable> sets_;
  E2Options options_;
  int base_;
  int block_ = 0;
  int phase_ = 0;
  int length_ = 0;
  std::vector<Symbol> digits_;
};

class E2Estimator final : public Estimator {
 public:
  E2Estimator(SystemSpec system, Partition partition,
              std::shared_ptr<const TypicalTable> sets, E2Options options,
              int base, State centroid)
      : system_(std::move(system)),
        partition_(std::move(partition)),
        sets_(std::move(sets)),
        options_(options),
        base_(base),
        current_(centroid) {}

  State receive(Symbol q) override {
    if (length_ > 0 && phase_ == length_) {
      prev_digits_ = std::move(digits_);
      digits_.clear();
      prev_length_ = length_;
      ++block_;
      phase_ = 0;
      decode();
    }
    if (phase_ == 0) length_ = std::min(options_.first_block + block_, options_.j_max) + 1;
    digits_.push_back(q);

    if (block_ > 0) {
      if (fallback_ || phase_ >= prev_length_) {
        current_ = system_.map(current_);
      } else {
        current_ = partition_.cell(string_[static_cast<std::size_t>(phase_)])
                       .representative;
      }
    }
    ++phase_;
    return current_;
  }

  bool fallback() const override { return fallback_; }

 private:
  void decode() {
    const std::uint64_t v = index_decode(prev_digits_, base_);
    const TypicalSet& set = set_of_depth(*sets_, prev_length_);
    fallback_ = v == 0 || v > set.size();
    if (!fallback_) string_ = set.at(static_cast<std::size_t>(v - 1)).symbols;
  }

  SystemSpec system_;
  Partition partition_;
  std::shared_ptr<const TypicalTable> sets_;
  E2Options options_;
  int base_;
  State current_;
  int block_ = 0;
  int phase_ = 0;
  int length_ = 0;
  int prev_length_ = 0;
  bool fallback_ = false;
  std::vector<Symbol> digits_;
  std::vector<Symbol> prev_digits_;
  std::vector<Symbol> string_;
};

}  // namespace

CodingScheme build_e2_coder(const SystemSpec& system, const Partition& partition,
                            const std::vector<TypicalSet>& typical_sets,
                            const Channel& channel, double eps,
                            const State& centroid, const E2Options& options) {
  if (channel.alphabet_size < 2) {
    throw Error(ErrorCode::kBadParams, "alphabet size must be >= 2");
  }
  if (options.first_block < 0 || options.j_max < options.first_block) {
    throw Error(ErrorCode::kBadParams, "need 0 <= first_block <= j_max");
  }
  const double rho = eps / system.lipschitz;
  if (!(partition.max_diameter() < rho)) {
    throw Error(ErrorCode::kPartitionTooCoarse,
                "max cell diameter " + std::to_string(partition.max_diameter()) +
                    " >= eps / L = " + std::to_string(rho));
  }
  for (int n = options.first_block + 1; n <= options.j_max + 1; ++n) {
    const TypicalSet& s = set_of_depth(typical_sets, n);
    if (s.size() + 1 > checked_power(channel.alphabet_size, n)) {
      throw Error(ErrorCode::kTypicalSetOverflow,
                  "|Sigma_" + std::to_string(n) + "| = " + std::to_string(s.size()) +
                      " exceeds |M|^n - 1");
    }
  }
  auto sets = std::make_shared<const TypicalTable>(typical_sets);
  const int base = channel.alphabet_size;
  CodingScheme scheme;
  scheme.kind = SchemeKind::kE2Growing;
  scheme.channel = channel;
  scheme.block_length = options.j_max + 1;
  scheme.transient = options.first_block + 1;
  for (const TypicalSet& s : typical_sets) {
    scheme.codebook_size = std::max(scheme.codebook_size, s.size());
  }
  scheme.make_coder = [system, partition, sets, options, base] {
    return std::make_unique<E2Coder>(system, partition, sets, options, base);
  };
  scheme.make_estimator = [system, partition, sets, options, base, centroid] {
    return std::make_unique<E2Estimator>(system, partition, sets, options, base,
                                         centroid);
  };
  return scheme;
}

double e3_mass_threshold(const StateSpace& space, double p, double eps) {
  return 1.0 - eps / (2.0 * std::pow(space.diameter(), p));
}

CodingScheme build_e3_coder(const SystemSpec& system, const Partition& partition,
                            int k, const TypicalSet& typical_set,
                            const Channel& channel, double p, double eps,
                            const State& centroid) {
  if (channel.alphabet_size < 2) {
    throw Error(ErrorCode::kBadParams, "alphabet size must be >= 2");
  }
  if (k < 1 || typical_set.depth() != k) {
    throw Error(ErrorCode::kBadParams, "typical set depth must equal k");
  }
  if (!(p > 0.0) || !(eps > 0.0)) {
    throw Error(ErrorCode::kBadParams, "p and eps must be > 0");
  }
  const double max_diam = std::pow(eps / 2.0, 1.0 / p);
  if (!(partition.max_diameter() < max_diam)) {
    throw Error(ErrorCode::kPartitionTooCoarse,
                "max cell diameter " + std::to_string(partition.max_diameter()) +
                    " >= (eps/2)^(1/p) = " + std::to_string(max_diam));
  }
  if (typical_set.size() + 1 > checked_power(channel.alphabet_size, k)) {
    throw Error(ErrorCode::kTypicalSetOverflow,
                "|Sigma_k| = " + std::to_string(typical_set.size()) +
                    " exceeds |M|^k - 1");
  }
  const double threshold = e3_mass_threshold(system.space, p, eps);
  if (typical_set.covered_mass() < threshold) {
    throw Error(ErrorCode::kMassThresholdUnmet,
                "typical mass " + std::to_string(typical_set.covered_mass()) +
                    " < " + std::to_string(threshold));
  }

  auto set = std::make_shared<const TypicalSet>(typical_set);
  const int base = channel.alphabet_size;
  PeriodicFiniteMemoryPolicy policy;
  policy.period = k;
  policy.coder_window = 1;
  policy.estimator_window = 2 * k;
  policy.warmup = k;
  policy.initial_estimate = centroid;
  policy.coder_map = [system, partition, set, k, base](int phase,
                                                       std::span<const State> w) {
    State z = w.back();
    for (int i = phase; i < k; ++i) z = system.map(z);
    std::vector<Symbol> s(static_cast<std::size_t>(k));
    itinerary_into(system, partition, z, s);
    const auto idx = set->index_of(s);
    const auto digits = index_encode(idx ? *idx + 1 : 0, base, k);
    return digits[static_cast<std::size_t>(phase)];
  };
  policy.estimator_map = [partition, set, k, base, centroid](
                             int phase, std::span<const Symbol> w, bool& fallback) {
    const std::size_t end = w.size() - 1 - static_cast<std::size_t>(phase);
    const auto block = w.subspan(end - static_cast<std::size_t>(k),
                                 static_cast<std::size_t>(k));
    const std::uint64_t v = index_decode(block, base);
    if (v == 0 || v > set->size()) {
      fallback = true;
      return centroid;
    }
    const auto& s = set->at(static_cast<std::size_t>(v - 1)).symbols;
    return partition.cell(s[static_cast<std::size_t>(phase)]).representative;
  };

  CodingScheme scheme;
  scheme.kind = SchemeKind::kE3Block;
  scheme.channel = channel;
  scheme.block_length = k;
  scheme.transient = k;
  scheme.codebook_size = typical_set.size();
  scheme.make_coder = [policy] { return policy.make_coder(); };
  scheme.make_estimator = [policy] { return policy.make_estimator(); };
  scheme.periodic = policy;
  return scheme;
}

namespace {

struct ZoomModel {
  Eigen::Matrix2d a;
  Eigen::Matrix2d v;      // columns: unstable, stable eigenvectors
  Eigen::Matrix2d v_inv;  // eigen-coordinates of a standard vector
  double lam_u = 0.0;
  double lam_s = 0.0;
  Eigen::Vector2d c0;  // initial box centre (eigen-coordinates)
  Eigen::Vector2d h0;  // initial half-widths
  int base = 2;

  double half_extent(int axis, const Eigen::Vector2d& h) const {
    return std::abs(v(axis, 0)) * h(0) + std::abs(v(axis, 1)) * h(1);
  }
  double radius(const Eigen::Vector2d& h) const {
    return std::hypot(half_extent(0, h), half_extent(1, h));
  }
};

// Shared box recursion. refine() narrows the unstable side to the named
// piece; advance() pushes the box through A and re-centres it by an integer
// translation, returned so the coder can shift its lift identically.
// Box half-widths stay above this so that rounding in the box centre never
// exceeds the box.
constexpr double kZoomFloor = 1e-9;

struct ZoomBox {
  Eigen::Vector2d c;
  Eigen::Vector2d h;

  void refine(const ZoomModel& m, Symbol piece) {
    const double width = 2.0 * h(0) / m.base;
    c(0) = c(0) - h(0) + (static_cast<double>(piece) + 0.5) * width;
    h(0) = std::max(width / 2.0, kZoomFloor);
  }

  // Returns the integer re-centring shift, or nothing when the box outgrew
  // the torus and was reset to the initial box.
  std::optional<Eigen::Vector2d> advance(const ZoomModel& m) {
    c(0) *= m.lam_u;
    c(1) *= m.lam_s;
    h(0) *= std::abs(m.lam_u);
    h(1) = std::max(h(1) * std::abs(m.lam_s), kZoomFloor);
    if (h(0) > m.h0(0)) {
      c = m.c0;
      h = m.h0;
      return std::nullopt;
    }
    const Eigen::Vector2d centre = m.v * c;
    const Eigen::Vector2d shift(std::floor(centre(0)), std::floor(centre(1)));
    c -= m.v_inv * shift;
    return shift;
  }

  State estimate(const ZoomModel& m) const {
    const Eigen::Vector2d x = m.v * c;
    return State{wrap_unit(x(0)), wrap_unit(x(1))};
  }
};

double centred(double d) { return d - std::round(d); }

class ZoomCoder final : public Coder {
 public:
  explicit ZoomCoder(std::shared_ptr<const ZoomModel> m)
      : m_(std::move(m)), box_{m_->c0, m_->h0} {}

  Symbol encode(std::span<const State> history) override {
    const State& x = history.back();
    if (history.size() == 1) {
      lift_ = Eigen::Vector2d(x[0], x[1]);
    } else {
      const auto shift = box_.advance(*m_);
      const Eigen::Vector2d centre = m_->v * box_.c;
      if (!shift) {
        lift_ = Eigen::Vector2d(x[0], x[1]);
      } else if (std::max(m_->half_extent(0, box_.h), m_->half_extent(1, box_.h)) <
                 0.45) {
        lift_ = Eigen::Vector2d(centre(0) + centred(x[0] - centre(0)),
                                centre(1) + centred(x[1] - centre(1)));
      } else {
        lift_ = m_->a * lift_ - *shift;
      }
    }
    const double u = (m_->v_inv * lift_)(0);
    const double width = 2.0 * box_.h(0) / m_->base;
    const double pos = (u - (box_.c(0) - box_.h(0))) / width;
    const auto piece = static_cast<Symbol>(
        std::clamp(std::floor(pos), 0.0, static_cast<double>(m_->base - 1)));
    box_.refine(*m_, piece);
    return piece;
  }

 private:
  std::shared_ptr<const ZoomModel> m_;
  ZoomBox box_;
  Eigen::Vector2d lift_;
};

class ZoomEstimator final : public Estimator {
 public:
  explicit ZoomEstimator(std::shared_ptr<const ZoomModel> m)
      : m_(std::move(m)), box_{m_->c0, m_->h0} {}

  State receive(Symbol q) override {
    if (started_) box_.advance(*m_);
    started_ = true;
    box_.refine(*m_, q);
    return box_.estimate(*m_);
  }

 private:
  std::shared_ptr<const ZoomModel> m_;
  ZoomBox box_;
  bool started_ = false;
};

}  // namespace

CodingScheme build_zoom_coder(const SystemSpec& system, const Channel& channel,
                              double eps, int horizon_cap) {
  if (system.space.kind() != SpaceKind::kTorus2 || !system.has_jacobian) {
    throw Error(ErrorCode::kBadParams, "zoom coder needs a linear torus map");
  }
  if (channel.alphabet_size < 2) {
    throw Error(ErrorCode::kBadParams, "alphabet size must be >= 2");
  }
  const Matrix j = jacobian(system, State{0.0, 0.0});
  auto m = std::make_shared<ZoomModel>();
  m->a << j(0, 0), j(0, 1), j(1, 0), j(1, 1);
  Eigen::EigenSolver<Eigen::Matrix2d> es(m->a);
  const auto vals = es.eigenvalues();
  if (std::abs(vals(0).imag()) > 1e-12 || std::abs(vals(1).imag()) > 1e-12) {
    throw Error(ErrorCode::kBadParams, "zoom coder needs real eigenvalues");
  }
  int u = std::abs(vals(0).real()) > std::abs(vals(1).real()) ? 0 : 1;
  m->lam_u = vals(u).real();
  m->lam_s = vals(1 - u).real();
  if (!(std::abs(m->lam_u) > 1.0 && std::abs(m->lam_s) < 1.0)) {
    throw Error(ErrorCode::kBadParams, "zoom coder needs a hyperbolic matrix");
  }
  const auto vecs = es.eigenvectors().real();
  m->v.col(0) = vecs.col(u).normalized();
  m->v.col(1) = vecs.col(1 - u).normalized();
  m->v_inv = m->v.inverse();
  Eigen::Vector2d lo(INFINITY, INFINITY);
  Eigen::Vector2d hi(-INFINITY, -INFINITY);
  for (double cx : {0.0, 1.0}) {
    for (double cy : {0.0, 1.0}) {
      const Eigen::Vector2d e = m->v_inv * Eigen::Vector2d(cx, cy);
      lo = lo.cwiseMin(e);
      hi = hi.cwiseMax(e);
    }
  }
  m->c0 = (lo + hi) / 2.0;
  m->h0 = (hi - lo) / 2.0;
  m->base = channel.alphabet_size;

  // Box widths do not depend on the state, so the transient is a property of
  // the scheme alone.
  int transient = horizon_cap;
  Eigen::Vector2d h = m->h0;
  int last_bad = -1;
  for (int t = 0; t < horizon_cap; ++t) {
    if (t) {
      h(0) *= std::abs(m->lam_u);
      h(1) = std::max(h(1) * std::abs(m->lam_s), kZoomFloor);
      if (h(0) > m->h0(0)) h = m->h0;
    }
    h(0) = std::max(h(0) / m->base, kZoomFloor);
    if (m->radius(h) > eps) last_bad = t;
  }
  if (last_bad + 1 < horizon_cap && m->base > std::abs(m->lam_u)) {
    transient = last_bad + 1;
  }

  std::shared_ptr<const ZoomModel> model = m;
  CodingScheme scheme;
  scheme.kind = SchemeKind::kCustom;
  scheme.channel = channel;
  scheme.block_length = 1;
  scheme.transient = transient;
  scheme.make_coder = [model] { return std::make_unique<ZoomCoder>(model); };
  scheme.make_estimator = [model] { return std::make_unique<ZoomEstimator>(model); };
  return scheme;
}

}  // namespace entrocode

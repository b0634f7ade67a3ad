#include "entrocode/coding.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>
#include <set>

#include "entrocode/error.hpp"
#include "entrocode/parallel.hpp"

namespace entrocode {

Channel Channel::with_alphabet(int size) {
  if (size < 2) throw Error(ErrorCode::kBadParams, "alphabet size must be >= 2");
  return Channel{size};
}

double Channel::capacity() const { return std::log2(static_cast<double>(alphabet_size)); }

std::uint64_t checked_power(int base, int length) {
  std::uint64_t v = 1;
  for (int i = 0; i < length; ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

std::vector<Symbol> index_encode(std::uint64_t value, int base, int length) {
  if (base < 2 || length < 0) throw Error(ErrorCode::kBadParams, "index_encode");
  if (value >= checked_power(base, length)) {
    throw Error(ErrorCode::kValueOutOfRange,
                std::to_string(value) + " needs more than " +
                    std::to_string(length) + " base-" + std::to_string(base) +
                    " digits");
  }
  std::vector<Symbol> digits(static_cast<std::size_t>(length), 0);
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<Symbol>(value % static_cast<std::uint64_t>(base));
    value /= static_cast<std::uint64_t>(base);
  }
  return digits;
}

std::uint64_t index_decode(std::span<const Symbol> digits, int base) {
  std::uint64_t v = 0;
  for (Symbol d : digits) {
    if (d >= static_cast<Symbol>(base)) {
      throw Error(ErrorCode::kValueOutOfRange, "digit exceeds base");
    }
    v = v * static_cast<std::uint64_t>(base) + d;
  }
  return v;
}

namespace {

class PeriodicCoder final : public Coder {
 public:
  explicit PeriodicCoder(const PeriodicFiniteMemoryPolicy& policy) : p_(policy) {}

  Symbol encode(std::span<const State> history) override {
    const std::size_t t = history.size() - 1;
    const std::size_t w = std::min<std::size_t>(history.size(),
                                                static_cast<std::size_t>(p_.coder_window));
    return p_.coder_map(static_cast<int>(t % static_cast<std::size_t>(p_.period)),
                        history.subspan(history.size() - w));
  }

 private:
  PeriodicFiniteMemoryPolicy p_;
};

class PeriodicEstimator final : public Estimator {
 public:
  explicit PeriodicEstimator(const PeriodicFiniteMemoryPolicy& policy) : p_(policy) {}

  State receive(Symbol q) override {
    window_.push_back(q);
    if (window_.size() > static_cast<std::size_t>(p_.estimator_window)) {
      window_.erase(window_.begin());
    }
    const std::size_t t = t_++;
    fallback_ = false;
    if (t < static_cast<std::size_t>(p_.warmup)) return p_.initial_estimate;
    return p_.estimator_map(static_cast<int>(t % static_cast<std::size_t>(p_.period)),
                            window_, fallback_);
  }

  bool fallback() const override { return fallback_; }

 private:
  PeriodicFiniteMemoryPolicy p_;
  std::vector<Symbol> window_;
  std::size_t t_ = 0;
  bool fallback_ = false;
};

}  // namespace

std::unique_ptr<Coder> PeriodicFiniteMemoryPolicy::make_coder() const {
  return std::make_unique<PeriodicCoder>(*this);
}

std::unique_ptr<Estimator> PeriodicFiniteMemoryPolicy::make_estimator() const {
  return std::make_unique<PeriodicEstimator>(*this);
}

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kE1Spanning:
      return "e1_spanning";
    case SchemeKind::kE2Growing:
      return "e2_growing";
    case SchemeKind::kE3Block:
      return "e3_block";
    case SchemeKind::kCustom:
      return "custom";
  }
  return "unknown";
}

SchemeKind scheme_kind_from_string(std::string_view name) {
  if (name == "e1_spanning" || name == "e1") return SchemeKind::kE1Spanning;
  if (name == "e2_growing" || name == "e2") return SchemeKind::kE2Growing;
  if (name == "e3_block" || name == "e3") return SchemeKind::kE3Block;
  if (name == "custom") return SchemeKind::kCustom;
  throw Error(ErrorCode::kConfig, "unknown scheme " + std::string(name));
}

Transcript run_policies(const StateSpace& space, std::span<const State> states,
                        Coder& coder, Estimator& estimator, int alphabet_size) {
  if (states.empty()) throw Error(ErrorCode::kBadParams, "horizon must be >= 1");
  Transcript tr;
  tr.alphabet_size = alphabet_size;
  const std::size_t horizon = states.size();
  tr.x.assign(states.begin(), states.end());
  tr.q.reserve(horizon);
  tr.xhat.reserve(horizon);
  tr.dist.reserve(horizon);
  tr.fallback.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const Symbol q = coder.encode(states.first(t + 1));
    if (q >= static_cast<Symbol>(alphabet_size)) {
      throw Error(ErrorCode::kValueOutOfRange, "coder emitted symbol outside alphabet");
    }
    const State xhat = estimator.receive(q);
    tr.q.push_back(q);
    tr.xhat.push_back(xhat);
    tr.dist.push_back(space.distance(states[t], xhat));
    tr.fallback.push_back(estimator.fallback());
  }
  return tr;
}

Transcript run_closed_loop(const SystemSpec& system, const State& x0,
                           const CodingScheme& scheme, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::kBadParams, "horizon must be >= 1");
  std::vector<State> states;
  states.reserve(static_cast<std::size_t>(horizon));
  states.push_back(x0);
  for (int t = 1; t < horizon; ++t) states.push_back(system.map(states.back()));
  auto coder = scheme.make_coder();
  auto estimator = scheme.make_estimator();
  Transcript tr = run_policies(system.space, states, *coder, *estimator,
                               scheme.channel.alphabet_size);
  tr.scheme = std::string(to_string(scheme.kind));
  return tr;
}

std::vector<Transcript> run_ensemble(const SystemSpec& system,
                                     std::span<const State> initial_states,
                                     const CodingScheme& scheme, int horizon) {
  std::vector<Transcript> out(initial_states.size());
  parallel_for(initial_states.size(), [&](std::size_t i) {
    out[i] = run_closed_loop(system, initial_states[i], scheme, horizon);
  });
  return out;
}

std::size_t estimator_string_count(std::span<const Transcript> transcripts,
                                   int t) {
  if (t < 0) throw Error(ErrorCode::kBadParams, "t must be >= 0");
  std::set<std::vector<double>> seen;
  for (const Transcript& tr : transcripts) {
    if (tr.xhat.size() <= static_cast<std::size_t>(t)) {
      throw Error(ErrorCode::kHorizonTooShort, "transcript shorter than t + 1");
    }
    std::vector<double> key;
    for (int s = 0; s <= t; ++s) {
      const State& e = tr.xhat[static_cast<std::size_t>(s)];
      key.insert(key.end(), e.begin(), e.end());
    }
    seen.insert(std::move(key));
  }
  return seen.size();
}

void write_transcript_csv(std::ostream& out, const Transcript& tr) {
  const std::size_t d = tr.x.empty() ? 0 : tr.x.front().size();
  out << "t";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
  out << ",q";
  for (std::size_t i = 0; i < d; ++i) out << ",xhat" << i;
  out << ",dist,fallback_flag\n";
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (std::size_t t = 0; t < tr.x.size(); ++t) {
    out << t;
    for (double c : tr.x[t]) out << ',' << num(c);
    out << ',' << tr.q[t];
    for (double c : tr.xhat[t]) out << ',' << num(c);
    out << ',' << num(tr.dist[t]) << ',' << (tr.fallback[t] ? 1 : 0) << '\n';
  }
}

}  // namespace entrocode

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entrocode/partition.hpp"
#include "entrocode/state.hpp"
#include "entrocode/system.hpp"

namespace entrocode {

/// Noiseless finite-alphabet channel, one symbol per time step.
struct Channel {
  int alphabet_size = 2;

  static Channel with_alphabet(int size);
  double capacity() const;  // log2 |M|
};

/// Big-endian base-`base` digits of value, exactly `length` of them.
std::vector<Symbol> index_encode(std::uint64_t value, int base, int length);
std::uint64_t index_decode(std::span<const Symbol> digits, int base);

/// base^length, saturating at UINT64_MAX.
std::uint64_t checked_power(int base, int length);

/// Causal coder: sees x_0..x_t, emits q_t.
class Coder {
 public:
  virtual ~Coder() = default;
  virtual Symbol encode(std::span<const State> history) = 0;
};

/// Causal estimator: receives q_t, emits the estimate of x_t.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual State receive(Symbol q) = 0;
  /// Whether the estimate just emitted comes from a fallback/atypical block.
  virtual bool fallback() const { return false; }
};

/// Coder and estimator maps that depend on t only through t mod period and
/// read finite windows: q_t = coder_map(t mod period, x_{[t-w+1, t]}),
/// x^_t = estimator_map(t mod period, q_{[t-v+1, t]}) once t >= warmup.
struct PeriodicFiniteMemoryPolicy {
  int period = 1;
  int coder_window = 1;
  int estimator_window = 1;
  int warmup = 0;
  State initial_estimate;
  std::function<Symbol(int, std::span<const State>)> coder_map;
  /// Returns the estimate and sets the flag when the block was atypical.
  std::function<State(int, std::span<const Symbol>, bool&)> estimator_map;

  std::unique_ptr<Coder> make_coder() const;
  std::unique_ptr<Estimator> make_estimator() const;
};

enum class SchemeKind { kE1Spanning, kE2Growing, kE3Block, kCustom };

std::string_view to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(std::string_view name);

/// A built coding scheme. Policy instances carry per-trajectory memory, so
/// each trajectory gets fresh ones from the factories.
struct CodingScheme {
  SchemeKind kind = SchemeKind::kCustom;
  Channel channel;
  int block_length = 1;
  /// First time at which estimates come from decoded symbols.
  int transient = 0;
  std::size_t codebook_size = 0;
  std::function<std::unique_ptr<Coder>()> make_coder;
  std::function<std::unique_ptr<Estimator>()> make_estimator;
  std::optional<PeriodicFiniteMemoryPolicy> periodic;
};

struct Transcript {
  std::vector<State> x;
  std::vector<Symbol> q;
  std::vector<State> xhat;
  std::vector<double> dist;
  std::vector<bool> fallback;
  std::string scheme;
  int alphabet_size = 0;

  std::size_t horizon() const noexcept { return x.size(); }
};

/// Lock-step run over a given state sequence.
Transcript run_policies(const StateSpace& space, std::span<const State> states,
                        Coder& coder, Estimator& estimator, int alphabet_size);

/// Runs x_{t+1} = f(x_t) from x0 for `horizon` steps under the scheme.
Transcript run_closed_loop(const SystemSpec& system, const State& x0,
                           const CodingScheme& scheme, int horizon);

std::vector<Transcript> run_ensemble(const SystemSpec& system,
                                     std::span<const State> initial_states,
                                     const CodingScheme& scheme, int horizon);

/// Distinct estimate prefixes (x^_0..x^_t) across the transcripts.
std::size_t estimator_string_count(std::span<const Transcript> transcripts,
                                   int t);

void write_transcript_csv(std::ostream& out, const Transcript& transcript);

}  // namespace entrocode

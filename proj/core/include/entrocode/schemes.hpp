#pragma once

#include <vector>

#include "entrocode/coding.hpp"
#include "entrocode/entropy.hpp"
#include "entrocode/measure.hpp"
#include "entrocode/partition.hpp"

namespace entrocode {

struct E1Options {
  int k_max = 16;
};

struct E1Scheme {
  CodingScheme scheme;
  int k = 0;
  /// Radius used to cover the region samples. Smaller than eps by the
  /// amount needed to cover unsampled region points when the sample set
  /// has a known covering radius.
  double eps_cover = 0.0;
  std::vector<State> codebook;
};

/// Spanning-codebook coder. Picks the smallest k whose greedy
/// (k, eps_cover)-cover of the region fits in k channel uses. Throws
/// InfeasibleBlockLength when no k <= k_max works or the cover saturates the
/// region samples first.
E1Scheme build_e1_coder(const SystemSpec& system, const SampleSet& region,
                        double eps, const Channel& channel,
                        const E1Options& options = {});

struct E2Options {
  int j_max = 12;
  /// Index of the first block; block b has length min(first_block + b, j_max) + 1.
  int first_block = 0;
};

/// Block start times of the growing-block schedule up to `horizon`.
std::vector<int> e2_block_starts(const E2Options& options, int horizon);

/// Growing-block typical-set coder. `typical_sets` must contain one set per
/// itinerary length first_block + 1 .. j_max + 1.
CodingScheme build_e2_coder(const SystemSpec& system, const Partition& partition,
                            const std::vector<TypicalSet>& typical_sets,
                            const Channel& channel, double eps,
                            const State& centroid, const E2Options& options = {});

/// Fixed-block typical-set coder, exposed as a periodic finite-memory policy
/// with period k.
CodingScheme build_e3_coder(const SystemSpec& system, const Partition& partition,
                            int k, const TypicalSet& typical_set,
                            const Channel& channel, double p, double eps,
                            const State& centroid);

/// 1 - eps / (2 diam(X)^p).
double e3_mass_threshold(const StateSpace& space, double p, double eps);

/// Typical sets for every depth in [n_lo, n_hi] from a single cylinder pass.
/// Sets may be empty.
std::vector<TypicalSet> typical_set_family(const SystemSpec& system,
                                           const SampleSet& samples,
                                           const Partition& partition, int n_lo,
                                           int n_hi, double delta,
                                           double entropy_ref);

/// Zooming coder for a linear hyperbolic toral automorphism x -> Ax mod 1.
/// Both sides track a box in eigen-coordinates containing the lifted state;
/// each step the unstable side is cut into |M| equal pieces and the coder
/// names the piece holding the state. The box shrinks iff |M| exceeds the
/// unstable eigenvalue. `transient` is the first time from which the box
/// radius stays <= eps, or the horizon cap when it never does.
CodingScheme build_zoom_coder(const SystemSpec& system, const Channel& channel,
                              double eps, int horizon_cap = 100000);

}  // namespace entrocode

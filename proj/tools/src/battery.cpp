#include "entrocode/cli/battery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "entrocode/coding.hpp"
#include "entrocode/entropy.hpp"
#include "entrocode/error.hpp"
#include "entrocode/evaluation.hpp"
#include "entrocode/lyapunov.hpp"
#include "entrocode/measure.hpp"
#include "entrocode/partition.hpp"
#include "entrocode/schemes.hpp"

namespace entrocode::cli {
namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Collects named checks into one verdict and a one-line detail.
struct Checks {
  bool ok = true;
  std::string detail;

  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
  void expect(bool cond, const std::string& s) {
    ok = ok && cond;
    note(cond ? s : s + " [FAIL]");
  }
  ItemResult result() const { return {ok, detail}; }
};

// log2 of the unstable eigenvalue (3 + sqrt 5) / 2 of [[2, 1], [1, 1]].
double cat_entropy() { return std::log2((3.0 + std::sqrt(5.0)) / 2.0); }

SampleSet lebesgue(const SystemSpec& s, int n, std::uint64_t seed) {
  return sample_initial(s, {MeasureKind::kLebesgue, 0, n, seed});
}

SampleSet grid(const SystemSpec& s, int n) {
  return sample_initial(s, {MeasureKind::kGrid, 0, n, std::nullopt});
}

SampleSet srb(const SystemSpec& s, int n, std::uint64_t seed) {
  return sample_initial(s, {MeasureKind::kSrbBurnin, 200, n, seed});
}

std::size_t fallback_count(std::span<const Transcript> ensemble) {
  std::size_t n = 0;
  for (const Transcript& tr : ensemble) {
    for (bool f : tr.fallback) n += f ? 1 : 0;
  }
  return n;
}

// ---------------------------------------------------------------------------

ItemResult cat_lyapunov(const Tolerances& tol) {
  const SystemSpec cat = library_system("cat_map");
  const auto ly = lyapunov_spectrum(cat, State{0.1234, 0.5678}, 10000);
  const double lam = cat_entropy();
  Checks c;
  c.expect(std::abs(ly[0] - lam) <= tol.cat_lyapunov,
           fmt("lambda1=%.9f (|err|=%.1e)", ly[0], std::abs(ly[0] - lam)));
  c.expect(std::abs(ly[1] + lam) <= tol.cat_lyapunov,
           fmt("lambda2=%.9f (|err|=%.1e)", ly[1], std::abs(ly[1] + lam)));
  c.expect(std::abs(ly[0] + ly[1]) <= tol.cat_lyapunov_sum,
           fmt("sum=%.1e", ly[0] + ly[1]));
  return c.result();
}

ItemResult doubling_entropies(const Tolerances& tol) {
  const SystemSpec d = library_system("doubling");
  Checks c;
  const SampleSet region = lebesgue(d, 10000, 101);
  const double eps[] = {0x1p-6};
  const auto top = estimate_topological_entropy(d, region, eps, 4, 12);
  c.expect(std::abs(top.value - 1.0) <= tol.doubling_entropy,
           fmt("h_top=%.4f", top.value));

  constexpr int kBits = 17;
  const SampleSet lattice = grid(d, 1 << kBits);
  const Partition binary = grid_partition(d.space, 2);
  const auto metric = partition_entropy(d, lattice, binary, 10);
  c.expect(std::abs(metric.estimate.value - 1.0) <= tol.doubling_entropy,
           fmt("h_metric=%.4f", metric.estimate.value));

  // On the dyadic lattice every length-n binary cylinder holds exactly
  // 2^(17-n) points: the n leading bits of the lattice index.
  bool equal_cylinders = true;
  for (int n = 1; n <= 10; ++n) {
    std::vector<int> count(std::size_t{1} << n, 0);
    for (int i = 0; i < (1 << kBits); ++i) ++count[static_cast<std::size_t>(i >> (kBits - n))];
    for (int v : count) equal_cylinders = equal_cylinders && v == (1 << (kBits - n));
  }
  std::vector<int> depths;
  for (int n = 1; n <= 10; ++n) depths.push_back(n);
  const auto smb = smb_deviation(d, lattice, binary, depths, 0.05, 1.0);
  bool zero = equal_cylinders;
  for (std::size_t i = 0; i < smb.mass.size(); ++i) {
    zero = zero && smb.mass[i].second == 0.0 && smb.exact_zero[i];
  }
  c.expect(zero, "SMB deviation mass exactly 0 at n=1..10");
  return c.result();
}

ItemResult cat_entropies(const Tolerances& tol) {
  const SystemSpec cat = library_system("cat_map");
  const SampleSet samples = lebesgue(cat, 1000000, 11);
  TopologicalOptions options;
  options.saturation = 0.02;
  options.bracket = false;
  const double eps[] = {0x1p-4};
  const auto top = estimate_topological_entropy(cat, samples, eps, 2, 8, options);
  const double h = cat_entropy();
  Checks c;
  c.expect(std::abs(top.value - h) <= tol.cat_entropy,
           fmt("h_top=%.4f (fit n=%d..%d)", top.value, top.fit_window.first,
               top.fit_window.second));
  const auto metric =
      partition_entropy(cat, samples, grid_partition(cat.space, 2), 12);
  c.expect(metric.estimate.value <= top.value + tol.variational,
           fmt("h_metric=%.4f <= h_top+%.2f", metric.estimate.value, tol.variational));
  const auto ly = lyapunov_spectrum(cat, State{0.1234, 0.5678}, 10000);
  const auto pm = pesin_margulis_check(top.value, ly, tol.pesin);
  c.expect(pm.inequality_holds && pm.equality,
           fmt("Pesin: h=%.4f vs sum(lambda+)=%.4f", pm.entropy, pm.positive_sum));
  return c.result();
}

ItemResult solenoid_checks(const Tolerances& tol) {
  const SystemSpec s = library_system("solenoid");
  const SampleSet samples = srb(s, 10000, 21);
  const auto k = katok_entropy(s, samples, 1, 10, 0.25, 0.1);
  Checks c;
  c.expect(std::abs(k.value - 1.0) <= tol.solenoid_entropy,
           fmt("h_katok=%.4f (fit n=%d..%d)", k.value, k.fit_window.first,
               k.fit_window.second));
  const auto ly = lyapunov_spectrum(s, samples.points.front(), 10000);
  const double expect[] = {1.0, -2.0, -2.0};
  bool ok = ly.size() == 3;
  for (std::size_t i = 0; ok && i < 3; ++i) {
    ok = std::abs(ly[i] - expect[i]) <= tol.solenoid_lyapunov;
  }
  c.expect(ok, fmt("lambda=(%.4f, %.4f, %.4f)", ly[0], ly[1], ly[2]));
  return c.result();
}

ItemResult e1_end_to_end(const Tolerances&) {
  Checks c;
  const SystemSpec d = library_system("doubling");
  const double eps = 0x1p-4;
  const auto e1 = build_e1_coder(d, grid(d, 4096), eps, Channel::with_alphabet(3));
  const SampleSet init = lebesgue(d, 1000, 51);
  const auto ens = run_ensemble(d, init.points, e1.scheme, 200);
  double worst = 0.0;
  for (const Transcript& tr : ens) {
    for (std::size_t t = static_cast<std::size_t>(e1.k); t < tr.dist.size(); ++t) {
      worst = std::max(worst, tr.dist[t]);
    }
  }
  c.expect(worst <= eps, fmt("doubling |M|=3: k=%d, max dist[t>=k]=%.6f", e1.k, worst));

  const SystemSpec cat = library_system("cat_map");
  const bool below = std::log2(2.0) < cat_entropy();
  try {
    build_e1_coder(cat, grid(cat, 4096), 0.05, Channel::with_alphabet(2));
    c.expect(false, "cat |M|=2 built");
  } catch (const Error& e) {
    c.expect(below && e.code() == ErrorCode::kInfeasibleBlockLength,
             std::string("cat |M|=2: ") + std::string(to_string(e.code())));
  }
  return c.result();
}

ItemResult e3_end_to_end(const Tolerances&) {
  Checks c;
  const SystemSpec d = library_system("doubling");
  const double p = 2.0;
  const double eps = 0.1;
  const int k = 8;
  const double delta = 0.3;
  const Partition part = grid_partition(d.space, 8);
  c.expect(part.max_diameter() < std::sqrt(eps / 2.0),
           fmt("diam=%.4f < (eps/2)^(1/2)", part.max_diameter()));
  const SampleSet lattice = grid(d, 1 << 17);
  const double h = partition_entropy(d, lattice, part, 10).estimate.value;
  const TypicalSet set = typical_set(d, lattice, part, k, delta, h);
  const double bound = std::exp2(k * (h + delta));
  c.expect(static_cast<double>(set.size()) <= bound,
           fmt("|Sigma|=%zu <= 2^(k(h+delta))=%.1f", set.size(), bound));
  const CodingScheme scheme = build_e3_coder(d, part, k, set, Channel::with_alphabet(3),
                                             p, eps, centroid(d.space, lattice));
  const auto ens = run_ensemble(d, lebesgue(d, 1000, 61).points, scheme, 200);
  const auto r = eval_e3(ens, eps, p);
  c.expect(r.pass, fmt("tail mean d^2=%.5f <= %.2f", r.statistic, eps));
  return c.result();
}

ItemResult e2_end_to_end(const Tolerances&) {
  Checks c;
  const SystemSpec d = library_system("doubling");
  const double eps = 0.3;
  const double delta = 0.2;
  const Partition part = grid_partition(d.space, 8);
  const SampleSet lattice = grid(d, 1 << 17);
  const double h = partition_entropy(d, lattice, part, 10).estimate.value;
  E2Options options;
  options.first_block = 9;
  options.j_max = 12;
  const auto sets = typical_set_family(d, lattice, part, options.first_block + 1,
                                       options.j_max + 1, delta, h);
  const CodingScheme scheme = build_e2_coder(d, part, sets, Channel::with_alphabet(3),
                                             eps, centroid(d.space, lattice), options);
  const auto ens = run_ensemble(d, lebesgue(d, 1000, 71).points, scheme, 200);
  const std::size_t fb = fallback_count(ens);
  c.expect(fb == 0, fmt("doubling fallbacks=%zu", fb));
  const auto r = eval_e2(ens, eps);
  c.expect(r.pass, fmt("tail max=%.4f <= %.2f", r.statistic, eps));

  // Cat map: reported only.
  const SystemSpec cat = library_system("cat_map");
  const Partition cp = grid_partition(cat.space, 16);
  const SampleSet cs = lebesgue(cat, 1000000, 72);
  const double ch = partition_entropy(cat, cs, cp, 6).estimate.value;
  E2Options co;
  co.first_block = 1;
  co.j_max = 4;
  try {
    const auto csets = typical_set_family(cat, cs, cp, co.first_block + 1, co.j_max + 1,
                                          0.3, ch);
    const CodingScheme cscheme = build_e2_coder(
        cat, cp, csets, Channel::with_alphabet(4), 0.3, centroid(cat.space, cs), co);
    const int horizon = 120;
    const auto cens = run_ensemble(cat, lebesgue(cat, 300, 73).points, cscheme, horizon);
    const auto starts = e2_block_starts(co, horizon);
    std::string fr;
    bool decreasing = true;
    double prev = INFINITY;
    for (std::size_t b = 1; b < starts.size() && b <= 6; ++b) {
      const int end = b + 1 < starts.size() ? starts[b + 1] : horizon;
      double f = 0.0;
      for (const Transcript& tr : cens) {
        for (int t = starts[b]; t < end; ++t) f += tr.fallback[static_cast<std::size_t>(t)];
      }
      f /= static_cast<double>(cens.size()) * (end - starts[b]);
      fr += fmt("%s%.2f", fr.empty() ? "" : ",", f);
      decreasing = decreasing && f < prev;
      prev = f;
    }
    c.note(fmt("cat (report only): fallback by block=[%s] decreasing=%s", fr.c_str(),
               decreasing ? "yes" : "no"));
  } catch (const Error& e) {
    c.note(std::string("cat (report only): ") + e.what());
  }
  return c.result();
}

ItemResult capacity_bands(const Tolerances& tol) {
  Checks c;
  const SystemSpec cat = library_system("cat_map");
  const double h = cat_entropy();
  SweepConfig sc;
  sc.eps = 0.05;
  sc.alphabet_lo = 2;
  sc.alphabet_hi = 4;
  sc.horizon = 400;
  sc.h_lower = h;
  sc.h_upper = h;
  const auto init = lebesgue(cat, 1000, 81);
  const auto cat_sweep = capacity_sweep(
      cat, [&](const Channel& ch) { return build_zoom_coder(cat, ch, sc.eps); },
      init.points, sc);
  // 2 < 2^h < 3, so log2 |M| >= h first at 3 and 1 + floor(2^h) = 3.
  const int oracle_lo = static_cast<int>(std::ceil(std::exp2(h)));
  const int oracle_hi = 1 + static_cast<int>(std::floor(std::exp2(h)));
  c.expect(cat_sweep.theory_lo == oracle_lo && cat_sweep.theory_hi == oracle_hi &&
               oracle_lo == 3 && oracle_hi == 3,
           fmt("cat band=[%d,%d]", cat_sweep.theory_lo, cat_sweep.theory_hi));
  c.expect(cat_sweep.smallest_e1 == 3,
           fmt("cat smallest E1 |M|=%d", cat_sweep.smallest_e1.value_or(-1)));
  TopologicalOptions topt;
  topt.saturation = 0.02;
  topt.bracket = false;
  const double eps16[] = {0x1p-4};
  const double h_sep =
      estimate_topological_entropy(cat, lebesgue(cat, 200000, 82), eps16, 2, 8, topt).value;
  const int floor_bound =
      static_cast<int>(std::ceil(std::exp2(h_sep - tol.e1_lower_bound_slack)));
  c.expect(cat_sweep.smallest_e1.value_or(0) >= floor_bound,
           fmt("E1 lower bound ceil(2^(h_sep-%.1f))=%d", tol.e1_lower_bound_slack,
               floor_bound));

  const SystemSpec s = library_system("solenoid");
  const Partition part = solenoid_partition(s, 3, 3);
  const SampleSet samples = srb(s, 200000, 83);
  const int k = 9;
  const double threshold = 0.15;
  const double hs = partition_entropy(s, samples, part, k + 2).estimate.value;
  const TypicalSet set = typical_set(s, samples, part, k, 0.75, hs);
  const State centre = centroid(s.space, samples);
  SweepConfig ss;
  ss.eps = std::sqrt(threshold);
  ss.p = 2.0;
  ss.alphabet_lo = 2;
  ss.alphabet_hi = 3;
  ss.horizon = 200;
  ss.h_lower = hs - tol.solenoid_band_slack;
  ss.h_upper = hs + tol.solenoid_band_slack;
  const auto sol_sweep = capacity_sweep(
      s,
      [&](const Channel& ch) {
        return build_e3_coder(s, part, k, set, ch, ss.p, threshold, centre);
      },
      srb(s, 1000, 84).points, ss);
  const int m = sol_sweep.smallest_e3.value_or(-1);
  c.expect((m == 2 || m == 3) && m >= sol_sweep.theory_lo && m <= sol_sweep.theory_hi,
           fmt("solenoid smallest E3 |M|=%d, band=[%d,%d], h=%.3f", m,
               sol_sweep.theory_lo, sol_sweep.theory_hi, hs));
  c.expect(cat_sweep.monotonicity_violations.empty() &&
               sol_sweep.monotonicity_violations.empty(),
           "sweeps monotone in |M|");
  return c.result();
}

// --- structural invariants -------------------------------------------------

struct Case {
  std::string name;
  SystemSpec system;
  CodingScheme scheme;
  std::vector<State> init;
  double eps = 0.0;
  double p = 2.0;
  int horizon = 0;
};

std::vector<Case> invariant_cases() {
  std::vector<Case> out;
  const SystemSpec d = library_system("doubling");
  const SampleSet dl = grid(d, 1 << 15);
  const State dc = centroid(d.space, dl);
  const Partition p8 = grid_partition(d.space, 8);
  const double hd = partition_entropy(d, dl, p8, 8).estimate.value;
  const auto di = lebesgue(d, 200, 91).points;

  out.push_back({"doubling/e1", d,
                 build_e1_coder(d, grid(d, 4096), 0x1p-4, Channel::with_alphabet(3)).scheme,
                 di, 0x1p-4, 2.0, 120});
  E2Options o;
  o.first_block = 9;
  o.j_max = 12;
  out.push_back({"doubling/e2", d,
                 build_e2_coder(d, p8, typical_set_family(d, dl, p8, 10, 13, 0.2, hd),
                                Channel::with_alphabet(3), 0.3, dc, o),
                 di, 0.3, 2.0, 120});
  out.push_back({"doubling/e3", d,
                 build_e3_coder(d, p8, 8, typical_set(d, dl, p8, 8, 0.3, hd),
                                Channel::with_alphabet(3), 2.0, 0.1, dc),
                 di, std::sqrt(0.1), 2.0, 120});
  const SystemSpec cat = library_system("cat_map");
  out.push_back({"cat/zoom", cat, build_zoom_coder(cat, Channel::with_alphabet(3), 0.05),
                 lebesgue(cat, 200, 92).points, 0.05, 2.0, 120});
  const SystemSpec s = library_system("solenoid");
  const Partition sp = solenoid_partition(s, 3, 3);
  const SampleSet ss = srb(s, 200000, 93);
  const double hs = partition_entropy(s, ss, sp, 11).estimate.value;
  out.push_back({"solenoid/e3", s,
                 build_e3_coder(s, sp, 9, typical_set(s, ss, sp, 9, 0.75, hs),
                                Channel::with_alphabet(3), 2.0, 0.15,
                                centroid(s.space, ss)),
                 srb(s, 200, 94).points, std::sqrt(0.15), 2.0, 120});
  const SystemSpec id = library_system("identity");
  out.push_back({"identity/e1", id,
                 build_e1_coder(id, grid(id, 1024), 0.05, Channel::with_alphabet(2)).scheme,
                 lebesgue(id, 200, 95).points, 0.05, 2.0, 120});
  return out;
}

bool counting_bound(const Case& k, const std::vector<Transcript>& ens) {
  for (int t = 0; t < k.horizon; ++t) {
    const auto bound = checked_power(k.scheme.channel.alphabet_size, t + 1);
    if (estimator_string_count(ens, t) > bound) return false;
  }
  return true;
}

// Futures after `cut` are replaced by another orbit; the prefix must match.
bool causal(const Case& k) {
  const auto xs = orbit(k.system, k.init[0], k.horizon - 1).states;
  bool diverged = false;
  for (int cut : {0, 3, k.horizon / 3, k.horizon / 2}) {
    auto alt = xs;
    State z = k.init[1];
    for (int t = cut + 1; t < k.horizon; ++t) {
      alt[static_cast<std::size_t>(t)] = z;
      z = k.system.map(z);
    }
    const int m = k.scheme.channel.alphabet_size;
    auto c1 = k.scheme.make_coder();
    auto e1 = k.scheme.make_estimator();
    const Transcript a = run_policies(k.system.space, xs, *c1, *e1, m);
    auto c2 = k.scheme.make_coder();
    auto e2 = k.scheme.make_estimator();
    const Transcript b = run_policies(k.system.space, alt, *c2, *e2, m);
    for (int t = 0; t <= cut; ++t) {
      const auto i = static_cast<std::size_t>(t);
      if (a.q[i] != b.q[i] || !(a.xhat[i] == b.xhat[i]) || a.fallback[i] != b.fallback[i]) {
        return false;
      }
    }
    diverged = diverged || a.q != b.q;
  }
  return diverged;
}

std::string transcripts_csv(const std::vector<Transcript>& ens) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ens.size(); i += 37) write_transcript_csv(out, ens[i]);
  return out.str();
}

class ThreadsOverride {
 public:
  explicit ThreadsOverride(const char* value) {
    if (const char* old = std::getenv("ENTROCODE_THREADS")) saved_ = old;
    ::setenv("ENTROCODE_THREADS", value, 1);
  }
  ~ThreadsOverride() {
    if (saved_.empty()) {
      ::unsetenv("ENTROCODE_THREADS");
    } else {
      ::setenv("ENTROCODE_THREADS", saved_.c_str(), 1);
    }
  }

 private:
  std::string saved_;
};

ItemResult invariants(const Tolerances&) {
  Checks c;
  int counting = 0;
  int causal_ok = 0;
  int hierarchy = 0;
  int identical = 0;
  const auto cases = invariant_cases();
  for (const Case& k : cases) {
    std::vector<Transcript> ens;
    std::string csv_a;
    std::string csv_b;
    {
      ThreadsOverride one("1");
      ens = run_ensemble(k.system, k.init, k.scheme, k.horizon);
      csv_a = transcripts_csv(ens);
    }
    {
      ThreadsOverride many("4");
      csv_b = transcripts_csv(run_ensemble(k.system, k.init, k.scheme, k.horizon));
    }
    const bool same = csv_a == csv_b;
    identical += same;
    const bool bound = counting_bound(k, ens);
    counting += bound;
    const bool cz = causal(k);
    causal_ok += cz;
    const int window = default_tail_window(k.horizon);
    bool holds = false;
    if (k.scheme.transient + 10 <= k.horizon) {
      const auto r1 = eval_e1(ens, k.eps, k.scheme.transient);
      const auto r2 = eval_e2(ens, k.eps, window);
      const auto r3 = eval_e3(ens, std::pow(k.eps, k.p), k.p, window);
      holds = hierarchy_check(r1, r2, r3, k.horizon).holds;
    }
    hierarchy += holds;
    if (!(same && bound && cz && holds)) {
      c.note(k.name + fmt(": csv=%d count=%d causal=%d hierarchy=%d", same, bound, cz, holds));
    }
  }
  const int n = static_cast<int>(cases.size());
  c.expect(counting == n, fmt("counting bound %d/%d", counting, n));
  c.expect(causal_ok == n, fmt("causality %d/%d", causal_ok, n));
  c.expect(hierarchy == n, fmt("hierarchy %d/%d", hierarchy, n));

  // Bracket: an (n, eps)-separated set has at most one point per eps/2 ball.
  std::size_t rows = 0;
  std::size_t bad = 0;
  std::string entropy_a;
  std::string entropy_b;
  struct BracketCase {
    const char* name;
    SampleSet samples;
    std::vector<double> eps;
    int n_hi;
  };
  const SystemSpec d = library_system("doubling");
  const SystemSpec cat = library_system("cat_map");
  const SystemSpec s = library_system("solenoid");
  const SystemSpec id = library_system("identity");
  const std::pair<const SystemSpec*, BracketCase> bc[] = {
      {&d, {"doubling", lebesgue(d, 3000, 96), {0.125, 0.0625}, 8}},
      {&cat, {"cat_map", lebesgue(cat, 3000, 97), {0.125, 0.0625}, 6}},
      {&s, {"solenoid", srb(s, 2000, 98), {0.5, 0.25}, 5}},
      {&id, {"identity", lebesgue(id, 1000, 99), {0.1, 0.05}, 4}}};
  for (const auto& [sys, b] : bc) {
    const auto est = estimate_topological_entropy(*sys, b.samples, b.eps, 1, b.n_hi);
    for (const BracketRow& row : est.bracket) {
      ++rows;
      bad += row.separated > row.spanning_half;
    }
    std::ostringstream one;
    std::ostringstream two;
    write_entropy_csv(one, std::span(&est, 1));
    const auto again = estimate_topological_entropy(*sys, b.samples, b.eps, 1, b.n_hi);
    write_entropy_csv(two, std::span(&again, 1));
    entropy_a += one.str();
    entropy_b += two.str();
  }
  c.expect(bad == 0, fmt("bracket separated<=spanning(eps/2) %zu/%zu rows", rows - bad, rows));

  // Sweep CSVs from two independent runs.
  SweepConfig sc;
  sc.eps = 0.05;
  sc.alphabet_hi = 3;
  sc.horizon = 60;
  sc.h_lower = sc.h_upper = cat_entropy();
  const auto init = lebesgue(cat, 100, 100);
  auto sweep_csv = [&] {
    std::ostringstream out;
    write_sweep_csv(out, capacity_sweep(
                             cat, [&](const Channel& ch) { return build_zoom_coder(cat, ch, 0.05); },
                             init.points, sc));
    return out.str();
  };
  const bool csv_same = identical == n && entropy_a == entropy_b && sweep_csv() == sweep_csv();
  c.expect(csv_same, fmt("CSV reruns identical (transcripts %d/%d, entropy, sweep)", identical, n));
  return c.result();
}

ItemResult henon(const Tolerances& tol) {
  Checks c;
  const SystemSpec h = library_system("henon_like");
  const int steps = 12;
  SampleSet trapped;
  try {
    trapped = trapped_samples(h, grid(h, 1000000), steps);
  } catch (const Error& e) {
    c.expect(false, e.what());
    return c.result();
  }
  std::size_t escaped = 0;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < trapped.size(); ++i) {
    State x = trapped.points[i];
    for (int t = 0; t <= steps; ++t) {
      bool finite = true;
      for (double v : x) finite = finite && std::isfinite(v);
      if (!finite || !h.space.contains(x)) {
        ++escaped;
        break;
      }
      if (i % 7 == 0) {
        const Matrix diff = jacobian(h, x) - finite_difference_jacobian(h, x);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        ++checked;
      }
      if (t < steps) x = h.map(x);
    }
  }
  c.expect(trapped.size() > 0 && escaped == 0,
           fmt("%zu trapped grid points, %zu escaped within %d steps", trapped.size(),
               escaped, steps));
  c.expect(checked > 0 && worst <= tol.henon_jacobian,
           fmt("max |J - J_fd|=%.2e over %zu points", worst, checked));
  c.note("no entropy check");
  return c.result();
}

}  // namespace

Tolerances tolerances_from(const Config& cfg) {
  Tolerances t;
  const std::pair<std::string_view, double*> fields[] = {
      {"tolerance.cat_lyapunov", &t.cat_lyapunov},
      {"tolerance.cat_lyapunov_sum", &t.cat_lyapunov_sum},
      {"tolerance.doubling_entropy", &t.doubling_entropy},
      {"tolerance.cat_entropy", &t.cat_entropy},
      {"tolerance.variational", &t.variational},
      {"tolerance.pesin", &t.pesin},
      {"tolerance.solenoid_entropy", &t.solenoid_entropy},
      {"tolerance.solenoid_lyapunov", &t.solenoid_lyapunov},
      {"tolerance.e1_lower_bound_slack", &t.e1_lower_bound_slack},
      {"tolerance.solenoid_band_slack", &t.solenoid_band_slack},
      {"tolerance.henon_jacobian", &t.henon_jacobian},
      {"tolerance.runtime_scale", &t.runtime_scale}};
  std::vector<std::string_view> known;
  for (const auto& [key, field] : fields) {
    known.push_back(key);
    *field = cfg.real(key, *field);
  }
  cfg.reject_unknown(known);
  return t;
}

const std::vector<BatteryItem>& battery() {
  static const std::vector<BatteryItem> items = {
      {1, "cat map Lyapunov spectrum", 1.0, cat_lyapunov},
      {2, "doubling map entropies and SMB deviation", 30.0, doubling_entropies},
      {3, "cat map entropy, variational proxy, Pesin", 120.0, cat_entropies},
      {4, "solenoid Katok entropy and Lyapunov spectrum", 120.0, solenoid_checks},
      {5, "E1 spanning coder end to end", 60.0, e1_end_to_end},
      {6, "E3 block coder end to end", 60.0, e3_end_to_end},
      {7, "E2 growing-block coder", 120.0, e2_end_to_end},
      {8, "capacity sweep bands", 300.0, capacity_bands},
      {9, "structural invariants", 300.0, invariants},
      {10, "Henon-like map trapping and Jacobian", 60.0, henon},
  };
  return items;
}

void list_battery(std::ostream& out) {
  for (const BatteryItem& item : battery()) {
    out << item.id << "  " << item.title << "  (limit " << item.time_limit << " s)\n";
  }
}

int run_battery(std::ostream& out, const Tolerances& tol, std::span<const int> only) {
  int failures = 0;
  for (const BatteryItem& item : battery()) {
    if (!only.empty() && std::find(only.begin(), only.end(), item.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    ItemResult r;
    try {
      r = item.run(tol);
    } catch (const std::exception& e) {
      r = {false, std::string("internal error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double limit = item.time_limit * tol.runtime_scale;
    if (secs > limit) {
      r.pass = false;
      r.detail += fmt("; runtime %.1f s over limit %.0f s", secs, limit);
    }
    failures += r.pass ? 0 : 1;
    out << (r.pass ? "PASS " : "FAIL ") << item.id << " " << item.title
        << fmt(" (%.2f s): ", secs) << r.detail << std::endl;
  }
  return failures;
}

}  // namespace entrocode::cli

#include "entrocode/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>

#include "entrocode/entropy.hpp"
#include "entrocode/error.hpp"
#include "entrocode/lyapunov.hpp"
#include "entrocode/schemes.hpp"

namespace entrocode::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kEntropyStream = 1;
constexpr std::uint64_t kEnsembleStream = 2;
constexpr std::uint64_t kTypicalStream = 3;
constexpr std::uint64_t kRegionStream = 4;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write " + (dir / name).string());
  return out;
}

// Keys shared by every command.
constexpr std::string_view kCommonKeys[] = {
    "run.seed",      "system.name",   "system.params", "measure.kind",
    "measure.count", "measure.burnin"};

constexpr std::string_view kEntropyKeys[] = {
    "entropy.methods",   "entropy.eps",         "entropy.n_lo",
    "entropy.n_hi",      "entropy.saturation",  "entropy.bracket",
    "entropy.partition", "entropy.depth",       "entropy.katok_eps",
    "entropy.delta",     "entropy.rea_r",       "entropy.variational_tolerance"};

constexpr std::string_view kLyapunovKeys[] = {"lyapunov.steps", "lyapunov.x0",
                                              "lyapunov.entropy",
                                              "lyapunov.tolerance"};

constexpr std::string_view kCodingKeys[] = {
    "coding.scheme",          "coding.alphabet",        "coding.alphabet_lo",
    "coding.alphabet_hi",     "coding.eps",             "coding.p",
    "coding.horizon",         "coding.tail_window",     "coding.transcripts",
    "coding.ensemble_kind",   "coding.ensemble_count",  "coding.ensemble_burnin",
    "coding.region_kind",     "coding.region_count",    "coding.region_burnin",
    "coding.k_max",           "coding.partition",       "coding.typical_kind",
    "coding.typical_count",   "coding.typical_burnin",  "coding.delta",
    "coding.entropy_depth",   "coding.h_ref",           "coding.k",
    "coding.j_max",           "coding.first_block",     "coding.h_lower",
    "coding.h_upper"};

void check_keys(const Config& cfg, std::initializer_list<std::span<const std::string_view>> groups) {
  std::vector<std::string_view> known;
  for (auto g : groups) known.insert(known.end(), g.begin(), g.end());
  cfg.reject_unknown(known);
}

SampleSet entropy_samples(const Config& cfg, const SystemSpec& system) {
  return sample_initial(system, measure_from(cfg, "measure.", kEntropyStream,
                                             "lebesgue", 10000));
}

int parse_positive(std::string_view text, std::string_view what) {
  int v = 0;
  try {
    std::size_t used = 0;
    v = std::stoi(std::string(text), &used);
    if (used != text.size()) v = 0;
  } catch (const std::exception&) {
    v = 0;
  }
  if (v < 1) throw Error(ErrorCode::kConfig, "bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

CriterionResult e1_or_unreached(std::span<const Transcript> ensemble, double eps,
                                int transient, int horizon) {
  if (transient + 10 <= horizon) return eval_e1(ensemble, eps, transient);
  CriterionResult never;
  never.criterion = Criterion::kE1;
  never.eps = eps;
  never.statistic = INFINITY;
  return never;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SystemSpec system_from(const Config& cfg) {
  return library_system(cfg.str("system.name"), cfg.reals("system.params", {}));
}

MeasureSpec measure_from(const Config& cfg, std::string_view prefix,
                         std::uint64_t stream, std::string_view default_kind,
                         int default_count) {
  const std::string p(prefix);
  MeasureSpec spec;
  spec.kind = measure_kind_from_string(cfg.str(p + "kind", default_kind));
  spec.sample_count = cfg.integer(p + "count", default_count);
  spec.burnin = cfg.integer(p + "burnin", spec.kind == MeasureKind::kSrbBurnin ? 200 : 0);
  if (spec.kind != MeasureKind::kGrid) {
    if (!cfg.has("run.seed")) {
      throw Error(ErrorCode::kSeedRequired,
                  p + "kind = " + std::string(to_string(spec.kind)) +
                      " needs run.seed or --seed");
    }
    spec.seed = derive_seed(cfg.uint("run.seed"), stream);
  }
  return spec;
}

Partition partition_from(const SystemSpec& system, std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "grid") {
    std::vector<int> cells;
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto end = comma == std::string_view::npos ? rest.size() : comma;
      cells.push_back(parse_positive(rest.substr(start, end - start), "grid size"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() == 1) return grid_partition(system.space, cells.front());
    return grid_partition(system.space, cells);
  }
  if (kind == "solenoid") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "solenoid partition needs FORWARD:BACKWARD");
    }
    return solenoid_partition(system, parse_positive(rest.substr(0, c2), "forward bits"),
                              parse_positive(rest.substr(c2 + 1), "backward bits"));
  }
  throw Error(ErrorCode::kConfig, "unknown partition '" + std::string(spec) + "'");
}

SchemeFactory scheme_factory(const Config& cfg, const SystemSpec& system,
                             double* h_estimate) {
  const std::string kind = cfg.str("coding.scheme");
  const double eps = cfg.real("coding.eps");
  const double p = cfg.real("coding.p", 2.0);
  if (kind == "e1") {
    const auto region = std::make_shared<SampleSet>(sample_initial(
        system, measure_from(cfg, "coding.region_", kRegionStream, "grid", 4096)));
    E1Options options;
    options.k_max = cfg.integer("coding.k_max", options.k_max);
    return [&system, region, eps, options](const Channel& channel) {
      return build_e1_coder(system, *region, eps, channel, options).scheme;
    };
  }
  if (kind == "zoom") {
    return [&system, eps](const Channel& channel) {
      return build_zoom_coder(system, channel, eps);
    };
  }
  if (kind != "e2" && kind != "e3") {
    throw Error(ErrorCode::kConfig, "unknown coding.scheme " + kind);
  }

  // Typical-set schemes share the partition, reference entropy and sets.
  struct Shared {
    std::optional<Partition> partition;
    std::vector<TypicalSet> sets;
    State centre;
    std::exception_ptr failure;
  };
  auto shared = std::make_shared<Shared>();
  shared->partition = partition_from(system, cfg.str("coding.partition"));
  const SampleSet samples = sample_initial(
      system, measure_from(cfg, "coding.typical_", kTypicalStream, "grid", 1 << 17));
  shared->centre = centroid(system.space, samples);
  double h = 0.0;
  if (cfg.has("coding.h_ref")) {
    h = cfg.real("coding.h_ref");
  } else {
    h = partition_entropy(system, samples, *shared->partition,
                          cfg.integer("coding.entropy_depth", 10))
            .estimate.value;
  }
  if (h_estimate) *h_estimate = h;
  const double delta = cfg.real("coding.delta");

  if (kind == "e2") {
    E2Options options;
    options.j_max = cfg.integer("coding.j_max", options.j_max);
    options.first_block = cfg.integer("coding.first_block", options.first_block);
    shared->sets = typical_set_family(system, samples, *shared->partition,
                                      options.first_block + 1, options.j_max + 1,
                                      delta, h);
    return [&system, shared, eps, options](const Channel& channel) {
      return build_e2_coder(system, *shared->partition, shared->sets, channel, eps,
                            shared->centre, options);
    };
  }
  const int k = cfg.integer("coding.k");
  try {
    shared->sets.push_back(typical_set(system, samples, *shared->partition, k, delta, h));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyTypicalSet) throw;
    shared->failure = std::current_exception();
  }
  const double threshold = std::pow(eps, p);
  return [&system, shared, k, p, threshold](const Channel& channel) {
    if (shared->failure) std::rethrow_exception(shared->failure);
    return build_e3_coder(system, *shared->partition, k, shared->sets.front(), channel,
                          p, threshold, shared->centre);
  };
}

int cmd_estimate_entropy(const Config& cfg, const fs::path& out) {
  check_keys(cfg, {kCommonKeys, kEntropyKeys});
  const SystemSpec system = system_from(cfg);
  const SampleSet samples = entropy_samples(cfg, system);
  const auto methods =
      cfg.list("entropy.methods", {"separated", "katok", "partition"});
  const int n_lo = cfg.integer("entropy.n_lo", 1);
  const int n_hi = cfg.integer("entropy.n_hi", 8);

  std::vector<EntropyEstimate> estimates;
  std::optional<double> h_top;
  double h_metric = -INFINITY;
  std::optional<PartitionEntropy> part;
  for (const std::string& m : methods) {
    if (m == "separated") {
      TopologicalOptions options;
      options.saturation = cfg.real("entropy.saturation", options.saturation);
      options.bracket = cfg.flag("entropy.bracket", true);
      const auto eps = cfg.reals("entropy.eps");
      estimates.push_back(
          estimate_topological_entropy(system, samples, eps, n_lo, n_hi, options));
      h_top = estimates.back().value;
      if (options.bracket) {
        auto b = open_out(out, "bracket.csv");
        b << "eps,n,separated,spanning_half\n";
        for (const BracketRow& row : estimates.back().bracket) {
          b << num(row.eps) << ',' << row.n << ',' << row.separated << ','
            << row.spanning_half << '\n';
        }
      }
    } else if (m == "katok") {
      estimates.push_back(katok_entropy(system, samples, n_lo, n_hi,
                                        cfg.real("entropy.katok_eps"),
                                        cfg.real("entropy.delta", 0.1)));
      h_metric = std::max(h_metric, estimates.back().value);
    } else if (m == "rea") {
      estimates.push_back(rea_entropy(system, samples, n_lo, n_hi,
                                      cfg.real("entropy.katok_eps"),
                                      cfg.real("entropy.rea_r", 0.1),
                                      cfg.real("entropy.delta", 0.1)));
      h_metric = std::max(h_metric, estimates.back().value);
    } else if (m == "partition") {
      const Partition partition =
          partition_from(system, cfg.str("entropy.partition", "grid:2"));
      part = partition_entropy(system, samples, partition,
                               cfg.integer("entropy.depth", 10));
      estimates.push_back(part->estimate);
      h_metric = std::max(h_metric, estimates.back().value);
    } else {
      throw Error(ErrorCode::kConfig, "unknown entropy method " + m);
    }
  }

  {
    auto f = open_out(out, "entropy.csv");
    write_entropy_csv(f, estimates);
  }
  if (part) {
    auto f = open_out(out, "partition.csv");
    f << "n,block_entropy,rate,increment,cylinders\n";
    for (std::size_t i = 0; i < part->rate.size(); ++i) {
      f << i + 1 << ',' << num(part->estimate.per_n[i].second) << ','
        << num(part->rate[i]) << ','
        << (i < part->increments.size() ? num(part->increments[i]) : "") << ','
        << part->cylinders[i] << '\n';
    }
  }
  auto f = open_out(out, "summary.csv");
  f << "method,value,fit_lo,fit_hi,unreliable\n";
  for (const EntropyEstimate& e : estimates) {
    f << to_string(e.method) << ',' << num(e.value) << ',' << e.fit_window.first << ','
      << e.fit_window.second << ',' << (e.unreliable ? 1 : 0) << '\n';
  }
  if (h_top && std::isfinite(h_metric)) {
    const double tol = cfg.real("entropy.variational_tolerance", 0.05);
    auto v = open_out(out, "variational.csv");
    v << "h_top,h_metric,gap,tolerance,holds\n";
    v << num(*h_top) << ',' << num(h_metric) << ',' << num(h_metric - *h_top) << ','
      << num(tol) << ',' << (h_metric <= *h_top + tol ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_lyapunov(const Config& cfg, const fs::path& out) {
  check_keys(cfg, {kCommonKeys, kLyapunovKeys});
  const SystemSpec system = system_from(cfg);
  State x0;
  if (cfg.has("lyapunov.x0")) {
    const auto v = cfg.reals("lyapunov.x0");
    x0 = State(std::span<const double>(v));
  } else {
    x0 = entropy_samples(cfg, system).points.front();
  }
  const auto exps = lyapunov_spectrum(system, x0, cfg.integer("lyapunov.steps", 10000));
  auto f = open_out(out, "lyapunov.csv");
  f << "index,exponent\n";
  double sum = 0.0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    f << i << ',' << num(exps[i]) << '\n';
    sum += exps[i];
  }
  f << "sum," << num(sum) << '\n';
  if (cfg.has("lyapunov.entropy")) {
    const auto rep = pesin_margulis_check(cfg.real("lyapunov.entropy"), exps,
                                          cfg.real("lyapunov.tolerance", 0.2));
    auto p = open_out(out, "pesin.csv");
    p << "entropy,positive_sum,tolerance,inequality_holds,equality\n";
    p << num(rep.entropy) << ',' << num(rep.positive_sum) << ',' << num(rep.tolerance)
      << ',' << (rep.inequality_holds ? 1 : 0) << ',' << (rep.equality ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_run_coding(const Config& cfg, const fs::path& out) {
  check_keys(cfg, {kCommonKeys, kCodingKeys});
  const SystemSpec system = system_from(cfg);
  const double eps = cfg.real("coding.eps");
  const double p = cfg.real("coding.p", 2.0);
  const int horizon = cfg.integer("coding.horizon", 200);
  const int window = cfg.integer("coding.tail_window", default_tail_window(horizon));
  const Channel channel = Channel::with_alphabet(cfg.integer("coding.alphabet"));
  const SampleSet initial = sample_initial(
      system, measure_from(cfg, "coding.ensemble_", kEnsembleStream, "lebesgue", 1000));

  auto summary = open_out(out, "coding_summary.csv");
  summary << "scheme,alphabet,capacity,status,block_length,transient,codebook_size,"
             "fallback_fraction,hierarchy,reason\n";
  const std::string prefix = cfg.str("coding.scheme") + "," +
                             std::to_string(channel.alphabet_size) + "," +
                             num(channel.capacity()) + ",";
  CodingScheme scheme;
  try {
    scheme = scheme_factory(cfg, system)(channel);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadParams || e.code() == ErrorCode::kConfig) throw;
    summary << prefix << "infeasible,,,,,," << to_string(e.code()) << '\n';
    std::vector<CriterionResult> rows(3);
    rows[0].criterion = Criterion::kE1;
    rows[0].eps = eps;
    rows[1].criterion = Criterion::kE2;
    rows[1].eps = eps;
    rows[2].criterion = Criterion::kE3;
    rows[2].eps = std::pow(eps, p);
    rows[2].p = p;
    for (auto& r : rows) r.statistic = INFINITY;
    auto c = open_out(out, "criteria.csv");
    write_criteria_csv(c, rows);
    return 0;
  }

  const auto ensemble = run_ensemble(system, initial.points, scheme, horizon);
  std::vector<CriterionResult> rows = {
      e1_or_unreached(ensemble, eps, scheme.transient, horizon),
      eval_e2(ensemble, eps, window), eval_e3(ensemble, std::pow(eps, p), p, window)};
  std::string hierarchy;
  try {
    const HierarchyReport rep = hierarchy_check(rows[0], rows[1], rows[2], horizon);
    hierarchy = rep.holds ? "holds" : "violated";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kWindowMismatch) throw;
    hierarchy = "window_mismatch";
  }
  std::size_t fallbacks = 0;
  std::size_t steps = 0;
  for (const Transcript& tr : ensemble) {
    for (int t = std::min(scheme.transient, horizon); t < horizon; ++t) {
      fallbacks += tr.fallback[static_cast<std::size_t>(t)] ? 1 : 0;
      ++steps;
    }
  }
  summary << prefix << "ok," << scheme.block_length << ',' << scheme.transient << ','
          << scheme.codebook_size << ','
          << num(steps ? static_cast<double>(fallbacks) / steps : 0.0) << ','
          << hierarchy << ",\n";
  {
    auto c = open_out(out, "criteria.csv");
    write_criteria_csv(c, rows);
  }
  const int keep = std::min<int>(cfg.integer("coding.transcripts", 1),
                                 static_cast<int>(ensemble.size()));
  for (int i = 0; i < keep; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "transcript_%04d.csv", i);
    auto t = open_out(out / "transcripts", name);
    write_transcript_csv(t, ensemble[static_cast<std::size_t>(i)]);
  }
  return 0;
}

int cmd_sweep(const Config& cfg, const fs::path& out) {
  check_keys(cfg, {kCommonKeys, kCodingKeys});
  const SystemSpec system = system_from(cfg);
  double h_est = NAN;
  const SchemeFactory factory = scheme_factory(cfg, system, &h_est);
  SweepConfig sc;
  sc.eps = cfg.real("coding.eps");
  sc.p = cfg.real("coding.p", 2.0);
  sc.alphabet_lo = cfg.integer("coding.alphabet_lo", 2);
  sc.alphabet_hi = cfg.integer("coding.alphabet_hi", 4);
  sc.horizon = cfg.integer("coding.horizon", 200);
  if (!cfg.has("coding.h_lower") && std::isnan(h_est)) {
    throw Error(ErrorCode::kConfig, "sweep needs coding.h_lower and coding.h_upper");
  }
  sc.h_lower = cfg.real("coding.h_lower", h_est);
  sc.h_upper = cfg.real("coding.h_upper", h_est);
  const SampleSet initial = sample_initial(
      system, measure_from(cfg, "coding.ensemble_", kEnsembleStream, "lebesgue", 1000));
  const SweepResult result = capacity_sweep(system, factory, initial.points, sc);
  {
    auto f = open_out(out, "sweep.csv");
    write_sweep_csv(f, result);
  }
  auto f = open_out(out, "sweep_summary.csv");
  f << "criterion,smallest_alphabet,theory_lo,theory_hi,monotone\n";
  const std::pair<const char*, std::optional<int>> best[] = {
      {"E1", result.smallest_e1}, {"E2", result.smallest_e2}, {"E3", result.smallest_e3}};
  for (const auto& [name, m] : best) {
    bool monotone = true;
    for (const std::string& v : result.monotonicity_violations) {
      if (v.rfind(name, 0) == 0) monotone = false;
    }
    f << name << ',' << (m ? std::to_string(*m) : "none") << ',' << result.theory_lo
      << ',' << result.theory_hi << ',' << (monotone ? 1 : 0) << '\n';
  }
  for (const SweepRow& row : result.rows) {
    if (row.infeasible) {
      auto r = open_out(out, "sweep_infeasible.csv");
      r << "alphabet,reason\n";
      for (const SweepRow& rr : result.rows) {
        if (rr.infeasible) {
          std::string reason = rr.reason;
          for (char& c : reason) {
            if (c == ',' || c == '\n') c = ';';
          }
          r << rr.alphabet_size << ',' << reason << '\n';
        }
      }
      break;
    }
  }
  return 0;
}

}  // namespace entrocode::cli

#include "entrocode/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "entrocode/error.hpp"

namespace entrocode {

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::kE1:
      return "E1";
    case Criterion::kE2:
      return "E2";
    case Criterion::kE3:
      return "E3";
    case Criterion::kDet:
      return "DET";
  }
  return "unknown";
}

int default_tail_window(int horizon) { return std::max(1, horizon / 4); }

namespace {

int common_horizon(std::span<const Transcript> transcripts) {
  if (transcripts.empty()) throw Error(ErrorCode::kBadParams, "empty ensemble");
  const std::size_t h = transcripts.front().horizon();
  for (const Transcript& tr : transcripts) {
    if (tr.horizon() != h || tr.dist.size() != h) {
      throw Error(ErrorCode::kBadParams, "transcripts differ in length");
    }
  }
  return static_cast<int>(h);
}

// Worst dist over [from, horizon) per transcript, folded into a result.
CriterionResult worst_case(Criterion c, std::span<const Transcript> transcripts,
                           double eps, int from) {
  const int horizon = common_horizon(transcripts);
  CriterionResult r;
  r.criterion = c;
  r.eps = eps;
  r.t_used = from;
  r.window = horizon - from;
  std::size_t passing = 0;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    const auto& d = transcripts[i].dist;
    const double worst = *std::max_element(d.begin() + from, d.end());
    r.statistic = std::max(r.statistic, worst);
    if (worst <= eps) {
      ++passing;
    } else {
      r.offenders.push_back(i);
    }
  }
  r.passing_fraction = static_cast<double>(passing) / transcripts.size();
  r.pass = r.offenders.empty();
  return r;
}

}  // namespace

CriterionResult eval_e1(std::span<const Transcript> transcripts, double eps, int T) {
  const int horizon = common_horizon(transcripts);
  if (T < 0) throw Error(ErrorCode::kBadParams, "T must be >= 0");
  if (horizon < T + 10) {
    throw Error(ErrorCode::kHorizonTooShort,
                "horizon " + std::to_string(horizon) + " < T + 10 with T = " +
                    std::to_string(T));
  }
  return worst_case(Criterion::kE1, transcripts, eps, T);
}

CriterionResult eval_deterministic(std::span<const Transcript> transcripts,
                                   double eps, int T) {
  CriterionResult r = eval_e1(transcripts, eps, T);
  r.criterion = Criterion::kDet;
  return r;
}

CriterionResult eval_e2(std::span<const Transcript> transcripts, double eps,
                        int tail_window) {
  const int horizon = common_horizon(transcripts);
  const int w = tail_window > 0 ? tail_window : default_tail_window(horizon);
  if (w > horizon) {
    throw Error(ErrorCode::kHorizonTooShort, "tail window exceeds horizon");
  }
  return worst_case(Criterion::kE2, transcripts, eps, horizon - w);
}

CriterionResult eval_e3(std::span<const Transcript> transcripts, double eps,
                        double p, int tail_window) {
  const int horizon = common_horizon(transcripts);
  if (!(p > 0.0)) throw Error(ErrorCode::kBadParams, "p must be > 0");
  const int w = tail_window > 0 ? tail_window : default_tail_window(horizon);
  if (w > horizon) {
    throw Error(ErrorCode::kHorizonTooShort, "tail window exceeds horizon");
  }
  CriterionResult r;
  r.criterion = Criterion::kE3;
  r.eps = eps;
  r.p = p;
  r.t_used = horizon - w;
  r.window = w;
  const double n = static_cast<double>(transcripts.size());
  for (int t = horizon - w; t < horizon; ++t) {
    double mean = 0.0;
    for (const Transcript& tr : transcripts) {
      mean += std::pow(tr.dist[static_cast<std::size_t>(t)], p);
    }
    r.statistic = std::max(r.statistic, mean / n);
  }
  // Per-transcript tail means, for the diagnostic fraction only.
  std::size_t passing = 0;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    double m = 0.0;
    for (int t = horizon - w; t < horizon; ++t) {
      m += std::pow(transcripts[i].dist[static_cast<std::size_t>(t)], p);
    }
    if (m / w <= eps) {
      ++passing;
    } else {
      r.offenders.push_back(i);
    }
  }
  r.passing_fraction = static_cast<double>(passing) / n;
  r.pass = r.statistic <= eps;
  return r;
}

HierarchyReport hierarchy_check(const CriterionResult& e1,
                                const CriterionResult& e2,
                                const CriterionResult& e3, int horizon) {
  if (e1.criterion != Criterion::kE1 || e2.criterion != Criterion::kE2 ||
      e3.criterion != Criterion::kE3) {
    throw Error(ErrorCode::kBadParams, "hierarchy_check needs E1, E2, E3 results");
  }
  if (e2.t_used < e1.t_used || e2.t_used + e2.window != horizon ||
      e3.t_used != e2.t_used || e3.window != e2.window) {
    throw Error(ErrorCode::kWindowMismatch,
                "E2/E3 tail windows must coincide and lie inside [T, horizon)");
  }
  const double eps_p = std::pow(e1.eps, e3.p);
  if (e2.eps != e1.eps || std::abs(e3.eps - eps_p) > 1e-12 * std::max(1.0, eps_p)) {
    throw Error(ErrorCode::kWindowMismatch,
                "thresholds must be eps, eps and eps^p");
  }
  HierarchyReport rep;
  auto list = [](const std::vector<std::size_t>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size() && i < 10; ++i) {
      s += (i ? "," : "") + std::to_string(idx[i]);
    }
    if (idx.size() > 10) s += ",...";
    return s;
  };
  if (e1.pass && !e2.pass) {
    rep.holds = false;
    rep.violations.push_back("E1 passes but E2 fails; transcripts " +
                             list(e2.offenders));
  }
  if (e2.pass && !e3.pass) {
    rep.holds = false;
    rep.violations.push_back("E2 passes but E3 fails; statistic " +
                             std::to_string(e3.statistic));
  }
  return rep;
}

int theory_band_lo(double h_lower) {
  int m = 2;
  while (std::log2(static_cast<double>(m)) < h_lower) ++m;
  return m;
}

int theory_band_hi(double h_upper) {
  return 1 + static_cast<int>(std::floor(std::exp2(h_upper)));
}

SweepResult capacity_sweep(const SystemSpec& system, const SchemeFactory& factory,
                           std::span<const State> initial_states,
                           const SweepConfig& config) {
  if (config.alphabet_lo < 2 || config.alphabet_hi < config.alphabet_lo) {
    throw Error(ErrorCode::kBadParams, "bad alphabet range");
  }
  SweepResult out;
  out.eps = config.eps;
  out.p = config.p;
  out.theory_lo = theory_band_lo(config.h_lower);
  out.theory_hi = theory_band_hi(config.h_upper);
  for (int m = config.alphabet_lo; m <= config.alphabet_hi; ++m) {
    SweepRow row;
    row.alphabet_size = m;
    const Channel channel = Channel::with_alphabet(m);
    row.capacity = channel.capacity();
    try {
      const CodingScheme scheme = factory(channel);
      const auto ensemble =
          run_ensemble(system, initial_states, scheme, config.horizon);
      const int window = default_tail_window(config.horizon);
      if (scheme.transient + 10 <= config.horizon) {
        row.e1 = eval_e1(ensemble, config.eps, scheme.transient);
      } else {
        CriterionResult never;
        never.criterion = Criterion::kE1;
        never.eps = config.eps;
        never.statistic = INFINITY;
        never.t_used = scheme.transient;
        row.e1 = never;
      }
      row.e2 = eval_e2(ensemble, config.eps, window);
      row.e3 = eval_e3(ensemble, std::pow(config.eps, config.p), config.p, window);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBadParams) throw;
      row.infeasible = true;
      row.reason = e.what();
    }
    out.rows.push_back(std::move(row));
  }

  auto scan = [&](auto member, std::optional<int>& smallest, std::string_view name) {
    bool seen_pass = false;
    for (const SweepRow& row : out.rows) {
      const auto& r = row.*member;
      const bool pass = r && r->pass;
      if (pass && !smallest) smallest = row.alphabet_size;
      if (!pass && seen_pass) {
        out.monotonicity_violations.push_back(std::string(name) + " fails at |M|=" +
                                              std::to_string(row.alphabet_size));
      }
      seen_pass = seen_pass || pass;
    }
  };
  scan(&SweepRow::e1, out.smallest_e1, "E1");
  scan(&SweepRow::e2, out.smallest_e2, "E2");
  scan(&SweepRow::e3, out.smallest_e3, "E3");
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "alphabet,capacity,criterion,eps,pass,statistic,theory_lo,theory_hi\n";
  for (const SweepRow& row : result.rows) {
    const std::optional<CriterionResult>* all[] = {&row.e1, &row.e2, &row.e3};
    const Criterion names[] = {Criterion::kE1, Criterion::kE2, Criterion::kE3};
    for (int i = 0; i < 3; ++i) {
      out << row.alphabet_size << ',' << fmt(row.capacity) << ','
          << to_string(names[i]) << ',';
      if (row.infeasible || !*all[i]) {
        const double eps = i == 2 ? std::pow(result.eps, result.p) : result.eps;
        out << fmt(eps) << ",0,inf";
      } else {
        const CriterionResult& r = **all[i];
        out << fmt(r.eps) << ',' << (r.pass ? 1 : 0) << ',' << fmt(r.statistic);
      }
      out << ',' << result.theory_lo << ',' << result.theory_hi << '\n';
    }
  }
}

void write_criteria_csv(std::ostream& out,
                        std::span<const CriterionResult> results) {
  out << "criterion,eps,p,pass,statistic,t_used,window,passing_fraction\n";
  for (const CriterionResult& r : results) {
    out << to_string(r.criterion) << ',' << fmt(r.eps) << ',' << fmt(r.p) << ','
        << (r.pass ? 1 : 0) << ',' << fmt(r.statistic) << ',' << r.t_used << ','
        << r.window << ',' << fmt(r.passing_fraction) << '\n';
  }
}

}  // namespace entrocode

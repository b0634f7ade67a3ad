#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "entrocode/cli/config.hpp"
#include "entrocode/evaluation.hpp"
#include "entrocode/measure.hpp"
#include "entrocode/partition.hpp"
#include "entrocode/system.hpp"

namespace entrocode::cli {

/// Independent seed for one sampling stream of a run.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

SystemSpec system_from(const Config& cfg);

/// Reads `<prefix>kind`, `<prefix>count`, `<prefix>burnin`. Random kinds take
/// their seed from run.seed and `stream`.
MeasureSpec measure_from(const Config& cfg, std::string_view prefix,
                         std::uint64_t stream, std::string_view default_kind,
                         int default_count);

/// "grid:N", "grid:N,M,..." or "solenoid:FORWARD:BACKWARD".
Partition partition_from(const SystemSpec& system, std::string_view spec);

/// Scheme builder for coding.scheme in {e1, e2, e3, zoom}. Sets `h_estimate`
/// to the partition entropy used for typical sets (e2, e3), else leaves it.
SchemeFactory scheme_factory(const Config& cfg, const SystemSpec& system,
                             double* h_estimate = nullptr);

int cmd_estimate_entropy(const Config& cfg, const std::filesystem::path& out);
int cmd_lyapunov(const Config& cfg, const std::filesystem::path& out);
int cmd_run_coding(const Config& cfg, const std::filesystem::path& out);
int cmd_sweep(const Config& cfg, const std::filesystem::path& out);

}  // namespace entrocode::cli

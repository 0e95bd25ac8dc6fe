#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eifg/diagnostics.hpp"
#include "eifg/phi.hpp"
#include "eifg/problem.hpp"
#include "eifg/spectral.hpp"

namespace eifg {

enum class ReferenceMode { exact, finest };

/// How errors against the reference are measured: differences at the
/// collocation nodes, or the continuous error evaluated on a refined grid.
enum class ErrorMeasure { nodal, oversampled };

/// One experiment description, read from a JSON document.
struct RunConfig {
    std::string problem;
    ParamMap params;
    Scheme scheme = Scheme::eifg2;
    double c2 = 0.5;
    std::vector<std::vector<std::size_t>> grids;
    std::vector<long> n_steps;
    double T = 1.0;
    DealiasRule dealias = DealiasRule::none;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    long snapshot_stride = 0;
    long diagnostics_stride = 1;
    ReferenceMode reference = ReferenceMode::exact;
    ErrorMeasure error_measure = ErrorMeasure::oversampled;
    int oversample = 2;

    bool spatial_sweep() const { return grids.size() > 1; }
    bool temporal_sweep() const { return n_steps.size() > 1; }

    /// Expands the sweep into (grid, n_steps) runs, coarse to fine.
    std::vector<Resolution> resolutions() const;
    Problem make_problem() const;
    Tableau make_tableau() const;
};

/// Parses and validates a config. Unknown keys, non-monotone sweeps and
/// sweeps over both space and time raise ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Numbers in "%.6e" form.
std::string format_number(double v);

struct ConvergeResult {
    RateTable table;
    std::filesystem::path csv;
};

/// Runs every resolution of a sweep (up to `jobs` at once), measures e0/e1/e2
/// against the exact solution or the finest run, and writes converge.csv.
ConvergeResult cmd_converge(const RunConfig& config, int jobs = 1);

void write_rate_csv(std::ostream& out, const RateTable& table, std::size_t dims);

struct DiagnosticsRow {
    long step = 0;
    double time = 0.0;
    double sup = 0.0;
    std::optional<double> energy;
    std::optional<double> radius;
};

struct SimulateResult {
    std::vector<DiagnosticsRow> rows;
    std::vector<std::filesystem::path> snapshots;
    PhysicalField final_field;
    bool failed = false;
};

/// Single run writing snapshots every snapshot_stride steps (and at the end)
/// plus diagnostics.csv every diagnostics_stride steps. On blow-up the
/// partial outputs are kept, a FAILED marker is written and the error rethrown.
SimulateResult cmd_simulate(const RunConfig& config);

struct BenchRow {
    Resolution resolution;
    double sec_per_step = 0.0;
    std::optional<double> growth;
};

/// Growth factor log(time ratio) / log(node-count ratio).
std::optional<double> growth_factor(double coarse_seconds, double fine_seconds, double coarse_nodes,
                                    double fine_nodes);

/// Times the step loop (excluding I/O and diagnostics) at each grid of a
/// spatial sweep and writes bench.csv.
std::vector<BenchRow> cmd_bench(const RunConfig& config);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, std::size_t dims);

/// Throws IoError unless `dir` exists (or can be created) and is writable.
void ensure_writable_dir(const std::filesystem::path& dir);

}  // namespace eifg

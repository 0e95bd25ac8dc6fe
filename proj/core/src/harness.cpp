#include "eifg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "eifg/error.hpp"
#include "eifg/integrator.hpp"
#include "eifg/snapshot.hpp"

namespace eifg {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys{
        "problem", "params", "scheme", "c2", "grid", "n_steps", "T", "dealias", "seed",
        "output_dir", "snapshot_stride", "diagnostics_stride", "reference", "error_measure", "oversample"};
    return keys;
}

std::vector<std::size_t> parse_sizes(const json& j) {
    std::vector<std::size_t> sizes;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw ConfigError("grid sizes must be positive integers");
        sizes.push_back(v.get<std::size_t>());
    }
    return sizes;
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void validate(const RunConfig& c) {
    if (c.problem.empty()) throw ConfigError("config needs a problem name");
    if (c.grids.empty()) throw ConfigError("config needs at least one grid");
    if (c.n_steps.empty()) throw ConfigError("config needs at least one n_steps value");
    if (c.spatial_sweep() && c.temporal_sweep())
        throw ConfigError("a run sweeps either space or time, not both");
    if (!(c.T > 0.0) || !std::isfinite(c.T)) throw ConfigError("T must be positive");
    for (std::size_t i = 0; i < c.n_steps.size(); ++i) {
        if (c.n_steps[i] < 1) throw ConfigError("n_steps must be at least 1");
        if (i > 0 && c.n_steps[i] <= c.n_steps[i - 1]) throw ConfigError("n_steps sweep must be increasing");
    }
    for (std::size_t i = 1; i < c.grids.size(); ++i) {
        const auto& a = c.grids[i - 1];
        const auto& b = c.grids[i];
        if (a.size() != b.size()) throw ConfigError("grid sweep mixes dimensions");
        bool larger = false;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (b[k] < a[k]) throw ConfigError("grid sweep must be refining");
            larger = larger || b[k] > a[k];
        }
        if (!larger) throw ConfigError("grid sweep repeats a resolution");
    }
    if (c.oversample < 1 || c.oversample > 8) throw ConfigError("oversample must be between 1 and 8");
    if (c.snapshot_stride < 0 || c.diagnostics_stride < 0) throw ConfigError("strides must be nonnegative");

    const Problem p = c.make_problem();
    for (const auto& g : c.grids) build_grid(p.domain, g);
    c.make_tableau();
}

void validate_reference(const RunConfig& c) {
    if (c.reference == ReferenceMode::exact && !c.make_problem().has_exact())
        throw ConfigError("reference 'exact' needs a problem with an exact solution ('" + c.problem + "' has none)");
}

// Nodal field of `fine` restricted to the nodes of `coarse`; the grids share
// node positions when every fine size is a multiple of the coarse one.
PhysicalField restrict_to(const PhysicalField& fine, const Grid& coarse) {
    const Grid& fg = fine.grid();
    std::vector<std::size_t> ratio(coarse.dims());
    for (int a = 0; a < coarse.dims(); ++a) {
        if (fg.size(a) % coarse.size(a) != 0)
            throw ConfigError("finest grid must be an integer refinement of every coarser grid");
        ratio[a] = fg.size(a) / coarse.size(a);
    }
    PhysicalField out(coarse);
    const int d = coarse.dims();
    const std::size_t n1 = d > 1 ? coarse.size(1) : 1;
    const std::size_t n2 = d > 2 ? coarse.size(2) : 1;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < coarse.size(0); ++i)
        for (std::size_t j = 0; j < n1; ++j)
            for (std::size_t l = 0; l < n2; ++l, ++idx) {
                std::size_t f = i * ratio[0] * fg.stride(0);
                if (d > 1) f += j * ratio[1] * fg.stride(1);
                if (d > 2) f += l * ratio[2] * fg.stride(2);
                out[idx] = fine[f];
            }
    return out;
}

struct RunOutcome {
    SpectralField field;
    double sec_per_step = 0.0;
};

RunOutcome run_once(const RunConfig& config, const Resolution& res) {
    const Problem problem = config.make_problem();
    const Grid grid = build_grid(problem.domain, res.sizes);
    Integrator integrator(grid, problem, config.make_tableau(), config.dealias);
    State state{0.0, forward(problem.initial_field(grid)), 0};
    const double tau = config.T / static_cast<double>(res.n_steps);
    integrator.plan(tau);

    Clock::duration stepping{};
    for (long n = 1; n <= res.n_steps; ++n) {
        const auto t0 = Clock::now();
        integrator.step(state, tau);
        stepping += Clock::now() - t0;
        state.time = config.T * (static_cast<double>(n) / static_cast<double>(res.n_steps));
    }
    return {std::move(state.field),
            std::chrono::duration<double>(stepping).count() / static_cast<double>(res.n_steps)};
}

template <class F>
void parallel_for(std::size_t count, int jobs, F&& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

std::vector<Resolution> RunConfig::resolutions() const {
    std::vector<Resolution> out;
    if (spatial_sweep()) {
        for (const auto& g : grids) out.push_back({g, n_steps.front()});
    } else {
        for (long n : n_steps) out.push_back({grids.front(), n});
    }
    return out;
}

Problem RunConfig::make_problem() const { return eifg::make_problem(problem, params, seed); }

Tableau RunConfig::make_tableau() const { return tableau(scheme, c2); }

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    RunConfig c;
    if (!j.contains("problem")) throw ConfigError("config needs a problem name");
    c.problem = get_as<std::string>(j, "problem");
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigError("params must be an object");
        for (const auto& [k, v] : j["params"].items()) {
            if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
            c.params[k] = v.get<double>();
        }
    }
    if (j.contains("scheme")) c.scheme = parse_scheme(get_as<std::string>(j, "scheme"));
    if (j.contains("c2")) c.c2 = get_as<double>(j, "c2");
    if (!j.contains("grid")) throw ConfigError("config needs a grid");
    {
        const auto& g = j["grid"];
        if (!g.is_array() || g.empty()) throw ConfigError("grid must be a non-empty array");
        if (g.front().is_array()) {
            for (const auto& one : g) c.grids.push_back(parse_sizes(one));
        } else {
            c.grids.push_back(parse_sizes(g));
        }
    }
    if (!j.contains("n_steps")) throw ConfigError("config needs n_steps");
    if (j["n_steps"].is_array()) {
        for (const auto& v : j["n_steps"]) {
            if (!v.is_number_integer()) throw ConfigError("n_steps entries must be integers");
            c.n_steps.push_back(v.get<long>());
        }
    } else {
        c.n_steps.push_back(get_as<long>(j, "n_steps"));
    }
    if (j.contains("T")) c.T = get_as<double>(j, "T");
    if (j.contains("dealias")) c.dealias = parse_dealias_rule(get_as<std::string>(j, "dealias"));
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("output_dir")) c.output_dir = get_as<std::string>(j, "output_dir");
    if (j.contains("snapshot_stride")) c.snapshot_stride = get_as<long>(j, "snapshot_stride");
    if (j.contains("diagnostics_stride")) c.diagnostics_stride = get_as<long>(j, "diagnostics_stride");
    if (j.contains("reference")) {
        const auto r = get_as<std::string>(j, "reference");
        if (r == "exact") c.reference = ReferenceMode::exact;
        else if (r == "finest") c.reference = ReferenceMode::finest;
        else throw ConfigError("reference must be 'exact' or 'finest'");
    }
    if (j.contains("error_measure")) {
        const auto m = get_as<std::string>(j, "error_measure");
        if (m == "nodal") c.error_measure = ErrorMeasure::nodal;
        else if (m == "oversampled") c.error_measure = ErrorMeasure::oversampled;
        else throw ConfigError("error_measure must be 'nodal' or 'oversampled'");
    }
    if (j.contains("oversample")) c.oversample = get_as<int>(j, "oversample");
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

void ensure_writable_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".eifg_write_probe";
    {
        std::ofstream out(probe);
        if (!out || !(out << "ok")) throw IoError("output directory '" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

void write_rate_csv(std::ostream& out, const RateTable& table, std::size_t dims) {
    out << "N_T";
    for (std::size_t i = 1; i <= dims; ++i) out << ",N_" << i;
    out << ",e0,CR0,e1,CR1,e2,CR2,sec_per_step\n";
    for (const auto& row : table.rows) {
        const auto& r = row.record;
        out << r.resolution.n_steps;
        for (auto s : r.resolution.sizes) out << ',' << s;
        out << ',' << format_number(r.errors.e0) << ',' << cell(row.cr0) << ',' << format_number(r.errors.e1)
            << ',' << cell(row.cr1) << ',' << format_number(r.errors.e2) << ',' << cell(row.cr2) << ','
            << format_number(r.sec_per_step) << '\n';
    }
}

ConvergeResult cmd_converge(const RunConfig& config, int jobs) {
    validate(config);
    validate_reference(config);
    ensure_writable_dir(config.output_dir);
    const auto res = config.resolutions();
    const Problem problem = config.make_problem();

    std::vector<RunOutcome> outcomes(res.size());
    parallel_for(res.size(), jobs, [&](std::size_t i) { outcomes[i] = run_once(config, res[i]); });

    std::vector<ErrorRecord> records;
    const bool finest = config.reference == ReferenceMode::finest;
    const std::size_t rows = finest ? res.size() - 1 : res.size();
    if (finest && rows == 0) throw ConfigError("reference 'finest' needs at least two resolutions");
    const bool nodal = config.error_measure == ErrorMeasure::nodal;
    for (std::size_t i = 0; i < rows; ++i) {
        const SpectralField& u_hat = outcomes[i].field;
        ErrorNorms e;
        if (finest && nodal) {
            const PhysicalField u = inverse(u_hat);
            e = error_norms(u, restrict_to(inverse(outcomes.back().field), u.grid()));
        } else if (finest) {
            e = error_norms(u_hat, outcomes.back().field);
        } else if (nodal) {
            e = error_norms(inverse(u_hat), problem.sample_exact(u_hat.grid(), config.T));
        } else {
            e = error_norms(u_hat, problem.exact, config.T, config.oversample);
        }
        records.push_back({res[i], e, outcomes[i].sec_per_step});
    }

    ConvergeResult result{rates(std::move(records)), config.output_dir / "converge.csv"};
    auto out = open_output(result.csv);
    write_rate_csv(out, result.table, config.grids.front().size());
    if (!out) throw IoError("failed to write '" + result.csv.string() + "'");
    return result;
}

SimulateResult cmd_simulate(const RunConfig& config) {
    validate(config);
    if (config.grids.size() != 1 || config.n_steps.size() != 1)
        throw ConfigError("simulate takes a single grid and a single n_steps");
    ensure_writable_dir(config.output_dir);

    const Problem problem = config.make_problem();
    const Grid grid = build_grid(problem.domain, config.grids.front());
    const long n_steps = config.n_steps.front();
    const double tau = config.T / static_cast<double>(n_steps);
    Integrator integrator(grid, problem, config.make_tableau(), config.dealias);
    State state{0.0, forward(problem.initial_field(grid)), 0};

    auto param = [&](const char* key) { return problem.params.at(key); };

    SimulateResult result;
    auto csv = open_output(config.output_dir / "diagnostics.csv");
    csv << "step,t,sup_norm";
    if (problem.reports_energy) csv << ",energy";
    if (problem.reports_radius) csv << ",radius";
    csv << '\n';

    auto record = [&](long n, const PhysicalField& u) {
        DiagnosticsRow row{n, state.time, sup_norm(u), {}, {}};
        if (problem.reports_energy)
            row.energy = fh_energy(u, param("epsilon"), param("theta"), param("theta_c"));
        if (problem.reports_radius) row.radius = interface_radius(u).radius;
        csv << row.step << ',' << format_number(row.time) << ',' << format_number(row.sup);
        if (row.energy) csv << ',' << format_number(*row.energy);
        if (row.radius) csv << ',' << format_number(*row.radius);
        csv << '\n' << std::flush;
        result.rows.push_back(row);
    };
    auto snapshot = [&](long n, const PhysicalField& u) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06ld.eifg", n);
        const auto path = config.output_dir / name;
        write_snapshot(path, u, state.time);
        result.snapshots.push_back(path);
    };
    auto observe = [&](long n) {
        const bool last = n == n_steps;
        const bool diag = last || (config.diagnostics_stride > 0 && n % config.diagnostics_stride == 0);
        const bool snap = last || (config.snapshot_stride > 0 && n % config.snapshot_stride == 0);
        if (!diag && !snap) return;
        const PhysicalField u = inverse(state.field);
        if (diag) record(n, u);
        if (snap) snapshot(n, u);
        if (last) result.final_field = u;
    };

    try {
        observe(0);
        for (long n = 1; n <= n_steps; ++n) {
            integrator.step(state, tau);
            state.time = config.T * (static_cast<double>(n) / static_cast<double>(n_steps));
            observe(n);
        }
    } catch (const NumericError& e) {
        std::ofstream marker(config.output_dir / "FAILED");
        marker << e.what() << '\n';
        throw;
    }
    return result;
}

std::optional<double> growth_factor(double coarse_seconds, double fine_seconds, double coarse_nodes,
                                    double fine_nodes) {
    if (!(coarse_seconds > 0.0) || !(fine_seconds > 0.0) || !(fine_nodes > coarse_nodes)) return std::nullopt;
    return std::log(fine_seconds / coarse_seconds) / std::log(fine_nodes / coarse_nodes);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, std::size_t dims) {
    for (std::size_t i = 1; i <= dims; ++i) out << "N_" << i << ',';
    out << "N_T,nodes,sec_per_step,growth\n";
    for (const auto& r : rows) {
        for (auto s : r.resolution.sizes) out << s << ',';
        out << r.resolution.n_steps << ',' << static_cast<long long>(r.resolution.nodes()) << ','
            << format_number(r.sec_per_step) << ',' << cell(r.growth) << '\n';
    }
}

std::vector<BenchRow> cmd_bench(const RunConfig& config) {
    validate(config);
    if (config.temporal_sweep()) throw ConfigError("bench takes a spatial sweep with a single n_steps");
    ensure_writable_dir(config.output_dir);

    const long n_steps = config.n_steps.front();
    const double tau = config.T / static_cast<double>(n_steps);
    std::vector<BenchRow> rows;
    for (const auto& sizes : config.grids) {
        const Problem problem = config.make_problem();
        const Grid grid = build_grid(problem.domain, sizes);
        Integrator integrator(grid, problem, config.make_tableau(), config.dealias);
        State state{0.0, forward(problem.initial_field(grid)), 0};
        integrator.plan(tau);
        integrator.step(state, tau);  // warm-up, untimed

        const auto t0 = Clock::now();
        for (long n = 0; n < n_steps; ++n) integrator.step(state, tau);
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count() / static_cast<double>(n_steps);

        BenchRow row{{sizes, n_steps}, sec, {}};
        if (!rows.empty())
            row.growth = growth_factor(rows.back().sec_per_step, sec, rows.back().resolution.nodes(),
                                       row.resolution.nodes());
        rows.push_back(std::move(row));
    }

    const auto path = config.output_dir / "bench.csv";
    auto out = open_output(path);
    write_bench_csv(out, rows, config.grids.front().size());
    return rows;
}

}  // namespace eifg

#include "setr/app/commands.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "setr/errors.hpp"
#include "setr/io.hpp"
#include "setr/market_sim.hpp"
#include "setr/transition_risk.hpp"

namespace setr::app {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kDefaultSimulatePaths = 4;
constexpr std::size_t kDefaultVerifyPaths = 100000;
constexpr double kVerifySigmas = 3.0;

struct Run {
    Run(const ScenarioConfig& c, const CommandOptions& o, std::filesystem::path d)
        : config(c), options(o), dir(std::move(d)) {}

    const ScenarioConfig& config;
    const CommandOptions& options;
    std::filesystem::path dir;
    ordered_json results = ordered_json::object();
    std::vector<std::string> warnings;
    std::string csv;  ///< primary CSV for --format csv
    bool criterion_failed = false;
};

ordered_json result_json(const SetrResult& r) {
    ordered_json j;
    j["method"] = std::string(to_string(r.method));
    j["value"] = r.value;
    j["abs_error_estimate"] = r.abs_error_estimate;
    j["evaluations"] = r.evaluations;
    return j;
}

std::string key_value_csv(const ordered_json& results) {
    std::string out = "field,value\n";
    for (const auto& [key, value] : results.items()) {
        if (value.is_structured()) continue;
        out += key + ',';
        if (value.is_number_float()) out += io::format_real(value.get<double>());
        else if (value.is_string()) out += value.get<std::string>();
        else out += value.dump();
        out += '\n';
    }
    return out;
}

std::string curve_csv(const SetrCurve& c) {
    std::string out = "t_prime_days,phi\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        out += io::format_real(c.grid[i]) + ',' + io::format_real(c.values[i]) + '\n';
    return out;
}

double constant_rate(const ScenarioConfig& c) { return std::get<ConstantPremium>(c.premium).p; }

SetrCurve strong_curve(Run& run) {
    const ScenarioConfig& c = run.config;
    if (!std::holds_alternative<ConstantPremium>(c.premium))
        throw ValidationError("premium.kind", "the strong curve needs a constant premium");
    if (c.grid.empty()) throw ValidationError("grid", "the strong curve needs a nonempty grid");
    SetrCurve curve = setr_strong_curve(c.arrival_process(), constant_rate(c), c.grid, c.numerics);
    ordered_json curve_json;
    curve_json["method"] = std::string(to_string(SetrMethod::StrongCurvePoint));
    curve_json["t_prime_days"] = curve.grid;
    curve_json["phi"] = curve.values;
    ordered_json skipped = ordered_json::array();
    for (const SkippedPoint& s : curve.skipped) {
        skipped.push_back({{"t_prime_days", s.t_prime}, {"reason", s.reason}});
        run.warnings.push_back("grid point t' = " + io::format_real(s.t_prime) +
                               " skipped: " + s.reason);
    }
    curve_json["skipped"] = std::move(skipped);
    run.results = std::move(curve_json);
    return curve;
}

void note_geometric(Run& run) {
    if (std::holds_alternative<GeometricPremium>(run.config.premium))
        run.warnings.push_back(
            "geometric premium uses p(s) = p0*exp(lambda*(s - t0)), so A(t) = "
            "(p0/lambda)*(exp(lambda*(t - t0)) - 1)");
}

// phi used by simulate and verify: the override, else the configured mode.
double scenario_phi(Run& run) {
    const ScenarioConfig& c = run.config;
    if (c.phi_override) {
        run.results["phi_source"] = "phi_override";
        return *c.phi_override;
    }
    const ArrivalProcess a = c.arrival_process();
    switch (c.mode) {
        case SetrMode::Geometric: {
            const PremiumModel m = c.premium_model();
            run.results["phi_source"] = "geometric";
            note_geometric(run);
            return setr_geometric(a, m.initial_rate(), m.growth_rate(), c.numerics).value;
        }
        case SetrMode::StrongCurve:
            run.warnings.push_back(
                "strong_curve does not give a single phi; the weak constant is used instead");
            [[fallthrough]];
        case SetrMode::WeakConstant:
            run.results["phi_source"] = "weak_constant";
            return setr_weak_constant(a, constant_rate(c)).value;
        case SetrMode::Residual:
            break;
    }
    throw ValidationError("phi_override", "setr_mode residual needs phi_override");
}

void note_application(Run& run) {
    const MarketParams& m = run.config.market;
    run.results["premium_application"] = std::string(to_string(m.application));
    if (m.application == PremiumApplication::Additive)
        run.warnings.push_back(
            "premium_application additive: the premium is added to the price level "
            "(carbon = riskfree + A(t)); the log-return reading is available as multiplicative");
}

void compute(Run& run) {
    const ScenarioConfig& c = run.config;
    const ArrivalProcess a = c.arrival_process();
    switch (c.mode) {
        case SetrMode::WeakConstant:
            run.results = result_json(setr_weak_constant(a, constant_rate(c)));
            break;
        case SetrMode::Geometric: {
            const PremiumModel m = c.premium_model();
            note_geometric(run);
            run.results = result_json(setr_geometric(a, m.initial_rate(), m.growth_rate(), c.numerics));
            break;
        }
        case SetrMode::StrongCurve:
            run.csv = curve_csv(strong_curve(run));
            return;
        case SetrMode::Residual: {
            note_geometric(run);
            run.results = result_json(noarb_residual(a, c.premium_model(), *c.phi_override, c.numerics));
            run.results["phi"] = *c.phi_override;
            break;
        }
    }
    run.csv = key_value_csv(run.results);
}

void curve(Run& run) {
    const SetrCurve c = strong_curve(run);
    run.csv = curve_csv(c);
    io::write_text_file(run.dir / "curve.csv", run.csv);
    run.results["file"] = "curve.csv";
}

void simulate(Run& run) {
    const ScenarioConfig& c = run.config;
    const std::size_t n = run.options.paths.value_or(kDefaultSimulatePaths);
    if (n == 0) throw ValidationError("--paths", "simulate needs at least one path");
    const double phi = scenario_phi(run);
    note_application(run);
    const auto paths = simulate_paths(c.market, c.premium_model(), phi, c.arrival_process(), n,
                                      run.options.threads);
    emit_paths(paths, c.market, run.dir);
    run.results["n_paths"] = n;
    run.results["phi_applied"] = phi;
    run.results["clamp_at_zero"] = c.market.clamp_at_zero;
    ordered_json times = ordered_json::array();
    for (const SimulationPath& p : paths) times.push_back(p.transition_time);
    run.results["transition_times_days"] = std::move(times);
    run.results["manifest"] = "manifest.json";
    run.csv = io::read_text_file(run.dir / "manifest.csv");
}

void verify(Run& run) {
    const ScenarioConfig& c = run.config;
    const std::size_t n = run.options.paths.value_or(kDefaultVerifyPaths);
    if (n < 2) throw ValidationError("--paths", "verify needs at least two paths");
    const double phi = scenario_phi(run);
    note_application(run);
    const McReport r = run_monte_carlo(c.market, c.premium_model(), phi, c.arrival_process(), n,
                                       run.options.threads);
    run.results["phi"] = phi;
    run.results["n_paths"] = r.n_paths;
    run.results["mean_premium_earned"] = r.mean_premium_earned;
    run.results["se_premium"] = r.se_premium;
    run.results["mean_loss"] = r.mean_loss;
    run.results["se_loss"] = r.se_loss;
    run.results["residual"] = r.residual;
    run.results["combined_se"] = r.combined_se();
    run.results["fraction_transitioned_in_horizon"] = r.fraction_transitioned_in_horizon;
    run.results["criterion_sigmas"] = kVerifySigmas;
    run.results["pass"] = r.passes(kVerifySigmas);
    if (r.fraction_transitioned_in_horizon < 1.0)
        run.warnings.push_back("paths transitioning after the horizon accrue premium analytically "
                               "up to their transition time");
    run.criterion_failed = !r.passes(kVerifySigmas);
    run.csv = key_value_csv(run.results);
}

ordered_json report(const Run& run, Command cmd, std::string_view status) {
    ordered_json j;
    j["scenario"] = run.config.name;
    j["tool_version"] = std::string(kToolVersion);
    j["config_hash"] = config_hash(run.config);
    j["command"] = std::string(to_string(cmd));
    j["status"] = std::string(status);
    j["results"] = run.results;
    j["warnings"] = run.warnings;
    return j;
}

void write_report(const std::filesystem::path& dir, const ordered_json& j) {
    io::write_text_file(dir / "report.json", j.dump(2) + "\n");
}

}  // namespace

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::Compute: return "compute";
        case Command::Curve: return "curve";
        case Command::Simulate: return "simulate";
        case Command::Verify: return "verify";
    }
    return "unknown";
}

std::filesystem::path output_dir(const ScenarioConfig& config, const CommandOptions& options) {
    if (options.out) return *options.out;
    if (!config.output.empty()) return config.output;
    return "setr_out";
}

int run_command(Command cmd, const CommandOptions& options, std::ostream& out, std::ostream& err) {
    ScenarioConfig config;
    try {
        config = load_config(options.config);
    } catch (const ValidationError& e) {
        err << "error: invalid config " << options.config.string() << ": " << e.what() << '\n';
        return exit_code::invalid;
    }
    return run_command(cmd, std::move(config), options, out, err);
}

int run_command(Command cmd, ScenarioConfig config, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
    if (options.seed) config.set_seed(*options.seed);
    Run run(config, options, output_dir(config, options));
    try {
        switch (cmd) {
            case Command::Compute: compute(run); break;
            case Command::Curve: curve(run); break;
            case Command::Simulate: simulate(run); break;
            case Command::Verify: verify(run); break;
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::Domain) {
            err << "error: " << e.what() << '\n';
            return exit_code::invalid;
        }
        if (e.kind() == ErrorKind::Io) {
            err << "error: " << e.what() << '\n';
            return exit_code::failed;
        }
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        run.results = ordered_json::object();
        ordered_json j = report(run, cmd, "error");
        j["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        try {
            write_report(run.dir, j);
        } catch (const IoError& io_error) {
            err << "error: " << io_error.what() << '\n';
        }
        if (options.format == OutputFormat::Json) out << j.dump(2) << '\n';
        return exit_code::numerical;
    }

    const ordered_json j = report(run, cmd, run.criterion_failed ? "fail" : "ok");
    try {
        write_report(run.dir, j);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failed;
    }
    if (options.format == OutputFormat::Json) out << j.dump(2) << '\n';
    else out << run.csv;
    return run.criterion_failed ? exit_code::failed : exit_code::ok;
}

}  // namespace setr::app

#include "setr/market_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "json.hpp"

#include "setr/errors.hpp"
#include "setr/io.hpp"
#include "setr/kernels.hpp"
#include "setr/rng.hpp"

namespace setr {

namespace {

// Static partition of [0, n) over workers; the first exception wins.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void fill_normals(const rng::CounterStream& stream, std::span<double> z) {
    const std::size_t pairs = (z.size() + 1) / 2;
    for (std::size_t j = 0; j < pairs; ++j) {
        double a = 0.0, b = 0.0;
        stream.normal_pair(j, a, b);
        z[2 * j] = a;
        if (2 * j + 1 < z.size()) z[2 * j + 1] = b;
    }
}

}  // namespace

std::string_view to_string(PremiumApplication a) noexcept {
    return a == PremiumApplication::Additive ? "additive" : "multiplicative";
}

void MarketParams::validate() const {
    SETR_REQUIRE(std::isfinite(mu), DomainError, "market mu must be finite");
    SETR_REQUIRE(std::isfinite(sigma) && sigma >= 0.0, DomainError,
                 "market sigma must be finite and nonnegative");
    SETR_REQUIRE(std::isfinite(s0) && s0 > 0.0, DomainError, "market s0 must be positive");
    SETR_REQUIRE(std::isfinite(dt) && dt > 0.0, DomainError, "market dt must be positive");
    SETR_REQUIRE(std::isfinite(horizon) && horizon >= dt, DomainError,
                 "market horizon must be at least one step");
}

std::size_t MarketParams::steps() const {
    return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
}

double McReport::combined_se() const { return std::hypot(se_premium, se_loss); }

bool McReport::passes(double k) const { return std::fabs(residual) <= k * combined_se(); }

std::uint64_t path_seed(std::uint64_t master_seed, std::size_t path_index) {
    return rng::derive(master_seed, path_index);
}

std::uint64_t arrival_seed(std::uint64_t master_seed, std::size_t path_index) {
    return rng::derive(path_seed(master_seed, path_index), 0);
}

SimulationPath simulate_path(const MarketParams& params, const PremiumModel& m, double phi,
                             const ArrivalProcess& a, std::size_t path_index) {
    params.validate();
    SETR_REQUIRE(std::isfinite(phi) && phi >= 0.0, DomainError,
                 "phi must be finite and nonnegative");
    SETR_REQUIRE(a.origin() == m.origin(), DomainError,
                 "arrival and premium must share the origin t0");

    const Time t0 = a.origin();
    const std::size_t n = params.steps();
    SimulationPath path;
    path.path_index = path_index;
    path.seed = path_seed(params.master_seed, path_index);
    path.phi_applied = phi;
    path.transition_time = a.sample(arrival_seed(params.master_seed, path_index)).transition_time;
    const Time tau = path.transition_time;

    path.times.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) path.times[k] = t0 + static_cast<double>(k) * params.dt;
    const double steps_to_tau = std::ceil((tau - t0) / params.dt);
    const std::size_t k_star = steps_to_tau < 1.0 ? 1 : static_cast<std::size_t>(steps_to_tau);
    if (k_star <= n) path.transition_step = k_star;

    std::vector<double> z(n);
    fill_normals(rng::CounterStream(rng::derive(path.seed, 1)), z);
    std::vector<double> inc(n);
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * params.dt;
    kernels::affine(z, params.sigma * std::sqrt(params.dt), drift, inc);

    auto& rf = path.riskfree_price;
    rf.resize(n + 1);
    rf[0] = params.s0;
    for (std::size_t k = 0; k < n; ++k) rf[k + 1] = rf[k] * std::exp(inc[k]);

    auto& carbon = path.carbon_price;
    carbon.resize(n + 1);
    auto check_shock = [&](double pre_shock) {
        if (!params.clamp_at_zero && pre_shock < phi)
            throw DomainError("phi exceeds the carbon price at the transition step of path " +
                              std::to_string(path_index) + "; enable clamp_at_zero to allow it");
    };

    if (params.application == PremiumApplication::Additive) {
        std::vector<double> accrual(n + 1);
        for (std::size_t k = 0; k <= n; ++k) accrual[k] = m.cumulative(std::min(path.times[k], tau));
        kernels::add(rf, accrual, carbon);
        if (path.transition_step) {
            check_shock(carbon[k_star]);
            kernels::add_scalar(std::span<double>(carbon).subspan(k_star), -phi);
        }
    } else {
        carbon[0] = params.s0;
        for (std::size_t k = 0; k < n; ++k) {
            const double rate = path.times[k] < tau ? m.rate_at(path.times[k]) : 0.0;
            carbon[k + 1] = carbon[k] * std::exp(inc[k] + rate * params.dt);
            if (k + 1 == k_star) {
                check_shock(carbon[k + 1]);
                carbon[k + 1] = carbon[k + 1] + -phi;
            }
        }
    }
    if (params.clamp_at_zero)
        for (double& c : carbon) c = std::max(c, 0.0);
    return path;
}

std::vector<SimulationPath> simulate_paths(const MarketParams& params, const PremiumModel& m,
                                           double phi, const ArrivalProcess& a,
                                           std::size_t n_paths, unsigned threads) {
    std::vector<SimulationPath> paths(n_paths);
    parallel_for(n_paths, threads,
                 [&](std::size_t i) { paths[i] = simulate_path(params, m, phi, a, i); });
    return paths;
}

McReport run_monte_carlo(const MarketParams& params, const PremiumModel& m, double phi,
                         const ArrivalProcess& a, std::size_t n_paths, unsigned threads) {
    params.validate();
    SETR_REQUIRE(n_paths >= 2, DomainError, "Monte Carlo needs at least two paths");
    SETR_REQUIRE(std::isfinite(phi) && phi >= 0.0, DomainError,
                 "phi must be finite and nonnegative");
    SETR_REQUIRE(a.origin() == m.origin(), DomainError,
                 "arrival and premium must share the origin t0");

    std::vector<double> earned(n_paths);
    std::vector<unsigned char> within(n_paths);
    const Time horizon_end = a.origin() + params.horizon;
    parallel_for(n_paths, threads, [&](std::size_t i) {
        const Time tau = a.sample(arrival_seed(params.master_seed, i)).transition_time;
        earned[i] = m.cumulative(tau);
        within[i] = tau <= horizon_end ? 1 : 0;
    });

    const double n = static_cast<double>(n_paths);
    const double shift = earned.front();
    const kernels::ShiftedMoments mom = kernels::shifted_moments(earned, shift);
    const double var = std::max(0.0, (mom.sum_sq - mom.sum * mom.sum / n) / (n - 1.0));

    McReport r;
    r.n_paths = n_paths;
    r.mean_premium_earned = shift + mom.sum / n;
    r.se_premium = std::sqrt(var / n);
    // Every path transitions eventually and loses exactly phi.
    r.mean_loss = phi;
    r.se_loss = 0.0;
    r.residual = r.mean_premium_earned - r.mean_loss;
    std::size_t count = 0;
    for (unsigned char w : within) count += w;
    r.fraction_transitioned_in_horizon = static_cast<double>(count) / n;
    return r;
}

std::string path_csv(const SimulationPath& path) {
    std::string out = "t_days,riskfree,carbon\n";
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        out += io::format_real(path.times[k]);
        out += ',';
        out += io::format_real(path.riskfree_price[k]);
        out += ',';
        out += io::format_real(path.carbon_price[k]);
        out += '\n';
    }
    return out;
}

std::vector<std::filesystem::path> emit_paths(std::span<const SimulationPath> paths,
                                              const MarketParams& params,
                                              const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    std::string manifest_csv = "path_index,seed,transition_time_days,transition_step,file\n";
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const SimulationPath& p : paths) {
        char name[32];
        std::snprintf(name, sizeof(name), "path_%04zu.csv", p.path_index);
        const std::filesystem::path file = dir / name;
        try {
            io::write_text_file(file, path_csv(p));
        } catch (const IoError& e) {
            throw IoError("path " + std::to_string(p.path_index) + ": " + e.what());
        }
        written.push_back(file);
        const std::string step = p.transition_step ? std::to_string(*p.transition_step) : "";
        manifest_csv += std::to_string(p.path_index) + ',' + std::to_string(p.seed) + ',' +
                        io::format_real(p.transition_time) + ',' + step + ',' + name + '\n';
        nlohmann::ordered_json e;
        e["path_index"] = p.path_index;
        e["seed"] = p.seed;
        e["transition_time_days"] = p.transition_time;
        e["transition_step"] = p.transition_step ? nlohmann::ordered_json(*p.transition_step)
                                                 : nlohmann::ordered_json(nullptr);
        e["phi_applied"] = p.phi_applied;
        e["file"] = name;
        entries.push_back(std::move(e));
    }
    nlohmann::ordered_json manifest;
    manifest["master_seed"] = params.master_seed;
    manifest["premium_application"] = std::string(to_string(params.application));
    manifest["clamp_at_zero"] = params.clamp_at_zero;
    manifest["dt_days"] = params.dt;
    manifest["horizon_days"] = params.horizon;
    manifest["paths"] = std::move(entries);

    io::write_text_file(dir / "manifest.csv", manifest_csv);
    written.push_back(dir / "manifest.csv");
    io::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    written.push_back(dir / "manifest.json");
    return written;
}

}  // namespace setr

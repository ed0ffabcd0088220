#pragma once

// Monte Carlo model of a single-event market: a risk-free GBM share and a
// carbon-exposed twin that earns the premium until the transition event and
// then loses phi once.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "setr/arrival.hpp"
#include "setr/premium.hpp"

namespace setr {

enum class PremiumApplication {
    /// carbon = GBM + A(t): premium accrues on the price level.
    Additive,
    /// carbon drift is mu + p(t): premium accrues on the log return.
    Multiplicative,
};

std::string_view to_string(PremiumApplication a) noexcept;

struct MarketParams {
    double mu = 0.0;     ///< drift per day
    double sigma = 0.0;  ///< volatility per sqrt(day)
    double s0 = 1.0;
    double dt = 1.0;  ///< days per step
    double horizon = 1000.0;  ///< days
    std::uint64_t master_seed = 0;
    PremiumApplication application = PremiumApplication::Additive;
    bool clamp_at_zero = false;

    /// DomainError unless sigma >= 0, dt > 0, horizon >= dt, s0 > 0, all finite.
    void validate() const;
    std::size_t steps() const;
};

struct SimulationPath {
    std::size_t path_index = 0;
    std::uint64_t seed = 0;
    std::vector<Time> times;
    std::vector<double> riskfree_price;
    std::vector<double> carbon_price;
    Time transition_time = 0.0;  ///< may lie beyond the horizon
    std::optional<std::size_t> transition_step;  ///< first k with times[k] >= transition_time
    double phi_applied = 0.0;
};

struct McReport {
    std::size_t n_paths = 0;
    double mean_premium_earned = 0.0;
    double se_premium = 0.0;
    double mean_loss = 0.0;
    double se_loss = 0.0;
    double residual = 0.0;  ///< mean_premium_earned - mean_loss
    double fraction_transitioned_in_horizon = 0.0;

    double combined_se() const;
    /// |residual| <= k * combined_se
    bool passes(double k = 3.0) const;
};

/// Seed of path `path_index`; the arrival draw and the noise draws are
/// separate child streams of it.
std::uint64_t path_seed(std::uint64_t master_seed, std::size_t path_index);
std::uint64_t arrival_seed(std::uint64_t master_seed, std::size_t path_index);

/// One paired realization. Both prices use the same normal draws with exact
/// log-space GBM steps. Post-transition the carbon path keeps the accrual
/// frozen at A(tau), so the shock at the transition step is exactly phi.
///
/// DomainError when the pre-shock carbon price is below phi and
/// clamp_at_zero is off.
SimulationPath simulate_path(const MarketParams& params, const PremiumModel& m, double phi,
                             const ArrivalProcess& a, std::size_t path_index);

/// Paths 0..n-1 computed on `threads` workers; output is independent of the
/// worker count.
std::vector<SimulationPath> simulate_paths(const MarketParams& params, const PremiumModel& m,
                                           double phi, const ArrivalProcess& a,
                                           std::size_t n_paths, unsigned threads = 1);

/// Estimates E[A(tau)] against the loss phi. Premium earned on a path is the
/// analytic accrual A(tau) at its sampled transition time, also when tau lies
/// beyond the horizon; the loss is phi on every path since transition is
/// certain. DomainError for n_paths < 2.
McReport run_monte_carlo(const MarketParams& params, const PremiumModel& m, double phi,
                         const ArrivalProcess& a, std::size_t n_paths, unsigned threads = 1);

/// Writes path_NNNN.csv (t_days,riskfree,carbon) for every path plus
/// manifest.csv and manifest.json listing seeds and transition times.
/// Returns the files written, manifest last.
std::vector<std::filesystem::path> emit_paths(std::span<const SimulationPath> paths,
                                              const MarketParams& params,
                                              const std::filesystem::path& dir);

/// CSV body of one path file.
std::string path_csv(const SimulationPath& path);

}  // namespace setr

#include "setr/market_sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "setr/errors.hpp"
#include "setr/io.hpp"
#include "setr/transition_risk.hpp"

using namespace setr;

namespace {

MarketParams baseline_params(std::uint64_t seed = 7) {
    MarketParams p;
    p.mu = 0.0015;
    p.sigma = 0.01;
    p.horizon = 1000.0;
    p.master_seed = seed;
    return p;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("setr_market_sim_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(SimulatePath, DegenerateGbmIsConstant) {
    MarketParams params;
    params.horizon = 50.0;
    const SimulationPath p = simulate_path(params, PremiumModel::constant(0.0), 0.0,
                                           ArrivalProcess::exponential(20.0), 3);
    ASSERT_EQ(p.times.size(), 51u);
    for (std::size_t k = 0; k < p.times.size(); ++k) {
        EXPECT_EQ(p.riskfree_price[k], 1.0);
        EXPECT_EQ(p.carbon_price[k], 1.0);
    }
}

TEST(SimulatePath, DeterministicPointMassPath) {
    MarketParams params;
    params.horizon = 750.0;
    const SimulationPath p = simulate_path(params, PremiumModel::constant(0.001), 0.75,
                                           ArrivalProcess::point_mass(331.0), 0);
    ASSERT_EQ(p.times.size(), 751u);
    ASSERT_TRUE(p.transition_step.has_value());
    EXPECT_EQ(*p.transition_step, 331u);
    EXPECT_EQ(p.transition_time, 331.0);
    for (std::size_t k = 0; k < 331; ++k)
        EXPECT_EQ(p.carbon_price[k], 1.0 + 0.001 * static_cast<double>(k)) << k;
    const double top = 1.0 + 0.001 * 331.0;
    for (std::size_t k = 331; k <= 750; ++k) EXPECT_EQ(p.carbon_price[k], top - 0.75) << k;
    EXPECT_EQ(p.riskfree_price.back(), 1.0);
}

TEST(SimulatePath, BitwiseReproducible) {
    const auto a = ArrivalProcess::exponential(750.0);
    const auto m = PremiumModel::constant(0.001);
    const SimulationPath x = simulate_path(baseline_params(), m, 0.75, a, 2);
    const SimulationPath y = simulate_path(baseline_params(), m, 0.75, a, 2);
    EXPECT_EQ(x.carbon_price, y.carbon_price);
    EXPECT_EQ(x.riskfree_price, y.riskfree_price);
    EXPECT_EQ(x.transition_time, y.transition_time);
    const SimulationPath z = simulate_path(baseline_params(), m, 0.75, a, 3);
    EXPECT_NE(x.riskfree_price, z.riskfree_price);
}

TEST(SimulatePath, ValidatesInputs) {
    const auto a = ArrivalProcess::exponential(750.0);
    const auto m = PremiumModel::constant(0.001);
    MarketParams bad = baseline_params();
    bad.sigma = -0.1;
    EXPECT_THROW(simulate_path(bad, m, 0.75, a, 0), DomainError);
    bad = baseline_params();
    bad.horizon = 0.5;
    EXPECT_THROW(simulate_path(bad, m, 0.75, a, 0), DomainError);
    EXPECT_THROW(simulate_path(baseline_params(), m, -1.0, a, 0), DomainError);
    EXPECT_THROW(simulate_path(baseline_params(), PremiumModel::constant(0.001, 2.0), 0.75, a, 0),
                 DomainError);
}

TEST(SimulatePath, ShockLargerThanPriceNeedsClamp) {
    MarketParams params;
    params.horizon = 100.0;
    const auto a = ArrivalProcess::point_mass(10.0);
    const auto m = PremiumModel::constant(0.001);
    EXPECT_THROW(simulate_path(params, m, 5.0, a, 0), DomainError);
    params.clamp_at_zero = true;
    const SimulationPath p = simulate_path(params, m, 5.0, a, 0);
    EXPECT_EQ(p.carbon_price.back(), 0.0);
    EXPECT_EQ(p.carbon_price[9], 1.0 + 0.001 * 9.0);
}

// Property: with no premium and no shock the two prices coincide.
TEST(MarketProperties, NoisePairing) {
    const auto a = ArrivalProcess::weibull(1.5, 300.0);
    for (std::size_t i = 0; i < 20; ++i) {
        const SimulationPath p =
            simulate_path(baseline_params(11), PremiumModel::constant(0.0), 0.0, a, i);
        EXPECT_EQ(p.riskfree_price, p.carbon_price);
    }
}

TEST(MarketProperties, ShockAccountingIsExact) {
    const auto a = ArrivalProcess::exponential(300.0);
    const auto m = PremiumModel::geometric(0.001, 0.0005);
    for (std::size_t i = 0; i < 50; ++i) {
        const SimulationPath with = simulate_path(baseline_params(5), m, 0.4, a, i);
        const SimulationPath without = simulate_path(baseline_params(5), m, 0.0, a, i);
        EXPECT_EQ(with.riskfree_price, without.riskfree_price);
        if (!with.transition_step) continue;
        const std::size_t ks = *with.transition_step;
        EXPECT_GE(with.times[ks], with.transition_time);
        EXPECT_LT(with.times[ks - 1], with.transition_time);
        for (std::size_t k = 0; k < ks; ++k) {
            EXPECT_EQ(with.carbon_price[k], without.carbon_price[k]);
            EXPECT_GE(with.carbon_price[k], with.riskfree_price[k]);
        }
        for (std::size_t k = ks; k < with.times.size(); ++k)
            EXPECT_EQ(with.carbon_price[k], without.carbon_price[k] - 0.4);
    }
}

TEST(MarketProperties, MultiplicativeModeSharesNoiseAndShocksOnce) {
    MarketParams params = baseline_params(9);
    params.application = PremiumApplication::Multiplicative;
    const auto a = ArrivalProcess::point_mass(200.0);
    const auto m = PremiumModel::constant(0.001);
    const SimulationPath p = simulate_path(params, m, 0.3, a, 0);
    const SimulationPath q = simulate_path(params, m, 0.0, a, 0);
    ASSERT_EQ(*p.transition_step, 200u);
    for (std::size_t k = 1; k < 200; ++k) {
        const double ratio = p.carbon_price[k] / p.riskfree_price[k];
        EXPECT_NEAR(ratio, std::exp(0.001 * static_cast<double>(k)), 1e-12);
    }
    EXPECT_EQ(p.carbon_price[200], q.carbon_price[200] + -0.3);
}

TEST(MarketProperties, DriftlessGbmIsMartingale) {
    MarketParams params;
    params.sigma = 0.01;
    params.horizon = 100.0;
    params.master_seed = 2024;
    const auto a = ArrivalProcess::exponential(50.0);
    const auto m = PremiumModel::constant(0.0);
    const std::size_t n = 100000;
    const auto paths = simulate_paths(params, m, 0.0, a, n);
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : paths) {
        const double x = p.riskfree_price.back() - 1.0;
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
    EXPECT_LE(std::fabs(mean), 3.0 * se);
}

TEST(MarketProperties, ParallelRunsMatchSequential) {
    const auto a = ArrivalProcess::lognormal(6.0, 0.5);
    const auto m = PremiumModel::constant(0.001);
    const auto seq = simulate_paths(baseline_params(3), m, 0.1, a, 17, 1);
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto par = simulate_paths(baseline_params(3), m, 0.1, a, 17, threads);
        ASSERT_EQ(par.size(), seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
            EXPECT_EQ(par[i].carbon_price, seq[i].carbon_price);
            EXPECT_EQ(par[i].transition_time, seq[i].transition_time);
        }
    }
    const McReport r1 = run_monte_carlo(baseline_params(3), m, 0.75, a, 5000, 1);
    const McReport r4 = run_monte_carlo(baseline_params(3), m, 0.75, a, 5000, 4);
    EXPECT_EQ(r1.mean_premium_earned, r4.mean_premium_earned);
    EXPECT_EQ(r1.se_premium, r4.se_premium);
}

TEST(MonteCarlo, ZeroPremiumZeroPhi) {
    const McReport r = run_monte_carlo(baseline_params(), PremiumModel::constant(0.0), 0.0,
                                       ArrivalProcess::exponential(750.0), 1000);
    EXPECT_EQ(r.mean_premium_earned, 0.0);
    EXPECT_EQ(r.se_premium, 0.0);
    EXPECT_EQ(r.mean_loss, 0.0);
    EXPECT_EQ(r.se_loss, 0.0);
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_TRUE(r.passes());
}

TEST(MonteCarlo, ExponentialBaselineWithinThreeStandardErrors) {
    const auto a = ArrivalProcess::exponential(750.0);
    const auto m = PremiumModel::constant(0.001);
    const double phi = setr_weak_constant(a, 0.001).value;
    const McReport r = run_monte_carlo(baseline_params(), m, phi, a, 100000);
    EXPECT_LE(std::fabs(r.residual), 3.0 * r.se_premium);
    EXPECT_NEAR(r.se_premium, 0.75 / std::sqrt(1e5), 1e-4);
    EXPECT_EQ(r.residual, r.mean_premium_earned - r.mean_loss);
    EXPECT_NEAR(r.fraction_transitioned_in_horizon, 1.0 - std::exp(-1000.0 / 750.0), 0.01);
    EXPECT_TRUE(r.passes());

    const McReport twice = run_monte_carlo(baseline_params(), m, 2.0 * phi, a, 100000);
    EXPECT_FALSE(twice.passes());
    EXPECT_LT(twice.residual, -0.7);
}

TEST(MonteCarlo, PointMassIsExact) {
    const McReport r = run_monte_carlo(baseline_params(), PremiumModel::constant(0.001), 0.30,
                                       ArrivalProcess::point_mass(300.0), 1000);
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_EQ(r.se_premium, 0.0);
    EXPECT_EQ(r.fraction_transitioned_in_horizon, 1.0);
}

TEST(MonteCarlo, NeedsTwoPaths) {
    EXPECT_THROW(run_monte_carlo(baseline_params(), PremiumModel::constant(0.001), 0.3,
                                 ArrivalProcess::point_mass(300.0), 1),
                 DomainError);
}

TEST(EmitPaths, EmptyListWritesHeaderOnlyManifest) {
    const auto dir = scratch_dir("empty");
    const auto files = emit_paths({}, baseline_params(), dir);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(slurp(dir / "manifest.csv"),
              "path_index,seed,transition_time_days,transition_step,file\n");
    std::filesystem::remove_all(dir);
}

TEST(EmitPaths, FourPathsAreByteIdenticalOnRerun) {
    const auto a = ArrivalProcess::exponential(750.0);
    const auto m = PremiumModel::constant(0.001);
    const auto d1 = scratch_dir("run1");
    const auto d2 = scratch_dir("run2");
    const auto f1 = emit_paths(simulate_paths(baseline_params(), m, 0.75, a, 4, 1), baseline_params(), d1);
    const auto f2 = emit_paths(simulate_paths(baseline_params(), m, 0.75, a, 4, 4), baseline_params(), d2);
    ASSERT_EQ(f1.size(), 6u);
    for (std::size_t i = 0; i < f1.size(); ++i) {
        EXPECT_EQ(f1[i].filename(), f2[i].filename());
        EXPECT_EQ(slurp(f1[i]), slurp(f2[i]));
    }
    EXPECT_EQ(f1[0].filename(), "path_0000.csv");
    const std::string first = slurp(f1[0]);
    EXPECT_EQ(first.substr(0, first.find('\n')), "t_days,riskfree,carbon");
    const std::string manifest = slurp(d1 / "manifest.csv");
    EXPECT_EQ(std::count(manifest.begin(), manifest.end(), '\n'), 5);
    EXPECT_NE(slurp(d1 / "manifest.json").find("\"premium_application\": \"additive\""),
              std::string::npos);
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
}

TEST(EmitPaths, UnwritableDestinationRaisesIoError) {
    const auto dir = scratch_dir("blocked");
    io::write_text_file(dir / "file", "x");
    const auto paths = simulate_paths(baseline_params(), PremiumModel::constant(0.001), 0.75,
                                      ArrivalProcess::exponential(750.0), 1);
    EXPECT_THROW(emit_paths(paths, baseline_params(), dir / "file" / "sub"), IoError);
    std::filesystem::remove_all(dir);
}

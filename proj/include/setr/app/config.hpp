#pragma once

// Scenario files: one JSON document describing an arrival process, a premium
// model and optionally a market, plus what to compute.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "setr/arrival.hpp"
#include "setr/market_sim.hpp"
#include "setr/numerics.hpp"
#include "setr/premium.hpp"

namespace setr::app {

enum class SetrMode { WeakConstant, Geometric, StrongCurve, Residual };

std::string_view to_string(SetrMode mode) noexcept;

struct ScenarioConfig {
    std::string name;
    Time t0 = 0.0;
    ArrivalKind arrival = Exponential{1.0};
    PremiumModel::Kind premium = ConstantPremium{0.0};
    MarketParams market;  ///< master_seed mirrors `seed`
    SetrMode mode = SetrMode::WeakConstant;
    std::vector<Time> grid;
    std::optional<double> phi_override;
    std::string output;  ///< empty when not given
    std::uint64_t seed = 0;
    NumericsPolicy numerics;

    ArrivalProcess arrival_process() const { return ArrivalProcess(arrival, t0); }
    PremiumModel premium_model() const { return PremiumModel(premium, t0); }
    void set_seed(std::uint64_t s) {
        seed = s;
        market.master_seed = s;
    }
};

/// Strict parse: unknown keys, wrong types and invalid model parameters all
/// raise ValidationError naming the offending field path.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Full form with every default spelled out, so parse(to_json(c)) == c.
nlohmann::json to_json(const ScenarioConfig& config, bool include_output = true);

/// FNV-1a 64 of the sorted-key serialization without `output`, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace setr::app

#include "setr/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "setr/errors.hpp"
#include "setr/io.hpp"

namespace setr::app {

using nlohmann::json;

namespace {

// Typed access to one JSON object that remembers which keys were read, so
// leftovers can be rejected afterwards.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ValidationError(path_or_root(), "expected an object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        if (!obj_.contains(key)) throw ValidationError(field(key), "required field is missing");
        return obj_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ValidationError(field(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ValidationError(field(key), "must be finite");
        return x;
    }
    double number(const std::string& key, double fallback) {
        return has(key) ? number(key) : (used_.insert(key), fallback);
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ValidationError(field(key), "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ValidationError(field(key), "expected true or false");
        return v.get<bool>();
    }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_unsigned())
            throw ValidationError(field(key), "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ValidationError(field(key), "expected an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
                throw ValidationError(field(key) + "[" + std::to_string(i) + "]",
                                      "expected a finite number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    Section child(const std::string& key) { return Section(raw(key), field(key)); }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : obj_.items())
            if (!used_.count(key)) throw ValidationError(field(key), "unknown key");
    }

private:
    std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }

    const json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

ArrivalKind parse_arrival(Section& s, Time& t0) {
    const std::string kind = s.string("kind");
    t0 = s.number("t0_days", 0.0);
    if (kind == "exponential") return Exponential{s.number("scale_days")};
    if (kind == "weibull") return Weibull{s.number("shape"), s.number("scale_days")};
    if (kind == "lognormal") return LogNormal{s.number("log_mean"), s.number("log_sd")};
    if (kind == "point_mass") return PointMass{s.number("event_time_days")};
    if (kind == "histogram") return EmpiricalHistogram{s.numbers("bin_edges_days"), s.numbers("masses")};
    throw ValidationError(s.field("kind"), "unknown arrival kind '" + kind +
                                               "' (exponential, weibull, lognormal, "
                                               "point_mass, histogram)");
}

PremiumModel::Kind parse_premium(Section& s) {
    const std::string kind = s.string("kind");
    if (kind == "constant") return ConstantPremium{s.number("p_per_day")};
    if (kind == "geometric") return GeometricPremium{s.number("p0_per_day"), s.number("lambda_per_day")};
    throw ValidationError(s.field("kind"),
                          "unknown premium kind '" + kind + "' (constant, geometric)");
}

MarketParams parse_market(Section& s) {
    MarketParams m;
    m.mu = s.number("mu_per_day", m.mu);
    m.sigma = s.number("sigma_per_sqrt_day", m.sigma);
    m.s0 = s.number("s0", m.s0);
    m.dt = s.number("dt_days", m.dt);
    m.horizon = s.number("horizon_days", m.horizon);
    if (s.has("premium_application")) {
        const std::string app = s.string("premium_application");
        if (app == "additive") m.application = PremiumApplication::Additive;
        else if (app == "multiplicative") m.application = PremiumApplication::Multiplicative;
        else throw ValidationError(s.field("premium_application"),
                                   "expected additive or multiplicative");
    }
    m.clamp_at_zero = s.boolean("clamp_at_zero", m.clamp_at_zero);
    return m;
}

NumericsPolicy parse_numerics(Section& s) {
    NumericsPolicy p;
    p.rel_tol = s.number("rel_tol", p.rel_tol);
    p.tail_cutoff = s.number("tail_cutoff", p.tail_cutoff);
    p.hazard_floor = s.number("hazard_floor", p.hazard_floor);
    if (s.has("max_evaluations")) {
        const json& v = s.raw("max_evaluations");
        if (!v.is_number_unsigned())
            throw ValidationError(s.field("max_evaluations"), "expected a positive integer");
        p.max_evaluations = v.get<std::size_t>();
    }
    return p;
}

SetrMode parse_mode(const std::string& text) {
    if (text == "weak_constant") return SetrMode::WeakConstant;
    if (text == "geometric") return SetrMode::Geometric;
    if (text == "strong_curve") return SetrMode::StrongCurve;
    if (text == "residual") return SetrMode::Residual;
    throw ValidationError("setr_mode", "unknown mode '" + text +
                                           "' (weak_constant, geometric, strong_curve, residual)");
}

// Model constructors speak DomainError; the config layer reports fields.
template <class Fn>
void as_field(const std::string& field, Fn fn) {
    try {
        fn();
    } catch (const DomainError& e) {
        throw ValidationError(field, e.what());
    }
}

}  // namespace

std::string_view to_string(SetrMode mode) noexcept {
    switch (mode) {
        case SetrMode::WeakConstant: return "weak_constant";
        case SetrMode::Geometric: return "geometric";
        case SetrMode::StrongCurve: return "strong_curve";
        case SetrMode::Residual: return "residual";
    }
    return "unknown";
}

ScenarioConfig parse_config(const json& doc) {
    Section root(doc, "");
    ScenarioConfig c;
    c.name = root.string("name");
    if (c.name.empty()) throw ValidationError("name", "must not be empty");

    Section arrival = root.child("arrival");
    c.arrival = parse_arrival(arrival, c.t0);
    arrival.reject_unknown();
    as_field("arrival", [&] { (void)c.arrival_process(); });

    Section premium = root.child("premium");
    c.premium = parse_premium(premium);
    premium.reject_unknown();
    as_field("premium", [&] { (void)c.premium_model(); });

    if (root.has("market")) {
        Section market = root.child("market");
        c.market = parse_market(market);
        market.reject_unknown();
        as_field("market", [&] { c.market.validate(); });
    }

    c.mode = parse_mode(root.string("setr_mode"));
    if (root.has("grid")) c.grid = root.numbers("grid");
    if (root.has("phi_override")) {
        c.phi_override = root.number("phi_override");
        if (*c.phi_override < 0.0) throw ValidationError("phi_override", "must be nonnegative");
    }
    if (root.has("output")) c.output = root.string("output");
    c.set_seed(root.has("seed") ? root.unsigned_integer("seed") : 0);
    if (root.has("numerics")) {
        Section numerics = root.child("numerics");
        c.numerics = parse_numerics(numerics);
        numerics.reject_unknown();
        validate(c.numerics);
    }
    root.reject_unknown();

    const bool constant = std::holds_alternative<ConstantPremium>(c.premium);
    if (c.mode == SetrMode::WeakConstant && !constant)
        throw ValidationError("premium.kind", "setr_mode weak_constant needs a constant premium");
    if (c.mode == SetrMode::StrongCurve && !constant)
        throw ValidationError("premium.kind", "setr_mode strong_curve needs a constant premium");
    if (c.mode == SetrMode::StrongCurve && c.grid.empty())
        throw ValidationError("grid", "setr_mode strong_curve needs a nonempty grid");
    if (c.mode == SetrMode::Residual && !c.phi_override)
        throw ValidationError("phi_override", "setr_mode residual needs phi_override");
    return c;
}

ScenarioConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_text_file(path);
    } catch (const IoError& e) {
        throw ValidationError("", e.what());
    }
    return parse_config_text(text);
}

json to_json(const ScenarioConfig& c, bool include_output) {
    json doc;
    doc["name"] = c.name;

    json arrival;
    arrival["t0_days"] = c.t0;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Exponential>) {
                arrival["kind"] = "exponential";
                arrival["scale_days"] = k.scale;
            } else if constexpr (std::is_same_v<K, Weibull>) {
                arrival["kind"] = "weibull";
                arrival["shape"] = k.shape;
                arrival["scale_days"] = k.scale;
            } else if constexpr (std::is_same_v<K, LogNormal>) {
                arrival["kind"] = "lognormal";
                arrival["log_mean"] = k.log_mean;
                arrival["log_sd"] = k.log_sd;
            } else if constexpr (std::is_same_v<K, PointMass>) {
                arrival["kind"] = "point_mass";
                arrival["event_time_days"] = k.event_time;
            } else {
                arrival["kind"] = "histogram";
                arrival["bin_edges_days"] = k.bin_edges;
                arrival["masses"] = k.masses;
            }
        },
        c.arrival);
    doc["arrival"] = std::move(arrival);

    json premium;
    if (const auto* k = std::get_if<ConstantPremium>(&c.premium)) {
        premium["kind"] = "constant";
        premium["p_per_day"] = k->p;
    } else {
        const auto& g = std::get<GeometricPremium>(c.premium);
        premium["kind"] = "geometric";
        premium["p0_per_day"] = g.p0;
        premium["lambda_per_day"] = g.lambda;
    }
    doc["premium"] = std::move(premium);

    doc["market"] = {
        {"mu_per_day", c.market.mu},
        {"sigma_per_sqrt_day", c.market.sigma},
        {"s0", c.market.s0},
        {"dt_days", c.market.dt},
        {"horizon_days", c.market.horizon},
        {"premium_application", std::string(to_string(c.market.application))},
        {"clamp_at_zero", c.market.clamp_at_zero},
    };
    doc["setr_mode"] = std::string(to_string(c.mode));
    if (!c.grid.empty()) doc["grid"] = c.grid;
    if (c.phi_override) doc["phi_override"] = *c.phi_override;
    if (include_output && !c.output.empty()) doc["output"] = c.output;
    doc["seed"] = c.seed;
    doc["numerics"] = {
        {"rel_tol", c.numerics.rel_tol},
        {"tail_cutoff", c.numerics.tail_cutoff},
        {"hazard_floor", c.numerics.hazard_floor},
        {"max_evaluations", c.numerics.max_evaluations},
    };
    return doc;
}

std::string config_hash(const ScenarioConfig& c) {
    // nlohmann::json keeps object keys sorted, so the dump is canonical.
    const std::string canonical = to_json(c, false).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace setr::app

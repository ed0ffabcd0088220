#include "setr/app/commands.hpp"
#include "setr/app/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "setr/errors.hpp"
#include "setr/io.hpp"

using namespace setr;
using namespace setr::app;
using nlohmann::json;

namespace {

const std::filesystem::path kScenarios = SETR_SCENARIO_DIR;

json baseline_doc() { return json::parse(io::read_text_file(kScenarios / "baseline.json")); }

std::string field_of(const json& doc) {
    try {
        (void)parse_config(doc);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "<accepted>";
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("setr_app_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(Command cmd, const ScenarioConfig& c, CommandOptions opts) {
    std::ostringstream out, err;
    const int code = run_command(cmd, c, opts, out, err);
    return {code, out.str(), err.str()};
}

json report_in(const std::filesystem::path& dir) {
    return json::parse(io::read_text_file(dir / "report.json"));
}

}  // namespace

TEST(Config, ParsesBaselineScenario) {
    const ScenarioConfig c = parse_config(baseline_doc());
    EXPECT_EQ(c.name, "baseline");
    EXPECT_EQ(std::get<Exponential>(c.arrival).scale, 750.0);
    EXPECT_EQ(std::get<ConstantPremium>(c.premium).p, 0.001);
    EXPECT_EQ(c.market.mu, 0.0015);
    EXPECT_EQ(c.market.sigma, 0.01);
    EXPECT_EQ(c.market.horizon, 1000.0);
    EXPECT_EQ(c.market.master_seed, c.seed);
    EXPECT_EQ(c.mode, SetrMode::WeakConstant);
    EXPECT_EQ(c.numerics.rel_tol, NumericsPolicy{}.rel_tol);
}

TEST(Config, EveryShippedScenarioParses) {
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios))
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
}

TEST(Config, RoundTripKeepsHash) {
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
        const ScenarioConfig c = load_config(entry.path());
        const ScenarioConfig again = parse_config(to_json(c));
        EXPECT_EQ(config_hash(c), config_hash(again)) << entry.path();
        EXPECT_EQ(to_json(c), to_json(again));
    }
}

TEST(Config, HashIgnoresKeyOrderAndOutput) {
    const std::string a = R"({"name":"x","setr_mode":"weak_constant",
        "arrival":{"kind":"weibull","shape":2,"scale_days":500},
        "premium":{"p_per_day":0.001,"kind":"constant"}})";
    const std::string b = R"({"premium":{"kind":"constant","p_per_day":0.001},
        "arrival":{"scale_days":500,"shape":2,"kind":"weibull"},
        "output":"elsewhere","setr_mode":"weak_constant","name":"x"})";
    EXPECT_EQ(config_hash(parse_config_text(a)), config_hash(parse_config_text(b)));
    const std::string defaults_spelled = R"({"premium":{"kind":"constant","p_per_day":0.001},
        "arrival":{"scale_days":500,"shape":2,"kind":"weibull","t0_days":0},
        "setr_mode":"weak_constant","name":"x","seed":0,"numerics":{"rel_tol":1e-8}})";
    EXPECT_EQ(config_hash(parse_config_text(a)), config_hash(parse_config_text(defaults_spelled)));

    ScenarioConfig c = parse_config_text(a);
    const std::string before = config_hash(c);
    c.set_seed(5);
    EXPECT_NE(config_hash(c), before);
    EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Config, DiagnosticsNameTheField) {
    json doc = baseline_doc();
    doc.erase("premium");
    EXPECT_EQ(field_of(doc), "premium");

    doc = baseline_doc();
    doc["arrival"]["scale"] = 3;
    EXPECT_EQ(field_of(doc), "arrival.scale");

    doc = baseline_doc();
    doc["premium"]["p_per_day"] = "0.001";
    EXPECT_EQ(field_of(doc), "premium.p_per_day");

    doc = baseline_doc();
    doc["arrival"]["scale_days"] = -1;
    EXPECT_EQ(field_of(doc), "arrival");

    doc = baseline_doc();
    doc["market"]["sigma_per_sqrt_day"] = -0.1;
    EXPECT_EQ(field_of(doc), "market");

    doc = baseline_doc();
    doc["unexpected"] = 1;
    EXPECT_EQ(field_of(doc), "unexpected");

    doc = baseline_doc();
    doc["seed"] = -4;
    EXPECT_EQ(field_of(doc), "seed");

    doc = baseline_doc();
    doc["numerics"] = {{"tail_cutoff", 0.5}};
    EXPECT_EQ(field_of(doc), "numerics.tail_cutoff");

    doc = baseline_doc();
    doc["setr_mode"] = "strong_curve";
    EXPECT_EQ(field_of(doc), "grid");

    doc = baseline_doc();
    doc["setr_mode"] = "residual";
    EXPECT_EQ(field_of(doc), "phi_override");

    doc = baseline_doc();
    doc["premium"] = {{"kind", "geometric"}, {"p0_per_day", 0.001}, {"lambda_per_day", 0.0}};
    EXPECT_EQ(field_of(doc), "premium.kind");

    doc = baseline_doc();
    doc["arrival"]["kind"] = "gamma";
    EXPECT_EQ(field_of(doc), "arrival.kind");

    EXPECT_THROW(parse_config_text("{\"name\": "), ValidationError);
    EXPECT_THROW(load_config(kScenarios / "does_not_exist.json"), ValidationError);
}

TEST(Commands, ComputeBaseline) {
    const auto dir = scratch("compute");
    const Outcome o = run(Command::Compute, load_config(kScenarios / "baseline.json"), {.out = dir});
    ASSERT_EQ(o.code, exit_code::ok) << o.err;
    const json r = report_in(dir);
    EXPECT_NEAR(r["results"]["value"].get<double>(), 0.75, 0.75 * 1e-8);
    EXPECT_EQ(r["status"], "ok");
    EXPECT_EQ(r["command"], "compute");
    EXPECT_EQ(r["tool_version"], "0.1.0");
    EXPECT_EQ(json::parse(o.out), r);
}

TEST(Commands, DivergentScenarioWritesErrorReport) {
    const auto dir = scratch("divergent");
    const Outcome o =
        run(Command::Compute, load_config(kScenarios / "geometric_divergent.json"), {.out = dir});
    EXPECT_EQ(o.code, exit_code::numerical);
    EXPECT_NE(o.err.find("DivergentExpectation"), std::string::npos);
    const json r = report_in(dir);
    EXPECT_EQ(r["status"], "error");
    EXPECT_EQ(r["error"]["kind"], "DivergentExpectation");
}

TEST(Commands, InvalidConfigWritesNoReport) {
    const auto dir = scratch("invalid");
    const auto file = dir / "bad.json";
    json doc = baseline_doc();
    doc.erase("premium");
    io::write_text_file(file, doc.dump());
    std::ostringstream out, err;
    const int code = run_command(Command::Compute, {.config = file, .out = dir / "o"}, out, err);
    EXPECT_EQ(code, exit_code::invalid);
    EXPECT_NE(err.str().find("premium"), std::string::npos);
    EXPECT_TRUE(out.str().empty());
    EXPECT_FALSE(std::filesystem::exists(dir / "o" / "report.json"));
}

TEST(Commands, CurveOutputs) {
    const auto dir = scratch("curve");
    const Outcome flat = run(Command::Curve, load_config(kScenarios / "baseline_curve.json"),
                             {.out = dir, .format = OutputFormat::Csv});
    ASSERT_EQ(flat.code, exit_code::ok) << flat.err;
    EXPECT_EQ(flat.out, io::read_text_file(dir / "curve.csv"));
    std::istringstream lines(flat.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "t_prime_days,phi");
    while (std::getline(lines, line)) {
        const double phi = std::stod(line.substr(line.find(',') + 1));
        EXPECT_NEAR(phi, 0.75, 1e-10);
    }

    ScenarioConfig empty = load_config(kScenarios / "baseline.json");
    EXPECT_EQ(run(Command::Curve, empty, {.out = dir}).code, exit_code::invalid);
}

TEST(Commands, SimulateValidatesPathCountAndIsDeterministic) {
    const ScenarioConfig c = load_config(kScenarios / "baseline.json");
    EXPECT_EQ(run(Command::Simulate, c, {.out = scratch("zero"), .paths = 0}).code,
              exit_code::invalid);
    const auto d1 = scratch("sim1");
    const auto d2 = scratch("sim2");
    ASSERT_EQ(run(Command::Simulate, c, {.out = d1, .threads = 1}).code, exit_code::ok);
    ASSERT_EQ(run(Command::Simulate, c, {.out = d2, .threads = 4}).code, exit_code::ok);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(d1)) {
        ++files;
        EXPECT_EQ(io::read_text_file(entry.path()),
                  io::read_text_file(d2 / entry.path().filename()))
            << entry.path().filename();
    }
    EXPECT_EQ(files, 7u);  // 4 paths, 2 manifests, report
    const json r = report_in(d1);
    EXPECT_EQ(r["results"]["transition_times_days"].size(), 4u);
    EXPECT_EQ(r["results"]["premium_application"], "additive");
}

TEST(Commands, VerifyPassesAndFails) {
    ScenarioConfig c = load_config(kScenarios / "baseline.json");
    const auto dir = scratch("verify");
    const Outcome ok = run(Command::Verify, c, {.out = dir, .paths = 20000});
    EXPECT_EQ(ok.code, exit_code::ok) << ok.out;

    c.phi_override = 1.5;
    const Outcome bad = run(Command::Verify, c, {.out = dir, .paths = 20000});
    EXPECT_EQ(bad.code, exit_code::failed);
    const json r = report_in(dir);
    EXPECT_EQ(r["status"], "fail");
    EXPECT_FALSE(r["results"]["pass"].get<bool>());
    EXPECT_NEAR(r["results"]["residual"].get<double>(), -0.75, 0.05);

    c.premium = ConstantPremium{0.0};
    c.phi_override = 0.0;
    const Outcome zero = run(Command::Verify, c, {.out = dir, .paths = 1000});
    EXPECT_EQ(zero.code, exit_code::ok);
    const json z = report_in(dir);
    EXPECT_EQ(z["results"]["mean_premium_earned"].get<double>(), 0.0);
    EXPECT_EQ(z["results"]["residual"].get<double>(), 0.0);
    EXPECT_EQ(z["results"]["se_premium"].get<double>(), 0.0);
}

TEST(Commands, SeedOverrideEntersHash) {
    const ScenarioConfig c = load_config(kScenarios / "baseline.json");
    const auto d1 = scratch("seed1");
    const auto d2 = scratch("seed2");
    run(Command::Compute, c, {.out = d1});
    run(Command::Compute, c, {.out = d2, .seed = 99});
    EXPECT_NE(report_in(d1)["config_hash"], report_in(d2)["config_hash"]);
}

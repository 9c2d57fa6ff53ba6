#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riskrl/cli.hpp"
#include "riskrl/config.hpp"
#include "riskrl/errors.hpp"

using namespace riskrl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = RISKRL_CONFIG_DIR;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "riskrl_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir.parent_path());
    return dir;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "riskrl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& path) { return json::parse(slurp(path)); }

fs::path write_config(const std::string& name, const json& doc) {
    const fs::path dir = scratch(name + "_cfg");
    fs::create_directories(dir);
    const fs::path path = dir / "config.json";
    std::ofstream(path) << doc.dump(2);
    return path;
}

const json kSmallRun = json::parse(R"({
  "mdp": {"generator": "random", "S": 3, "A": 2, "H": 3, "seed": 1},
  "agents": {"id": "vi", "algorithm": "rsvi2", "risk": {"beta": 1.0}},
  "K": 100, "seeds": 2
})");

} // namespace

TEST_CASE("run writes the trace, the summary and the resolved config") {
    const fs::path out = scratch("run_bundled");
    const Outcome r = cli({"run", "--config", (kConfigs / "run_rsvi2.json").string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "resolved_config.json"));
    const json summary = read_json(out / "summary.json");
    CHECK(summary.at("final_cum_regret").contains("mean"));
    CHECK(summary.at("final_cum_regret").contains("std"));
    CHECK(summary.at("growth_exponent").is_number());
    CHECK(summary.at("surrogate_violations") == 0);
    CHECK(summary.at("range_violations") == 0);
    CHECK(slurp(out / "trace.csv").rfind("seed,k,instant_regret,cum_regret,surrogate\n", 0) == 0);
}

TEST_CASE("overrides reach the agent") {
    const fs::path out = scratch("override");
    const Outcome r = cli({"run", "--config", (kConfigs / "run_rsvi2.json").string(), "--out", out.string(), "--set",
                           "agents.bonus.c=4.0", "--set", "K=300", "--set", "window=[30,300]"});
    REQUIRE(r.code == 0);
    const json summary = read_json(out / "summary.json");
    CHECK(summary.at("bonus").at("c") == 4.0);
    CHECK(summary.at("K") == 300);
    CHECK(read_json(out / "resolved_config.json").at("agents").at("bonus").at("c") == 4.0);
}

TEST_CASE("a missing config exits 1 and names the path") {
    const Outcome r = cli({"run", "--config", "/no/such/config.json", "--out", scratch("missing").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("/no/such/config.json") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("configuration mistakes exit 1") {
    json bad = kSmallRun;
    bad["agents"]["algorithm"] = "sarsa";
    CHECK(cli({"run", "--config", write_config("bad_alg", bad).string(), "--out", scratch("o1").string()}).code == 1);
    bad = kSmallRun;
    bad["K"] = 0;
    CHECK(cli({"run", "--config", write_config("bad_k", bad).string(), "--out", scratch("o2").string()}).code == 1);
    bad = kSmallRun;
    bad["colour"] = "blue";
    CHECK(cli({"run", "--config", write_config("bad_key", bad).string(), "--out", scratch("o3").string()}).code == 1);
    CHECK(cli({"run", "--config", write_config("small", kSmallRun).string(), "--set", "noequals"}).code == 1);
    CHECK(cli({"frobnicate", "--config", "x"}).code == 1);
    CHECK(cli({"run"}).code == 1);
}

TEST_CASE("an over-budget beta exits 2") {
    json doc = kSmallRun;
    doc["agents"]["risk"]["beta"] = 15.0;
    const Outcome r = cli({"run", "--config", write_config("budget", doc).string(), "--out", scratch("o4").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("solve: deterministic chain has the same value for both signs") {
    const fs::path out = scratch("solve_chain");
    REQUIRE(cli({"solve", "--config", (kConfigs / "solve_chain.json").string(), "--out", out.string()}).code == 0);
    const json doc = read_json(out / "solution.json");
    const auto& sols = doc.at("solutions");
    REQUIRE(sols.size() == 2);
    CHECK(sols[0].at("V1").get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sols[1].at("V1").get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(doc.at("risk_neutral").at("V1").get<double>() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("solve: Bernoulli closed form and risk-neutral reference") {
    const fs::path out = scratch("solve_bernoulli");
    REQUIRE(cli({"solve", "--config", (kConfigs / "solve_bernoulli.json").string(), "--out", out.string()}).code == 0);
    const json doc = read_json(out / "solution.json");
    bool seen = false;
    for (const auto& s : doc.at("solutions")) {
        const double beta = s.at("beta");
        const double expected = std::log((1.0 + std::exp(beta)) / 2.0) / beta;
        CHECK(std::abs(s.at("V1").get<double>() - expected) < 1e-12);
        seen = seen || beta == 1.0;
    }
    CHECK(seen);
    CHECK(doc.at("risk_neutral").at("V1") == 0.5);
}

TEST_CASE("solve: a grid entry over the direct-mode budget exits 2") {
    json doc = read_json(kConfigs / "solve_chain.json");
    doc["numeric_mode"] = "direct";
    doc["betas"] = json::array({1.0, 11.0});
    const fs::path out = scratch("solve_budget");
    CHECK(cli({"solve", "--config", write_config("solve_budget", doc).string(), "--out", out.string()}).code == 2);
    CHECK_FALSE(fs::exists(out / "solution.json"));
    doc["numeric_mode"] = "log_space";
    CHECK(cli({"solve", "--config", write_config("solve_log", doc).string(), "--out", out.string()}).code == 0);
}

TEST_CASE("compare: shared seeds, per-agent outputs, oracle ranked first") {
    const fs::path out = scratch("compare");
    REQUIRE(cli({"compare", "--config", (kConfigs / "compare_bonus.json").string(), "--out", out.string()}).code == 0);
    for (const char* id : {"doubly_decaying", "fixed_multiplier", "oracle"}) {
        CHECK(fs::exists(out / id / "trace.csv"));
        CHECK(fs::exists(out / id / "summary.json"));
    }
    const std::string csv = slurp(out / "compare.csv");
    CHECK(csv.rfind("seed,k,doubly_decaying,fixed_multiplier,oracle\n", 0) == 0);
    const json summary = read_json(out / "summary.json");
    CHECK(summary.at("ranking")[0].at("agent") == "oracle");
    CHECK(summary.at("ranking")[0].at("mean_final_cum_regret") == 0.0);
    CHECK(summary.at("seeds") == json::array({0, 1, 2, 3}));
    const json a = read_json(out / "doubly_decaying" / "summary.json");
    const json b = read_json(out / "fixed_multiplier" / "summary.json");
    CHECK(a.at("num_seeds") == b.at("num_seeds"));
}

TEST_CASE("compare: duplicate agent ids exit 1") {
    json doc = read_json(kConfigs / "compare_bonus.json");
    doc["agents"][1]["id"] = "doubly_decaying";
    const Outcome r = cli({"compare", "--config", write_config("dup", doc).string(), "--out", scratch("o5").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("duplicate agent id") != std::string::npos);
}

TEST_CASE("compare needs two agents and run needs one") {
    CHECK(cli({"compare", "--config", write_config("one", kSmallRun).string(), "--out", scratch("o6").string()}).code == 1);
    CHECK(cli({"run", "--config", (kConfigs / "compare_bonus.json").string(), "--out", scratch("o7").string()}).code == 1);
}

TEST_CASE("validate") {
    CHECK(cli({"validate", "--config", (kConfigs / "models" / "bernoulli_half.json").string()}).code == 0);
    CHECK(cli({"validate", "--config", (kConfigs / "compare_bonus.json").string()}).code == 0);
    CHECK(cli({"validate", "--config", (kConfigs / "solve_chain.json").string()}).code == 0);
    json mdp = read_json(kConfigs / "models" / "bernoulli_half.json");
    mdp["transitions"][0][0][0] = json::array({0.5, 0.4});
    const Outcome r = cli({"validate", "--config", write_config("bad_mdp", mdp).string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("row (h=1,s=0,a=0) sums to 0.9") != std::string::npos);
}

TEST_CASE("the resolved config parses back to the same experiment") {
    for (const char* name : {"run_rsvi2.json", "run_rsq2_risk_averse.json", "compare_bonus.json",
                             "bandit_hard_greedy.json"}) {
        const ExperimentConfig config = experiment_config_from_json(read_json(kConfigs / name), kConfigs);
        const ExperimentConfig again = experiment_config_from_json(json::parse(to_json(config).dump()));
        CHECK(again == config);
        CHECK(to_json(again) == to_json(config));
    }
    const json inline_doc{{"mdp", {{"inline", read_json(kConfigs / "models" / "bernoulli_half.json")}}},
                          {"agents", {{"algorithm", "rsq2"}}},
                          {"K", 10}};
    const ExperimentConfig config = experiment_config_from_json(inline_doc);
    CHECK(experiment_config_from_json(to_json(config)) == config);
}

TEST_CASE("model references resolve relative to the config file") {
    const ExperimentConfig config =
        experiment_config_from_json({{"mdp", {{"file", "models/bernoulli_half.json"}}}, {"agents", json::object()}, {"K", 5}},
                                    kConfigs);
    CHECK(fs::path(config.mdp.at("file").get<std::string>()).is_absolute());
    CHECK(build_mdp(config.mdp).shape().horizon == 2);
    CHECK_THROWS_AS(build_mdp({{"file", "missing.json"}}, kConfigs), ConfigError);
    CHECK_THROWS_AS(build_mdp({{"generator", "gridworld"}}), ConfigError);
}

TEST_CASE("configuration defaults") {
    const ExperimentConfig small = experiment_config_from_json(kSmallRun);
    CHECK(small.run.record_every == 1);
    CHECK(small.run.seeds == std::vector<std::uint64_t>{0, 1});
    CHECK(small.window_lo == 10);
    CHECK(small.window_hi == 100);
    json big = kSmallRun;
    big["K"] = 20000;
    CHECK(experiment_config_from_json(big).run.record_every == 10);
}

TEST_CASE("dot-path overrides") {
    json doc = kSmallRun;
    apply_override(doc, "agents.bonus.c=2.5");
    CHECK(doc["agents"]["bonus"]["c"] == 2.5);
    apply_override(doc, "agents.id=fancy name");
    CHECK(doc["agents"]["id"] == "fancy name");
    apply_override(doc, "seeds=[4,5]");
    CHECK(doc["seeds"] == json::array({4, 5}));
    apply_override(doc, "seeds.1=9");
    CHECK(doc["seeds"][1] == 9);
    CHECK_THROWS_AS(apply_override(doc, "seeds.7=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "seeds.x=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "K.deeper=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
}

TEST_CASE("RISKRL_SEED overrides the master seed") {
    const fs::path cfg = write_config("env_seed", kSmallRun);
    const fs::path plain = scratch("env_plain"), seeded = scratch("env_seeded");
    REQUIRE(cli({"run", "--config", cfg.string(), "--out", plain.string()}).code == 0);
    setenv("RISKRL_SEED", "99", 1);
    const Outcome r = cli({"run", "--config", cfg.string(), "--out", seeded.string()});
    setenv("RISKRL_SEED", "nope", 1);
    const Outcome bad = cli({"run", "--config", cfg.string(), "--out", scratch("env_bad").string()});
    unsetenv("RISKRL_SEED");
    REQUIRE(r.code == 0);
    CHECK(bad.code == 1);
    CHECK(read_json(seeded / "resolved_config.json").at("master_seed") == 99);
    CHECK(slurp(plain / "trace.csv") != slurp(seeded / "trace.csv"));
}

TEST_CASE("repeated runs produce byte-identical files regardless of threads") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string cfg = (kConfigs / "run_rsq2_risk_averse.json").string();
    REQUIRE(cli({"run", "--config", cfg, "--out", a.string(), "--threads", "1"}).code == 0);
    REQUIRE(cli({"run", "--config", cfg, "--out", b.string(), "--threads", "3"}).code == 0);
    for (const char* f : {"trace.csv", "summary.json", "resolved_config.json"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("the installed binary behaves like the library entry point") {
    const fs::path out = scratch("binary");
    const std::string cmd = std::string(RISKRL_CLI_PATH) + " run --config " + (kConfigs / "run_rsvi2.json").string() +
                            " --set K=50 --set window=[5,50] --out " + out.string() + " > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "trace.csv"));
    const std::string missing = std::string(RISKRL_CLI_PATH) + " run --config /no/such.json > /dev/null 2>&1";
    const int status = std::system(missing.c_str());
    CHECK(WEXITSTATUS(status) == 1);
}

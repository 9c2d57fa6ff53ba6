#include "riskrl/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskrl/config.hpp"
#include "riskrl/errors.hpp"
#include "riskrl/harness.hpp"
#include "riskrl/mdp_json.hpp"
#include "riskrl/risk_oracle.hpp"

namespace riskrl {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json load_with_overrides(const CliInvocation& inv) {
    json doc = load_json_file(inv.config_path);
    for (const auto& o : inv.overrides) apply_override(doc, o);
    return doc;
}

fs::path base_dir_of(const CliInvocation& inv) { return inv.config_path.parent_path(); }

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

int thread_count(const CliInvocation& inv) {
    if (inv.threads > 0) return inv.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentConfig load_experiment(const CliInvocation& inv) {
    ExperimentConfig config = experiment_config_from_json(load_with_overrides(inv), base_dir_of(inv));
    apply_seed_environment(config);
    return config;
}

json trace_summary(const RegretTrace& trace, const AgentSpec& spec, const ExperimentConfig& config) {
    const GrowthFit fit = fit_growth_exponent(trace, config.window_lo, config.window_hi);
    long checks = 0, negative = 0;
    for (const auto& s : trace.seeds) {
        checks += s.surrogate_checks;
        negative += s.negative_regret_episodes;
    }
    json doc{{"agent", spec.id},
             {"algorithm", std::string(to_string(spec.algorithm))},
             {"beta", spec.risk.beta},
             {"bonus", to_json(spec.bonus)},
             {"K", trace.episodes},
             {"num_seeds", trace.seeds.size()},
             {"v_star", trace.v_star},
             {"final_cum_regret", {{"mean", trace.mean_final_cum_regret()}, {"std", trace.std_final_cum_regret()}}},
             {"window", {config.window_lo, config.window_hi}},
             {"optimism_fraction", trace.optimism_fraction()},
             {"surrogate_checks", checks},
             {"surrogate_violations", trace.surrogate_violations()},
             {"negative_regret_episodes", negative},
             {"range_violations", trace.range_violations()},
             {"config_hash", trace.config_hash}};
    if (fit.ok) {
        doc["growth_exponent"] = fit.slope;
    } else {
        doc["growth_exponent"] = nullptr;
        doc["growth_flag"] = fit.flag;
    }
    return doc;
}

void write_trace(const fs::path& path, const RegretTrace& trace) {
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_file(path, csv.str());
}

} // namespace

int cmd_run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = load_experiment(inv);
    if (config.agents.size() != 1) throw ConfigError("run takes a single agent; use compare for several");
    const TabularMdp mdp = build_mdp(config.mdp);
    const json resolved = to_json(config);
    const AgentSpec& spec = config.agents.front();

    RegretTrace trace = run_experiment(mdp, spec, config.run, thread_count(inv));
    trace.config_hash = config_hash(resolved);

    prepare_dir(inv.out_dir);
    write_trace(inv.out_dir / "trace.csv", trace);
    write_json(inv.out_dir / "summary.json", trace_summary(trace, spec, config));
    write_json(inv.out_dir / "resolved_config.json", resolved);
    err << "run " << spec.id << ": " << trace.seeds.size() << " seeds x " << trace.episodes << " episodes in "
        << trace.wall_seconds << " s\n";
    out << (inv.out_dir / "summary.json").string() << '\n';
    return 0;
}

int cmd_compare(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = load_experiment(inv);
    if (config.agents.size() < 2) throw ConfigError("compare needs at least 2 agents");
    std::set<std::string> ids;
    for (const auto& a : config.agents) {
        if (!ids.insert(a.id).second) throw ConfigError("duplicate agent id \"" + a.id + "\"");
    }
    const TabularMdp mdp = build_mdp(config.mdp);
    const json resolved = to_json(config);
    const std::string hash = config_hash(resolved);
    for (const auto& a : config.agents) check_risk_params(a.risk, mdp.shape().horizon);

    std::vector<RegretTrace> traces;
    for (const auto& spec : config.agents) {
        traces.push_back(run_experiment(mdp, spec, config.run, thread_count(inv)));
        traces.back().config_hash = hash;
        err << "compare " << spec.id << ": " << traces.back().wall_seconds << " s\n";
    }

    prepare_dir(inv.out_dir);
    json agents = json::object();
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const fs::path dir = inv.out_dir / config.agents[i].id;
        prepare_dir(dir);
        const json summary = trace_summary(traces[i], config.agents[i], config);
        write_trace(dir / "trace.csv", traces[i]);
        write_json(dir / "summary.json", summary);
        agents[config.agents[i].id] = summary;
    }
    std::vector<std::size_t> order(traces.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return traces[a].mean_final_cum_regret() < traces[b].mean_final_cum_regret();
    });
    json ranking = json::array();
    for (std::size_t r = 0; r < order.size(); ++r) {
        const RegretTrace& t = traces[order[r]];
        ranking.push_back({{"rank", r + 1},
                           {"agent", t.agent_id},
                           {"mean_final_cum_regret", t.mean_final_cum_regret()},
                           {"std_final_cum_regret", t.std_final_cum_regret()}});
    }
    std::ostringstream csv;
    write_comparison_csv(csv, traces);
    write_file(inv.out_dir / "compare.csv", csv.str());
    write_json(inv.out_dir / "summary.json",
               json{{"ranking", ranking}, {"agents", agents}, {"seeds", config.run.seeds}, {"config_hash", hash}});
    write_json(inv.out_dir / "resolved_config.json", resolved);
    out << (inv.out_dir / "summary.json").string() << '\n';
    return 0;
}

int cmd_solve(const CliInvocation& inv, std::ostream& out, std::ostream&) {
    const SolveConfig config = solve_config_from_json(load_with_overrides(inv), base_dir_of(inv));
    const TabularMdp mdp = build_mdp(config.mdp);
    const int horizon = mdp.shape().horizon;
    const int s1 = mdp.tables().initial_state;
    std::vector<RiskParams> grid;
    for (double beta : config.betas) {
        grid.push_back(RiskParams{beta, config.numeric_mode, config.overflow_budget});
        check_risk_params(grid.back(), horizon);
    }

    json solutions = json::array();
    for (const auto& params : grid) {
        const ValueTables tables = optimal_values(mdp, params);
        solutions.push_back({{"beta", params.beta},
                             {"V1", tables.v(0, s1)},
                             {"policy", to_json(greedy_policy(tables))},
                             {"values", to_json(tables)}});
    }
    const ValueTables neutral = risk_neutral_optimal_values(mdp);
    const json doc{{"initial_state", s1},
                   {"numeric_mode", std::string(to_string(config.numeric_mode))},
                   {"risk_neutral", {{"V1", neutral.v(0, s1)}, {"values", to_json(neutral)}}},
                   {"solutions", solutions}};
    prepare_dir(inv.out_dir);
    write_json(inv.out_dir / "solution.json", doc);
    write_json(inv.out_dir / "resolved_config.json", to_json(config));
    out << (inv.out_dir / "solution.json").string() << '\n';
    return 0;
}

int cmd_validate(const CliInvocation& inv, std::ostream& out, std::ostream&) {
    const json doc = load_with_overrides(inv);
    if (doc.is_object() && doc.contains("transitions")) {
        const ValidationReport report = validate(tables_from_json(doc));
        if (!report) throw InvalidMdp(report.message);
        out << "ok: mdp\n";
        return 0;
    }
    if (doc.is_object() && doc.contains("betas")) {
        const SolveConfig config = solve_config_from_json(doc, base_dir_of(inv));
        const TabularMdp mdp = build_mdp(config.mdp);
        for (double beta : config.betas) {
            check_risk_params(RiskParams{beta, config.numeric_mode, config.overflow_budget}, mdp.shape().horizon);
        }
        out << "ok: solve config\n";
        return 0;
    }
    ExperimentConfig config = experiment_config_from_json(doc, base_dir_of(inv));
    apply_seed_environment(config);
    const TabularMdp mdp = build_mdp(config.mdp);
    std::set<std::string> ids;
    for (const auto& a : config.agents) {
        if (!ids.insert(a.id).second) throw ConfigError("duplicate agent id \"" + a.id + "\"");
        check_risk_params(a.risk, mdp.shape().horizon);
        make_agent(a, mdp, config.run.episodes);
    }
    out << "ok: experiment config (" << config.agents.size() << " agent"
        << (config.agents.size() == 1 ? "" : "s") << ")\n";
    return 0;
}

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    try {
        switch (inv.subcommand) {
        case Subcommand::run: return cmd_run(inv, out, err);
        case Subcommand::solve: return cmd_solve(inv, out, err);
        case Subcommand::validate: return cmd_validate(inv, out, err);
        case Subcommand::compare: return cmd_compare(inv, out, err);
        }
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Risk-sensitive tabular RL laboratory"};
    app.require_subcommand(1);
    CliInvocation inv;
    const std::pair<const char*, Subcommand> commands[] = {
        {"run", Subcommand::run},
        {"solve", Subcommand::solve},
        {"validate", Subcommand::validate},
        {"compare", Subcommand::compare},
    };
    const char* help[] = {
        "Run one agent over all seeds and write trace.csv, summary.json, resolved_config.json",
        "Solve V*/Q* for each beta in the grid and write solution.json",
        "Check an MDP file or a config without running it",
        "Run several agents on shared seeds and rank them by final regret",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->add_option("--config", inv.config_path, "JSON config")->required();
        sub->add_option("--out", inv.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--set", inv.overrides, "Override key=value (dot path into the config)");
        sub->add_option("--threads", inv.threads, "Worker threads (default: available parallelism)")
            ->check(CLI::NonNegativeNumber);
        subs.push_back(sub);
    }
    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) inv.subcommand = commands[i].second;
    }
    return dispatch(inv, out, err);
}

} // namespace riskrl

// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/bench.hpp>
#include <mptlab/estimator.hpp>
#include <mptlab/trace_io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace
{
using namespace mptlab;
using nlohmann::json;

std::ofstream open_out(const std::string& path)
{
    std::ofstream out{path};
    if (!out)
        throw std::runtime_error{"cannot open output file: " + path};
    return out;
}

// stdout when path is "-"
std::ostream& out_or_stdout(const std::string& path, std::ofstream& file)
{
    if (path == "-")
        return std::cout;
    file = open_out(path);
    return file;
}

struct WorkloadFlags
{
    WorkloadSpec spec;
    std::string distribution = "uniform";

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--accounts", spec.accounts, "externally owned accounts to create")
            ->capture_default_str();
        cmd.add_option("--contracts", spec.contracts, "contracts to create")
            ->capture_default_str();
        cmd.add_option("--slots-per-contract", spec.slots_per_contract,
               "storage slots seeded per contract")
            ->capture_default_str();
        cmd.add_option("--blocks", spec.blocks, "blocks in the trace")->capture_default_str();
        cmd.add_option("--txs-per-block", spec.txs_per_block, "records per block")
            ->capture_default_str();
        cmd.add_option("--dist", distribution, "access distribution: uniform or zipf")
            ->capture_default_str();
        cmd.add_option("--zipf-s", spec.zipf_exponent, "zipf exponent (with --dist zipf)")
            ->capture_default_str();
        cmd.add_option("--seed", spec.seed, "workload seed")->capture_default_str();
        cmd.add_flag("--spread-prefixes", spec.spread_account_prefixes,
            "give every account indexing its own 4-nibble bucket");
        cmd.add_option("--storage-fraction", spec.storage_write_fraction,
               "share of storage writes when contracts exist")
            ->capture_default_str();
    }

    Workload generate() const
    {
        WorkloadSpec s = spec;
        s.distribution = distribution_from_string(distribution);
        return generate_workload(s);
    }
};

struct AttackFlags
{
    AttackConfig config;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--top", config.top_targets, "most active leaves to deepen")
            ->capture_default_str();
        cmd.add_option("--threshold", config.activity_threshold,
               "minimum accesses for a leaf to count as active")
            ->capture_default_str();
        cmd.add_option("--window-from", config.window_from, "first block of the activity window")
            ->capture_default_str();
        cmd.add_option("--window-to", config.window_to, "last block of the activity window");
        cmd.add_option("--deepen", config.deepen_layers, "layers to add per target")
            ->capture_default_str();
        cmd.add_option("--max-prefix-len", config.max_prefix_len,
               "longest prefix the grinder may chase")
            ->capture_default_str();
        cmd.add_option("--workers", config.workers, "grind worker threads (0 = hardware)")
            ->capture_default_str();
        cmd.add_option("--budget", config.grind_budget, "candidate budget for the grind")
            ->capture_default_str();
        cmd.add_option("--start-counter", config.grind_start_counter,
               "first grind counter (acts as the grind seed)")
            ->capture_default_str();
    }
};

int cmd_build(const WorkloadFlags& flags, const std::string& state_out,
    const std::string& trace_out)
{
    auto workload = flags.generate();
    save_state_file(state_out, workload.state);
    write_trace_file(trace_out, workload.trace);
    std::cerr << "build: " << workload.accounts.size() << " accounts, "
              << workload.contracts.size() << " contracts, " << workload.trace.size()
              << " records -> " << state_out << ", " << trace_out << "\n";
    return 0;
}

int cmd_collide(const std::vector<std::string>& prefixes, const std::string& domain,
    uint64_t position, uint64_t budget, unsigned workers, uint64_t start_counter,
    const std::string& out_path)
{
    std::vector<CollisionTarget> targets;
    for (size_t i = 0; i < prefixes.size(); ++i)
        targets.push_back(
            CollisionTarget{NibblePath::from_string(prefixes[i]), std::to_string(i), {}});

    GrindSpec spec = domain == "mapping" ? GrindSpec::mapping_keys(position, start_counter, workers)
                                         : GrindSpec::addresses(start_counter, workers);

    const auto result = collide_multi(targets, spec, budget);

    std::ofstream file;
    std::ostream& out = out_or_stdout(out_path, file);
    for (const auto& [tag, match] : result.matched)
    {
        out << json{{"tag", tag}, {"prefix", match.matched.prefix.to_string()},
                   {"input", to_hex(match.input)}, {"indexing", to_hex(match.digest)},
                   {"trials", match.trials}, {"counter", match.counter}}
                   .dump()
            << '\n';
    }
    std::cerr << "collide: " << result.matched.size() << "/" << targets.size()
              << " matched, total trials " << result.total_trials
              << (result.complete ? "" : " (budget exhausted)") << "\n";
    return result.complete ? 0 : 2;
}

int cmd_attack(const std::string& state_path, const std::string& trace_path,
    const AttackFlags& flags, const std::string& payloads_out, const std::string& summary_out)
{
    WorldState state = load_state_file(state_path);
    const auto trace = read_trace_file(trace_path);
    state.replay(trace);  // populates the access log

    ActiveAccountFilter filter;
    filter.threshold = flags.config.activity_threshold;
    filter.window_from = flags.config.window_from;
    filter.window_to = flags.config.window_to;
    auto targets = select_targets(state, filter);
    if (targets.size() > flags.config.top_targets)
        targets.resize(flags.config.top_targets);

    // gather goals, grind them in one batch, then plan per target
    struct Work
    {
        NibblePath indexing;
        size_t depth;
        std::vector<Candidate> candidates;
    };
    std::vector<Work> work;
    std::vector<CollisionTarget> goals;
    const Trie& trie = state.state_trie();
    for (size_t t = 0; t < targets.size(); ++t)
    {
        PathReport pr;
        if (!trie.get(targets[t].indexing, &pr))
            continue;
        work.push_back(Work{targets[t].indexing, pr.depth, {}});
        const auto lengths = deepening_goals(pr.full_len - pr.unique_part_len,
            flags.config.deepen_layers, flags.config.max_prefix_len);
        for (size_t g = 0; g < lengths.size(); ++g)
        {
            CollisionTarget ct;
            if (lengths[g].length == 0)
            {
                ct.prefix = NibblePath{std::vector<Nibble>{
                    static_cast<Nibble>((targets[t].indexing[0] + 1) % 16)}};
            }
            else
            {
                ct.prefix = targets[t].indexing.slice(0, lengths[g].length);
                if (lengths[g].exact)
                    ct.exclude_next = targets[t].indexing[lengths[g].length];
            }
            ct.tag = std::to_string(work.size() - 1) + ":" + std::to_string(g);
            goals.push_back(std::move(ct));
        }
    }

    MultiCollisionResult ground;
    if (!goals.empty())
    {
        const GrindSpec spec =
            GrindSpec::addresses(flags.config.grind_start_counter, flags.config.workers);
        ground = collide_multi(goals, spec, flags.config.grind_budget);
        for (const auto& [tag, match] : ground.matched)
        {
            const size_t t = std::stoull(tag.substr(0, tag.find(':')));
            work[t].candidates.push_back(candidate_from(match));
        }
    }

    Trie working = trie;
    std::vector<AttackPlan> plans;
    json plan_summaries = json::array();
    size_t payload_count = 0;
    for (auto& w : work)
    {
        auto plan = plan_attack_inplace(
            working, w.indexing, w.candidates, w.depth + flags.config.deepen_layers);
        payload_count += plan.inserts.size();
        plan_summaries.push_back(json{{"target", plan.target.to_string()},
            {"depth_before", plan.target_depth_before}, {"depth_after", plan.target_depth_after},
            {"payloads", plan.inserts.size()}, {"collateral_leaves", plan.collateral_leaves}});
        plans.push_back(std::move(plan));
    }

    PayloadTraceContext pctx;
    pctx.attacker = neutral_attacker_address(trie);
    pctx.block = trace.empty() ? 1 : trace.back().block + 1;
    const auto payload_trace = emit_payload_trace(plans, pctx);
    write_trace_file(payloads_out, payload_trace);

    std::ofstream file;
    std::ostream& out = out_or_stdout(summary_out, file);
    out << json{{"targets", work.size()}, {"payloads", payload_count},
               {"grind_trials", ground.total_trials}, {"grind_complete", ground.complete},
               {"plans", std::move(plan_summaries)}}
               .dump(2)
        << '\n';
    std::cerr << "attack: " << payload_count << " payloads for " << work.size() << " targets -> "
              << payloads_out << "\n";
    return 0;
}

int cmd_replay(const std::string& state_path, const std::string& trace_path, bool strict,
    bool fund_attacker, const std::string& save_state_out, const std::string& report_out,
    const std::string& format_name)
{
    WorldState state = load_state_file(state_path);
    const auto trace = read_trace_file(trace_path);
    if (fund_attacker && !trace.empty())
    {
        // payload traces name their sender in every record
        const Address& attacker = trace.front().from;
        if (!state.account_by_address(attacker))
            state.create_account(attacker, 1'000'000'000'000ull);
    }
    const auto result = state.replay(trace, strict);

    if (!save_state_out.empty())
        save_state_file(save_state_out, state);

    std::ofstream file;
    std::ostream& out = out_or_stdout(report_out, file);
    write_replay_summary(out, summarize(result), report_format_from_string(format_name));
    std::cerr << "replay: " << result.applied << " applied, " << result.rejected
              << " rejected\n";
    return 0;
}

int cmd_estimate(const std::string& params_path, const std::string& report_out)
{
    const auto params = parse_params_file(params_path);
    const auto get = [&](const std::string& key) -> std::optional<double>
    {
        const auto it = params.find(key);
        if (it == params.end())
            return std::nullopt;
        return std::stod(it->second);
    };
    const auto require = [&](const std::string& key)
    {
        const auto v = get(key);
        if (!v)
            throw std::runtime_error{"parameter file lacks key: " + key};
        return *v;
    };

    json out_json;
    if (params.count("name") != 0)
        out_json["name"] = params.at("name");

    // impact model when the six node counts are present
    if (get("state_nodes"))
    {
        ImpactParams ip;
        ip.state_nodes = require("state_nodes");
        ip.storage_nodes = require("storage_nodes");
        ip.account_leaves = require("account_leaves");
        ip.slot_leaves = require("slot_leaves");
        ip.depth_base = require("depth_base");
        ip.depth_attacked = require("depth_attacked");
        const auto impact = impact_factor(ip);
        out_json["impact"] = {{"state_nodes_attacked", impact.state_nodes_attacked},
            {"storage_nodes_attacked", impact.storage_nodes_attacked},
            {"factor", impact.factor}};

        const double state_inserts =
            insert_count(ip.account_leaves, ip.depth_attacked, ip.depth_base);
        const double storage_inserts =
            insert_count(ip.slot_leaves, ip.depth_attacked, ip.depth_base);
        const double storage_gas = get("storage_insert_gas").value_or(44'258.0);
        const double state_gas = get("state_insert_gas").value_or(21'000.0);
        const double units = gas_units(state_inserts, storage_inserts, storage_gas, state_gas);
        out_json["gas"] = {{"state_inserts", state_inserts},
            {"storage_inserts", storage_inserts}, {"units", units}};

        if (get("price_coin"))
        {
            GasPrice price;
            price.value = require("price_gas");
            price.unit = gas_price_unit_from_string(
                params.count("price_gas_unit") ? params.at("price_gas_unit") : "gwei");
            const double gas_usd = gas_cost_usd(price, units, require("price_coin"));
            out_json["gas"]["usd"] = gas_usd;

            double gpu_usd = 0;
            if (get("num_gpus"))
            {
                gpu_usd =
                    gpu_cost_usd(require("num_gpus"), require("gpu_hours"), require("gpu_price"));
                out_json["gpu"] = {{"usd", gpu_usd}};
            }
            out_json["total_usd"] = gas_usd + gpu_usd;
            if (get("retained_cost_fraction"))
                out_json["optimized_gas_usd"] =
                    optimized_cost(require("retained_cost_fraction"), gas_usd);
        }
        if (get("theta_over_p_hours"))
            out_json["gpu_time_hours"] = gpu_time_hours(require("theta_over_p_hours"),
                ip.account_leaves + ip.slot_leaves, ip.depth_attacked, ip.depth_base);
    }
    else if (get("price_coin"))
    {
        // pure cost mode: units given directly
        GasPrice price;
        price.value = require("price_gas");
        price.unit = gas_price_unit_from_string(
            params.count("price_gas_unit") ? params.at("price_gas_unit") : "gwei");
        const double gas_usd = gas_cost_usd(price, require("units_gas"), require("price_coin"));
        out_json["gas"] = {{"usd", gas_usd}};
        double gpu_usd = 0;
        if (get("num_gpus"))
        {
            gpu_usd = gpu_cost_usd(require("num_gpus"), require("gpu_hours"), require("gpu_price"));
            out_json["gpu"] = {{"usd", gpu_usd}};
        }
        out_json["total_usd"] = gas_usd + gpu_usd;
        if (get("retained_cost_fraction"))
            out_json["optimized_gas_usd"] =
                optimized_cost(require("retained_cost_fraction"), gas_usd);
    }
    else
    {
        throw std::runtime_error{"parameter file drives neither the impact nor the cost model"};
    }

    std::ofstream file;
    std::ostream& out = out_or_stdout(report_out, file);
    out << out_json.dump(2) << '\n';
    return 0;
}

int cmd_bench(const WorkloadFlags& wflags, const AttackFlags& aflags, bool no_attack,
    const std::string& report_out, const std::string& format_name,
    const std::string& save_attacked)
{
    auto workload = wflags.generate();
    AttackConfig config = aflags.config;
    config.enabled = !no_attack;
    const auto report = run_experiment(workload, config);

    if (!save_attacked.empty())
        save_state_file(save_attacked, workload.state);

    std::ofstream file;
    std::ostream& out = out_or_stdout(report_out, file);
    write_bench_report(out, report, report_format_from_string(format_name));
    std::cerr << "bench: predicted " << report.predicted_factor << ", measured "
              << report.measured_ratio << ", error " << report.relative_error * 100 << "%\n";
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"state-storage stress laboratory for Merkle Patricia Tries"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "generate an initial state and workload trace");
    WorkloadFlags build_flags;
    build_flags.attach(*build);
    std::string state_out = "state.json";
    std::string trace_out = "trace.txt";
    build->add_option("--state-out", state_out, "state snapshot path")->capture_default_str();
    build->add_option("--trace-out", trace_out, "trace path")->capture_default_str();

    // collide
    auto* collide = app.add_subcommand("collide", "grind keccak256 prefix collisions");
    std::vector<std::string> prefixes;
    std::string domain = "address";
    uint64_t position = 0;
    uint64_t budget = 1ull << 32;
    unsigned workers = 0;
    uint64_t start_counter = 1;
    std::string collide_out = "-";
    collide->add_option("--prefix", prefixes, "target indexing prefix (repeatable)")->required();
    collide->add_option("--domain", domain, "address or mapping")->capture_default_str();
    collide->add_option("--position", position, "mapping position (mapping domain)")
        ->capture_default_str();
    collide->add_option("--budget", budget, "maximum candidates")->capture_default_str();
    collide->add_option("--workers", workers, "worker threads (0 = hardware)")
        ->capture_default_str();
    collide->add_option("--start-counter", start_counter, "first candidate counter")
        ->capture_default_str();
    collide->add_option("--out", collide_out, "output path (- for stdout)")
        ->capture_default_str();

    // attack
    auto* attack = app.add_subcommand("attack", "plan deepening payloads for active leaves");
    AttackFlags attack_flags;
    attack_flags.attach(*attack);
    std::string attack_state;
    std::string attack_trace;
    std::string payloads_out = "payloads.txt";
    std::string summary_out = "-";
    attack->add_option("--state", attack_state, "state snapshot")->required();
    attack->add_option("--trace", attack_trace, "trace supplying the activity window")
        ->required();
    attack->add_option("--payloads-out", payloads_out, "payload trace path")
        ->capture_default_str();
    attack->add_option("--summary-out", summary_out, "plan summary path (- for stdout)")
        ->capture_default_str();

    // replay
    auto* replay = app.add_subcommand("replay", "apply a trace to a state snapshot");
    std::string replay_state;
    std::string replay_trace;
    bool strict = false;
    bool fund_attacker = false;
    std::string replay_save;
    std::string replay_report = "-";
    std::string replay_format = "json";
    replay->add_option("--state", replay_state, "state snapshot")->required();
    replay->add_option("--trace", replay_trace, "trace to apply")->required();
    replay->add_flag("--strict", strict, "abort on the first rejected record");
    replay->add_flag("--fund-attacker", fund_attacker,
        "ensure the payload sender account exists before replaying");
    replay->add_option("--save-state", replay_save, "write the resulting state snapshot");
    replay->add_option("--report-out", replay_report, "report path (- for stdout)")
        ->capture_default_str();
    replay->add_option("--format", replay_format, "report format: json or csv")
        ->capture_default_str();

    // estimate
    auto* estimate = app.add_subcommand("estimate", "closed-form impact and cost models");
    std::string params_path;
    std::string estimate_out = "-";
    estimate->add_option("--params", params_path, "key = value parameter file")->required();
    estimate->add_option("--report-out", estimate_out, "report path (- for stdout)")
        ->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "full pipeline: build, attack, replay, compare");
    WorkloadFlags bench_wflags;
    bench_wflags.attach(*bench);
    AttackFlags bench_aflags;
    bench_aflags.attach(*bench);
    bool no_attack = false;
    std::string bench_report = "-";
    std::string bench_format = "json";
    std::string save_attacked;
    bench->add_flag("--no-attack", no_attack, "baseline only; skip the attack stages");
    bench->add_option("--report-out", bench_report, "report path (- for stdout)")
        ->capture_default_str();
    bench->add_option("--format", bench_format, "report format: json or csv")
        ->capture_default_str();
    bench->add_option("--save-attacked-state", save_attacked,
        "write the post-attack state snapshot");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (build->parsed())
            return cmd_build(build_flags, state_out, trace_out);
        if (collide->parsed())
            return cmd_collide(
                prefixes, domain, position, budget, workers, start_counter, collide_out);
        if (attack->parsed())
            return cmd_attack(attack_state, attack_trace, attack_flags, payloads_out, summary_out);
        if (replay->parsed())
            return cmd_replay(replay_state, replay_trace, strict, fund_attacker, replay_save,
                replay_report, replay_format);
        if (estimate->parsed())
            return cmd_estimate(params_path, estimate_out);
        if (bench->parsed())
            return cmd_bench(bench_wflags, bench_aflags, no_attack, bench_report, bench_format,
                save_attacked);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

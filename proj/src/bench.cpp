// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/bench.hpp>
#include <mptlab/errors.hpp>
#include <mptlab/estimator.hpp>

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>

namespace mptlab
{
namespace
{
using nlohmann::json;

class StopWatch
{
public:
    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json touch_report_to_json(const TouchReport& r)
{
    return json{{"op1_nodes_updated", r.op1_nodes_updated},
        {"op2_hashes_recomputed", r.op2_hashes_recomputed},
        {"op3_cache_events", r.op3_cache_events}, {"op4_nodes_persisted", r.op4_nodes_persisted},
        {"wall_time_s", r.wall_time_s}, {"gas_charged", r.gas_charged}};
}

TouchReport touch_report_from_json(const json& j)
{
    TouchReport r;
    r.op1_nodes_updated = j.at("op1_nodes_updated").get<size_t>();
    r.op2_hashes_recomputed = j.at("op2_hashes_recomputed").get<size_t>();
    r.op3_cache_events = j.at("op3_cache_events").get<size_t>();
    r.op4_nodes_persisted = j.at("op4_nodes_persisted").get<size_t>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.gas_charged = j.at("gas_charged").get<uint64_t>();
    return r;
}

json summary_to_json(const ReplaySummary& s)
{
    json blocks = json::array();
    for (const auto& b : s.blocks)
        blocks.push_back(json{{"block", b.block}, {"records", b.records},
            {"totals", touch_report_to_json(b.totals)}});
    return json{{"applied", s.applied}, {"rejected", s.rejected},
        {"state_positions", s.state_positions}, {"storage_positions", s.storage_positions},
        {"touched_accounts", s.touched_accounts}, {"avg_account_depth", s.avg_account_depth},
        {"totals", touch_report_to_json(s.totals)}, {"blocks", std::move(blocks)}};
}

ReplaySummary summary_from_json(const json& j)
{
    ReplaySummary s;
    s.applied = j.at("applied").get<size_t>();
    s.rejected = j.at("rejected").get<size_t>();
    s.state_positions = j.at("state_positions").get<size_t>();
    s.storage_positions = j.at("storage_positions").get<size_t>();
    s.touched_accounts = j.at("touched_accounts").get<size_t>();
    s.avg_account_depth = j.at("avg_account_depth").get<double>();
    s.totals = touch_report_from_json(j.at("totals"));
    for (const auto& b : j.at("blocks"))
    {
        BlockAggregate agg;
        agg.block = b.at("block").get<uint64_t>();
        agg.records = b.at("records").get<size_t>();
        agg.totals = touch_report_from_json(b.at("totals"));
        s.blocks.push_back(std::move(agg));
    }
    return s;
}

json stats_to_json(const TrieStats& s)
{
    return json{{"branches", s.branches}, {"extensions", s.extensions}, {"leaves", s.leaves}};
}

TrieStats stats_from_json(const json& j)
{
    TrieStats s;
    s.branches = j.at("branches").get<size_t>();
    s.extensions = j.at("extensions").get<size_t>();
    s.leaves = j.at("leaves").get<size_t>();
    return s;
}

bool touch_counts_equal(const TouchReport& a, const TouchReport& b)
{
    return a.op1_nodes_updated == b.op1_nodes_updated &&
           a.op2_hashes_recomputed == b.op2_hashes_recomputed &&
           a.op3_cache_events == b.op3_cache_events &&
           a.op4_nodes_persisted == b.op4_nodes_persisted && a.gas_charged == b.gas_charged;
}

bool summary_counts_equal(const ReplaySummary& a, const ReplaySummary& b)
{
    if (a.applied != b.applied || a.rejected != b.rejected ||
        a.state_positions != b.state_positions || a.storage_positions != b.storage_positions ||
        a.touched_accounts != b.touched_accounts || a.avg_account_depth != b.avg_account_depth ||
        !touch_counts_equal(a.totals, b.totals) || a.blocks.size() != b.blocks.size())
        return false;
    for (size_t i = 0; i < a.blocks.size(); ++i)
        if (a.blocks[i].block != b.blocks[i].block || a.blocks[i].records != b.blocks[i].records ||
            !touch_counts_equal(a.blocks[i].totals, b.blocks[i].totals))
            return false;
    return true;
}
}  // namespace

Address neutral_attacker_address(const Trie& state_trie)
{
    Address a;
    a.fill(0xa7);
    for (int k = 0; k < 256; ++k)
    {
        a[0] = static_cast<uint8_t>(0xa7 + k);
        PathReport pr;
        if (state_trie.get(account_indexing(a), &pr).has_value())
            continue;  // unlikely: the address already exists
        if (pr.visited.empty())
            return a;  // empty trie
        const Node* terminal = state_trie.find_node(pr.visited.back());
        if (terminal != nullptr && terminal->kind == NodeKind::Branch)
            return a;
    }
    return a;
}

std::vector<GrindGoal> deepening_goals(size_t consumed, size_t delta, size_t max_len)
{
    std::vector<GrindGoal> goals;
    const size_t s2_steps = delta / 2;
    for (size_t i = 1; i <= s2_steps; ++i)
        goals.push_back(GrindGoal{consumed + 2 * i - 1, true});
    if (delta % 2 == 1)
        goals.push_back(GrindGoal{consumed + delta - 1, true});
    else if (!goals.empty())
        goals.back().exact = false;  // the deepest split may overshoot freely

    std::vector<GrindGoal> capped;
    for (const auto& goal : goals)
    {
        if (goal.length > max_len || goal.length >= kFullIndexingLen)
            break;
        capped.push_back(goal);
    }
    if (!capped.empty() && capped.size() < goals.size() &&
        (capped.back().length - consumed) % 2 == 1)
        capped.back().exact = false;
    return capped;
}

ReplaySummary summarize(const ReplayResult& result)
{
    ReplaySummary s;
    s.applied = result.applied;
    s.rejected = result.rejected;
    s.state_positions = result.state_positions.size();
    s.storage_positions = result.storage_positions.size();
    s.touched_accounts = result.account_depths.size();
    if (!result.account_depths.empty())
    {
        double total = 0;
        for (const auto& [key, depth] : result.account_depths)
            total += static_cast<double>(depth);
        s.avg_account_depth = total / static_cast<double>(result.account_depths.size());
    }
    s.totals = result.totals;
    s.blocks = result.blocks;
    return s;
}

BenchReport run_experiment(Workload& workload, const AttackConfig& config)
{
    BenchReport report;
    report.seed = workload.spec.seed;
    report.accounts = workload.spec.accounts;
    report.contracts = workload.spec.contracts;
    report.blocks = workload.spec.blocks;
    report.txs_per_block = workload.spec.txs_per_block;
    report.attack_enabled = config.enabled;
    report.state_trie_before = workload.state.state_trie().stats();

    // baseline replay on a scratch copy; the live state stays pre-attack
    WorldState baseline_state = workload.state;
    ReplayResult base;
    {
        const StopWatch watch;
        try
        {
            base = baseline_state.replay(workload.trace);
        }
        catch (const std::exception& e)
        {
            throw StageError{"baseline-replay", e.what()};
        }
        report.timings.baseline_s = watch.elapsed();
    }
    report.baseline = summarize(base);

    if (!config.enabled)
    {
        report.attacked = report.baseline;
        report.state_trie_after = report.state_trie_before;
        return report;
    }

    // target selection from the replayed access log
    struct TargetWork
    {
        NibblePath indexing;
        size_t consumed = 0;
        size_t depth = 0;
        std::vector<GrindGoal> goals;
        std::vector<Candidate> candidates;
    };
    std::vector<TargetWork> work;
    {
        const StopWatch watch;
        ActiveAccountFilter filter;
        filter.threshold = config.activity_threshold;
        filter.window_from = config.window_from;
        filter.window_to = config.window_to;
        auto targets = select_targets(baseline_state, filter);
        if (targets.size() > config.top_targets)
            targets.resize(config.top_targets);
        report.targets_selected = targets.size();
        for (const auto& target : targets)
        {
            PathReport pr;
            if (!workload.state.state_trie().get(target.indexing, &pr))
                throw StageError{"select-targets", "active account is not a leaf"};
            TargetWork tw;
            tw.indexing = target.indexing;
            tw.consumed = pr.full_len - pr.unique_part_len;
            tw.depth = pr.depth;
            tw.goals = deepening_goals(tw.consumed, config.deepen_layers, config.max_prefix_len);
            work.push_back(std::move(tw));
        }
        report.timings.select_s = watch.elapsed();
    }

    // one multi-target grind over every goal of every target
    {
        const StopWatch watch;
        std::vector<CollisionTarget> goals;
        for (size_t t = 0; t < work.size(); ++t)
        {
            for (size_t g = 0; g < work[t].goals.size(); ++g)
            {
                const auto& goal = work[t].goals[g];
                CollisionTarget ct;
                if (goal.length == 0)
                {
                    // a zero-length goal means "fork the root leaf": any other
                    // first nibble collides it
                    ct.prefix = NibblePath{
                        std::vector<Nibble>{static_cast<Nibble>((work[t].indexing[0] + 1) % 16)}};
                }
                else
                {
                    ct.prefix = work[t].indexing.slice(0, goal.length);
                    if (goal.exact)
                        ct.exclude_next = work[t].indexing[goal.length];
                }
                ct.tag = std::to_string(t) + ":" + std::to_string(g);
                goals.push_back(std::move(ct));
            }
        }
        if (!goals.empty())
        {
            GrindSpec spec = GrindSpec::addresses(config.grind_start_counter, config.workers);
            MultiCollisionResult ground;
            try
            {
                ground = collide_multi(goals, spec, config.grind_budget);
            }
            catch (const std::exception& e)
            {
                throw StageError{"collide", e.what()};
            }
            report.grind_trials = ground.total_trials;
            report.grind_complete = ground.complete;
            for (size_t t = 0; t < work.size(); ++t)
                for (size_t g = 0; g < work[t].goals.size(); ++g)
                {
                    const auto* hit =
                        ground.find(std::to_string(t) + ":" + std::to_string(g));
                    if (hit != nullptr)
                    {
                        work[t].candidates.push_back(candidate_from(*hit));
                        ++report.prefix_length_histogram[hit->matched_len];
                    }
                }
        }
        else
        {
            report.grind_complete = true;
        }
        report.timings.collide_s = watch.elapsed();
    }

    // planning simulates on a copy; the live trie is untouched here
    std::vector<AttackPlan> plans;
    {
        const StopWatch watch;
        Trie working = workload.state.state_trie();
        for (const auto& tw : work)
        {
            AttackPlan plan;
            try
            {
                plan = plan_attack_inplace(working, tw.indexing, tw.candidates,
                    tw.depth + config.deepen_layers, InsertPayload::Kind::StateAccount);
            }
            catch (const std::exception& e)
            {
                throw StageError{"plan", e.what()};
            }
            report.payload_count += plan.inserts.size();
            for (const auto& payload : plan.inserts)
            {
                if (payload.strategy == Strategy::S1)
                    ++report.s1_payloads;
                else if (payload.strategy == Strategy::S2)
                    ++report.s2_payloads;
                else
                    ++report.s3_payloads;
            }
            report.total_deepening += plan.deepening();
            if (plan.deepening() == config.deepen_layers)
                ++report.deepened_exactly;
            plans.push_back(std::move(plan));
        }
        report.targets_planned = plans.size();
        report.timings.plan_s = watch.elapsed();
    }

    // payload emission and replay against the live state
    {
        const StopWatch watch;
        PayloadTraceContext pctx;
        pctx.attacker = neutral_attacker_address(workload.state.state_trie());
        pctx.block = workload.trace.empty() ? 1 : workload.trace.back().block + 1;
        const auto payload_trace = emit_payload_trace(plans, pctx);
        workload.state.create_account(pctx.attacker, 1'000'000'000'000ull);
        ReplayResult applied;
        try
        {
            applied = workload.state.replay(payload_trace, /*strict=*/true);
        }
        catch (const std::exception& e)
        {
            throw StageError{"apply-payloads", e.what()};
        }
        report.payloads_rejected = applied.rejected;
        for (const auto& plan : plans)
        {
            const size_t live_depth = workload.state.state_trie().depth_of(plan.target);
            if (live_depth != plan.target_depth_after)
                throw StageError{"apply-payloads", "live depth diverges from the plan"};
        }
        report.timings.apply_s = watch.elapsed();
    }
    report.state_trie_after = workload.state.state_trie().stats();

    // attacked replay on a scratch copy of the now-attacked state
    ReplayResult attacked;
    {
        const StopWatch watch;
        WorldState attacked_state = workload.state;
        try
        {
            attacked = attacked_state.replay(workload.trace);
        }
        catch (const std::exception& e)
        {
            throw StageError{"attacked-replay", e.what()};
        }
        report.timings.attacked_s = watch.elapsed();
    }
    report.attacked = summarize(attacked);

    // measured touched-node ratio vs the model's prediction
    const double baseline_nodes =
        static_cast<double>(report.baseline.state_positions + report.baseline.storage_positions);
    const double attacked_nodes =
        static_cast<double>(report.attacked.state_positions + report.attacked.storage_positions);
    if (baseline_nodes <= 0)
        throw StageError{"impact", "baseline replay touched no nodes"};
    report.measured_ratio = attacked_nodes / baseline_nodes;
    if (!plans.empty() && report.total_deepening > 0)
    {
        ImpactParams params;
        params.state_nodes = static_cast<double>(report.baseline.state_positions);
        params.storage_nodes = static_cast<double>(report.baseline.storage_positions);
        params.account_leaves = static_cast<double>(plans.size());
        params.slot_leaves = 0;
        params.depth_base = 0;
        params.depth_attacked =
            static_cast<double>(report.total_deepening) / static_cast<double>(plans.size());
        report.predicted_factor = impact_factor(params).factor;
    }
    else
    {
        report.predicted_factor = 1.0;
    }
    report.relative_error =
        std::fabs(report.predicted_factor - report.measured_ratio) / report.measured_ratio;
    return report;
}

ImpactValidation validate_impact(
    const WorldState& pre, const WorldState& post, const std::vector<TraceRecord>& workload)
{
    WorldState pre_copy = pre;
    WorldState post_copy = post;
    const auto base = pre_copy.replay(workload);
    const auto attacked = post_copy.replay(workload);

    const double baseline_nodes =
        static_cast<double>(base.state_positions.size() + base.storage_positions.size());
    const double attacked_nodes =
        static_cast<double>(attacked.state_positions.size() + attacked.storage_positions.size());
    if (baseline_nodes <= 0)
        throw DomainError{"baseline replay touched no nodes"};

    ImpactValidation out;
    out.measured_ratio = attacked_nodes / baseline_nodes;

    // derive model inputs from the leaves whose layer changed
    double account_leaves = 0, account_base = 0, account_attacked = 0;
    for (const auto& [key, depth] : base.account_depths)
    {
        const auto it = attacked.account_depths.find(key);
        if (it == attacked.account_depths.end() || it->second == depth)
            continue;
        ++account_leaves;
        account_base += static_cast<double>(depth);
        account_attacked += static_cast<double>(it->second);
    }
    double slot_leaves = 0, slot_base = 0, slot_attacked = 0;
    for (const auto& [key, depth] : base.slot_depths)
    {
        const auto it = attacked.slot_depths.find(key);
        if (it == attacked.slot_depths.end() || it->second == depth)
            continue;
        ++slot_leaves;
        slot_base += static_cast<double>(depth);
        slot_attacked += static_cast<double>(it->second);
    }

    if (account_leaves == 0 && slot_leaves == 0)
    {
        out.predicted_factor = 1.0;
    }
    else
    {
        // equal per-leaf sums keep the prediction exact even when the two leaf
        // families were deepened by different amounts
        ImpactParams params;
        params.state_nodes = static_cast<double>(base.state_positions.size());
        params.storage_nodes = static_cast<double>(base.storage_positions.size());
        const double deepened = (account_attacked - account_base) + (slot_attacked - slot_base);
        params.account_leaves = account_leaves + slot_leaves;
        params.slot_leaves = 0;
        params.depth_base = 0;
        params.depth_attacked = deepened / (account_leaves + slot_leaves);
        out.predicted_factor = impact_factor(params).factor;
    }
    out.relative_error =
        std::fabs(out.predicted_factor - out.measured_ratio) / out.measured_ratio;
    return out;
}

bool count_fields_equal(const BenchReport& a, const BenchReport& b)
{
    return a.seed == b.seed && a.accounts == b.accounts && a.contracts == b.contracts &&
           a.blocks == b.blocks && a.txs_per_block == b.txs_per_block &&
           a.attack_enabled == b.attack_enabled &&
           summary_counts_equal(a.baseline, b.baseline) &&
           summary_counts_equal(a.attacked, b.attacked) &&
           a.state_trie_before == b.state_trie_before &&
           a.state_trie_after == b.state_trie_after &&
           a.targets_selected == b.targets_selected && a.targets_planned == b.targets_planned &&
           a.payload_count == b.payload_count && a.s1_payloads == b.s1_payloads &&
           a.s2_payloads == b.s2_payloads && a.s3_payloads == b.s3_payloads &&
           a.grind_trials == b.grind_trials && a.grind_complete == b.grind_complete &&
           a.prefix_length_histogram == b.prefix_length_histogram &&
           a.deepened_exactly == b.deepened_exactly && a.total_deepening == b.total_deepening &&
           a.payloads_rejected == b.payloads_rejected &&
           a.predicted_factor == b.predicted_factor && a.measured_ratio == b.measured_ratio;
}

ReportFormat report_format_from_string(const std::string& name)
{
    if (name == "json")
        return ReportFormat::Json;
    if (name == "csv")
        return ReportFormat::Csv;
    throw DomainError{"unknown report format: " + name};
}

void write_bench_report(std::ostream& out, const BenchReport& report, ReportFormat format)
{
    if (format == ReportFormat::Csv)
    {
        out << "phase,block,records,op1_nodes_updated,op2_hashes_recomputed,op3_cache_events,"
               "op4_nodes_persisted,gas_charged\n";
        const auto rows = [&out](const char* phase, const ReplaySummary& summary)
        {
            for (const auto& b : summary.blocks)
                out << phase << ',' << b.block << ',' << b.records << ','
                    << b.totals.op1_nodes_updated << ',' << b.totals.op2_hashes_recomputed << ','
                    << b.totals.op3_cache_events << ',' << b.totals.op4_nodes_persisted << ','
                    << b.totals.gas_charged << '\n';
        };
        rows("baseline", report.baseline);
        rows("attacked", report.attacked);
        return;
    }

    json histogram = json::object();
    for (const auto& [len, count] : report.prefix_length_histogram)
        histogram[std::to_string(len)] = count;

    const json j{{"seed", report.seed}, {"accounts", report.accounts},
        {"contracts", report.contracts}, {"blocks", report.blocks},
        {"txs_per_block", report.txs_per_block}, {"attack_enabled", report.attack_enabled},
        {"baseline", summary_to_json(report.baseline)},
        {"attacked", summary_to_json(report.attacked)},
        {"state_trie_before", stats_to_json(report.state_trie_before)},
        {"state_trie_after", stats_to_json(report.state_trie_after)},
        {"targets_selected", report.targets_selected},
        {"targets_planned", report.targets_planned}, {"payload_count", report.payload_count},
        {"s1_payloads", report.s1_payloads}, {"s2_payloads", report.s2_payloads},
        {"s3_payloads", report.s3_payloads}, {"grind_trials", report.grind_trials},
        {"grind_complete", report.grind_complete},
        {"prefix_length_histogram", std::move(histogram)},
        {"deepened_exactly", report.deepened_exactly},
        {"total_deepening", report.total_deepening},
        {"payloads_rejected", report.payloads_rejected},
        {"predicted_factor", report.predicted_factor},
        {"measured_ratio", report.measured_ratio}, {"relative_error", report.relative_error},
        {"timings",
            json{{"baseline_s", report.timings.baseline_s}, {"select_s", report.timings.select_s},
                {"collide_s", report.timings.collide_s}, {"plan_s", report.timings.plan_s},
                {"apply_s", report.timings.apply_s},
                {"attacked_s", report.timings.attacked_s}}}};
    out << j.dump(2) << '\n';
}

void write_replay_summary(std::ostream& out, const ReplaySummary& summary, ReportFormat format)
{
    if (format == ReportFormat::Csv)
    {
        out << "block,records,op1_nodes_updated,op2_hashes_recomputed,op3_cache_events,"
               "op4_nodes_persisted,gas_charged\n";
        for (const auto& b : summary.blocks)
            out << b.block << ',' << b.records << ',' << b.totals.op1_nodes_updated << ','
                << b.totals.op2_hashes_recomputed << ',' << b.totals.op3_cache_events << ','
                << b.totals.op4_nodes_persisted << ',' << b.totals.gas_charged << '\n';
        return;
    }
    out << summary_to_json(summary).dump(2) << '\n';
}

ReplaySummary read_replay_summary_json(std::istream& in)
{
    json j;
    in >> j;
    return summary_from_json(j);
}

BenchReport read_bench_report_json(std::istream& in)
{
    json j;
    in >> j;
    BenchReport r;
    r.seed = j.at("seed").get<uint64_t>();
    r.accounts = j.at("accounts").get<size_t>();
    r.contracts = j.at("contracts").get<size_t>();
    r.blocks = j.at("blocks").get<size_t>();
    r.txs_per_block = j.at("txs_per_block").get<size_t>();
    r.attack_enabled = j.at("attack_enabled").get<bool>();
    r.baseline = summary_from_json(j.at("baseline"));
    r.attacked = summary_from_json(j.at("attacked"));
    r.state_trie_before = stats_from_json(j.at("state_trie_before"));
    r.state_trie_after = stats_from_json(j.at("state_trie_after"));
    r.targets_selected = j.at("targets_selected").get<size_t>();
    r.targets_planned = j.at("targets_planned").get<size_t>();
    r.payload_count = j.at("payload_count").get<size_t>();
    r.s1_payloads = j.at("s1_payloads").get<size_t>();
    r.s2_payloads = j.at("s2_payloads").get<size_t>();
    r.s3_payloads = j.at("s3_payloads").get<size_t>();
    r.grind_trials = j.at("grind_trials").get<uint64_t>();
    r.grind_complete = j.at("grind_complete").get<bool>();
    for (const auto& [key, value] : j.at("prefix_length_histogram").items())
        r.prefix_length_histogram[std::stoull(key)] = value.get<size_t>();
    r.deepened_exactly = j.at("deepened_exactly").get<size_t>();
    r.total_deepening = j.at("total_deepening").get<size_t>();
    r.payloads_rejected = j.at("payloads_rejected").get<size_t>();
    r.predicted_factor = j.at("predicted_factor").get<double>();
    r.measured_ratio = j.at("measured_ratio").get<double>();
    r.relative_error = j.at("relative_error").get<double>();
    const auto& t = j.at("timings");
    r.timings.baseline_s = t.at("baseline_s").get<double>();
    r.timings.select_s = t.at("select_s").get<double>();
    r.timings.collide_s = t.at("collide_s").get<double>();
    r.timings.plan_s = t.at("plan_s").get<double>();
    r.timings.apply_s = t.at("apply_s").get<double>();
    r.timings.attacked_s = t.at("attacked_s").get<double>();
    return r;
}

void save_state(std::ostream& out, const WorldState& state)
{
    json accounts = json::array();
    for (const auto& [address, indexing] : state.address_book())
    {
        const auto account = state.account_at(indexing);
        if (!account)
            continue;
        accounts.push_back(json{{"address", to_hex(address)}, {"balance", account->balance},
            {"nonce", account->nonce}, {"contract", account->is_contract()}});
    }
    json storage = json::object();
    for (const auto& [contract, slots] : state.slot_book())
    {
        json entries = json::array();
        for (const auto& slot : slots)
        {
            const auto value = state.storage_value(contract, slot);
            if (value)
                entries.push_back(json{{"slot", to_hex(slot)}, {"value", *value}});
        }
        storage[to_hex(contract)] = std::move(entries);
    }
    out << json{{"accounts", std::move(accounts)}, {"storage", std::move(storage)}}.dump(2)
        << '\n';
}

void save_state_file(const std::string& path, const WorldState& state)
{
    std::ofstream out{path};
    if (!out)
        throw std::runtime_error{"cannot open state file for writing: " + path};
    save_state(out, state);
}

WorldState load_state(std::istream& in, StateConfig config)
{
    json j;
    in >> j;
    WorldState state{config};
    for (const auto& entry : j.at("accounts"))
    {
        const Address address = address_from_hex(entry.at("address").get<std::string>());
        const auto balance = entry.at("balance").get<uint64_t>();
        const auto nonce = entry.at("nonce").get<uint64_t>();
        if (entry.at("contract").get<bool>())
            state.create_contract(address, balance, nonce);
        else
            state.create_account(address, balance, nonce);
    }
    for (const auto& [contract_hex, entries] : j.at("storage").items())
    {
        const Address contract = address_from_hex(contract_hex);
        for (const auto& entry : entries)
            state.seed_storage(contract, key32_from_hex(entry.at("slot").get<std::string>()),
                entry.at("value").get<uint64_t>());
    }
    return state;
}

WorldState load_state_file(const std::string& path, StateConfig config)
{
    std::ifstream in{path};
    if (!in)
        throw std::runtime_error{"cannot open state file: " + path};
    return load_state(in, config);
}

}  // namespace mptlab

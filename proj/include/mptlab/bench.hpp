// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/planner.hpp>
#include <mptlab/workload.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mptlab
{
/// A pipeline stage failed; carries the stage name.
struct StageError : std::runtime_error
{
    StageError(const std::string& stage, const std::string& what)
      : std::runtime_error{"stage " + stage + ": " + what}, stage_name{stage}
    {
    }
    std::string stage_name;
};

struct AttackConfig
{
    bool enabled = true;
    size_t top_targets = 500;
    size_t activity_threshold = 1;
    uint64_t window_from = 0;
    uint64_t window_to = UINT64_MAX;
    size_t deepen_layers = 4;
    size_t max_prefix_len = 7;   // grind ceiling; longer goals are dropped
    unsigned workers = 0;        // 0 = hardware concurrency
    uint64_t grind_budget = 1ull << 40;
    uint64_t grind_start_counter = 1;
};

/// One collided prefix the deepening chain of a target needs.
struct GrindGoal
{
    size_t length = 0;
    bool exact = true;  // pin the common prefix exactly (boundary nibble excluded)
};

/// Prefix lengths required to deepen a leaf whose consumed prefix is
/// `consumed` by `delta` layers; goals above `max_len` truncate the chain.
std::vector<GrindGoal> deepening_goals(size_t consumed, size_t delta, size_t max_len);

/// A funding address whose account insert lands on a free branch slot, so
/// creating it reshapes no existing leaf and perturbs no depth measurement.
Address neutral_attacker_address(const Trie& state_trie);

struct StageTimings
{
    double baseline_s = 0;
    double select_s = 0;
    double collide_s = 0;
    double plan_s = 0;
    double apply_s = 0;
    double attacked_s = 0;
};

struct ReplaySummary
{
    size_t applied = 0;
    size_t rejected = 0;
    size_t state_positions = 0;
    size_t storage_positions = 0;
    size_t touched_accounts = 0;
    double avg_account_depth = 0;
    TouchReport totals;
    std::vector<BlockAggregate> blocks;
};

ReplaySummary summarize(const ReplayResult& result);

struct BenchReport
{
    // workload echo
    uint64_t seed = 0;
    size_t accounts = 0;
    size_t contracts = 0;
    size_t blocks = 0;
    size_t txs_per_block = 0;

    ReplaySummary baseline;
    ReplaySummary attacked;

    TrieStats state_trie_before;
    TrieStats state_trie_after;

    // attack stages
    bool attack_enabled = false;
    size_t targets_selected = 0;
    size_t targets_planned = 0;
    size_t payload_count = 0;
    size_t s1_payloads = 0;
    size_t s2_payloads = 0;
    size_t s3_payloads = 0;
    uint64_t grind_trials = 0;
    bool grind_complete = false;
    std::map<size_t, size_t> prefix_length_histogram;
    size_t deepened_exactly = 0;   // targets that gained the full requested delta
    size_t total_deepening = 0;    // layers gained, summed over targets
    size_t payloads_rejected = 0;

    // impact
    double predicted_factor = 1.0;
    double measured_ratio = 1.0;
    double relative_error = 0.0;

    StageTimings timings;
};

/// Runs baseline replay, target selection, collision, planning, payload
/// emission, payload replay and attacked replay on `workload.state` (which
/// ends up attacked). Throws StageError on stage failure.
BenchReport run_experiment(Workload& workload, const AttackConfig& config);

struct ImpactValidation
{
    double predicted_factor = 1.0;
    double measured_ratio = 1.0;
    double relative_error = 0.0;
};

/// Replays the workload on both snapshots and compares the measured
/// touched-node ratio against the node-proliferation model's prediction.
ImpactValidation validate_impact(
    const WorldState& pre, const WorldState& post, const std::vector<TraceRecord>& workload);

/// True when every deterministic count field matches (wall times excluded).
bool count_fields_equal(const BenchReport& a, const BenchReport& b);

enum class ReportFormat
{
    Json,
    Csv,
};

ReportFormat report_format_from_string(const std::string& name);

void write_bench_report(std::ostream& out, const BenchReport& report, ReportFormat format);
BenchReport read_bench_report_json(std::istream& in);

void write_replay_summary(std::ostream& out, const ReplaySummary& summary, ReportFormat format);
ReplaySummary read_replay_summary_json(std::istream& in);

// --- state snapshots ------------------------------------------------------
// JSON snapshot of every book-kept account and storage slot; reloading builds
// a state with identical commitments. Fixture-injected raw leaves are outside
// the books and not covered.
void save_state(std::ostream& out, const WorldState& state);
void save_state_file(const std::string& path, const WorldState& state);
WorldState load_state(std::istream& in, StateConfig config = {});
WorldState load_state_file(const std::string& path, StateConfig config = {});

}  // namespace mptlab

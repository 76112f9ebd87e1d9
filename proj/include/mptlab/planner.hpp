// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/collision.hpp>
#include <mptlab/trie.hpp>
#include <mptlab/world_state.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace mptlab
{
/// Leaf-insertion strategies. S1 forks the target leaf at its consumed-prefix
/// boundary (+1 layer, one new intermediate), S2 splits it past the boundary
/// (+2 layers, extension plus branch), S3 splits an extension on the path at
/// its first or last nibble (+1 layer, one new intermediate).
enum class Strategy
{
    S1,
    S2,
    S3,
};

const char* to_string(Strategy strategy);

/// A crafted key under consideration by the planner.
struct Candidate
{
    NibblePath indexing;
    Bytes input;
    uint64_t counter = 0;
};

Candidate candidate_from(const CollisionResult& result);

struct InsertPayload
{
    enum class Kind
    {
        StateAccount,
        StorageSlot,
    };

    Kind kind = Kind::StateAccount;
    Bytes crafted_input;
    NibblePath expected_indexing;
    Strategy strategy = Strategy::S1;
    int predicted_new_intermediates = 0;  // 1 for S1/S3, 2 for S2
    int predicted_deepening = 0;          // layers gained by the target
    size_t collateral_leaves = 0;         // other leaves deepened as a side effect
};

struct AttackPlan
{
    NibblePath target;
    InsertPayload::Kind kind = InsertPayload::Kind::StateAccount;
    std::optional<Address> contract;  // storage plans name the contract written
    uint64_t mapping_position = 0;
    std::vector<InsertPayload> inserts;
    size_t target_depth_before = 0;
    size_t target_depth_after = 0;
    size_t collateral_leaves = 0;

    size_t deepening() const { return target_depth_after - target_depth_before; }
};

/// Extensions split when more than one prefix nibble is stored; leaves split
/// when the remainder leaves room for a fork; branches never split.
bool is_splittable(const Node& node);

struct MatchContext
{
    const Trie* trie = nullptr;  // set to exclude candidates already inserted
    NibblePath target;
    size_t consumed_before = 0;  // nibbles consumed ahead of the node
    size_t target_depth = 0;
    size_t max_layer = SIZE_MAX;
    InsertPayload::Kind kind = InsertPayload::Kind::StateAccount;
};

/// Picks the payload splitting `node`, if any candidate applies: S2 before S1
/// on leaves, boundary splits on extensions. Returns the payload and the index
/// of the candidate consumed.
std::optional<std::pair<InsertPayload, size_t>> match_strategy(const Node& node,
    const MatchContext& ctx, const std::vector<Candidate>& candidates,
    const std::vector<bool>& used);

/// Iterates traverse -> classify -> match over the target's path, applying
/// each chosen insertion to `working`, until no strategy matches or the layer
/// cap is reached. Unsplittable nodes are memoized and skipped on later passes.
AttackPlan plan_attack_inplace(Trie& working, const NibblePath& target,
    const std::vector<Candidate>& candidates, size_t max_layer,
    InsertPayload::Kind kind = InsertPayload::Kind::StateAccount);

/// Same, but simulates on a copy and leaves `trie` untouched.
AttackPlan plan_attack(const Trie& trie, const NibblePath& target,
    const std::vector<Candidate>& candidates, size_t max_layer,
    InsertPayload::Kind kind = InsertPayload::Kind::StateAccount);

struct ActiveAccountFilter
{
    size_t threshold = 1;  // minimum access count inside the window
    uint64_t window_from = 0;
    uint64_t window_to = UINT64_MAX;
};

struct TargetInfo
{
    NibblePath indexing;
    size_t access_count = 0;
};

/// Accounts touched at least `threshold` times in the window, most active
/// first (ties break on indexing order).
std::vector<TargetInfo> select_targets(const WorldState& state, const ActiveAccountFilter& filter);

struct PayloadTraceContext
{
    Address attacker{};
    uint64_t block = 0;
};

/// Converts plans into replayable records: account payloads become 1-wei
/// transfers to the crafted addresses, storage payloads become writes of 1 to
/// the crafted slots.
std::vector<TraceRecord> emit_payload_trace(
    const std::vector<AttackPlan>& plans, const PayloadTraceContext& ctx);

}  // namespace mptlab

// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/planner.hpp>

#include <algorithm>
#include <unordered_set>

namespace mptlab
{
namespace
{
struct Pick
{
    size_t candidate = 0;
    size_t common = 0;
    uint64_t counter = 0;
};

bool better(const Pick& a, const Pick& b)
{
    // smallest common prefix first: it spends the cheapest candidate and keeps
    // deeper ones usable by later passes
    if (a.common != b.common)
        return a.common < b.common;
    return a.counter < b.counter;
}

size_t count_leaves_under(const Trie& trie, const Digest& digest)
{
    const Node* node = trie.find_node(digest);
    if (node == nullptr)
        return 0;
    switch (node->kind)
    {
    case NodeKind::Leaf:
        return 1;
    case NodeKind::Extension:
        return count_leaves_under(trie, node->extension.child);
    case NodeKind::Branch:
    {
        size_t total = 0;
        for (const auto& child : node->branch.children)
            if (child)
                total += count_leaves_under(trie, *child);
        return total;
    }
    }
    return 0;
}

bool candidate_usable(const Candidate& candidate, const MatchContext& ctx)
{
    if (candidate.indexing == ctx.target)
        return false;
    if (ctx.trie != nullptr && ctx.trie->get(candidate.indexing).has_value())
        return false;
    return true;
}

InsertPayload make_payload(
    const Candidate& candidate, const MatchContext& ctx, Strategy strategy)
{
    InsertPayload payload;
    payload.kind = ctx.kind;
    payload.crafted_input = candidate.input;
    payload.expected_indexing = candidate.indexing;
    payload.strategy = strategy;
    payload.predicted_new_intermediates = strategy == Strategy::S2 ? 2 : 1;
    payload.predicted_deepening = strategy == Strategy::S2 ? 2 : 1;
    return payload;
}
}  // namespace

const char* to_string(Strategy strategy)
{
    switch (strategy)
    {
    case Strategy::S1:
        return "S1";
    case Strategy::S2:
        return "S2";
    case Strategy::S3:
        return "S3";
    }
    return "?";
}

Candidate candidate_from(const CollisionResult& result)
{
    Candidate c;
    c.indexing = path_from_digest(result.digest);
    c.input = result.input;
    c.counter = result.counter;
    return c;
}

bool is_splittable(const Node& node)
{
    switch (node.kind)
    {
    case NodeKind::Branch:
        return false;
    case NodeKind::Extension:
        return node.extension.prefix.size() > 1;
    case NodeKind::Leaf:
        return node.leaf.remainder.size() > 1;
    }
    return false;
}

std::optional<std::pair<InsertPayload, size_t>> match_strategy(const Node& node,
    const MatchContext& ctx, const std::vector<Candidate>& candidates,
    const std::vector<bool>& used)
{
    if (!is_splittable(node))
        return std::nullopt;

    if (node.kind == NodeKind::Extension)
    {
        // splitting at the first or last prefix nibble keeps the piece count at
        // two (branch + shorter extension) and the deepening at one layer
        if (ctx.target_depth + 1 > ctx.max_layer)
            return std::nullopt;
        const size_t start = ctx.consumed_before;
        const size_t len = node.extension.prefix.size();
        std::optional<Pick> best;
        for (size_t i = 0; i < candidates.size(); ++i)
        {
            if (used[i] || !candidate_usable(candidates[i], ctx))
                continue;
            const size_t common = candidates[i].indexing.common_prefix_len(ctx.target);
            if (common != start && common != start + len - 1)
                continue;
            const Pick pick{i, common, candidates[i].counter};
            if (!best || better(pick, *best))
                best = pick;
        }
        if (!best)
            return std::nullopt;
        return std::make_pair(make_payload(candidates[best->candidate], ctx, Strategy::S3),
            best->candidate);
    }

    // leaf: S2 (common prefix beyond the consumed boundary) wins over S1
    const size_t boundary = ctx.consumed_before;  // m - n for the target leaf
    std::optional<Pick> best_s2;
    std::optional<Pick> best_s1;
    for (size_t i = 0; i < candidates.size(); ++i)
    {
        if (used[i] || !candidate_usable(candidates[i], ctx))
            continue;
        const size_t common = candidates[i].indexing.common_prefix_len(ctx.target);
        const Pick pick{i, common, candidates[i].counter};
        if (common > boundary)
        {
            if (!best_s2 || better(pick, *best_s2))
                best_s2 = pick;
        }
        else if (common == boundary)
        {
            if (!best_s1 || better(pick, *best_s1))
                best_s1 = pick;
        }
    }
    if (best_s2 && ctx.target_depth + 2 <= ctx.max_layer)
        return std::make_pair(
            make_payload(candidates[best_s2->candidate], ctx, Strategy::S2), best_s2->candidate);
    if (best_s1 && ctx.target_depth + 1 <= ctx.max_layer)
        return std::make_pair(
            make_payload(candidates[best_s1->candidate], ctx, Strategy::S1), best_s1->candidate);
    return std::nullopt;
}

AttackPlan plan_attack_inplace(Trie& working, const NibblePath& target,
    const std::vector<Candidate>& candidates, size_t max_layer, InsertPayload::Kind kind)
{
    AttackPlan plan;
    plan.target = target;
    plan.kind = kind;

    PathReport path;
    if (!working.get(target, &path))
        throw NotFoundError{"attack target is not a leaf in the trie"};
    if (max_layer < path.depth)
        throw DomainError{"max layer below the target's current layer"};
    plan.target_depth_before = path.depth;
    plan.target_depth_after = path.depth;

    std::vector<bool> used(candidates.size(), false);
    std::unordered_set<Digest, DigestHash> memo;  // nodes proven unmatchable

    while (true)
    {
        PathReport pr;
        const auto found_value = working.get(target, &pr);
        if (!found_value)
            throw std::logic_error{"attack target vanished while planning"};

        std::optional<std::pair<InsertPayload, size_t>> chosen;
        std::optional<Digest> split_node;
        size_t consumed = 0;
        for (const auto& digest : pr.visited)
        {
            const Node* node = working.find_node(digest);
            if (node == nullptr)
                throw std::logic_error{"dangling node on target path"};
            if (memo.count(digest) == 0)
            {
                MatchContext ctx;
                ctx.trie = &working;
                ctx.target = target;
                ctx.consumed_before = consumed;
                ctx.target_depth = pr.depth;
                ctx.max_layer = max_layer;
                ctx.kind = kind;
                chosen = match_strategy(*node, ctx, candidates, used);
                if (chosen)
                {
                    split_node = digest;
                    break;
                }
                memo.insert(digest);  // same node, same offset, shrinking candidates
            }
            if (node->kind == NodeKind::Branch)
                consumed += 1;
            else if (node->kind == NodeKind::Extension)
                consumed += node->extension.prefix.size();
        }
        if (!chosen)
            break;

        auto [payload, candidate_idx] = *chosen;
        used[candidate_idx] = true;

        if (payload.strategy == Strategy::S3)
        {
            const size_t subtree = count_leaves_under(working, *split_node);
            payload.collateral_leaves = subtree > 0 ? subtree - 1 : 0;
        }

        const size_t depth_before = working.depth_of(target);
        const auto report = working.insert(payload.expected_indexing, Bytes{0x01});
        const size_t depth_after = working.depth_of(target);

        const auto measured_deepening = static_cast<int>(depth_after - depth_before);
        const auto measured_intermediates = static_cast<int>(report.created) - 1;
        if (measured_deepening != payload.predicted_deepening ||
            measured_intermediates != payload.predicted_new_intermediates)
            throw std::logic_error{"strategy prediction diverged from the applied split"};

        plan.collateral_leaves += payload.collateral_leaves;
        plan.inserts.push_back(std::move(payload));
        plan.target_depth_after = depth_after;
    }

    return plan;
}

AttackPlan plan_attack(const Trie& trie, const NibblePath& target,
    const std::vector<Candidate>& candidates, size_t max_layer, InsertPayload::Kind kind)
{
    Trie working = trie;
    return plan_attack_inplace(working, target, candidates, max_layer, kind);
}

std::vector<TargetInfo> select_targets(const WorldState& state, const ActiveAccountFilter& filter)
{
    if (filter.threshold < 1)
        throw DomainError{"activity threshold must be at least 1"};
    std::vector<TargetInfo> out;
    for (const auto& [indexing_text, entry] : state.access_log())
    {
        size_t count = 0;
        for (const auto block : entry.touch_blocks)
            if (block >= filter.window_from && block <= filter.window_to)
                ++count;
        if (count >= filter.threshold)
            out.push_back(TargetInfo{NibblePath::from_string(indexing_text), count});
    }
    std::sort(out.begin(), out.end(),
        [](const TargetInfo& a, const TargetInfo& b)
        {
            if (a.access_count != b.access_count)
                return a.access_count > b.access_count;
            return a.indexing < b.indexing;
        });
    return out;
}

std::vector<TraceRecord> emit_payload_trace(
    const std::vector<AttackPlan>& plans, const PayloadTraceContext& ctx)
{
    std::vector<TraceRecord> trace;
    for (const auto& plan : plans)
    {
        for (const auto& payload : plan.inserts)
        {
            TraceRecord record;
            record.from = ctx.attacker;
            record.value = 1;
            record.block = ctx.block;
            if (payload.kind == InsertPayload::Kind::StateAccount)
            {
                record.kind = TraceRecord::Kind::Transfer;
                if (payload.crafted_input.size() != sizeof(Address))
                    throw StructuralError{"account payload input is not an address"};
                std::copy(payload.crafted_input.begin(), payload.crafted_input.end(),
                    record.to.begin());
            }
            else
            {
                record.kind = TraceRecord::Kind::StorageWrite;
                if (!plan.contract)
                    throw StructuralError{"storage plan lacks a contract"};
                record.to = *plan.contract;
                if (payload.crafted_input.size() != sizeof(Key32))
                    throw StructuralError{"storage payload input is not a mapping key"};
                Key32 key{};
                std::copy(payload.crafted_input.begin(), payload.crafted_input.end(), key.begin());
                record.slot = slot_id(key, plan.mapping_position);
            }
            trace.push_back(std::move(record));
        }
    }
    return trace;
}

}  // namespace mptlab

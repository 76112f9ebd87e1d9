// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/planner.hpp>

#include <doctest.h>

#include <random>

using namespace mptlab;

namespace
{
NibblePath fig_key(const std::string& nibbles)
{
    return NibblePath::from_string(nibbles).padded_to_full();
}

Bytes val(const std::string& s)
{
    return Bytes(s.begin(), s.end());
}

NibblePath random_key(std::mt19937_64& rng)
{
    std::vector<Nibble> nibbles(kFullIndexingLen);
    for (auto& n : nibbles)
        n = static_cast<Nibble>(rng() & 0x0f);
    return NibblePath{std::move(nibbles)};
}

// candidate sharing exactly `common` nibbles with `target`
Candidate synth_candidate(
    const NibblePath& target, size_t common, std::mt19937_64& rng, uint64_t counter)
{
    auto path = target.slice(0, common)
                    .append(static_cast<Nibble>((target[common] + 1 + rng() % 15) % 16));
    while (path.size() < kFullIndexingLen)
        path = path.append(static_cast<Nibble>(rng() & 0x0f));
    Candidate c;
    c.indexing = std::move(path);
    c.input = Bytes(20, static_cast<uint8_t>(counter));
    c.counter = counter;
    return c;
}

// the two-leaf figure trie: extension 111 -> branch -> leaves 34d / 12f
Trie fig_trie()
{
    Trie trie;
    trie.insert(fig_key("111234d"), val("a"));
    trie.insert(fig_key("111d12f"), val("b"));
    return trie;
}
}  // namespace

TEST_CASE("splittability classification")
{
    const auto ext3 = Node::make_extension(NibblePath::from_string("111"), Digest{});
    CHECK(is_splittable(ext3));

    const auto ext1 = Node::make_extension(NibblePath::from_string("1"), Digest{});
    CHECK_FALSE(is_splittable(ext1));

    const auto leaf_long = Node::make_leaf(NibblePath::from_string("12f"), val("x"));
    CHECK(is_splittable(leaf_long));

    const auto leaf_short = Node::make_leaf(NibblePath::from_string("f"), val("x"));
    CHECK_FALSE(is_splittable(leaf_short));

    CHECK_FALSE(is_splittable(Node::make_branch(BranchNode{})));
}

TEST_CASE("strategy matching against the figure trie")
{
    const Trie trie = fig_trie();
    const NibblePath target = fig_key("111d12f");

    // the target leaf sits below ext(111) + branch: 4 nibbles consumed
    MatchContext leaf_ctx;
    leaf_ctx.trie = &trie;
    leaf_ctx.target = target;
    leaf_ctx.consumed_before = 4;
    leaf_ctx.target_depth = 3;
    const Node leaf = *trie.find_node(trie.traverse_nodes(target).back());

    SUBCASE("fork at the boundary selects S1")
    {
        Candidate c;
        c.indexing = fig_key("111dd3e");  // shares 111d exactly
        c.input = Bytes(20, 1);
        c.counter = 1;
        const auto m = match_strategy(leaf, leaf_ctx, {c}, {false});
        REQUIRE(m.has_value());
        CHECK(m->first.strategy == Strategy::S1);
        CHECK(m->first.predicted_new_intermediates == 1);
        CHECK(m->first.predicted_deepening == 1);
    }

    SUBCASE("deeper share selects S2 and wins over S1")
    {
        Candidate s1;
        s1.indexing = fig_key("111dd3e");
        s1.input = Bytes(20, 1);
        s1.counter = 1;
        Candidate s2;
        s2.indexing = fig_key("111d1f3");  // shares 111d1
        s2.input = Bytes(20, 2);
        s2.counter = 2;
        const auto m = match_strategy(leaf, leaf_ctx, {s1, s2}, {false, false});
        REQUIRE(m.has_value());
        CHECK(m->first.strategy == Strategy::S2);
        CHECK(m->first.predicted_new_intermediates == 2);
        CHECK(m->first.predicted_deepening == 2);
        CHECK(m->second == 1);
    }

    SUBCASE("extension boundary mismatch selects S3")
    {
        MatchContext ext_ctx = leaf_ctx;
        ext_ctx.consumed_before = 0;  // the root extension starts the path
        const Node ext = *trie.find_node(trie.traverse_nodes(target).front());
        Candidate c;
        c.indexing = fig_key("11d2dcd");  // shares 11, cannot cover 111
        c.input = Bytes(20, 3);
        c.counter = 3;
        const auto m = match_strategy(ext, ext_ctx, {c}, {false});
        REQUIRE(m.has_value());
        CHECK(m->first.strategy == Strategy::S3);
        CHECK(m->first.predicted_new_intermediates == 1);
        CHECK(m->first.predicted_deepening == 1);
    }

    SUBCASE("no candidate matches")
    {
        Candidate c;
        c.indexing = fig_key("9999999");
        c.input = Bytes(20, 4);
        c.counter = 4;
        CHECK_FALSE(match_strategy(leaf, leaf_ctx, {c}, {false}).has_value());
    }
}

TEST_CASE("applying an S3 plan splits the extension and reports collateral")
{
    Trie trie = fig_trie();
    const NibblePath target = fig_key("111d12f");
    std::mt19937_64 rng{5};

    std::vector<Candidate> candidates;
    Candidate c;
    c.indexing = fig_key("11d2dcd");
    c.input = Bytes(20, 1);
    c.counter = 1;
    candidates.push_back(c);

    const auto plan = plan_attack_inplace(trie, target, candidates, 32);
    REQUIRE(plan.inserts.size() == 1);
    CHECK(plan.inserts[0].strategy == Strategy::S3);
    CHECK(plan.target_depth_before == 3);
    CHECK(plan.target_depth_after == 4);
    // the sibling leaf 111234d rode along one layer down
    CHECK(plan.inserts[0].collateral_leaves == 1);
    CHECK(trie.depth_of(fig_key("111234d")) == 4);

    // extension shrank from 111 to 11
    const auto path = trie.traverse_nodes(target);
    const Node* root = trie.find_node(path[0]);
    REQUIRE(root->kind == NodeKind::Extension);
    CHECK(root->extension.prefix.to_string() == "11");
}

TEST_CASE("planning achieves layer x+2 with a dense candidate ladder")
{
    std::mt19937_64 rng{909};
    int exercised = 0;
    for (int round = 0; round < 100; ++round)
    {
        Trie trie;
        std::vector<NibblePath> keys;
        const size_t population = 20 + rng() % 180;
        for (size_t i = 0; i < population; ++i)
        {
            keys.push_back(random_key(rng));
            trie.insert(keys.back(), val("v"));
        }
        const NibblePath target = keys[rng() % keys.size()];
        PathReport pr;
        REQUIRE(trie.get(target, &pr).has_value());
        if (pr.unique_part_len <= 2)
            continue;
        const size_t consumed = pr.full_len - pr.unique_part_len;
        const size_t x = consumed + 1 + rng() % 4;

        std::vector<Candidate> ladder;
        for (size_t common = 0; common <= x; ++common)
            ladder.push_back(synth_candidate(target, common, rng, common + 1));

        Trie working = trie;
        const auto plan = plan_attack_inplace(working, target, ladder, /*max_layer=*/64);
        CHECK(plan.target_depth_after == x + 2);
        CHECK(working.depth_of(target) == x + 2);
        working.check_canonical();

        // measured structural gain equals the per-payload predictions
        {
            Trie replayed = trie;
            const auto before = replayed.stats().total();
            int predicted_total = 0;
            for (const auto& payload : plan.inserts)
            {
                replayed.insert(payload.expected_indexing, Bytes{0x01});
                predicted_total += payload.predicted_new_intermediates;
            }
            const auto grown = replayed.stats().total() - before;
            CHECK(static_cast<int>(grown) ==
                  predicted_total + static_cast<int>(plan.inserts.size()));
            CHECK(replayed.depth_of(target) == plan.target_depth_after);
            CHECK(replayed.root_commitment() == working.root_commitment());
        }

        // planning is idempotent: the attacked path offers nothing further
        {
            const auto replan = plan_attack(working, target, ladder, 64);
            CHECK(replan.inserts.empty());
            CHECK(replan.target_depth_after == plan.target_depth_after);
        }
        ++exercised;
    }
    CHECK(exercised >= 60);
}

TEST_CASE("layer cap clamps the plan")
{
    std::mt19937_64 rng{11};
    Trie trie;
    for (int i = 0; i < 50; ++i)
        trie.insert(random_key(rng), val("v"));
    const auto target = random_key(rng);
    trie.insert(target, val("t"));

    PathReport pr;
    trie.get(target, &pr);
    const size_t consumed = pr.full_len - pr.unique_part_len;
    const size_t x = consumed + 4;

    std::vector<Candidate> ladder;
    for (size_t common = 0; common <= x; ++common)
        ladder.push_back(synth_candidate(target, common, rng, common + 1));

    const size_t cap = pr.depth + 2;
    Trie working = trie;
    const auto plan = plan_attack_inplace(working, target, ladder, cap);
    CHECK(plan.target_depth_after <= cap);
    CHECK(plan.target_depth_after > plan.target_depth_before);

    CHECK_THROWS_AS(
        plan_attack(working, target, ladder, /*max_layer=*/1), DomainError);
}

TEST_CASE("empty candidate set yields an empty plan")
{
    Trie trie = fig_trie();
    const auto plan = plan_attack(trie, fig_key("111d12f"), {}, 64);
    CHECK(plan.inserts.empty());
    CHECK(plan.target_depth_before == plan.target_depth_after);

    CHECK_THROWS_AS(plan_attack(trie, fig_key("fffffff"), {}, 64), NotFoundError);
}

TEST_CASE("target selection follows the access log")
{
    WorldState state;
    std::vector<Address> accounts;
    for (uint8_t i = 1; i <= 8; ++i)
    {
        Address a{};
        a[19] = i;
        accounts.push_back(a);
        state.create_account(a, 1'000'000);
    }

    // deterministic touch pattern: account i gets i touches as recipient
    std::vector<TraceRecord> trace;
    for (uint8_t i = 1; i <= 8; ++i)
        for (uint8_t k = 0; k < i; ++k)
        {
            TraceRecord r;
            r.kind = TraceRecord::Kind::Transfer;
            r.from = accounts[(i + k) % 8 == i - 1 ? (i % 8) : (i + k) % 8];
            r.to = accounts[i - 1];
            r.value = 1;
            r.block = 1 + k % 3;
            trace.push_back(r);
        }
    state.replay(trace);

    SUBCASE("threshold one returns every touched account")
    {
        const auto targets = select_targets(state, ActiveAccountFilter{1, 0, UINT64_MAX});
        CHECK(targets.size() == 8);
        for (size_t i = 1; i < targets.size(); ++i)
            CHECK(targets[i - 1].access_count >= targets[i].access_count);
    }

    SUBCASE("threshold six matches a brute-force scan")
    {
        const auto targets = select_targets(state, ActiveAccountFilter{6, 0, UINT64_MAX});
        std::map<std::string, size_t> scan;
        for (const auto& r : trace)
        {
            scan[account_indexing(r.from).to_string()] += 1;
            scan[account_indexing(r.to).to_string()] += 1;
        }
        size_t expected = 0;
        for (const auto& [k, v] : scan)
            if (v >= 6)
                ++expected;
        CHECK(targets.size() == expected);
        for (const auto& t : targets)
            CHECK(scan.at(t.indexing.to_string()) == t.access_count);
    }

    SUBCASE("threshold above the maximum yields nothing")
    {
        CHECK(select_targets(state, ActiveAccountFilter{10'000, 0, UINT64_MAX}).empty());
    }

    SUBCASE("empty log yields nothing")
    {
        WorldState untouched;
        CHECK(select_targets(untouched, ActiveAccountFilter{1, 0, UINT64_MAX}).empty());
    }
}

TEST_CASE("payload traces replay as 1-wei transfers and unit storage writes")
{
    AttackPlan state_plan;
    state_plan.kind = InsertPayload::Kind::StateAccount;
    InsertPayload p1;
    p1.kind = InsertPayload::Kind::StateAccount;
    p1.crafted_input = Bytes(20, 0xaa);
    p1.expected_indexing = fig_key("1");
    p1.strategy = Strategy::S1;
    state_plan.inserts.push_back(p1);

    AttackPlan storage_plan;
    storage_plan.kind = InsertPayload::Kind::StorageSlot;
    Address contract{};
    contract[19] = 9;
    storage_plan.contract = contract;
    storage_plan.mapping_position = 2;
    InsertPayload p2;
    p2.kind = InsertPayload::Kind::StorageSlot;
    p2.crafted_input = Bytes(32, 0xbb);
    p2.expected_indexing = fig_key("2");
    p2.strategy = Strategy::S2;
    storage_plan.inserts.push_back(p2);
    InsertPayload p3 = p2;
    p3.crafted_input = Bytes(32, 0xcc);
    storage_plan.inserts.push_back(p3);

    PayloadTraceContext ctx;
    ctx.attacker[19] = 0x77;
    ctx.block = 100;

    const auto trace = emit_payload_trace({state_plan, storage_plan}, ctx);
    REQUIRE(trace.size() == 3);

    CHECK(trace[0].kind == TraceRecord::Kind::Transfer);
    CHECK(trace[0].from == ctx.attacker);
    CHECK(trace[0].value == 1);
    CHECK(to_hex(trace[0].to) == to_hex(Bytes(20, 0xaa)));
    CHECK_FALSE(trace[0].slot.has_value());

    CHECK(trace[1].kind == TraceRecord::Kind::StorageWrite);
    CHECK(trace[1].to == contract);
    CHECK(trace[1].value == 1);
    Key32 key{};
    std::fill(key.begin(), key.end(), 0xbb);
    REQUIRE(trace[1].slot.has_value());
    CHECK(*trace[1].slot == slot_id(key, 2));

    CHECK(trace[2].kind == TraceRecord::Kind::StorageWrite);
    CHECK(to_hex(*trace[2].slot) != to_hex(*trace[1].slot));
}

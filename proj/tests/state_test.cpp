// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/trace_io.hpp>
#include <mptlab/world_state.hpp>

#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <random>
#include <sstream>

using namespace mptlab;

namespace
{
Address addr(uint8_t tag)
{
    Address a{};
    a[19] = tag;
    a[0] = 0xee;
    return a;
}

NibblePath fig_key(const std::string& nibbles)
{
    return NibblePath::from_string(nibbles).padded_to_full();
}

// Account-trie layout with two shallow account leaves and one deep one:
// transfers from the shallow sender touch 6 or 9 distinct nodes depending on
// the recipient, at identical gas.
struct UnevenDepthFixture
{
    WorldState state;
    Address shallow_sender = addr(1);   // leaf aab3e..., layer 4
    Address deep_recipient = addr(2);   // leaf abc6d..., layer 7
    Address shallow_recipient = addr(3);  // leaf acd3f..., layer 4

    UnevenDepthFixture()
    {
        Account funded;
        funded.balance = 10'000;
        state.install_account_at(fig_key("aab3e"), funded, shallow_sender);
        state.install_account_at(fig_key("abc6d"), funded, deep_recipient);
        state.install_account_at(fig_key("acd3f"), funded, shallow_recipient);

        Account filler;
        filler.balance = 7;
        for (const char* key : {"aa0", "ac0", "ab0", "abc0", "abc60", "abc6d1", "1"})
            state.install_account_at(fig_key(key), filler);
    }
};
}  // namespace

TEST_CASE("account indexing reproduces all thirteen crafted-address vectors")
{
    static const std::pair<const char*, const char*> kVectors[] = {
        {"51b0e4b84afc9c7e935fd1c54409abda46ffff07",
            "109999afd60b733da226a060260c2d9f165f0f33516c5a3230d2b9538ae197e7"},
        {"7c0caee5b72d0c71a090c6f02522e89acfffff07",
            "11fb9e6a64c5a7c23fb27d08e3d74ea1018fcb0c60d2010cca6c6654dd95e4b8"},
        {"8f5ea3c9db43de4143e5717f44dcb43e05d0fe07",
            "1110dc62b86ce4609e860381909da5480d46b2e90ea19c5afac287be805c234b"},
        {"bd6f8cba28b4a0218d0aedbc820a27248ee4fe07",
            "111165e10752633a1ab85c219c618d6c6e6259fdb7c8d2397df9cb72d16e4149"},
        {"fccedcfd14858e8b1baf9a497e99af468012b507",
            "111110e0c5d11a713c428c42a03a5a7c55d66c0e61158ef13a63776b94d384d0"},
        {"58b91f9cb0ffacae5d95c9e80c373d264993cc06",
            "111111078c719cdc5abc2195b645a72ba7dd4d15b12ab9cce3361466c402df69"},
        {"89f25e63c12c48a95c22cd4b19585f337a805f06",
            "111111106b6090ca5f7027a7539dc73173e26a35b28645b47d4878db6bbddd62"},
        {"a0f0722109f07edd76cc1d2b29cfbc0122ca2b06",
            "11111111ce35790ede4c97cc847e55c91c0b3063f5cb56ab6ab93ee76381fa6a"},
        {"97637e992f835689667a48a0731ce1ebb44dc006",
            "1111111110b3bf4ed6dc409fb20328970a0f23dac93761a4347fcd4c84dfe8cc"},
        {"2f1033b78f8fb3c04259202793d2d89169326d02",
            "1111111111ce8bad4529bfef324c88454fe4e72c3cd3974c0249c9adc764802a"},
        {"267a239f1986295e996358a79f57b473ae264d05",
            "1111111111100822f67e0319be36eb814ade0ca60c65c62b41641e889eb48ad8"},
        {"d4dfd776a81fcdfa2d601f1efa31a2ad8c21fe06",
            "111111111111834eea3006374356f398b29f9b709272533e759348f0bb07aa11"},
        {"df04b72b67666a59ff30c06dd079f1850b36ba04",
            "1111111111111ca536d3de683a3ab986f631ee733132457eccc0d9a011aa9e55"},
    };
    for (const auto& [address_hex, indexing_hex] : kVectors)
        CHECK(account_indexing(address_from_hex(address_hex)).to_string() == indexing_hex);

    CHECK(account_indexing(address_from_hex("df04b72b67666a59ff30c06dd079f1850b36ba04"))
              .slice(0, 13)
              .to_string() == "1111111111111");
}

TEST_CASE("slot indexing derivation")
{
    Key32 one{};
    one[31] = 1;

    SUBCASE("pinned external vector for (key=1, position=0)")
    {
        CHECK(to_hex(slot_id(one, 0)) ==
              "ada5013122d395ba3c54772283fb069b10426056ef8ca54750cb9bb552a59e7d");
        CHECK(slot_indexing(one, 0).to_string() ==
              "3f9553dc324cd1fd24b54243720c42e18e5c20165bc5e523e42b440a8654abd1");
    }

    SUBCASE("deterministic across calls")
    {
        Key32 k{};
        k[0] = 0xab;
        k[31] = 0xcd;
        CHECK(slot_indexing(k, 3) == slot_indexing(k, 3));
        CHECK(slot_indexing(k, 3) != slot_indexing(k, 4));
    }

    SUBCASE("no collisions across a million random keys")
    {
        std::mt19937_64 rng{2024};
        std::vector<Digest> seen;
        seen.reserve(1'000'000);
        for (int i = 0; i < 1'000'000; ++i)
        {
            Key32 k{};
            for (size_t b = 0; b < 32; b += 8)
            {
                const uint64_t word = rng();
                std::memcpy(k.data() + b, &word, 8);
            }
            seen.push_back(keccak256(slot_id(k, 0)));
        }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

TEST_CASE("equal-gas transfers touch different node counts")
{
    UnevenDepthFixture fx;
    CHECK(fx.state.state_trie().stats().leaves == 10);

    const auto tx1 =
        fx.state.apply_transfer(fx.shallow_sender, fx.shallow_recipient, 5);
    CHECK_FALSE(tx1.rejected);
    CHECK(tx1.gas_charged == 21'000);
    CHECK(tx1.op1_nodes_updated == 6);

    const auto tx2 = fx.state.apply_transfer(fx.shallow_sender, fx.deep_recipient, 5);
    CHECK_FALSE(tx2.rejected);
    CHECK(tx2.gas_charged == 21'000);
    CHECK(tx2.op1_nodes_updated == 9);

    // the flaw witness: same gas, different node footprints
    CHECK(tx1.gas_charged == tx2.gas_charged);
    CHECK(tx1.op1_nodes_updated != tx2.op1_nodes_updated);

    // every updated node was rehashed, shared ancestors more than once
    CHECK(tx1.op2_hashes_recomputed >= tx1.op1_nodes_updated);
    CHECK(tx2.op2_hashes_recomputed >= tx2.op1_nodes_updated);
}

TEST_CASE("replay of the two-transfer fixture sums to 15 nodes and 42000 gas")
{
    UnevenDepthFixture fx;
    std::vector<TraceRecord> trace;
    TraceRecord r1;
    r1.kind = TraceRecord::Kind::Transfer;
    r1.from = fx.shallow_sender;
    r1.to = fx.shallow_recipient;
    r1.value = 5;
    r1.block = 1;
    TraceRecord r2 = r1;
    r2.to = fx.deep_recipient;
    trace = {r1, r2};

    const auto result = fx.state.replay(trace);
    CHECK(result.applied == 2);
    CHECK(result.rejected == 0);
    CHECK(result.totals.op1_nodes_updated == 15);
    CHECK(result.totals.gas_charged == 42'000);
    CHECK(result.blocks.size() == 1);
    CHECK(result.blocks[0].totals.op4_nodes_persisted > 0);

    SUBCASE("identical replay on an identical fixture yields identical counts")
    {
        UnevenDepthFixture fx2;
        const auto again = fx2.state.replay(trace);
        CHECK(again.totals.op1_nodes_updated == result.totals.op1_nodes_updated);
        CHECK(again.totals.op2_hashes_recomputed == result.totals.op2_hashes_recomputed);
        CHECK(again.totals.op3_cache_events == result.totals.op3_cache_events);
        CHECK(again.totals.op4_nodes_persisted == result.totals.op4_nodes_persisted);
        CHECK(again.totals.gas_charged == result.totals.gas_charged);
    }
}

TEST_CASE("transfer of zero wei to self bumps the nonce only")
{
    UnevenDepthFixture fx;
    const auto before = fx.state.account_by_address(fx.shallow_sender);
    const auto report = fx.state.apply_transfer(fx.shallow_sender, fx.shallow_sender, 0);
    CHECK_FALSE(report.rejected);
    const auto after = fx.state.account_by_address(fx.shallow_sender);
    CHECK(after->balance == before->balance);
    CHECK(after->nonce == before->nonce + 1);
    // one leaf update: the sender path, nothing else
    CHECK(report.op1_nodes_updated == 4);
}

TEST_CASE("insufficient balance rejects and leaves state untouched")
{
    UnevenDepthFixture fx;
    const auto root = fx.state.state_trie().root_commitment();
    const auto report =
        fx.state.apply_transfer(fx.shallow_sender, fx.shallow_recipient, 1'000'000);
    CHECK(report.rejected);
    CHECK(report.reject_reason == "insufficient balance");
    CHECK(report.gas_charged == 0);
    CHECK(fx.state.state_trie().root_commitment() == root);
}

TEST_CASE("transfers to absent accounts create them")
{
    WorldState state;
    state.create_account(addr(1), 1'000);
    const Address fresh = addr(9);
    CHECK_FALSE(state.account_by_address(fresh).has_value());

    const auto report = state.apply_transfer(addr(1), fresh, 1);
    CHECK_FALSE(report.rejected);
    const auto created = state.account_by_address(fresh);
    REQUIRE(created.has_value());
    CHECK(created->balance == 1);
    CHECK(created->nonce == 0);
    CHECK(created->code_hash == keccak256_empty());
    CHECK(created->storage_root == keccak256_empty());
}

TEST_CASE("wei is conserved under random transfer workloads")
{
    WorldState state;
    std::vector<Address> accounts;
    for (uint8_t i = 1; i <= 20; ++i)
    {
        accounts.push_back(addr(i));
        state.create_account(accounts.back(), 1'000 * i);
    }
    const uint64_t supply = state.total_wei();

    std::mt19937_64 rng{77};
    for (int i = 0; i < 300; ++i)
    {
        const auto& from = accounts[rng() % accounts.size()];
        const auto& to = accounts[rng() % accounts.size()];
        state.apply_transfer(from, to, rng() % 2'000);  // some reject, that is fine
    }
    CHECK(state.total_wei() == supply);
}

TEST_CASE("storage writes cascade into the account leaf")
{
    WorldState state;
    const Address contract = addr(42);
    state.create_contract(contract);
    state.create_account(addr(1), 100);

    const auto account_before = state.account_by_address(contract);
    Key32 slot{};
    slot[31] = 7;

    const auto report =
        state.apply_storage_write(contract, path_from_digest(keccak256(slot)), Bytes{0x01});
    CHECK_FALSE(report.rejected);
    CHECK(report.gas_charged == 44'258);
    CHECK(report.op1_nodes_updated > 0);
    CHECK(report.op2_hashes_recomputed >= report.op1_nodes_updated);

    const auto account_after = state.account_by_address(contract);
    CHECK(account_after->storage_root != account_before->storage_root);
    CHECK(account_after->storage_root == state.storage_trie(contract)->root_commitment());
    CHECK(state.storage_value(contract, slot) == 1);
}

TEST_CASE("storage split inside a storage trie adds two intermediates")
{
    WorldState state;
    const Address contract = addr(42);
    state.create_contract(contract);

    // figure-shaped raw slot paths
    state.apply_storage_write(contract, fig_key("111234d"), Bytes{0x01});
    state.apply_storage_write(contract, fig_key("111d12f"), Bytes{0x01});
    const auto stats_before = state.storage_trie(contract)->stats();

    const auto report = state.apply_storage_write(contract, fig_key("111d1f3"), Bytes{0x01});
    CHECK_FALSE(report.rejected);
    const auto stats_after = state.storage_trie(contract)->stats();
    CHECK(stats_after.branches == stats_before.branches + 1);
    CHECK(stats_after.extensions == stats_before.extensions + 1);
    CHECK(stats_after.leaves == stats_before.leaves + 1);
    CHECK(state.storage_trie(contract)->depth_of(fig_key("111d12f")) == 5);
    CHECK(state.storage_root_mismatches() == 0);
}

TEST_CASE("cascade invariant holds across random storage writes")
{
    WorldState state;
    const Address contract_a = addr(50);
    const Address contract_b = addr(51);
    state.create_contract(contract_a);
    state.create_contract(contract_b);

    std::mt19937_64 rng{1010};
    for (int i = 0; i < 100; ++i)
    {
        Key32 slot{};
        const uint64_t word = rng();
        std::memcpy(slot.data(), &word, 8);
        const Address& contract = (rng() & 1) != 0 ? contract_a : contract_b;
        state.apply_storage_write(
            contract, path_from_digest(keccak256(slot)), Bytes{static_cast<uint8_t>(1 + i % 9)});
        CHECK(state.storage_root_mismatches() == 0);
    }
}

TEST_CASE("unknown contract storage write is rejected")
{
    WorldState state;
    state.create_account(addr(1), 10);
    const auto report = state.apply_storage_write(addr(9), fig_key("ab"), Bytes{0x01});
    CHECK(report.rejected);
    CHECK(report.reject_reason == "unknown contract");
}

TEST_CASE("empty trace replays to an all-zero report")
{
    WorldState state;
    const auto result = state.replay({});
    CHECK(result.applied == 0);
    CHECK(result.rejected == 0);
    CHECK(result.totals.op1_nodes_updated == 0);
    CHECK(result.totals.op2_hashes_recomputed == 0);
    CHECK(result.totals.gas_charged == 0);
    CHECK(result.blocks.empty());
}

TEST_CASE("rejections are skipped unless strict")
{
    WorldState state;
    state.create_account(addr(1), 10);
    TraceRecord bad;
    bad.kind = TraceRecord::Kind::Transfer;
    bad.from = addr(1);
    bad.to = addr(2);
    bad.value = 10'000;  // more than the balance
    bad.block = 1;

    auto result = state.replay({bad});
    CHECK(result.applied == 0);
    CHECK(result.rejected == 1);

    WorldState strict_state;
    strict_state.create_account(addr(1), 10);
    CHECK_THROWS(strict_state.replay({bad}, /*strict=*/true));
}

TEST_CASE("deepening a touched leaf raises the next touch cost by the same amount")
{
    UnevenDepthFixture fx;
    const auto base =
        fx.state.apply_transfer(fx.shallow_sender, fx.shallow_recipient, 1);

    // share two extra nibbles past the recipient's consumed prefix: acd3f... is
    // consumed up to 'acd' (root, br2, br3c); the wedge shares "acd3f" exactly
    Account wedge;
    wedge.balance = 1;
    fx.state.install_account_at(fig_key("acd3f7"), wedge);

    const auto after = fx.state.apply_transfer(fx.shallow_sender, fx.shallow_recipient, 1);
    CHECK(after.op1_nodes_updated == base.op1_nodes_updated + 2);
}

TEST_CASE("access log counts match a brute-force scan of the trace")
{
    WorldState state;
    std::vector<Address> accounts;
    for (uint8_t i = 1; i <= 10; ++i)
    {
        accounts.push_back(addr(i));
        state.create_account(accounts.back(), 1'000'000);
    }

    std::vector<TraceRecord> trace;
    std::mt19937_64 rng{4040};
    for (int i = 0; i < 200; ++i)
    {
        TraceRecord r;
        r.kind = TraceRecord::Kind::Transfer;
        r.from = accounts[rng() % accounts.size()];
        do
        {
            r.to = accounts[rng() % accounts.size()];
        } while (r.to == r.from);
        r.value = 1;
        r.block = 1 + i / 20;
        trace.push_back(r);
    }

    state.replay(trace);

    std::map<std::string, size_t> expected;
    for (const auto& r : trace)
    {
        expected[account_indexing(r.from).to_string()] += 1;
        expected[account_indexing(r.to).to_string()] += 1;
    }
    for (const auto& account : accounts)
    {
        const auto idx = account_indexing(account);
        const auto it = expected.find(idx.to_string());
        const size_t want = it == expected.end() ? 0 : it->second;
        CHECK(state.access_count(idx, 0, UINT64_MAX) == want);
    }

    SUBCASE("window filtering")
    {
        const auto idx = account_indexing(accounts[0]);
        size_t want = 0;
        for (const auto& r : trace)
            if (r.block >= 3 && r.block <= 5 && (r.from == accounts[0] || r.to == accounts[0]))
                ++want;
        CHECK(state.access_count(idx, 3, 5) == want);
    }
}

TEST_CASE("node cache produces deterministic miss and eviction counts")
{
    StateConfig config;
    config.node_cache_capacity = 8;

    const auto run = [&]
    {
        WorldState state{config};
        for (uint8_t i = 1; i <= 12; ++i)
            state.create_account(addr(i), 1'000);
        size_t events = 0;
        for (uint8_t i = 1; i <= 11; ++i)
        {
            const auto r = state.apply_transfer(addr(i), addr(static_cast<uint8_t>(i + 1)), 1);
            events += r.op3_cache_events;
        }
        return events;
    };

    const size_t first = run();
    CHECK(first > 0);
    CHECK(run() == first);
}

TEST_CASE("trace records round-trip through the line format")
{
    TraceRecord r;
    r.kind = TraceRecord::Kind::StorageWrite;
    r.from = addr(1);
    r.to = addr(2);
    Key32 slot{};
    slot[0] = 0xaa;
    slot[31] = 0x01;
    r.slot = slot;
    r.value = 12345;
    r.block = 42;

    const auto line = format_trace_record(r);
    const auto parsed = parse_trace_record(line);
    CHECK(parsed.kind == r.kind);
    CHECK(parsed.from == r.from);
    CHECK(parsed.to == r.to);
    CHECK(parsed.slot == r.slot);
    CHECK(parsed.value == r.value);
    CHECK(parsed.block == r.block);

    TraceRecord t;
    t.kind = TraceRecord::Kind::Transfer;
    t.from = addr(3);
    t.to = addr(4);
    t.value = 1;
    t.block = 7;
    const auto t2 = parse_trace_record(format_trace_record(t));
    CHECK_FALSE(t2.slot.has_value());

    std::stringstream stream;
    write_trace(stream, {r, t});
    const auto back = read_trace(stream);
    REQUIRE(back.size() == 2);
    CHECK(format_trace_record(back[0]) == format_trace_record(r));
    CHECK(format_trace_record(back[1]) == format_trace_record(t));

    CHECK_THROWS_AS(parse_trace_record("transfer 0x00 0x00 - 1"), StructuralError);
    CHECK_THROWS_AS(
        parse_trace_record("storage_write 0x" + std::string(40, '0') + " 0x" +
                           std::string(40, '0') + " - 1 2"),
        StructuralError);
}

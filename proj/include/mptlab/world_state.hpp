// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/account.hpp>
#include <mptlab/bytes.hpp>
#include <mptlab/lru_cache.hpp>
#include <mptlab/trie.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mptlab
{
/// Resource counters for one state mutation (or an aggregate of them).
///
/// op1 counts distinct trie positions whose stored content changed; op2 counts
/// node serializations hashed while refreshing commitments; op3 counts node
/// cache misses plus evictions; op4 counts nodes flushed at block boundaries.
struct TouchReport
{
    size_t op1_nodes_updated = 0;
    size_t op2_hashes_recomputed = 0;
    size_t op3_cache_events = 0;
    size_t op4_nodes_persisted = 0;
    double wall_time_s = 0.0;
    uint64_t gas_charged = 0;
    bool rejected = false;
    std::string reject_reason;

    TouchReport& operator+=(const TouchReport& other)
    {
        op1_nodes_updated += other.op1_nodes_updated;
        op2_hashes_recomputed += other.op2_hashes_recomputed;
        op3_cache_events += other.op3_cache_events;
        op4_nodes_persisted += other.op4_nodes_persisted;
        wall_time_s += other.wall_time_s;
        gas_charged += other.gas_charged;
        return *this;
    }
};

struct TraceRecord
{
    enum class Kind
    {
        Transfer,
        StorageWrite,
    };

    Kind kind = Kind::Transfer;
    Address from{};
    Address to{};  // transfer recipient, or the contract being written
    std::optional<Key32> slot;  // present iff kind == StorageWrite
    uint64_t value = 0;         // wei for transfers, slot payload otherwise
    uint64_t block = 0;
};

/// 64-nibble state-trie indexing of an account address.
NibblePath account_indexing(const Address& address);

/// Storage-trie indexing of a mapping entry: the slot id is derived from the
/// key and mapping position, and the indexing from the slot id.
NibblePath slot_indexing(const Key32& mapping_key, uint64_t mapping_position);

/// The slot id itself (the inner derivation step of slot_indexing).
Key32 slot_id(const Key32& mapping_key, uint64_t mapping_position);

struct StateConfig
{
    size_t node_cache_capacity = 4096;
    uint64_t transfer_gas = 21000;
    uint64_t storage_write_gas = 44258;  // insert-style write via a token transfer
};

struct BlockAggregate
{
    uint64_t block = 0;
    size_t records = 0;
    TouchReport totals;
};

struct ReplayResult
{
    std::vector<BlockAggregate> blocks;
    TouchReport totals;
    size_t applied = 0;
    size_t rejected = 0;

    // whole-run impact artifacts: distinct touched positions and the layer of
    // every written leaf at its last touch
    std::set<std::string> state_positions;
    std::set<std::string> storage_positions;
    std::map<std::string, size_t> account_depths;             // indexing text -> layer
    std::map<std::string, size_t> slot_depths;                // contract|indexing -> layer
};

/// Two-level state: one account trie plus one storage trie per contract.
class WorldState
{
public:
    explicit WorldState(StateConfig config = {});

    const StateConfig& config() const { return config_; }

    // --- setup ---------------------------------------------------------
    void create_account(const Address& address, uint64_t balance, uint64_t nonce = 0);
    void create_contract(const Address& address, uint64_t balance = 0, uint64_t nonce = 0);
    /// Seeds a storage slot without charging gas or touching counters.
    void seed_storage(const Address& contract, const Key32& slot, uint64_t value);

    /// Installs an account at an explicit indexing (figure-level fixtures).
    /// The alias address routes transfers to this indexing.
    void install_account_at(const NibblePath& indexing, const Account& account,
        std::optional<Address> alias = std::nullopt);

    // --- reads ----------------------------------------------------------
    NibblePath indexing_of(const Address& address) const;
    std::optional<Account> account_by_address(const Address& address) const;
    std::optional<Account> account_at(const NibblePath& indexing) const;
    std::optional<uint64_t> storage_value(const Address& contract, const Key32& slot) const;

    const Trie& state_trie() const { return state_trie_; }
    const Trie* storage_trie(const Address& contract) const;
    const std::map<Address, Trie>& storage_tries() const { return storage_tries_; }

    uint64_t total_wei() const;

    // --- mutations -------------------------------------------------------
    TouchReport apply_transfer(const Address& from, const Address& to, uint64_t amount);
    TouchReport apply_storage_write(
        const Address& contract, const NibblePath& slot_path, Bytes value);
    TouchReport apply_record(const TraceRecord& record);

    /// Applies records in order; rejections are skipped (or abort in strict
    /// mode). Wall time is measured but never part of count comparisons.
    ReplayResult replay(const std::vector<TraceRecord>& trace, bool strict = false);

    // --- block handling ---------------------------------------------------
    uint64_t current_block() const { return current_block_; }
    /// Advances the block counter; closing a block flushes dirty nodes and
    /// returns how many were persisted.
    size_t set_block(uint64_t block);

    // --- access log --------------------------------------------------------
    struct AccessEntry
    {
        std::vector<uint64_t> touch_blocks;  // one entry per access/modification
    };
    const std::map<std::string, AccessEntry>& access_log() const { return access_log_; }
    size_t access_count(const NibblePath& indexing, uint64_t from_block, uint64_t to_block) const;

    /// Addresses this state has seen; lets snapshots be written out even though
    /// the tries only know keccak-derived indexings.
    const std::map<Address, NibblePath>& address_book() const { return address_book_; }
    const std::map<Address, std::set<Key32>>& slot_book() const { return slot_book_; }

    /// Counts contract accounts whose stored storage root disagrees with the
    /// live storage-trie commitment; 0 whenever the cascade invariant holds.
    size_t storage_root_mismatches() const;

private:
    struct OpDetail
    {
        std::set<std::string> positions_state;
        std::set<std::string> positions_storage;
        size_t hashes = 0;
        size_t cache_events = 0;
        std::vector<std::pair<std::string, size_t>> account_leaf_depths;
        std::vector<std::pair<std::string, size_t>> slot_leaf_depths;  // contract|indexing
    };

    std::optional<Account> read_account(const NibblePath& indexing, OpDetail& ops) const;
    void log_access(const NibblePath& indexing);
    void touch_cache(const std::vector<Digest>& digests, OpDetail& ops) const;
    void mark_dirty(const std::vector<Digest>& digests);
    TouchReport do_transfer(
        const Address& from, const Address& to, uint64_t amount, OpDetail& ops);
    TouchReport do_storage_write(
        const Address& contract, const NibblePath& slot_path, Bytes value, OpDetail& ops);

    StateConfig config_;
    Trie state_trie_;
    std::map<Address, Trie> storage_tries_;
    std::unordered_map<Address, NibblePath, AddressHash> indexing_overrides_;
    std::map<Address, NibblePath> address_book_;
    std::map<Address, std::set<Key32>> slot_book_;
    std::map<std::string, AccessEntry> access_log_;

    mutable LruCache<Digest, DigestHash> node_cache_;

    uint64_t current_block_ = 0;
    std::set<Digest> dirty_nodes_;

    ReplayResult last_replay_;
};

}  // namespace mptlab

// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/keccak.hpp>
#include <mptlab/world_state.hpp>

#include <chrono>
#include <cstring>

namespace mptlab
{
namespace
{
std::string state_position_key(const NibblePath& position)
{
    return "s:" + position.to_string();
}

std::string storage_position_key(const Address& contract, const NibblePath& position)
{
    return "c:" + to_hex(contract) + ":" + position.to_string();
}

Bytes encode_slot_value(uint64_t value)
{
    Bytes out;
    for (int i = 7; i >= 0; --i)
    {
        const auto byte = static_cast<uint8_t>(value >> (8 * i));
        if (!out.empty() || byte != 0)
            out.push_back(byte);
    }
    if (out.empty())
        out.push_back(0);
    return out;
}

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
}  // namespace

NibblePath account_indexing(const Address& address)
{
    return path_from_digest(keccak256(address));
}

Key32 slot_id(const Key32& mapping_key, uint64_t mapping_position)
{
    uint8_t buffer[64] = {};
    std::memcpy(buffer, mapping_key.data(), 32);
    for (int i = 0; i < 8; ++i)
        buffer[63 - i] = static_cast<uint8_t>(mapping_position >> (8 * i));
    const Digest inner = keccak256(buffer, sizeof(buffer));
    Key32 id;
    std::memcpy(id.data(), inner.data(), 32);
    return id;
}

NibblePath slot_indexing(const Key32& mapping_key, uint64_t mapping_position)
{
    return path_from_digest(keccak256(slot_id(mapping_key, mapping_position)));
}

WorldState::WorldState(StateConfig config)
  : config_{config}, node_cache_{config.node_cache_capacity}
{
}

void WorldState::create_account(const Address& address, uint64_t balance, uint64_t nonce)
{
    Account account;
    account.balance = balance;
    account.nonce = nonce;
    const NibblePath idx = indexing_of(address);
    address_book_[address] = idx;
    state_trie_.insert(idx, encode_account(account));
}

void WorldState::create_contract(const Address& address, uint64_t balance, uint64_t nonce)
{
    Account account;
    account.balance = balance;
    account.nonce = nonce;
    account.code_hash = keccak256(address);  // stand-in for deployed code
    storage_tries_.try_emplace(address);
    account.storage_root = storage_tries_.at(address).root_commitment();
    const NibblePath idx = indexing_of(address);
    address_book_[address] = idx;
    state_trie_.insert(idx, encode_account(account));
}

void WorldState::seed_storage(const Address& contract, const Key32& slot, uint64_t value)
{
    auto account = account_by_address(contract);
    if (!account)
        throw NotFoundError{"seed_storage: unknown contract"};
    Trie& storage = storage_tries_[contract];
    storage.insert(path_from_digest(keccak256(slot)), encode_slot_value(value));
    account->storage_root = storage.root_commitment();
    state_trie_.insert(indexing_of(contract), encode_account(*account));
    slot_book_[contract].insert(slot);
}

void WorldState::install_account_at(
    const NibblePath& indexing, const Account& account, std::optional<Address> alias)
{
    state_trie_.insert(indexing, encode_account(account));
    if (alias)
    {
        indexing_overrides_[*alias] = indexing;
        address_book_[*alias] = indexing;
    }
}

NibblePath WorldState::indexing_of(const Address& address) const
{
    const auto it = indexing_overrides_.find(address);
    if (it != indexing_overrides_.end())
        return it->second;
    return account_indexing(address);
}

std::optional<Account> WorldState::account_by_address(const Address& address) const
{
    return account_at(indexing_of(address));
}

std::optional<Account> WorldState::account_at(const NibblePath& indexing) const
{
    const auto value = state_trie_.get(indexing);
    if (!value)
        return std::nullopt;
    return decode_account(*value);
}

std::optional<uint64_t> WorldState::storage_value(const Address& contract, const Key32& slot) const
{
    const auto it = storage_tries_.find(contract);
    if (it == storage_tries_.end())
        return std::nullopt;
    const auto value = it->second.get(path_from_digest(keccak256(slot)));
    if (!value)
        return std::nullopt;
    uint64_t out = 0;
    for (const auto byte : *value)
        out = out << 8 | byte;
    return out;
}

const Trie* WorldState::storage_trie(const Address& contract) const
{
    const auto it = storage_tries_.find(contract);
    return it != storage_tries_.end() ? &it->second : nullptr;
}

uint64_t WorldState::total_wei() const
{
    uint64_t total = 0;
    state_trie_.for_each_node(
        [&](const Digest&, const Node& node, const NibblePath&, size_t)
        {
            if (node.kind == NodeKind::Leaf)
                total += decode_account(node.leaf.value).balance;
        });
    return total;
}

std::optional<Account> WorldState::read_account(const NibblePath& indexing, OpDetail& ops) const
{
    PathReport path;
    const auto value = state_trie_.get(indexing, &path);
    touch_cache(path.visited, ops);
    if (!value)
        return std::nullopt;
    return decode_account(*value);
}

void WorldState::log_access(const NibblePath& indexing)
{
    access_log_[indexing.to_string()].touch_blocks.push_back(current_block_);
}

void WorldState::touch_cache(const std::vector<Digest>& digests, OpDetail& ops) const
{
    for (const auto& digest : digests)
    {
        const auto touch = node_cache_.touch(digest);
        ops.cache_events += (touch.miss ? 1 : 0) + (touch.evicted ? 1 : 0);
    }
}

void WorldState::mark_dirty(const std::vector<Digest>& digests)
{
    dirty_nodes_.insert(digests.begin(), digests.end());
}

TouchReport WorldState::apply_transfer(const Address& from, const Address& to, uint64_t amount)
{
    OpDetail ops;
    return do_transfer(from, to, amount, ops);
}

TouchReport WorldState::do_transfer(
    const Address& from, const Address& to, uint64_t amount, OpDetail& ops)
{
    const StopWatch watch;
    TouchReport report;

    const NibblePath from_idx = indexing_of(from);
    const NibblePath to_idx = indexing_of(to);
    address_book_[from] = from_idx;
    address_book_[to] = to_idx;
    const bool self = from_idx == to_idx;

    auto sender = read_account(from_idx, ops);
    if (!sender)
    {
        report.rejected = true;
        report.reject_reason = "unknown sender";
        report.wall_time_s = watch.elapsed();
        return report;
    }
    if (sender->balance < amount)
    {
        report.rejected = true;
        report.reject_reason = "insufficient balance";
        report.wall_time_s = watch.elapsed();
        return report;
    }

    sender->balance -= amount;
    ++sender->nonce;

    if (self)
    {
        sender->balance += amount;
        const auto ins = state_trie_.insert(from_idx, encode_account(*sender));
        touch_cache(ins.written_nodes, ops);
        mark_dirty(ins.written_nodes);
        ops.hashes += ins.hashes_computed;
        for (const auto& pos : ins.written_positions)
            ops.positions_state.insert(state_position_key(pos));
        ops.account_leaf_depths.emplace_back(from_idx.to_string(), ins.depth_after);
        log_access(from_idx);
    }
    else
    {
        auto recipient = read_account(to_idx, ops);
        if (!recipient)
            recipient = Account{};  // absent recipients come to life on first funds
        recipient->balance += amount;

        const auto ins_from = state_trie_.insert(from_idx, encode_account(*sender));
        const auto ins_to = state_trie_.insert(to_idx, encode_account(*recipient));
        for (const auto* ins : {&ins_from, &ins_to})
        {
            touch_cache(ins->written_nodes, ops);
            mark_dirty(ins->written_nodes);
            ops.hashes += ins->hashes_computed;
            for (const auto& pos : ins->written_positions)
                ops.positions_state.insert(state_position_key(pos));
        }
        // the sender leaf can move when the recipient insert splits its path
        PathReport sender_path;
        state_trie_.get(from_idx, &sender_path);
        ops.account_leaf_depths.emplace_back(from_idx.to_string(), sender_path.depth);
        ops.account_leaf_depths.emplace_back(to_idx.to_string(), ins_to.depth_after);
        log_access(from_idx);
        log_access(to_idx);
    }

    report.op1_nodes_updated = ops.positions_state.size() + ops.positions_storage.size();
    report.op2_hashes_recomputed = ops.hashes;
    report.op3_cache_events = ops.cache_events;
    report.gas_charged = config_.transfer_gas;
    report.wall_time_s = watch.elapsed();
    return report;
}

TouchReport WorldState::apply_storage_write(
    const Address& contract, const NibblePath& slot_path, Bytes value)
{
    OpDetail ops;
    return do_storage_write(contract, slot_path, std::move(value), ops);
}

TouchReport WorldState::do_storage_write(
    const Address& contract, const NibblePath& slot_path, Bytes value, OpDetail& ops)
{
    const StopWatch watch;
    TouchReport report;

    const NibblePath contract_idx = indexing_of(contract);
    auto account = read_account(contract_idx, ops);
    if (!account)
    {
        report.rejected = true;
        report.reject_reason = "unknown contract";
        report.wall_time_s = watch.elapsed();
        return report;
    }

    Trie& storage = storage_tries_[contract];
    const auto ins_slot = storage.insert(slot_path, std::move(value));
    touch_cache(ins_slot.written_nodes, ops);
    mark_dirty(ins_slot.written_nodes);
    ops.hashes += ins_slot.hashes_computed;
    for (const auto& pos : ins_slot.written_positions)
        ops.positions_storage.insert(storage_position_key(contract, pos));
    ops.slot_leaf_depths.emplace_back(
        to_hex(contract) + "|" + slot_path.to_string(), ins_slot.depth_after);

    // cascade: the refreshed storage root rewrites the contract's account leaf
    account->storage_root = storage.root_commitment();
    const auto ins_acct = state_trie_.insert(contract_idx, encode_account(*account));
    touch_cache(ins_acct.written_nodes, ops);
    mark_dirty(ins_acct.written_nodes);
    ops.hashes += ins_acct.hashes_computed;
    for (const auto& pos : ins_acct.written_positions)
        ops.positions_state.insert(state_position_key(pos));
    ops.account_leaf_depths.emplace_back(contract_idx.to_string(), ins_acct.depth_after);
    log_access(contract_idx);

    report.op1_nodes_updated = ops.positions_state.size() + ops.positions_storage.size();
    report.op2_hashes_recomputed = ops.hashes;
    report.op3_cache_events = ops.cache_events;
    report.gas_charged = config_.storage_write_gas;
    report.wall_time_s = watch.elapsed();
    return report;
}

TouchReport WorldState::apply_record(const TraceRecord& record)
{
    set_block(record.block);
    if (record.kind == TraceRecord::Kind::Transfer)
        return apply_transfer(record.from, record.to, record.value);
    if (!record.slot)
    {
        TouchReport report;
        report.rejected = true;
        report.reject_reason = "storage write without slot";
        return report;
    }
    slot_book_[record.to].insert(*record.slot);
    return apply_storage_write(
        record.to, path_from_digest(keccak256(*record.slot)), encode_slot_value(record.value));
}

size_t WorldState::set_block(uint64_t block)
{
    if (block == current_block_)
        return 0;
    const size_t flushed = dirty_nodes_.size();
    dirty_nodes_.clear();
    current_block_ = block;
    return flushed;
}

ReplayResult WorldState::replay(const std::vector<TraceRecord>& trace, bool strict)
{
    ReplayResult result;
    BlockAggregate* open_block = nullptr;

    const auto close_block = [&](size_t flushed)
    {
        if (open_block != nullptr)
        {
            open_block->totals.op4_nodes_persisted += flushed;
            result.totals.op4_nodes_persisted += flushed;
        }
    };

    for (const auto& record : trace)
    {
        if (open_block == nullptr || record.block != open_block->block)
        {
            close_block(set_block(record.block));
            result.blocks.push_back(BlockAggregate{record.block, 0, {}});
            open_block = &result.blocks.back();
        }

        OpDetail ops;
        TouchReport report;
        if (record.kind == TraceRecord::Kind::Transfer)
        {
            report = do_transfer(record.from, record.to, record.value, ops);
        }
        else if (!record.slot)
        {
            report.rejected = true;
            report.reject_reason = "storage write without slot";
        }
        else
        {
            slot_book_[record.to].insert(*record.slot);
            report = do_storage_write(record.to,
                path_from_digest(keccak256(*record.slot)), encode_slot_value(record.value), ops);
        }

        if (report.rejected)
        {
            ++result.rejected;
            if (strict)
                throw std::runtime_error{"replay aborted (strict): " + report.reject_reason};
            continue;
        }

        ++result.applied;
        ++open_block->records;
        open_block->totals += report;
        result.totals += report;

        result.state_positions.insert(ops.positions_state.begin(), ops.positions_state.end());
        result.storage_positions.insert(
            ops.positions_storage.begin(), ops.positions_storage.end());
        for (const auto& [key, depth] : ops.account_leaf_depths)
            result.account_depths[key] = depth;
        for (const auto& [key, depth] : ops.slot_leaf_depths)
            result.slot_depths[key] = depth;
    }

    // closing flush: whatever is dirty after the last record persists now
    const size_t flushed = dirty_nodes_.size();
    dirty_nodes_.clear();
    close_block(flushed);

    last_replay_ = result;
    return result;
}

size_t WorldState::access_count(
    const NibblePath& indexing, uint64_t from_block, uint64_t to_block) const
{
    const auto it = access_log_.find(indexing.to_string());
    if (it == access_log_.end())
        return 0;
    size_t count = 0;
    for (const auto block : it->second.touch_blocks)
        if (block >= from_block && block <= to_block)
            ++count;
    return count;
}

size_t WorldState::storage_root_mismatches() const
{
    size_t mismatches = 0;
    for (const auto& [address, storage] : storage_tries_)
    {
        const auto account = account_by_address(address);
        if (!account || account->storage_root != storage.root_commitment())
            ++mismatches;
    }
    return mismatches;
}

}  // namespace mptlab

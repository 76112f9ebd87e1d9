// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/collision.hpp>
#include <mptlab/errors.hpp>
#include <mptlab/keccak.hpp>

#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace mptlab
{
namespace
{
constexpr uint64_t kChunk = 16 * 1024;  // counters claimed per worker round

size_t domain_size(GrindSpec::Domain domain)
{
    return domain == GrindSpec::Domain::Address20 ? 20 : 32;
}

void write_counter(uint8_t* input, size_t offset, uint64_t counter)
{
    for (int i = 0; i < 8; ++i)
        input[offset + 7 - static_cast<size_t>(i)] = static_cast<uint8_t>(counter >> (8 * i));
}

uint64_t leading_nibbles(const Digest& digest, size_t count)
{
    uint64_t word;
    std::memcpy(&word, digest.data(), 8);
    word = __builtin_bswap64(word);
    return word >> (64 - 4 * count);
}

uint64_t prefix_key(const NibblePath& prefix)
{
    const size_t count = std::min<size_t>(prefix.size(), 16);
    uint64_t key = 0;
    for (size_t i = 0; i < count; ++i)
        key = key << 4 | prefix[i];
    return key;
}

bool digest_matches(const Digest& digest, const CollisionTarget& target)
{
    const NibblePath path = NibblePath::from_digest(digest);
    if (!path.starts_with(target.prefix))
        return false;
    if (target.exclude_next && target.prefix.size() < kFullIndexingLen &&
        path[target.prefix.size()] == *target.exclude_next)
        return false;
    return true;
}

struct LengthClass
{
    size_t length = 0;  // nibbles hashed into the lookup key
    std::unordered_map<uint64_t, std::vector<size_t>> by_key;  // key -> target indices
};

struct Registry
{
    std::mutex mutex;
    std::vector<uint64_t> best_counter;  // per target; UINT64_MAX = unmatched
    std::atomic<size_t> unmatched{0};

    explicit Registry(size_t n) : best_counter(n, UINT64_MAX), unmatched{n} {}

    // merges a worker's chunk-local matches; counters only ever decrease
    void merge(const std::vector<std::pair<size_t, uint64_t>>& found)
    {
        const std::lock_guard lock{mutex};
        for (const auto& [idx, counter] : found)
        {
            if (best_counter[idx] == UINT64_MAX)
                unmatched.fetch_sub(1, std::memory_order_relaxed);
            if (counter < best_counter[idx])
                best_counter[idx] = counter;
        }
    }
};

Digest derive_digest(const GrindSpec& spec, const uint8_t* input)
{
    if (spec.domain == GrindSpec::Domain::Address20)
        return keccak256(input, 20);
    uint8_t slot_input[64] = {};
    std::memcpy(slot_input, input, 32);
    for (int i = 0; i < 8; ++i)
        slot_input[63 - i] = static_cast<uint8_t>(spec.mapping_position >> (8 * i));
    const Digest slot = keccak256(slot_input, sizeof(slot_input));
    return keccak256(slot);
}

class Grinder
{
public:
    Grinder(const std::vector<CollisionTarget>& targets, const GrindSpec& spec, uint64_t budget)
      : targets_{targets}, spec_{spec}, budget_{budget}, registry_{targets.size()}
    {
        filter_len_ = 4;
        for (size_t i = 0; i < targets.size(); ++i)
        {
            const auto& prefix = targets[i].prefix;
            const size_t keyed = std::min<size_t>(prefix.size(), 16);
            filter_len_ = std::min(filter_len_, keyed);
            auto it = std::find_if(classes_.begin(), classes_.end(),
                [&](const LengthClass& c) { return c.length == keyed; });
            if (it == classes_.end())
            {
                classes_.push_back(LengthClass{keyed, {}});
                it = std::prev(classes_.end());
            }
            it->by_key[prefix_key(prefix)].push_back(i);
        }
        // leading-nibble prefilter: almost every candidate digest is rejected
        // with a single cache-resident bit test
        filter_.assign((size_t{1} << (4 * filter_len_)) / 64 + 1, 0);
        for (const auto& target : targets)
        {
            uint64_t key = 0;
            for (size_t i = 0; i < filter_len_; ++i)
                key = key << 4 | target.prefix[i];
            filter_[key / 64] |= uint64_t{1} << (key % 64);
        }
    }

    void run()
    {
        unsigned workers = spec_.worker_count;
        if (workers == 0)
            workers = std::max(1u, std::thread::hardware_concurrency());
        if (workers == 1)
        {
            work();
            return;
        }
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back([this] { work(); });
        for (auto& t : pool)
            t.join();
    }

    MultiCollisionResult collect() const
    {
        MultiCollisionResult out;
        uint64_t last_needed = 0;
        bool all = true;
        for (size_t i = 0; i < targets_.size(); ++i)
        {
            const uint64_t counter = registry_.best_counter[i];
            if (counter == UINT64_MAX)
            {
                all = false;
                continue;
            }
            CollisionResult r;
            r.counter = counter;
            r.trials = counter - spec_.start_counter + 1;
            r.input = spec_.base;
            write_counter(r.input.data(), spec_.counter_offset, counter);
            r.digest = derive_digest(spec_, r.input.data());
            r.matched = targets_[i];
            r.matched_len = targets_[i].prefix.size();
            last_needed = std::max(last_needed, r.trials);
            out.matched.emplace(targets_[i].tag, std::move(r));
        }
        out.complete = all;
        out.total_trials = all ? last_needed : budget_;
        return out;
    }

private:
    void work()
    {
        uint8_t inputs[kKeccakBatch][64];
        const uint8_t* input_ptrs[kKeccakBatch];
        uint8_t slot_inputs[kKeccakBatch][64];
        const uint8_t* slot_ptrs[kKeccakBatch];
        Digest digests[kKeccakBatch];
        const size_t input_size = domain_size(spec_.domain);
        for (size_t j = 0; j < kKeccakBatch; ++j)
        {
            std::memset(inputs[j], 0, sizeof(inputs[j]));
            std::memcpy(inputs[j], spec_.base.data(), input_size);
            if (spec_.domain == GrindSpec::Domain::MappingKey32)
                for (int i = 0; i < 8; ++i)
                    inputs[j][63 - i] = static_cast<uint8_t>(spec_.mapping_position >> (8 * i));
            input_ptrs[j] = inputs[j];
            std::memset(slot_inputs[j], 0, sizeof(slot_inputs[j]));
            slot_ptrs[j] = slot_inputs[j];
        }

        std::vector<std::pair<size_t, uint64_t>> found;
        while (true)
        {
            if (registry_.unmatched.load(std::memory_order_relaxed) == 0)
                return;
            const uint64_t chunk_begin = next_chunk_.fetch_add(kChunk, std::memory_order_relaxed);
            if (chunk_begin >= budget_)
                return;
            const uint64_t chunk_end = std::min(budget_, chunk_begin + kChunk);
            found.clear();

            uint64_t offset = chunk_begin;
            while (offset < chunk_end)
            {
                const size_t lanes =
                    static_cast<size_t>(std::min<uint64_t>(kKeccakBatch, chunk_end - offset));
                for (size_t j = 0; j < lanes; ++j)
                    write_counter(inputs[j], spec_.counter_offset,
                        spec_.start_counter + offset + j);

                if (spec_.domain == GrindSpec::Domain::Address20)
                {
                    keccak256_batch(input_ptrs, 20, digests);
                }
                else
                {
                    // key || position -> slot id, then slot id -> indexing digest
                    keccak256_batch(input_ptrs, 64, digests);
                    for (size_t j = 0; j < lanes; ++j)
                        std::memcpy(slot_inputs[j], digests[j].data(), 32);
                    keccak256_batch(slot_ptrs, 32, digests);
                }

                for (size_t j = 0; j < lanes; ++j)
                    match_digest(digests[j], spec_.start_counter + offset + j, found);
                offset += lanes;
            }

            if (!found.empty())
                registry_.merge(found);
        }
    }

    void match_digest(
        const Digest& digest, uint64_t counter, std::vector<std::pair<size_t, uint64_t>>& found)
    {
        const uint64_t head = leading_nibbles(digest, filter_len_);
        if ((filter_[head / 64] & (uint64_t{1} << (head % 64))) == 0)
            return;
        for (const auto& cls : classes_)
        {
            const uint64_t key = leading_nibbles(digest, cls.length);
            const auto it = cls.by_key.find(key);
            if (it == cls.by_key.end())
                continue;
            for (const size_t idx : it->second)
                if (digest_matches(digest, targets_[idx]))
                    found.emplace_back(idx, counter);
        }
    }

    const std::vector<CollisionTarget>& targets_;
    const GrindSpec& spec_;
    const uint64_t budget_;
    std::vector<LengthClass> classes_;
    size_t filter_len_ = 4;
    std::vector<uint64_t> filter_;
    Registry registry_;
    std::atomic<uint64_t> next_chunk_{0};
};
}  // namespace

GrindSpec GrindSpec::addresses(uint64_t start_counter, unsigned workers)
{
    GrindSpec spec;
    spec.domain = Domain::Address20;
    spec.base = Bytes(20, 0);
    spec.counter_offset = 12;
    spec.start_counter = start_counter;
    spec.worker_count = workers;
    return spec;
}

GrindSpec GrindSpec::mapping_keys(uint64_t position, uint64_t start_counter, unsigned workers)
{
    GrindSpec spec;
    spec.domain = Domain::MappingKey32;
    spec.base = Bytes(32, 0);
    spec.counter_offset = 24;
    spec.start_counter = start_counter;
    spec.worker_count = workers;
    spec.mapping_position = position;
    return spec;
}

MultiCollisionResult collide_multi(
    const std::vector<CollisionTarget>& targets, const GrindSpec& spec, uint64_t budget)
{
    if (targets.empty())
        throw StructuralError{"no collision targets"};
    if (budget == 0)
        throw DomainError{"collision budget must be positive"};
    if (spec.base.size() != domain_size(spec.domain))
        throw StructuralError{"grind template size does not fit the domain"};
    if (spec.counter_offset + 8 > spec.base.size())
        throw StructuralError{"counter range does not fit the template"};
    std::vector<std::string> tags;
    for (const auto& target : targets)
    {
        if (target.prefix.empty())
            throw StructuralError{"collision target prefix must be non-empty"};
        if (target.prefix.size() > kFullIndexingLen)
            throw StructuralError{"collision target prefix too long"};
        tags.push_back(target.tag);
    }
    std::sort(tags.begin(), tags.end());
    if (std::adjacent_find(tags.begin(), tags.end()) != tags.end())
        throw StructuralError{"collision target tags must be distinct"};

    Grinder grinder{targets, spec, budget};
    grinder.run();
    return grinder.collect();
}

std::optional<CollisionResult> collide_single(
    const CollisionTarget& target, const GrindSpec& spec, uint64_t budget)
{
    auto multi = collide_multi({target}, spec, budget);
    const auto it = multi.matched.find(target.tag);
    if (it == multi.matched.end())
        return std::nullopt;
    return it->second;
}

double theta_for_prefix_len(size_t prefix_len)
{
    return std::pow(16.0, static_cast<double>(prefix_len));
}

double expected_trials(double theta, double phi)
{
    if (phi < 1.0)
        throw DomainError{"target count must be at least 1"};
    if (theta <= 0.0)
        throw DomainError{"theta must be positive"};
    if (phi == 1.0)
        return theta;  // the asymptotic formula degenerates at one target
    return theta * std::log(phi);
}

}  // namespace mptlab

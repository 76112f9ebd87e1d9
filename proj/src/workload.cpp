// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/keccak.hpp>
#include <mptlab/workload.hpp>

#include <cmath>
#include <cstring>
#include <random>
#include <unordered_set>

namespace mptlab
{
namespace
{
class Sampler
{
public:
    Sampler(WorkloadSpec::Distribution distribution, double exponent, size_t population)
    {
        if (distribution == WorkloadSpec::Distribution::Zipf)
        {
            cdf_.reserve(population);
            double total = 0;
            for (size_t rank = 1; rank <= population; ++rank)
            {
                total += 1.0 / std::pow(static_cast<double>(rank), exponent);
                cdf_.push_back(total);
            }
            for (auto& v : cdf_)
                v /= total;
        }
        population_ = population;
    }

    size_t draw(std::mt19937_64& rng) const
    {
        if (cdf_.empty())
            return static_cast<size_t>(rng() % population_);
        const double u =
            static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<size_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
    size_t population_ = 1;
};

Address random_address(std::mt19937_64& rng)
{
    Address a;
    for (size_t i = 0; i < a.size(); i += 4)
    {
        const auto word = static_cast<uint32_t>(rng());
        std::memcpy(a.data() + i, &word, 4);
    }
    return a;
}

Key32 random_key(std::mt19937_64& rng)
{
    Key32 k;
    for (size_t i = 0; i < k.size(); i += 8)
    {
        const uint64_t word = rng();
        std::memcpy(k.data() + i, &word, 8);
    }
    return k;
}

uint16_t bucket4(const Address& address)
{
    const Digest digest = keccak256(address);
    return static_cast<uint16_t>(digest[0] << 8 | digest[1]);
}
}  // namespace

WorkloadSpec::Distribution distribution_from_string(const std::string& name)
{
    if (name == "uniform")
        return WorkloadSpec::Distribution::Uniform;
    if (name.rfind("zipf", 0) == 0)
        return WorkloadSpec::Distribution::Zipf;
    throw DomainError{"unknown access distribution: " + name};
}

Workload generate_workload(const WorkloadSpec& spec)
{
    if (spec.accounts < 2)
        throw DomainError{"workload needs at least two accounts"};
    if (spec.distribution == WorkloadSpec::Distribution::Zipf && spec.zipf_exponent <= 0)
        throw DomainError{"zipf exponent must be positive"};
    if (spec.contracts > 0 && spec.slots_per_contract == 0)
        throw DomainError{"contracts need at least one slot each"};
    if (spec.spread_account_prefixes && spec.accounts > 60'000)
        throw DomainError{"prefix spreading supports at most 60000 accounts"};
    if (spec.storage_write_fraction < 0 || spec.storage_write_fraction > 1)
        throw DomainError{"storage write fraction must lie in [0, 1]"};

    Workload workload;
    workload.spec = spec;
    std::mt19937_64 rng{spec.seed};

    std::unordered_set<uint16_t> used_buckets;
    std::unordered_set<std::string> used_addresses;
    workload.accounts.reserve(spec.accounts);
    while (workload.accounts.size() < spec.accounts)
    {
        const Address address = random_address(rng);
        if (!used_addresses.insert(to_hex(address)).second)
            continue;
        if (spec.spread_account_prefixes && !used_buckets.insert(bucket4(address)).second)
            continue;
        workload.accounts.push_back(address);
        workload.state.create_account(address, spec.initial_balance);
    }

    workload.contracts.reserve(spec.contracts);
    workload.contract_slots.resize(spec.contracts);
    for (size_t i = 0; i < spec.contracts; ++i)
    {
        Address address = random_address(rng);
        while (!used_addresses.insert(to_hex(address)).second ||
               (spec.spread_account_prefixes && !used_buckets.insert(bucket4(address)).second))
            address = random_address(rng);
        workload.contracts.push_back(address);
        workload.state.create_contract(address);
        auto& slots = workload.contract_slots[i];
        slots.reserve(spec.slots_per_contract);
        for (size_t s = 0; s < spec.slots_per_contract; ++s)
        {
            slots.push_back(random_key(rng));
            workload.state.seed_storage(address, slots.back(), 1 + rng() % 100);
        }
    }

    const Sampler account_sampler{spec.distribution, spec.zipf_exponent, spec.accounts};
    const Sampler slot_sampler{spec.distribution, spec.zipf_exponent,
        spec.slots_per_contract == 0 ? 1 : spec.slots_per_contract};

    workload.trace.reserve(spec.blocks * spec.txs_per_block);
    for (size_t block = 1; block <= spec.blocks; ++block)
    {
        for (size_t tx = 0; tx < spec.txs_per_block; ++tx)
        {
            TraceRecord record;
            record.block = block;
            const bool storage =
                !workload.contracts.empty() &&
                static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0) <
                    spec.storage_write_fraction;
            if (storage)
            {
                const size_t c = rng() % workload.contracts.size();
                record.kind = TraceRecord::Kind::StorageWrite;
                record.from = workload.accounts[account_sampler.draw(rng)];
                record.to = workload.contracts[c];
                record.slot = workload.contract_slots[c][slot_sampler.draw(rng)];
                record.value = 1 + rng() % 100;
            }
            else
            {
                record.kind = TraceRecord::Kind::Transfer;
                const size_t from = account_sampler.draw(rng);
                size_t to = account_sampler.draw(rng);
                while (to == from)
                    to = account_sampler.draw(rng);
                record.from = workload.accounts[from];
                record.to = workload.accounts[to];
                record.value = 1 + rng() % 100;
            }
            workload.trace.push_back(record);
        }
    }

    return workload;
}

}  // namespace mptlab

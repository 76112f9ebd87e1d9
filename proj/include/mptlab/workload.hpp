// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/world_state.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mptlab
{
struct WorkloadSpec
{
    size_t accounts = 1'000;
    size_t contracts = 0;
    size_t slots_per_contract = 0;
    size_t blocks = 10;
    size_t txs_per_block = 100;

    enum class Distribution
    {
        Uniform,
        Zipf,
    };
    Distribution distribution = Distribution::Uniform;
    double zipf_exponent = 1.0;  // > 0

    uint64_t seed = 1;

    /// Draws account addresses so every account indexing owns its 4-nibble
    /// bucket. This bounds the account-trie depth, which in turn bounds the
    /// prefix lengths an attack has to grind.
    bool spread_account_prefixes = false;

    double storage_write_fraction = 0.25;  // share of records, when contracts exist
    uint64_t initial_balance = 1'000'000'000;
};

struct Workload
{
    WorkloadSpec spec;
    WorldState state;
    std::vector<TraceRecord> trace;
    std::vector<Address> accounts;
    std::vector<Address> contracts;
    std::vector<std::vector<Key32>> contract_slots;
};

/// Builds the initial state and a trace touching it. Deterministic for a fixed
/// spec: equal seeds give byte-identical traces and equal state commitments.
Workload generate_workload(const WorkloadSpec& spec);

WorkloadSpec::Distribution distribution_from_string(const std::string& name);

}  // namespace mptlab

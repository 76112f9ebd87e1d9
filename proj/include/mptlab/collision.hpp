// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/bytes.hpp>
#include <mptlab/nibbles.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mptlab
{
/// A leading-nibble pattern to collide. When `exclude_next` is set a digest
/// matches only if the nibble right after the prefix differs from it, which
/// pins the common-prefix length exactly (splitting plans depend on that).
struct CollisionTarget
{
    NibblePath prefix;
    std::string tag;
    std::optional<Nibble> exclude_next;
};

struct GrindSpec
{
    enum class Domain
    {
        Address20,     // craft 20-byte account addresses
        MappingKey32,  // craft 32-byte mapping keys; indexing needs two hashes
    };

    Domain domain = Domain::Address20;
    Bytes base;                   // input template; counter bytes overwrite its tail
    size_t counter_offset = 12;   // big-endian 8-byte counter position
    uint64_t start_counter = 0;
    unsigned worker_count = 1;    // 0 = hardware concurrency
    uint64_t mapping_position = 0;

    static GrindSpec addresses(uint64_t start_counter = 0, unsigned workers = 1);
    static GrindSpec mapping_keys(
        uint64_t position, uint64_t start_counter = 0, unsigned workers = 1);
};

struct CollisionResult
{
    Bytes input;      // crafted address or mapping key
    Digest digest;    // resulting indexing digest
    CollisionTarget matched;
    size_t matched_len = 0;
    uint64_t trials = 0;   // candidates a sequential scan would examine to find this
    uint64_t counter = 0;  // winning counter value
};

struct MultiCollisionResult
{
    std::map<std::string, CollisionResult> matched;  // keyed by target tag
    uint64_t total_trials = 0;  // sequential-equivalent candidate count
    bool complete = false;

    const CollisionResult* find(const std::string& tag) const
    {
        const auto it = matched.find(tag);
        return it != matched.end() ? &it->second : nullptr;
    }
};

/// Grinds candidate inputs until every target is matched or the budget is
/// exhausted. Matches are canonical in counter order: results are identical
/// for any worker count.
MultiCollisionResult collide_multi(
    const std::vector<CollisionTarget>& targets, const GrindSpec& spec, uint64_t budget);

std::optional<CollisionResult> collide_single(
    const CollisionTarget& target, const GrindSpec& spec, uint64_t budget);

/// Expected candidates for one target with a prefix of the given length.
double theta_for_prefix_len(size_t prefix_len);

/// Expected total candidates to match `phi` targets simultaneously when one
/// target alone costs `theta`. The single-target case returns `theta` itself.
double expected_trials(double theta, double phi);

/// Cost-model inputs for the grind stage.
struct TrialModel
{
    double theta = 0;        // expected candidates per target
    double hash_rate = 0;    // candidate evaluations per worker-hour
    double targets = 1;      // phi

    double expected_total_trials() const { return expected_trials(theta, targets); }
    double single_worker_hours() const { return expected_total_trials() / hash_rate; }
};

}  // namespace mptlab

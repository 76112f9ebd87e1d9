// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/bytes.hpp>

#include <cstddef>

namespace mptlab
{
/// keccak-256 (original pad 0x01, as used for state indexings), not NIST SHA3-256.
void keccak256(const uint8_t* data, size_t size, Digest& out) noexcept;

inline Digest keccak256(const uint8_t* data, size_t size) noexcept
{
    Digest d;
    keccak256(data, size, d);
    return d;
}

inline Digest keccak256(const Bytes& data) noexcept
{
    return keccak256(data.data(), data.size());
}

template <size_t N>
Digest keccak256(const std::array<uint8_t, N>& data) noexcept
{
    return keccak256(data.data(), N);
}

/// keccak256 of the empty input; doubles as the empty-trie commitment and the
/// hash of empty account code.
const Digest& keccak256_empty() noexcept;

/// Width of one keccak256_batch call.
inline constexpr size_t kKeccakBatch = 8;

/// Hashes 8 equally-sized single-block inputs (size <= 135) at once.
/// Uses an 8-lane AVX-512 implementation when the CPU supports it and falls
/// back to scalar hashing otherwise; results are identical either way.
void keccak256_batch(const uint8_t* const inputs[kKeccakBatch], size_t size,
    Digest outs[kKeccakBatch]) noexcept;

}  // namespace mptlab

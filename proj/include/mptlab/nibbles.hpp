// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/bytes.hpp>
#include <mptlab/errors.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mptlab
{
/// Half-byte trie symbol, always in [0, 15].
using Nibble = uint8_t;

/// Full leaf indexings have exactly this many nibbles.
inline constexpr size_t kFullIndexingLen = 64;

/// A sequence of nibbles addressing nodes in the trie. Full indexings are
/// 64 nibbles; node remainders and extension prefixes may be shorter.
class NibblePath
{
public:
    NibblePath() = default;

    explicit NibblePath(std::vector<Nibble> nibbles);

    /// Parses a hex string of nibbles, e.g. "111d12f".
    static NibblePath from_string(std::string_view hex);

    /// Unpacks a 32-byte digest into 64 nibbles, high nibble of byte 0 first.
    static NibblePath from_digest(const Digest& digest);

    /// Sub-path constructor used for splitting.
    NibblePath slice(size_t pos, size_t count) const;
    NibblePath suffix(size_t pos) const { return slice(pos, size() - pos); }

    /// Right-pads with zero nibbles up to the full indexing length; figure-level
    /// short keys become constructible as real leaves this way.
    NibblePath padded_to_full() const;

    NibblePath concat(const NibblePath& other) const;
    NibblePath append(Nibble n) const;

    size_t size() const { return nibbles_.size(); }
    bool empty() const { return nibbles_.empty(); }
    Nibble operator[](size_t i) const { return nibbles_[i]; }
    const std::vector<Nibble>& nibbles() const { return nibbles_; }

    bool operator==(const NibblePath&) const = default;
    bool operator<(const NibblePath& other) const { return nibbles_ < other.nibbles_; }

    bool starts_with(const NibblePath& prefix) const;

    /// Nibble count shared with `other` from position 0.
    size_t common_prefix_len(const NibblePath& other) const;

    std::string to_string() const;

    /// Packs pairs of nibbles back into bytes (size must be even).
    Bytes packed() const;

private:
    std::vector<Nibble> nibbles_;
};

/// Common prefix length of two paths starting at given offsets.
size_t common_prefix_len(const NibblePath& a, size_t a_off, const NibblePath& b, size_t b_off);

/// Converts a raw 32-byte value into its 64-nibble indexing.
/// Throws StructuralError unless the input is exactly 32 bytes.
NibblePath path_from_digest(const Bytes& digest);
NibblePath path_from_digest(const Digest& digest);

}  // namespace mptlab

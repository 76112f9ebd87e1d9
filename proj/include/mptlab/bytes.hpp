// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mptlab
{
using Bytes = std::vector<uint8_t>;

/// 32-byte keccak256 digest / commitment.
struct Digest : std::array<uint8_t, 32>
{
    bool is_zero() const
    {
        for (auto b : *this)
            if (b != 0)
                return false;
        return true;
    }
};

/// 20-byte account address.
struct Address : std::array<uint8_t, 20>
{
};

/// 32-byte storage slot id / mapping key.
struct Key32 : std::array<uint8_t, 32>
{
};

struct DigestHash
{
    size_t operator()(const Digest& d) const noexcept
    {
        size_t h;
        static_assert(sizeof(h) <= 32);
        __builtin_memcpy(&h, d.data(), sizeof(h));
        return h;
    }
};

struct AddressHash
{
    size_t operator()(const Address& a) const noexcept
    {
        size_t h = 1469598103934665603ull;
        for (auto b : a)
            h = (h ^ b) * 1099511628211ull;
        return h;
    }
};

std::string to_hex(const uint8_t* data, size_t size);

inline std::string to_hex(const Bytes& b)
{
    return to_hex(b.data(), b.size());
}

template <size_t N>
std::string to_hex(const std::array<uint8_t, N>& a)
{
    return to_hex(a.data(), N);
}

/// Decodes a hex string (optional 0x prefix). Throws std::invalid_argument on bad input.
Bytes from_hex(std::string_view hex);

Digest digest_from_hex(std::string_view hex);
Address address_from_hex(std::string_view hex);
Key32 key32_from_hex(std::string_view hex);

}  // namespace mptlab

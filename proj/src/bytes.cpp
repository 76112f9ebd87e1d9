// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/bytes.hpp>

#include <stdexcept>

namespace mptlab
{
namespace
{
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string to_hex(const uint8_t* data, size_t size)
{
    std::string out;
    out.reserve(size * 2);
    for (size_t i = 0; i < size; ++i)
    {
        out.push_back(kHexDigits[data[i] >> 4]);
        out.push_back(kHexDigits[data[i] & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
        hex.remove_prefix(2);
    if (hex.size() % 2 != 0)
        throw std::invalid_argument{"hex string has odd length"};
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
    {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument{"invalid hex digit"};
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

namespace
{
template <typename T>
T fixed_from_hex(std::string_view hex, const char* what)
{
    const auto bytes = from_hex(hex);
    T out{};
    if (bytes.size() != out.size())
        throw std::invalid_argument{std::string{what} + ": expected " +
                                    std::to_string(out.size()) + " bytes, got " +
                                    std::to_string(bytes.size())};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}
}  // namespace

Digest digest_from_hex(std::string_view hex)
{
    return fixed_from_hex<Digest>(hex, "digest");
}

Address address_from_hex(std::string_view hex)
{
    return fixed_from_hex<Address>(hex, "address");
}

Key32 key32_from_hex(std::string_view hex)
{
    return fixed_from_hex<Key32>(hex, "key32");
}

}  // namespace mptlab

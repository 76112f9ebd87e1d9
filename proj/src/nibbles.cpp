// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/nibbles.hpp>

#include <algorithm>

namespace mptlab
{
NibblePath::NibblePath(std::vector<Nibble> nibbles) : nibbles_{std::move(nibbles)}
{
    for (const auto n : nibbles_)
        if (n > 15)
            throw StructuralError{"nibble out of range"};
}

NibblePath NibblePath::from_string(std::string_view hex)
{
    std::vector<Nibble> out;
    out.reserve(hex.size());
    for (const char c : hex)
    {
        int v = -1;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        if (v < 0)
            throw StructuralError{"invalid nibble character"};
        out.push_back(static_cast<Nibble>(v));
    }
    return NibblePath{std::move(out)};
}

NibblePath NibblePath::from_digest(const Digest& digest)
{
    std::vector<Nibble> out;
    out.reserve(kFullIndexingLen);
    for (const auto byte : digest)
    {
        out.push_back(byte >> 4);
        out.push_back(byte & 0x0f);
    }
    return NibblePath{std::move(out)};
}

NibblePath NibblePath::slice(size_t pos, size_t count) const
{
    if (pos + count > nibbles_.size())
        throw StructuralError{"nibble path slice out of range"};
    return NibblePath{{nibbles_.begin() + static_cast<ptrdiff_t>(pos),
                       nibbles_.begin() + static_cast<ptrdiff_t>(pos + count)}};
}

NibblePath NibblePath::padded_to_full() const
{
    if (nibbles_.size() > kFullIndexingLen)
        throw StructuralError{"path longer than a full indexing"};
    auto out = nibbles_;
    out.resize(kFullIndexingLen, 0);
    return NibblePath{std::move(out)};
}

NibblePath NibblePath::concat(const NibblePath& other) const
{
    auto out = nibbles_;
    out.insert(out.end(), other.nibbles_.begin(), other.nibbles_.end());
    return NibblePath{std::move(out)};
}

NibblePath NibblePath::append(Nibble n) const
{
    auto out = nibbles_;
    out.push_back(n);
    return NibblePath{std::move(out)};
}

bool NibblePath::starts_with(const NibblePath& prefix) const
{
    return prefix.size() <= size() &&
           std::equal(prefix.nibbles_.begin(), prefix.nibbles_.end(), nibbles_.begin());
}

size_t NibblePath::common_prefix_len(const NibblePath& other) const
{
    const size_t limit = std::min(size(), other.size());
    size_t i = 0;
    while (i < limit && nibbles_[i] == other.nibbles_[i])
        ++i;
    return i;
}

std::string NibblePath::to_string() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(size());
    for (const auto n : nibbles_)
        out.push_back(digits[n]);
    return out;
}

Bytes NibblePath::packed() const
{
    if (size() % 2 != 0)
        throw StructuralError{"cannot pack odd nibble count"};
    Bytes out;
    out.reserve(size() / 2);
    for (size_t i = 0; i < size(); i += 2)
        out.push_back(static_cast<uint8_t>(nibbles_[i] << 4 | nibbles_[i + 1]));
    return out;
}

size_t common_prefix_len(const NibblePath& a, size_t a_off, const NibblePath& b, size_t b_off)
{
    const size_t limit = std::min(a.size() - a_off, b.size() - b_off);
    size_t i = 0;
    while (i < limit && a[a_off + i] == b[b_off + i])
        ++i;
    return i;
}

NibblePath path_from_digest(const Bytes& digest)
{
    if (digest.size() != 32)
        throw StructuralError{"indexing source must be exactly 32 bytes"};
    Digest d;
    std::copy(digest.begin(), digest.end(), d.begin());
    return NibblePath::from_digest(d);
}

NibblePath path_from_digest(const Digest& digest)
{
    return NibblePath::from_digest(digest);
}

}  // namespace mptlab

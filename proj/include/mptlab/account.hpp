// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/bytes.hpp>
#include <mptlab/keccak.hpp>

#include <cstdint>

namespace mptlab
{
struct Account
{
    uint64_t balance = 0;  // wei
    uint64_t nonce = 0;
    Digest code_hash = keccak256_empty();
    Digest storage_root = keccak256_empty();

    bool is_contract() const { return code_hash != keccak256_empty(); }
    bool operator==(const Account&) const = default;
};

/// Fixed-width account serialization stored in state-trie leaves.
Bytes encode_account(const Account& account);
Account decode_account(const Bytes& data);

}  // namespace mptlab

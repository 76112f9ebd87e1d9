// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/account.hpp>
#include <mptlab/errors.hpp>

#include <cstring>

namespace mptlab
{
Bytes encode_account(const Account& account)
{
    Bytes out(80);
    for (int i = 0; i < 8; ++i)
    {
        out[static_cast<size_t>(i)] = static_cast<uint8_t>(account.balance >> (8 * i));
        out[static_cast<size_t>(8 + i)] = static_cast<uint8_t>(account.nonce >> (8 * i));
    }
    std::memcpy(out.data() + 16, account.code_hash.data(), 32);
    std::memcpy(out.data() + 48, account.storage_root.data(), 32);
    return out;
}

Account decode_account(const Bytes& data)
{
    if (data.size() != 80)
        throw StructuralError{"account record must be 80 bytes"};
    Account account;
    account.balance = 0;
    account.nonce = 0;
    for (int i = 7; i >= 0; --i)
    {
        account.balance = account.balance << 8 | data[static_cast<size_t>(i)];
        account.nonce = account.nonce << 8 | data[static_cast<size_t>(8 + i)];
    }
    std::memcpy(account.code_hash.data(), data.data() + 16, 32);
    std::memcpy(account.storage_root.data(), data.data() + 48, 32);
    return account;
}

}  // namespace mptlab

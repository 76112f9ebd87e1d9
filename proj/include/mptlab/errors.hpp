// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mptlab
{
/// Malformed input: wrong digest length, bad indexing length, invalid nibble.
struct StructuralError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

/// Lookup of a key that is required to be present.
struct NotFoundError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Model input outside the mathematical domain (zero denominator, ln of < 1, ...).
struct DomainError : std::domain_error
{
    using std::domain_error::domain_error;
};

}  // namespace mptlab

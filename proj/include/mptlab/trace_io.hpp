// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mptlab/world_state.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace mptlab
{
// Trace files are line-delimited records with a fixed field order:
//   kind from to slot value block
// kind is `transfer` or `storage_write`; from/to are 0x-hex addresses; slot is
// a 0x-hex 32-byte slot id or `-` for transfers; value and block are decimal.

std::string format_trace_record(const TraceRecord& record);
TraceRecord parse_trace_record(const std::string& line);

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace(std::istream& in);

void write_trace_file(const std::string& path, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_file(const std::string& path);

}  // namespace mptlab

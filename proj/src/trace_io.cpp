// mptlab: state-storage stress laboratory for Merkle Patricia Tries
// Copyright 2026 The mptlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <mptlab/errors.hpp>
#include <mptlab/trace_io.hpp>

#include <fstream>
#include <sstream>

namespace mptlab
{
std::string format_trace_record(const TraceRecord& record)
{
    std::ostringstream out;
    out << (record.kind == TraceRecord::Kind::Transfer ? "transfer" : "storage_write") << ' '
        << "0x" << to_hex(record.from) << ' ' << "0x" << to_hex(record.to) << ' ';
    if (record.slot)
        out << "0x" << to_hex(*record.slot);
    else
        out << '-';
    out << ' ' << record.value << ' ' << record.block;
    return out.str();
}

TraceRecord parse_trace_record(const std::string& line)
{
    std::istringstream in{line};
    std::string kind, from, to, slot, value, block;
    if (!(in >> kind >> from >> to >> slot >> value >> block))
        throw StructuralError{"malformed trace record: " + line};

    TraceRecord record;
    if (kind == "transfer")
        record.kind = TraceRecord::Kind::Transfer;
    else if (kind == "storage_write")
        record.kind = TraceRecord::Kind::StorageWrite;
    else
        throw StructuralError{"unknown trace record kind: " + kind};

    record.from = address_from_hex(from);
    record.to = address_from_hex(to);
    if (slot != "-")
        record.slot = key32_from_hex(slot);
    if (record.kind == TraceRecord::Kind::StorageWrite && !record.slot)
        throw StructuralError{"storage write record lacks a slot"};
    if (record.kind == TraceRecord::Kind::Transfer && record.slot)
        throw StructuralError{"transfer record carries a slot"};
    record.value = std::stoull(value);
    record.block = std::stoull(block);
    return record;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace)
{
    for (const auto& record : trace)
        out << format_trace_record(record) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& in)
{
    std::vector<TraceRecord> trace;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        trace.push_back(parse_trace_record(line));
    }
    return trace;
}

void write_trace_file(const std::string& path, const std::vector<TraceRecord>& trace)
{
    std::ofstream out{path};
    if (!out)
        throw std::runtime_error{"cannot open trace file for writing: " + path};
    write_trace(out, trace);
}

std::vector<TraceRecord> read_trace_file(const std::string& path)
{
    std::ifstream in{path};
    if (!in)
        throw std::runtime_error{"cannot open trace file: " + path};
    return read_trace(in);
}

}  // namespace mptlab

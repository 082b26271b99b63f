#pragma once

#include <iosfwd>
#include <string>

#include "wftas/core.hpp"

namespace wftas {

// One access per line, fields in the order
// t, pid, op_seq, op, action, reg, value, coin, pre, post, events.
std::string to_jsonl(const Access& a);
void write_jsonl(std::ostream& out, const Trace& trace);

// Throws TraceError (Malformed) naming the offending line.
Access parse_jsonl_line(const std::string& line);
Trace read_jsonl(std::istream& in);

}  // namespace wftas

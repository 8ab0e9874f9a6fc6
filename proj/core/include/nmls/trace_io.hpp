#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nmls/trace.hpp"

namespace nmls {

// Line-oriented JSON: the first line is a header object ("type":"header")
// holding config, identifiers and totals; each following line is one
// iteration record ("type":"iteration"). Doubles are written in shortest
// round-trip form; non-finite values as the strings "inf", "-inf", "nan".

void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

/// Throws Error(Io) when the file cannot be opened, Error(Parse) on malformed content.
void save_trace(const std::filesystem::path& path, const Trace& trace);
Trace load_trace(const std::filesystem::path& path);

std::string trace_to_string(const Trace& trace);
Trace trace_from_string(const std::string& text);

}  // namespace nmls

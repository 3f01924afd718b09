#pragma once

#include <iosfwd>
#include <string>

#include "graph.hpp"

namespace cimcut {

// Reads the standard G-set text format: a "N m" header line followed by m
// edge lines "i j w" with 1-based vertex indices. Blank lines are skipped and
// CRLF endings are tolerated. Throws ParseError naming the offending line.
Graph parse_gset(std::istream& in);
Graph parse_gset_string(const std::string& text);
Graph parse_gset_file(const std::string& path);

// Inverse of parse_gset: parse_gset(write_gset(g)) reproduces g exactly,
// including edge order and weight bits.
void write_gset(const Graph& g, std::ostream& out);
std::string write_gset_string(const Graph& g);
void write_gset_file(const Graph& g, const std::string& path);

}  // namespace cimcut

#pragma once

#include <iosfwd>
#include <string>

#include "fracdim/lattice.hpp"

namespace fracdim {

/// Versioned text format:
///
///   fracdim-graph v1 <family> <schedule-spec|none> <level> <edge_rule>
///   V <count>
///   <a> <b>            (one line per vertex, index order)
///   E <count>
///   <i> <j>            (one line per edge, i < j, sorted)
void write_graph(std::ostream& out, const FractalGraph& g);
std::string graph_to_string(const FractalGraph& g);

/// Parses and validates a graph file; leading lines starting with '#' are
/// skipped. Throws InvalidArgument on malformed input.
FractalGraph read_graph(std::istream& in);
FractalGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const FractalGraph& g);

}  // namespace fracdim

#pragma once

#include <iosfwd>
#include <string>

#include "bisc/graph.hpp"

namespace bisc {

/// Reads the text format: `p bis <nX> <nY> <d>`, then `e <x> <y>` per edge;
/// lines starting with `c` are comments. Throws ParseError with the offending line.
BipartiteGraph read_graph(std::istream& in);
BipartiteGraph read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const BipartiteGraph& g, const std::string& comment = {});

}  // namespace bisc

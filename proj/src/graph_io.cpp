#include "bisc/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <set>

#include "bisc/errors.hpp"

namespace bisc {

namespace {

int read_int(std::istringstream& ls, int line, const char* what) {
  long long v;
  if (!(ls >> v)) throw ParseError(line, std::string("expected ") + what);
  if (v < 0 || v > 1'000'000'000) throw ParseError(line, std::string(what) + " out of range");
  return static_cast<int>(v);
}

}  // namespace

BipartiteGraph read_graph(std::istream& in) {
  std::string text;
  int line_no = 0;
  int header_line = 0;
  int nX = -1, nY = -1, d = -1;
  std::vector<BipartiteGraph::Edge> edges;
  std::vector<int> edge_line;
  std::vector<int> degX, degY;
  std::set<BipartiteGraph::Edge> seen;
  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream ls(text);
    std::string tag;
    if (!(ls >> tag) || tag[0] == 'c') continue;
    if (tag == "p") {
      if (header_line) throw ParseError(line_no, "duplicate header");
      std::string kind;
      if (!(ls >> kind) || kind != "bis") throw ParseError(line_no, "header must read 'p bis <nX> <nY> <d>'");
      nX = read_int(ls, line_no, "nX");
      nY = read_int(ls, line_no, "nY");
      d = read_int(ls, line_no, "d");
      if (nX == 0 || nY == 0 || d == 0) throw ParseError(line_no, "sizes and degree must be positive");
      header_line = line_no;
      degX.assign(static_cast<std::size_t>(nX), 0);
      degY.assign(static_cast<std::size_t>(nY), 0);
    } else if (tag == "e") {
      if (!header_line) throw ParseError(line_no, "edge before header");
      const int x = read_int(ls, line_no, "x index");
      const int y = read_int(ls, line_no, "y index");
      if (x >= nX) throw ParseError(line_no, "x index " + std::to_string(x) + " out of range");
      if (y >= nY) throw ParseError(line_no, "y index " + std::to_string(y) + " out of range");
      if (!seen.emplace(x, y).second) throw ParseError(line_no, "duplicate edge " + std::to_string(x) + " " + std::to_string(y));
      if (++degX[static_cast<std::size_t>(x)] > d)
        throw ParseError(line_no, "x" + std::to_string(x) + " exceeds degree " + std::to_string(d));
      if (++degY[static_cast<std::size_t>(y)] > d)
        throw ParseError(line_no, "y" + std::to_string(y) + " exceeds degree " + std::to_string(d));
      edges.emplace_back(x, y);
    } else {
      throw ParseError(line_no, "unknown line type '" + tag + "'");
    }
  }
  if (!header_line) throw ParseError(line_no, "missing header");
  for (int x = 0; x < nX; ++x)
    if (degX[static_cast<std::size_t>(x)] != d)
      throw ParseError(line_no, "x" + std::to_string(x) + " has degree " + std::to_string(degX[static_cast<std::size_t>(x)]) +
                                    ", expected " + std::to_string(d));
  for (int y = 0; y < nY; ++y)
    if (degY[static_cast<std::size_t>(y)] != d)
      throw ParseError(line_no, "y" + std::to_string(y) + " has degree " + std::to_string(degY[static_cast<std::size_t>(y)]) +
                                    ", expected " + std::to_string(d));
  try {
    return BipartiteGraph(nX, nY, d, edges);
  } catch (const InvalidArgument& e) {
    throw ParseError(header_line, e.what());
  }
}

BipartiteGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const BipartiteGraph& g, const std::string& comment) {
  if (!comment.empty()) out << "c " << comment << '\n';
  out << "p bis " << g.nX() << ' ' << g.nY() << ' ' << g.degree() << '\n';
  for (const auto& [x, y] : g.edges()) out << "e " << x << ' ' << y << '\n';
}

}  // namespace bisc

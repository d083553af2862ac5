#pragma once

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "tgraph/branching.hpp"
#include "tgraph/temporal_graph.hpp"

namespace tgraph {

/// Shortest text form of a double that reads back bit-exactly (%.17g).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Text format:
//   tg 1
//   n <N>
//   e <u> <v> <stamp>     (one per edge, u < v)
// Lines starting with '#' and blank lines are ignored.

inline void save_graph(const TemporalGraph& g, std::ostream& out) {
  out << "tg 1\n";
  out << "n " << g.n() << '\n';
  for (const auto& e : g.edges()) {
    out << "e " << e.u << ' ' << e.v << ' ' << format_double(e.stamp) << '\n';
  }
}

inline void save_graph(const TemporalGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  save_graph(g, out);
  out.flush();
  if (!out) throw std::system_error(errno, std::generic_category(), "write failed: " + path);
}

namespace detail {

template <class T>
T parse_number(const std::string& tok, std::size_t line, const char* what) {
  T value{};
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, std::string("malformed ") + what + " '" + tok + "'");
  }
  return value;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(std::move(t));
  return toks;
}

}  // namespace detail

/// Parses the text format and validates every TemporalGraph invariant. Edge
/// ids are assigned in file order. Errors name the offending line.
inline TemporalGraph load_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  enum class Stage { kMagic, kCount, kEdges } stage = Stage::kMagic;
  int n = 0;
  std::vector<StampedEdge> edges;
  std::map<std::pair<Vertex, Vertex>, std::size_t> seen;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;

    switch (stage) {
      case Stage::kMagic:
        if (toks.size() != 2 || toks[0] != "tg") throw ParseError(lineno, "expected 'tg 1' header");
        if (toks[1] != "1") throw ParseError(lineno, "unsupported format version " + toks[1]);
        stage = Stage::kCount;
        break;
      case Stage::kCount:
        if (toks.size() != 2 || toks[0] != "n") throw ParseError(lineno, "expected 'n <N>'");
        n = detail::parse_number<int>(toks[1], lineno, "vertex count");
        if (n < 0) throw ParseError(lineno, "negative vertex count");
        stage = Stage::kEdges;
        break;
      case Stage::kEdges: {
        if (toks.size() != 4 || toks[0] != "e") {
          throw ParseError(lineno, "expected 'e <u> <v> <stamp>'");
        }
        const auto u = detail::parse_number<Vertex>(toks[1], lineno, "vertex");
        const auto v = detail::parse_number<Vertex>(toks[2], lineno, "vertex");
        const auto stamp = detail::parse_number<double>(toks[3], lineno, "stamp");
        if (u < 0 || v < 0 || u >= n || v >= n) {
          throw ParseError(lineno, "endpoint out of range [0," + std::to_string(n) + ")");
        }
        if (u >= v) throw ParseError(lineno, "edge endpoints must satisfy u < v");
        if (!(stamp > 0.0 && stamp < 1.0)) {
          throw ParseError(lineno, "stamp " + toks[3] + " out of range (0,1)");
        }
        const auto [it, fresh] = seen.emplace(std::pair{u, v}, lineno);
        if (!fresh) {
          throw ParseError(lineno, "duplicate edge {" + toks[1] + "," + toks[2] +
                                       "} (first seen on line " + std::to_string(it->second) +
                                       ")");
        }
        edges.push_back({u, v, stamp, static_cast<std::int64_t>(edges.size())});
        break;
      }
    }
  }
  if (stage != Stage::kEdges) throw ParseError(lineno, "truncated graph file");
  return TemporalGraph(n, std::move(edges));
}

inline TemporalGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  return load_graph(in);
}

/// Walk path file: one path per line as whitespace-separated child indices.
/// '#' lines and blank lines are skipped. The set is validated against `n`.
inline WalkPathSet load_walk_paths(std::istream& in, int n) {
  WalkPathSet set{n, {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    std::vector<int> path;
    for (const auto& t : toks) {
      const int c = detail::parse_number<int>(t, lineno, "child index");
      if (c < 0 || c >= n) {
        throw ParseError(lineno, "child index " + t + " outside [0," + std::to_string(n) + ")");
      }
      path.push_back(c);
    }
    set.paths.push_back(std::move(path));
  }
  if (set.paths.empty()) throw ParseError(0, "path file holds no paths");
  try {
    set.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
  return set;
}

inline WalkPathSet load_walk_paths(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  return load_walk_paths(in, n);
}

}  // namespace tgraph

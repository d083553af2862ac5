#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "tgraph/bit_matrix.hpp"
#include "tgraph/temporal_graph.hpp"

namespace tgraph {

enum class Direction { kForward, kBackward };

/// The set of vertices joined to `anchor` by increasing paths inside a stamp
/// window. Forward: vertices the anchor can reach. Backward: vertices that
/// can reach the anchor.
class ReachResult {
 public:
  ReachResult(Vertex anchor, Direction direction, TimeWindow window,
              std::vector<std::pair<Vertex, double>> entries)
      : anchor_(anchor), direction_(direction), window_(window), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
  }

  Vertex anchor() const noexcept { return anchor_; }
  Direction direction() const noexcept { return direction_; }
  const TimeWindow& window() const noexcept { return window_; }
  std::size_t size() const noexcept { return entries_.size() + 1; }

  /// All members in ascending order, anchor included.
  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(size());
    bool placed = false;
    for (const auto& [v, t] : entries_) {
      if (!placed && anchor_ < v) {
        out.push_back(anchor_);
        placed = true;
      }
      out.push_back(v);
    }
    if (!placed) out.push_back(anchor_);
    return out;
  }

  bool contains(Vertex v) const {
    return v == anchor_ || find(v) != entries_.end();
  }

  /// Stamp of the edge through which `v` joined the set; nullopt for the
  /// anchor (empty path) and for non-members.
  std::optional<double> stamp_of(Vertex v) const {
    const auto it = find(v);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::pair<Vertex, double>>::const_iterator find(Vertex v) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                                     [](const auto& e, Vertex x) { return e.first < x; });
    return it != entries_.end() && it->first == v ? it : entries_.end();
  }

  Vertex anchor_;
  Direction direction_;
  TimeWindow window_;
  std::vector<std::pair<Vertex, double>> entries_;  // non-anchor members
};

namespace detail {

// One sweep over window edges. Processing edges in the global strict order
// means a vertex already in the set was entered through an earlier edge, so
// extending across the current edge keeps the path increasing.
template <class EdgeRange>
std::vector<std::pair<Vertex, double>> sweep_reach(int n, Vertex anchor, const EdgeRange& edges) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  in[anchor] = 1;
  std::vector<std::pair<Vertex, double>> entered;
  for (const auto& e : edges) {
    if (in[e.u] == in[e.v]) continue;
    const Vertex fresh = in[e.u] ? e.v : e.u;
    in[fresh] = 1;
    entered.emplace_back(fresh, e.stamp);
  }
  return entered;
}

}  // namespace detail

/// Vertices reachable from `source` by increasing paths with every stamp in `w`.
inline ReachResult forward_reach(const TemporalGraph& g, Vertex source,
                                 const TimeWindow& w = TimeWindow::full()) {
  g.check_vertex(source);
  w.validate();
  const auto edges = g.window_edges(w);
  return {source, Direction::kForward, w, detail::sweep_reach(g.n(), source, edges)};
}

/// Vertices that reach `target` by increasing paths with every stamp in `w`.
/// Same sweep as forward_reach, run over the window in descending order.
inline ReachResult backward_reach(const TemporalGraph& g, Vertex target,
                                  const TimeWindow& w = TimeWindow::full()) {
  g.check_vertex(target);
  w.validate();
  const auto edges = g.window_edges(w);
  auto entered = detail::sweep_reach(g.n(), target, std::vector<StampedEdge>(edges.rbegin(), edges.rend()));
  return {target, Direction::kBackward, w, std::move(entered)};
}

/// Row u holds { v : u reaches v } inside `w`; the diagonal is set.
///
/// Computed for all sources at once: scanning edges in descending order, the
/// row of x holds the vertices x can reach using only edges scanned so far.
/// An edge {u,v} lets each endpoint reach everything the other one reaches
/// later, so both rows become their union.
inline BitMatrix reachability_matrix(const TemporalGraph& g,
                                     const TimeWindow& w = TimeWindow::full()) {
  w.validate();
  BitMatrix reach(g.n());
  for (int v = 0; v < g.n(); ++v) reach.set(v, v);
  const auto edges = g.window_edges(w);
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) reach.merge_rows(it->u, it->v);
  return reach;
}

/// Row v holds { u : u reaches v } inside `w` (transpose of reachability_matrix).
inline BitMatrix reached_by_matrix(const TemporalGraph& g,
                                   const TimeWindow& w = TimeWindow::full()) {
  w.validate();
  BitMatrix reach(g.n());
  for (int v = 0; v < g.n(); ++v) reach.set(v, v);
  for (const auto& e : g.window_edges(w)) reach.merge_rows(e.u, e.v);
  return reach;
}

/// A_i and B_j for a vertex list: A_i is the forward set of vertices[i] in
/// G_[0,p/2], B_j the backward set of vertices[j] in G_[p/2,p].
struct SplitSets {
  std::vector<ReachResult> forward;   // A
  std::vector<ReachResult> backward;  // B
};

inline SplitSets split_sets(const TemporalGraph& g, const std::vector<Vertex>& vertices, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("split_sets needs p in (0,1]");
  std::vector<Vertex> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("split_sets: duplicate vertex ids");
  }
  const TimeWindow early{0.0, p / 2};
  const TimeWindow late{p / 2, p};
  SplitSets out;
  out.forward.reserve(vertices.size());
  out.backward.reserve(vertices.size());
  for (Vertex v : vertices) {
    out.forward.push_back(forward_reach(g, v, early));
    out.backward.push_back(backward_reach(g, v, late));
  }
  return out;
}

inline bool intersects(const ReachResult& a, const ReachResult& b) {
  const auto ma = a.members();
  const auto mb = b.members();
  auto i = ma.begin();
  auto j = mb.begin();
  while (i != ma.end() && j != mb.end()) {
    if (*i == *j) return true;
    *i < *j ? ++i : ++j;
  }
  return false;
}

/// True iff A_i and B_j meet for every ordered pair i != j, which holds
/// exactly when the vertex list is a temporal clique of a graph whose stamps
/// all lie in [0,p].
inline bool witness_criterion(const SplitSets& sets) {
  const std::size_t m = sets.forward.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && !intersects(sets.forward[i], sets.backward[j])) return false;
    }
  }
  return true;
}

}  // namespace tgraph

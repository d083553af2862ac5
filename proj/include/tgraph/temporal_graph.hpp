#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tgraph/errors.hpp"
#include "tgraph/rng.hpp"

namespace tgraph {

using Vertex = int;

/// An undirected edge {u,v} (stored with u < v) carrying its time stamp.
/// `id` breaks ties between equal stamps.
struct StampedEdge {
  Vertex u = 0;
  Vertex v = 0;
  double stamp = 0.0;
  std::int64_t id = 0;
};

/// Strict total order on edges: stamp first, id second.
constexpr bool precedes(const StampedEdge& a, const StampedEdge& b) noexcept {
  return a.stamp < b.stamp || (a.stamp == b.stamp && a.id < b.id);
}

/// Closed stamp interval [lo, hi] with 0 <= lo <= hi <= 1.
struct TimeWindow {
  double lo = 0.0;
  double hi = 1.0;

  static constexpr TimeWindow full() noexcept { return {0.0, 1.0}; }

  bool contains(double t) const noexcept { return lo <= t && t <= hi; }
  bool valid() const noexcept { return 0.0 <= lo && lo <= hi && hi <= 1.0; }
  bool within(const TimeWindow& outer) const noexcept {
    return outer.lo <= lo && hi <= outer.hi;
  }
  /// Image of the window under t -> 1 - t.
  TimeWindow reversed() const noexcept { return {1.0 - hi, 1.0 - lo}; }

  void validate() const {
    if (!valid()) {
      throw InvalidArgument("time window must satisfy 0 <= lo <= hi <= 1, got [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Random simple temporal graph parameters. When `c` is set, p = c log(n) / n.
struct GraphParams {
  int n = 0;
  double p = 0.0;
  std::optional<double> c;

  static GraphParams from_c(int n, double c) {
    GraphParams params{n, n > 1 ? c * std::log(static_cast<double>(n)) / n : 0.0, c};
    params.validate();
    return params;
  }

  void validate() const {
    if (n < 0) throw InvalidArgument("vertex count must be non-negative");
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("edge probability must lie in [0,1], got " + std::to_string(p));
    }
    if (c) {
      if (!(*c > 0.0)) throw InvalidArgument("c must be positive");
      const double expected = n > 1 ? *c * std::log(static_cast<double>(n)) / n : 0.0;
      if (std::abs(expected - p) > 1e-12 * std::max(1.0, std::abs(expected))) {
        throw InvalidArgument("p does not equal c*log(n)/n");
      }
    }
  }
};

/// A temporal graph G = (V, E, pi). Edges are kept sorted by (stamp, id), so
/// an edge's position is its rank under pi. Immutable after construction.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  /// Validates every invariant and sorts. Throws InvalidArgument on a
  /// self-loop, an endpoint out of range, a stamp outside (0,1), a repeated
  /// pair, or a repeated (stamp, id) key. Pairs given as (v,u) with v > u are
  /// canonicalized.
  TemporalGraph(int n, std::vector<StampedEdge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw InvalidArgument("vertex count must be non-negative");
    for (auto& e : edges_) {
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u == e.v) throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
      if (e.u < 0 || e.v >= n_) {
        throw InvalidArgument("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              "} has an endpoint outside [0," + std::to_string(n_) + ")");
      }
      if (!(e.stamp > 0.0 && e.stamp < 1.0)) {
        throw InvalidArgument("stamp " + std::to_string(e.stamp) + " outside (0,1)");
      }
    }
    std::sort(edges_.begin(), edges_.end(), precedes);
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (!precedes(edges_[i - 1], edges_[i])) {
        throw InvalidArgument("two edges share stamp and id " + std::to_string(edges_[i].id));
      }
    }
    std::vector<std::pair<Vertex, Vertex>> pairs;
    pairs.reserve(edges_.size());
    for (const auto& e : edges_) pairs.emplace_back(e.u, e.v);
    std::sort(pairs.begin(), pairs.end());
    const auto dup = std::adjacent_find(pairs.begin(), pairs.end());
    if (dup != pairs.end()) {
      throw InvalidArgument("duplicate edge {" + std::to_string(dup->first) + "," +
                            std::to_string(dup->second) + "}");
    }
  }

  /// Trusted construction for edges already canonical, in range, unique and
  /// sorted by (stamp, id). Used by operations that derive a graph from a
  /// valid one.
  static TemporalGraph from_sorted(int n, std::vector<StampedEdge> edges) {
    TemporalGraph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    return g;
  }

  int n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const StampedEdge> edges() const noexcept { return edges_; }

  /// The contiguous run of edges whose stamps lie in `w`, in ascending order.
  std::span<const StampedEdge> window_edges(const TimeWindow& w) const {
    const auto first = std::lower_bound(
        edges_.begin(), edges_.end(), w.lo,
        [](const StampedEdge& e, double t) { return e.stamp < t; });
    const auto last = std::upper_bound(
        first, edges_.end(), w.hi, [](double t, const StampedEdge& e) { return t < e.stamp; });
    return {first, last};
  }

  void check_vertex(Vertex v) const {
    if (v < 0 || v >= n_) {
      throw InvalidArgument("vertex " + std::to_string(v) + " outside [0," +
                            std::to_string(n_) + ")");
    }
  }

  /// Same vertex count and the same edges in the same order. Ids only break
  /// ties, so they are not compared.
  friend bool operator==(const TemporalGraph& a, const TemporalGraph& b) {
    return a.n_ == b.n_ &&
           std::equal(a.edges_.begin(), a.edges_.end(), b.edges_.begin(), b.edges_.end(),
                      [](const StampedEdge& x, const StampedEdge& y) {
                        return x.u == y.u && x.v == y.v && x.stamp == y.stamp;
                      });
  }

 private:
  int n_ = 0;
  std::vector<StampedEdge> edges_;
};

/// Samples an RSTG: each of the C(n,2) pairs is kept independently with
/// probability p and a kept edge gets a stamp uniform on (0,p). Pairs are
/// visited by geometric skipping, which leaves the joint law unchanged.
/// Ids are ranks in the final stamp order.
inline TemporalGraph generate_rstg(const GraphParams& params, std::uint64_t seed) {
  params.validate();
  const int n = params.n;
  const double p = params.p;
  std::vector<StampedEdge> edges;
  if (n >= 2 && p > 0.0) {
    Engine eng(seed);
    const double log1m_p = p < 1.0 ? std::log1p(-p) : 0.0;
    const double pairs = 0.5 * n * (n - 1.0);
    edges.reserve(static_cast<std::size_t>(pairs * p + 4.0 * std::sqrt(pairs * p) + 8.0));
    // (i, j) walks the pairs in row-major order; `j` may overshoot its row.
    std::int64_t i = 0;
    std::int64_t j = 0;
    while (true) {
      const std::uint64_t skip = p < 1.0 ? geometric_skip(eng, log1m_p) : 0;
      if (skip >= static_cast<std::uint64_t>(pairs) + 1) break;
      j += static_cast<std::int64_t>(skip) + 1;
      while (i < n - 1 && j >= n) {
        const std::int64_t over = j - n;
        ++i;
        j = i + 1 + over;
      }
      if (i >= n - 1) break;
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j),
                       p * uniform_open(eng), 0});
    }
    std::sort(edges.begin(), edges.end(),
              [](const StampedEdge& a, const StampedEdge& b) { return a.stamp < b.stamp; });
    for (std::size_t k = 0; k < edges.size(); ++k) edges[k].id = static_cast<std::int64_t>(k);
  }
  return TemporalGraph::from_sorted(n, std::move(edges));
}

/// G_[lo,hi]: same vertex set, exactly the edges with stamp in `w`. Ids and
/// stamps are preserved.
inline TemporalGraph restrict(const TemporalGraph& g, const TimeWindow& w) {
  w.validate();
  const auto kept = g.window_edges(w);
  return TemporalGraph::from_sorted(g.n(), std::vector<StampedEdge>(kept.begin(), kept.end()));
}

/// Replaces each stamp t by 1 - t. Ids are reassigned to reversed ranks so the
/// induced total order is exactly the reverse of g's, ties included.
inline TemporalGraph reverse_time(const TemporalGraph& g) {
  const auto src = g.edges();
  const std::int64_t count = static_cast<std::int64_t>(src.size());
  std::vector<StampedEdge> out;
  out.reserve(src.size());
  for (std::int64_t rank = 0; rank < count; ++rank) {
    const auto& e = src[static_cast<std::size_t>(rank)];
    const double t = std::min(1.0 - e.stamp, std::nextafter(1.0, 0.0));
    out.push_back({e.u, e.v, t, count - 1 - rank});
  }
  std::reverse(out.begin(), out.end());
  return TemporalGraph::from_sorted(g.n(), std::move(out));
}

}  // namespace tgraph

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tgraph/bit_matrix.hpp"
#include "tgraph/errors.hpp"
#include "tgraph/reachability.hpp"
#include "tgraph/rng.hpp"
#include "tgraph/temporal_graph.hpp"

namespace tgraph {

/// Symmetric, irreflexive relation "u reaches v and v reaches u". A vertex set
/// is a temporal clique exactly when it is a clique here, because temporal
/// reachability is a property of the pair alone.
class MutualGraph {
 public:
  MutualGraph() = default;
  explicit MutualGraph(int n) : adj_(n) {}

  int n() const noexcept { return adj_.size(); }
  bool adjacent(int u, int v) const noexcept { return adj_.test(u, v); }
  const BitMatrix& adjacency() const noexcept { return adj_; }
  int degree(int v) const noexcept { return adj_.row_count(v); }

  void connect(int u, int v) {
    if (u == v) throw InvalidArgument("MutualGraph is irreflexive");
    adj_.set(u, v);
    adj_.set(v, u);
  }

  std::int64_t edge_count() const noexcept {
    std::int64_t twice = 0;
    for (int v = 0; v < n(); ++v) twice += degree(v);
    return twice / 2;
  }

  double density() const noexcept {
    const double pairs = 0.5 * n() * (n() - 1.0);
    return pairs > 0 ? static_cast<double>(edge_count()) / pairs : 0.0;
  }

  bool is_clique(const std::vector<int>& s) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (!adjacent(s[i], s[j])) return false;
      }
    }
    return true;
  }

 private:
  BitMatrix adj_;
};

/// Mutual-reachability graph over the full stamp window.
inline MutualGraph mutual_graph(const TemporalGraph& g) {
  const BitMatrix out = reachability_matrix(g);
  const BitMatrix in = reached_by_matrix(g);
  MutualGraph mg(g.n());
  for (int u = 0; u < g.n(); ++u) {
    const auto a = out.row(u);
    const auto b = in.row(u);
    for (int w = 0; w < out.words_per_row(); ++w) {
      BitMatrix::Word both = a[w] & b[w];
      while (both) {
        const int v = w * BitMatrix::kBits + std::countr_zero(both);
        both &= both - 1;
        if (v > u) mg.connect(u, v);
      }
    }
  }
  return mg;
}

/// Every ordered pair of distinct members is joined by an increasing path.
inline bool is_temporal_clique(const TemporalGraph& g, std::vector<Vertex> s) {
  for (Vertex v : s) g.check_vertex(v);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() < 2) return true;
  for (Vertex u : s) {
    const auto reach = forward_reach(g, u);
    for (Vertex v : s) {
      if (!reach.contains(v)) return false;
    }
  }
  return true;
}

enum class CliqueMode { kExact, kHeuristic };

struct CliqueOptions {
  std::int64_t node_budget = 10'000'000;
  int heuristic_passes = 64;
  std::uint64_t seed = 0;
};

namespace detail {

// Keeps the best clique seen; among equal sizes the lexicographically
// smallest sorted vertex list wins.
inline void offer(std::vector<int>& best, std::vector<int> candidate) {
  std::sort(candidate.begin(), candidate.end());
  if (candidate.size() > best.size() || (candidate.size() == best.size() && candidate < best)) {
    best = std::move(candidate);
  }
}

// Smallest-last (degeneracy) order.
inline std::vector<int> degeneracy_order(const MutualGraph& g) {
  const int n = g.n();
  std::vector<int> deg(n);
  int max_deg = 0;
  for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, deg[v] = g.degree(v));
  std::vector<std::vector<int>> buckets(max_deg + 1);
  for (int v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
  std::vector<char> removed(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int d = 0;
  while (static_cast<int>(order.size()) < n) {
    d = std::max(d - 1, 0);
    while (buckets[d].empty()) ++d;
    const int v = buckets[d].back();
    buckets[d].pop_back();
    if (removed[v] || deg[v] != d) continue;
    removed[v] = 1;
    order.push_back(v);
    for (int u = 0; u < n; ++u) {
      if (!removed[u] && g.adjacent(v, u)) buckets[--deg[u]].push_back(u);
    }
  }
  return order;
}

// Branch and bound with greedy colouring bounds.
class CliqueSearch {
 public:
  CliqueSearch(const MutualGraph& g, std::int64_t budget, std::vector<int>& best)
      : g_(g), budget_(budget), best_(best) {}

  void run(int root, const std::vector<int>& candidates) {
    current_.assign(1, root);
    if (candidates.empty()) {
      offer(best_, current_);
      return;
    }
    expand(candidates);
  }

 private:
  void expand(const std::vector<int>& cand) {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("clique search exceeded node budget " + std::to_string(budget_), best_);
    }
    std::vector<int> order;
    std::vector<int> colour;
    colour_sort(cand, order, colour);
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (current_.size() + colour[i] <= best_.size()) return;
      const int v = order[i];
      std::vector<int> next;
      for (int j = 0; j < i; ++j) {
        if (g_.adjacent(v, order[j])) next.push_back(order[j]);
      }
      current_.push_back(v);
      if (next.empty()) {
        offer(best_, current_);
      } else if (current_.size() + next.size() > best_.size()) {
        expand(next);
      }
      current_.pop_back();
    }
  }

  // Vertices ordered by non-decreasing greedy colour; colour[i] bounds the
  // clique size inside order[0..i].
  void colour_sort(const std::vector<int>& cand, std::vector<int>& order,
                   std::vector<int>& colour) const {
    std::vector<std::vector<int>> classes;
    for (int v : cand) {
      std::size_t k = 0;
      for (; k < classes.size(); ++k) {
        const bool clash = std::any_of(classes[k].begin(), classes[k].end(),
                                       [&](int u) { return g_.adjacent(u, v); });
        if (!clash) break;
      }
      if (k == classes.size()) classes.emplace_back();
      classes[k].push_back(v);
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
      for (int v : classes[k]) {
        order.push_back(v);
        colour.push_back(static_cast<int>(k) + 1);
      }
    }
  }

  const MutualGraph& g_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  std::vector<int>& best_;
  std::vector<int> current_;
};

inline std::vector<int> exact_clique_sparse(const MutualGraph& g, std::int64_t budget) {
  std::vector<int> best;
  if (g.n() == 0) return best;
  best = {0};
  const auto order = degeneracy_order(g);
  std::vector<int> position(g.n());
  for (int i = 0; i < g.n(); ++i) position[order[i]] = i;
  // Each root only looks at neighbours later in the order; the node budget is
  // shared by all roots.
  CliqueSearch search(g, budget, best);
  for (int i = 0; i < g.n(); ++i) {
    const int v = order[i];
    std::vector<int> later;
    for (int u = 0; u < g.n(); ++u) {
      if (position[u] > i && g.adjacent(v, u)) later.push_back(u);
    }
    if (later.size() + 1 <= best.size()) continue;
    search.run(v, later);
  }
  return best;
}

// Minimum vertex cover of a sparse graph by branch and reduce.
class VertexCoverSearch {
 public:
  VertexCoverSearch(std::vector<std::vector<int>> adj, std::int64_t budget)
      : adj_(std::move(adj)), budget_(budget) {}

  /// Returns a minimum cover as a membership mask.
  std::vector<char> solve(const std::vector<char>& initial_cover) {
    const int n = static_cast<int>(adj_.size());
    best_ = initial_cover;
    best_size_ = std::count(best_.begin(), best_.end(), 1);
    State s{std::vector<char>(n, 1), std::vector<char>(n, 0), 0};
    recurse(std::move(s));
    return best_;
  }

  const std::vector<char>& incumbent() const noexcept { return best_; }

 private:
  struct State {
    std::vector<char> alive;
    std::vector<char> cover;
    int cover_size;
  };

  int live_degree(const State& s, int v) const {
    int d = 0;
    for (int u : adj_[v]) d += s.alive[u];
    return d;
  }

  void take(State& s, int v) const {
    s.alive[v] = 0;
    s.cover[v] = 1;
    ++s.cover_size;
  }

  void recurse(State s) {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("vertex cover search exceeded node budget " + std::to_string(budget_));
    }
    const int n = static_cast<int>(adj_.size());
    // Degree-0 and degree-1 reductions until stable.
    for (bool changed = true; changed;) {
      changed = false;
      for (int v = 0; v < n; ++v) {
        if (!s.alive[v]) continue;
        const int d = live_degree(s, v);
        if (d == 0) {
          s.alive[v] = 0;
          changed = true;
        } else if (d == 1) {
          for (int u : adj_[v]) {
            if (s.alive[u]) {
              take(s, u);
              break;
            }
          }
          s.alive[v] = 0;
          changed = true;
        }
      }
    }
    // Lower bound: a greedy maximal matching needs one cover vertex per edge.
    std::vector<char> matched(n, 0);
    int matching = 0;
    int pivot = -1;
    int pivot_degree = 0;
    for (int v = 0; v < n; ++v) {
      if (!s.alive[v]) continue;
      const int d = live_degree(s, v);
      if (d > pivot_degree) {
        pivot_degree = d;
        pivot = v;
      }
      if (matched[v]) continue;
      for (int u : adj_[v]) {
        if (s.alive[u] && !matched[u]) {
          matched[u] = matched[v] = 1;
          ++matching;
          break;
        }
      }
    }
    if (s.cover_size + matching >= best_size_) return;
    if (pivot < 0) {
      best_ = s.cover;
      best_size_ = s.cover_size;
      return;
    }
    // Branch: all live neighbours of the pivot join the cover, or the pivot does.
    State without = s;
    for (int u : adj_[pivot]) {
      if (without.alive[u]) take(without, u);
    }
    without.alive[pivot] = 0;
    recurse(std::move(without));
    take(s, pivot);
    recurse(std::move(s));
  }

  std::vector<std::vector<int>> adj_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  std::vector<char> best_;
  std::int64_t best_size_ = 0;
};

// Maximum clique of a dense graph: complement of a minimum vertex cover of
// the complement graph.
inline std::vector<int> exact_clique_dense(const MutualGraph& g, std::int64_t budget) {
  const int n = g.n();
  std::vector<std::vector<int>> comp(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && !g.adjacent(u, v)) comp[u].push_back(v);
    }
  }
  // Initial cover: everything outside a greedy clique.
  std::vector<int> greedy;
  for (int v = 0; v < n; ++v) {
    if (std::all_of(greedy.begin(), greedy.end(), [&](int u) { return g.adjacent(u, v); })) {
      greedy.push_back(v);
    }
  }
  std::vector<char> cover(n, 1);
  for (int v : greedy) cover[v] = 0;

  const auto complement_of = [n](const std::vector<char>& mask) {
    std::vector<int> out;
    for (int v = 0; v < n; ++v) {
      if (!mask[v]) out.push_back(v);
    }
    return out;
  };
  VertexCoverSearch search(std::move(comp), budget);
  try {
    return complement_of(search.solve(cover));
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(e.what(), complement_of(search.incumbent()));
  }
}

}  // namespace detail

/// Exact maximum clique of a mutual graph. Graphs with density above 1/2 are
/// solved on the complement through minimum vertex cover.
inline std::vector<int> exact_max_clique(const MutualGraph& g,
                                         std::int64_t node_budget = 10'000'000) {
  std::vector<int> best = g.density() > 0.5 ? detail::exact_clique_dense(g, node_budget)
                                            : detail::exact_clique_sparse(g, node_budget);
  std::sort(best.begin(), best.end());
  return best;
}

/// Best maximal clique over repeated greedy passes: one min-degree peeling
/// pass, one pass in decreasing-degree order, the rest in random orders.
/// The size is a certified lower bound on the maximum.
inline std::vector<int> heuristic_max_clique(const MutualGraph& g, int passes = 64,
                                             std::uint64_t seed = 0) {
  const int n = g.n();
  std::vector<int> best;
  if (n == 0) return best;

  {
    std::vector<char> alive(n, 1);
    std::vector<int> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
    int left = n;
    while (true) {
      int worst = -1;
      for (int v = 0; v < n; ++v) {
        if (alive[v] && (worst < 0 || deg[v] < deg[worst])) worst = v;
      }
      if (deg[worst] == left - 1) break;
      alive[worst] = 0;
      --left;
      for (int u = 0; u < n; ++u) {
        if (alive[u] && g.adjacent(worst, u)) --deg[u];
      }
    }
    std::vector<int> clique;
    for (int v = 0; v < n; ++v) {
      if (alive[v]) clique.push_back(v);
    }
    detail::offer(best, std::move(clique));
  }

  const auto greedy = [&](const std::vector<int>& order) {
    std::vector<int> clique;
    for (int v : order) {
      if (std::all_of(clique.begin(), clique.end(), [&](int u) { return g.adjacent(u, v); })) {
        clique.push_back(v);
      }
    }
    detail::offer(best, std::move(clique));
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  greedy(order);
  Engine eng(seed);
  for (int pass = 2; pass < passes; ++pass) {
    std::shuffle(order.begin(), order.end(), eng);
    greedy(order);
  }
  return best;
}

/// Largest temporal clique of g, sorted ascending. Exact mode throws
/// BudgetExceeded (carrying the incumbent) when the search is cut off.
inline std::vector<Vertex> max_temporal_clique(const TemporalGraph& g, CliqueMode mode,
                                               const CliqueOptions& options = {}) {
  const MutualGraph mg = mutual_graph(g);
  return mode == CliqueMode::kExact
             ? exact_max_clique(mg, options.node_budget)
             : heuristic_max_clique(mg, options.heuristic_passes, options.seed);
}

struct CliqueCensus {
  int m = 0;
  std::uint64_t count = 0;
};

/// Number of m-vertex cliques in a mutual graph.
inline std::uint64_t count_cliques(const MutualGraph& g, int m) {
  if (m < 1) throw InvalidArgument("clique size m must be at least 1");
  const int n = g.n();
  if (m == 1) return static_cast<std::uint64_t>(n);
  std::vector<std::vector<int>> higher(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (g.adjacent(u, v)) higher[u].push_back(v);
    }
  }
  std::uint64_t total = 0;
  // cand holds common higher neighbours of the partial clique.
  const auto extend = [&](auto&& self, const std::vector<int>& cand, int depth) -> void {
    if (depth == m) {
      ++total;
      return;
    }
    if (depth + 1 == m) {
      total += cand.size();
      return;
    }
    for (std::size_t i = 0; i < cand.size(); ++i) {
      std::vector<int> next;
      for (std::size_t j = i + 1; j < cand.size(); ++j) {
        if (g.adjacent(cand[i], cand[j])) next.push_back(cand[j]);
      }
      if (static_cast<int>(next.size()) + depth + 1 >= m) self(self, next, depth + 1);
    }
  };
  for (int u = 0; u < n; ++u) extend(extend, higher[u], 1);
  return total;
}

/// N, the number of temporal cliques of size m.
inline CliqueCensus count_temporal_cliques(const TemporalGraph& g, int m) {
  return {m, count_cliques(mutual_graph(g), m)};
}

/// Triangles of the underlying static graph, each sorted ascending.
inline std::vector<std::array<Vertex, 3>> static_triangles(const TemporalGraph& g) {
  const int n = g.n();
  std::vector<std::vector<Vertex>> higher(n);
  BitMatrix adj(n);
  for (const auto& e : g.edges()) {
    higher[e.u].push_back(e.v);
    adj.set(e.u, e.v);
    adj.set(e.v, e.u);
  }
  std::vector<std::array<Vertex, 3>> out;
  for (int u = 0; u < n; ++u) {
    auto& hu = higher[u];
    std::sort(hu.begin(), hu.end());
    for (std::size_t i = 0; i < hu.size(); ++i) {
      for (std::size_t j = i + 1; j < hu.size(); ++j) {
        if (adj.test(hu[i], hu[j])) out.push_back({u, hu[i], hu[j]});
      }
    }
  }
  return out;
}

/// ceil(1/(1-c) + 1): the high-probability ceiling on the largest temporal
/// clique of an RSTG with p = c log(n)/n, for c in (0,1).
inline int clique_size_bound(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidArgument("clique_size_bound is defined for c in (0,1), got " + std::to_string(c));
  }
  return static_cast<int>(std::ceil(1.0 / (1.0 - c) + 1.0));
}

/// Exponent of n in the first-moment bound on the number of m-cliques:
/// m - m(m-1) + c m(m-1).
inline double census_exponent(int m, double c) {
  const double pairs = static_cast<double>(m) * (m - 1);
  return m - pairs + c * pairs;
}

}  // namespace tgraph

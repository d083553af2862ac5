#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "tgraph/errors.hpp"
#include "tgraph/rng.hpp"

namespace tgraph {

// ---------------------------------------------------------------------------
// Temporal branching process.
//
// An infinite n-ary tree whose edges carry i.i.d. Uniform(0,1) labels. A node
// is reachable when every label on its root path is <= the cutoff and the
// labels increase along the path. The tree is never materialized: a node
// entered at stamp t has Binomial(n, cutoff - t) reachable children whose
// stamps are i.i.d. uniform on (t, cutoff], which is exactly the conditional
// law of the labels that qualify.
// ---------------------------------------------------------------------------

struct TbpParams {
  int branching_factor = 1;
  double cutoff = 0.0;
  std::int64_t budget = 10'000'000;

  void validate() const {
    if (branching_factor < 1) throw InvalidArgument("branching factor must be >= 1");
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) throw InvalidArgument("cutoff must lie in [0,1]");
    if (budget < 1) throw InvalidArgument("budget must be >= 1");
  }
};

struct TbpSample {
  std::int64_t total = 1;                  // |T*|, root included
  std::vector<std::int64_t> gen_sizes{1};  // Z_0, Z_1, ...
  int depth = 0;                           // largest l with Z_l > 0

  std::int64_t generation(int l) const {
    return l < static_cast<int>(gen_sizes.size()) ? gen_sizes[l] : 0;
  }
};

/// One exact sample of the reachable subtree, explored breadth first.
inline TbpSample sample_tbp(const TbpParams& params, std::uint64_t seed) {
  params.validate();
  Engine eng(seed);
  TbpSample out;
  std::vector<double> frontier{0.0};
  std::vector<double> next;
  while (true) {
    next.clear();
    for (double t : frontier) {
      const double width = params.cutoff - t;
      if (width <= 0.0) continue;
      const int kids = std::binomial_distribution<int>(params.branching_factor, width)(eng);
      for (int k = 0; k < kids; ++k) next.push_back(t + width * uniform_open(eng));
    }
    if (next.empty()) break;
    out.total += static_cast<std::int64_t>(next.size());
    if (out.total > params.budget) {
      throw BudgetExceeded("branching process exceeded budget of " +
                           std::to_string(params.budget) + " nodes");
    }
    out.gen_sizes.push_back(static_cast<std::int64_t>(next.size()));
    ++out.depth;
    frontier.swap(next);
  }
  return out;
}

/// E[Z_l] = (n theta)^l / l!, each of the n^l generation-l nodes being
/// reachable with probability theta^l / l!.
inline double expected_generation_size(int n, double theta, int l) {
  if (l < 0) throw InvalidArgument("generation index must be >= 0");
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0,1]");
  if (l == 0) return 1.0;
  const double rate = n * theta;
  if (rate == 0.0) return 0.0;
  return std::exp(l * std::log(rate) - std::lgamma(l + 1.0));
}

/// E[|T*|] = sum_l (n theta)^l / l! = e^{n theta}.
inline double expected_total_progeny(int n, double theta) { return std::exp(n * theta); }

/// (q-1)! e^{np q}: bound on E[Z_l^q], uniform in l.
inline double cor4_moment_bound(double np_prod, int q) {
  if (q < 1) throw InvalidArgument("moment order q must be >= 1");
  return std::exp(std::lgamma(static_cast<double>(q)) + np_prod * q);
}

/// C (np)^{2q} e^{np q}: bound on E[|T*|^q] for a caller-chosen constant C.
inline double thm5_moment_bound(double np_prod, int q, double constant) {
  if (q < 1) throw InvalidArgument("moment order q must be >= 1");
  if (!(constant > 0.0)) throw InvalidArgument("constant C must be positive");
  if (np_prod == 0.0) return 0.0;
  return std::exp(std::log(constant) + 2.0 * q * std::log(np_prod) + np_prod * q);
}

/// (q-1)! e^{npq} / n^{lq}: bound on the probability that q uniform
/// generation-l nodes are all reachable.
inline double lemma3_survival_bound(int n, double p, int l, int q) {
  if (q < 1) throw InvalidArgument("q must be >= 1");
  if (l < 0) throw InvalidArgument("generation index must be >= 0");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return std::exp(std::lgamma(static_cast<double>(q)) + n * p * q -
                  static_cast<double>(l) * q * std::log(static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// Random walk down the tree against a fixed family of paths.
// ---------------------------------------------------------------------------

/// q distinct root paths in an n-ary tree, each a sequence of child indices.
struct WalkPathSet {
  int n = 1;
  std::vector<std::vector<int>> paths;

  std::size_t q() const noexcept { return paths.size(); }

  std::size_t shortest() const noexcept {
    std::size_t len = paths.empty() ? 0 : paths.front().size();
    for (const auto& p : paths) len = std::min(len, p.size());
    return len;
  }

  void validate() const {
    if (n < 1) throw InvalidArgument("branching factor must be >= 1");
    if (paths.empty()) throw InvalidArgument("path set is empty");
    for (const auto& p : paths) {
      for (int c : p) {
        if (c < 0 || c >= n) {
          throw InvalidArgument("child index " + std::to_string(c) + " outside [0," +
                                std::to_string(n) + ")");
        }
      }
    }
    auto sorted = paths;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidArgument("paths must be pairwise distinct");
    }
  }
};

/// Prefix trie over a path set. Node 0 is the root.
class PathTrie {
 public:
  explicit PathTrie(const WalkPathSet& set) : nodes_(1), depth_(1, 0) {
    for (const auto& path : set.paths) {
      int node = 0;
      for (int c : path) {
        auto [it, fresh] = nodes_[node].emplace(c, static_cast<int>(nodes_.size()));
        if (fresh) {
          nodes_.emplace_back();
          depth_.push_back(depth_[node] + 1);
        }
        node = it->second;
      }
    }
  }

  /// Number of distinct length-l prefixes.
  std::uint64_t distinct_prefixes(int l) const {
    return static_cast<std::uint64_t>(std::count(depth_.begin(), depth_.end(), l));
  }

  /// Length of the longest prefix of `walk` that is a prefix of some path.
  int match_length(const std::vector<int>& walk) const {
    int node = 0;
    int len = 0;
    for (int c : walk) {
      const auto it = nodes_[node].find(c);
      if (it == nodes_[node].end()) break;
      node = it->second;
      ++len;
    }
    return len;
  }

 private:
  std::vector<std::map<int, int>> nodes_;
  std::vector<int> depth_;
};

/// One walk of l_max uniform steps; returns how long it follows some path.
inline int sample_walk_tau(const WalkPathSet& paths, const PathTrie& trie, int l_max,
                           std::uint64_t seed) {
  Engine eng(seed);
  std::vector<int> walk(static_cast<std::size_t>(std::max(l_max, 0)));
  for (auto& step : walk) step = static_cast<int>(uniform_index(eng, paths.n));
  return trie.match_length(walk);
}

inline int sample_walk_tau(const WalkPathSet& paths, int l_max, std::uint64_t seed) {
  paths.validate();
  if (l_max < 0) throw InvalidArgument("l_max must be >= 0");
  return sample_walk_tau(paths, PathTrie(paths), l_max, seed);
}

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den <=
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// P(tau >= l) = D_l / n^l, D_l the number of distinct length-l prefixes: the
/// walk's first l steps are uniform over n^l sequences and tau >= l exactly
/// when they spell one of those prefixes.
inline Rational exact_tau_tail(const WalkPathSet& paths, int l) {
  paths.validate();
  if (l < 0 || static_cast<std::size_t>(l) > paths.shortest()) {
    throw InvalidArgument("exact_tau_tail needs 0 <= l <= shortest path length");
  }
  std::uint64_t den = 1;
  for (int i = 0; i < l; ++i) {
    if (den > UINT64_MAX / static_cast<std::uint64_t>(paths.n)) {
      throw InvalidArgument("n^l overflows 64 bits");
    }
    den *= static_cast<std::uint64_t>(paths.n);
  }
  return {PathTrie(paths).distinct_prefixes(l), den};
}

// ---------------------------------------------------------------------------
// Pathwise coupling of the foremost-tree chains on K_n and on the tree.
// ---------------------------------------------------------------------------

/// Both chains of one coupled run, indexed by step k. Entry 0 of the
/// e_size sequences is 0 (no step taken yet). A chain's sequences end at its
/// stopping step.
struct CoupledTrace {
  std::vector<double> tau;               // graph chain
  std::vector<double> tau_star;          // tree chain
  std::vector<std::int64_t> e_size;      // |E_k|
  std::vector<std::int64_t> e_star_size; // |E*_k|
  std::int64_t a_size = 0;               // first k with tau_k > p/2, capped at n
  std::int64_t tstar_size = 0;           // first k with tau*_k > p/2
};

/// Runs both chains on shared uniforms:
///   |E_1| = n-1, |E*_1| = n,
///   |E_k|  = |E_{k-1}|  + #{i <= n-k : U_{k,i} <= 1 - tau_{k-1}},
///   |E*_k| = |E*_{k-1}| + #{i <= n   : U_{k,i} <= 1 - tau*_{k-1}},
///   tau_k  = tau_{k-1}  + (1 - tau_{k-1})  min_{i <= |E_k|}  V_{k,i},
///   tau*_k = tau*_{k-1} + (1 - tau*_{k-1}) min_{i <= |E*_k|} V_{k,i},
/// with tau_0 = tau*_0 = 0, each chain stopping at its first k with a stamp
/// above p/2. The graph chain also stops at k = n.
inline CoupledTrace coupled_sample(int n, double p, std::uint64_t seed,
                                   std::int64_t budget = 10'000'000) {
  if (n < 2) throw InvalidArgument("coupled_sample needs n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("coupled_sample needs p in [0,1]");
  const double half = p / 2;
  Engine eng(seed);
  CoupledTrace tr;
  tr.tau = {0.0};
  tr.tau_star = {0.0};
  tr.e_size = {0};
  tr.e_star_size = {0};
  bool graph_live = true;
  bool tree_live = true;

  for (std::int64_t k = 1; graph_live || tree_live; ++k) {
    if (k > budget) {
      throw BudgetExceeded("coupled chain exceeded " + std::to_string(budget) + " steps");
    }
    if (graph_live && k == n) {
      tr.a_size = n;
      graph_live = false;
      if (!tree_live) break;
    }
    std::int64_t e = graph_live ? n - 1 : 0;
    std::int64_t e_star = n;
    if (k >= 2) {
      const double keep = 1.0 - tr.tau.back();
      const double keep_star = 1.0 - tr.tau_star.back();
      e = graph_live ? tr.e_size.back() : 0;
      e_star = tree_live ? tr.e_star_size.back() : 0;
      for (std::int64_t i = 1; i <= n; ++i) {
        const double u = uniform_open(eng);
        if (graph_live && i <= n - k && u <= keep) ++e;
        if (tree_live && u <= keep_star) ++e_star;
      }
    }
    const std::int64_t draws = std::max(graph_live ? e : 0, tree_live ? e_star : 0);
    double run_min = 1.0;
    double min_graph = 1.0;
    double min_tree = 1.0;
    for (std::int64_t i = 1; i <= draws; ++i) {
      run_min = std::min(run_min, uniform_open(eng));
      if (i == e) min_graph = run_min;
      if (i == e_star) min_tree = run_min;
    }
    if (graph_live) {
      const double prev = tr.tau.back();
      const double t = prev + (1.0 - prev) * min_graph;
      tr.tau.push_back(t);
      tr.e_size.push_back(e);
      if (t > half) {
        tr.a_size = k;
        graph_live = false;
      }
    }
    if (tree_live) {
      const double prev = tr.tau_star.back();
      const double t = prev + (1.0 - prev) * min_tree;
      tr.tau_star.push_back(t);
      tr.e_star_size.push_back(e_star);
      if (t > half) {
        tr.tstar_size = k;
        tree_live = false;
      }
    }
  }
  return tr;
}

/// Count of violated coupling inequalities in a trace: tau*_k <= tau_k and
/// |E_k| <= |E*_k| at every step both chains reached, plus a_size <= tstar_size.
inline std::int64_t coupling_violations(const CoupledTrace& tr) {
  std::int64_t bad = tr.a_size <= tr.tstar_size ? 0 : 1;
  const std::size_t steps = std::min(tr.tau.size(), tr.tau_star.size());
  for (std::size_t k = 0; k < steps; ++k) {
    if (tr.tau_star[k] > tr.tau[k]) ++bad;
    if (tr.e_size[k] > tr.e_star_size[k]) ++bad;
  }
  return bad;
}

}  // namespace tgraph

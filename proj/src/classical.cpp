#include "gluedtrees/classical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "gluedtrees/rng.hpp"

namespace gluedtrees {

ClassicalGenerator ClassicalGenerator::from_edges(int dim,
                                                  const std::vector<std::pair<int, int>>& edges,
                                                  double gamma) {
  ClassicalGenerator k;
  k.dim = dim;
  k.matrix.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
  k.weights.assign(static_cast<std::size_t>(dim), 1.0);
  for (const auto& [u, v] : edges) {
    k.matrix[static_cast<std::size_t>(u) * dim + static_cast<std::size_t>(v)] += gamma;
    k.matrix[static_cast<std::size_t>(v) * dim + static_cast<std::size_t>(u)] += gamma;
    k.matrix[static_cast<std::size_t>(u) * dim + static_cast<std::size_t>(u)] -= gamma;
    k.matrix[static_cast<std::size_t>(v) * dim + static_cast<std::size_t>(v)] -= gamma;
  }
  return k;
}

ClassicalGenerator ClassicalGenerator::column_chain(int n, double gamma) {
  const int m = 2 * n + 2;
  ClassicalGenerator k;
  k.dim = m;
  k.matrix.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
  k.weights.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    k.weights[static_cast<std::size_t>(j)] = std::pow(2.0, j <= n ? j : 2 * n + 1 - j);
  for (int j = 0; j + 1 < m; ++j) {
    // edges per vertex toward the right / left neighbor column
    const double right = j <= n ? 2.0 : 1.0;
    const double left = j + 1 <= n ? 1.0 : 2.0;
    k.matrix[static_cast<std::size_t>(j + 1) * m + static_cast<std::size_t>(j)] += gamma * right;
    k.matrix[static_cast<std::size_t>(j) * m + static_cast<std::size_t>(j)] -= gamma * right;
    k.matrix[static_cast<std::size_t>(j) * m + static_cast<std::size_t>(j + 1)] += gamma * left;
    k.matrix[static_cast<std::size_t>(j + 1) * m + static_cast<std::size_t>(j + 1)] -= gamma * left;
  }
  return k;
}

std::vector<double> classical_master_evolve(const ClassicalGenerator& k,
                                            std::span<const double> p0, double t) {
  const int m = k.dim;
  if (static_cast<int>(p0.size()) != m)
    throw std::invalid_argument("classical_master_evolve: dimension mismatch");
  // Similarity transform with sqrt of the stationary weights symmetrizes a
  // reversible generator: S = W^{-1/2} K W^{1/2}.
  std::vector<double> s(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  std::vector<double> sqw(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) sqw[static_cast<std::size_t>(i)] = std::sqrt(k.weights[static_cast<std::size_t>(i)]);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      s[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)] =
          k.matrix[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)] * sqw[static_cast<std::size_t>(j)] /
          sqw[static_cast<std::size_t>(i)];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      const double a = s[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)];
      const double b = s[static_cast<std::size_t>(j) * m + static_cast<std::size_t>(i)];
      if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a)))
        throw std::invalid_argument("classical_master_evolve: generator is not reversible");
      const double avg = 0.5 * (a + b);
      s[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)] = avg;
      s[static_cast<std::size_t>(j) * m + static_cast<std::size_t>(i)] = avg;
    }
  const Eigensystem es = eig_symmetric(s, m, true);
  // p(t) = W^{1/2} V e^{Lambda t} V^T W^{-1/2} p0
  std::vector<double> y(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) y[static_cast<std::size_t>(i)] = p0[static_cast<std::size_t>(i)] / sqw[static_cast<std::size_t>(i)];
  std::vector<double> c(static_cast<std::size_t>(m), 0.0);
  for (int kk = 0; kk < m; ++kk) {
    double acc = 0;
    for (int i = 0; i < m; ++i) acc += es.vec(i, kk) * y[static_cast<std::size_t>(i)];
    c[static_cast<std::size_t>(kk)] = acc * std::exp(es.values[static_cast<std::size_t>(kk)] * t);
  }
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (int kk = 0; kk < m; ++kk)
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] += es.vec(i, kk) * c[static_cast<std::size_t>(kk)];
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] *= sqw[static_cast<std::size_t>(i)];
  return out;
}

namespace {

std::vector<std::uint64_t> draw_names(int count, int bits, Rng& rng) {
  std::vector<std::uint64_t> names(static_cast<std::size_t>(count));
  std::unordered_set<std::uint64_t> used{0};
  const std::uint64_t space = VertexName::mask(bits) - 1;
  if (static_cast<std::uint64_t>(count) - 1 > space)
    throw std::invalid_argument("draw_names: name space exhausted");
  for (int v = 1; v < count; ++v) {
    std::uint64_t b;
    do {
      b = 1 + rng.below(space);
    } while (!used.insert(b).second);
    names[static_cast<std::size_t>(v)] = b;
  }
  return names;
}

}  // namespace

ClassicalInstance make_identified_trees(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_identified_trees: n >= 1");
  ClassicalInstance inst;
  // columns 0..2n; column j has 2^min(j, 2n-j) vertices
  std::vector<int> begin(static_cast<std::size_t>(2 * n + 2), 0);
  int off = 0;
  for (int j = 0; j <= 2 * n; ++j) {
    begin[static_cast<std::size_t>(j)] = off;
    off += 1 << std::min(j, 2 * n - j);
  }
  begin[static_cast<std::size_t>(2 * n + 1)] = off;
  inst.adj.assign(static_cast<std::size_t>(off), {});
  auto link = [&](int u, int v) {
    inst.adj[static_cast<std::size_t>(u)].push_back(v);
    inst.adj[static_cast<std::size_t>(v)].push_back(u);
  };
  for (int j = 0; j < n; ++j)  // left tree
    for (int i = 0; i < (1 << j); ++i) {
      link(begin[static_cast<std::size_t>(j)] + i, begin[static_cast<std::size_t>(j) + 1] + 2 * i);
      link(begin[static_cast<std::size_t>(j)] + i, begin[static_cast<std::size_t>(j) + 1] + 2 * i + 1);
    }
  for (int j = 2 * n; j > n; --j)  // right tree, children toward the center
    for (int i = 0; i < (1 << (2 * n - j)); ++i) {
      link(begin[static_cast<std::size_t>(j)] + i, begin[static_cast<std::size_t>(j) - 1] + 2 * i);
      link(begin[static_cast<std::size_t>(j)] + i, begin[static_cast<std::size_t>(j) - 1] + 2 * i + 1);
    }
  inst.exit = off - 1;
  int bits = 2 * n;
  while ((VertexName::mask(bits) - 1) < static_cast<std::uint64_t>(off)) ++bits;
  inst.name_bits = bits;
  Rng rng(seed, /*stream=*/11);
  inst.names = draw_names(off, bits, rng);
  // neighbor order should not leak structure: shuffle each list by name
  for (auto& list : inst.adj)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return inst.names[static_cast<std::size_t>(a)] < inst.names[static_cast<std::size_t>(b)];
    });
  return inst;
}

ClassicalInstance make_hypercube(int n, std::uint64_t seed) {
  if (n < 1 || n > 20) throw std::invalid_argument("make_hypercube: n out of range");
  ClassicalInstance inst;
  const int count = 1 << n;
  inst.adj.assign(static_cast<std::size_t>(count), {});
  for (int v = 0; v < count; ++v)
    for (int b = 0; b < n; ++b) inst.adj[static_cast<std::size_t>(v)].push_back(v ^ (1 << b));
  inst.exit = count - 1;  // antipode of vertex 0
  int bits = 2 * n;
  while ((VertexName::mask(bits) - 1) < static_cast<std::uint64_t>(count)) ++bits;
  inst.name_bits = bits;
  Rng rng(seed, /*stream=*/12);
  inst.names = draw_names(count, bits, rng);
  for (auto& list : inst.adj)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return inst.names[static_cast<std::size_t>(a)] < inst.names[static_cast<std::size_t>(b)];
    });
  return inst;
}

namespace {

// Query cache so revisits are free; every distinct vertex costs one oracle
// call, which is what the O(n^2) accounting charges.
class CachedOracle {
 public:
  CachedOracle(const Oracle& oracle, long budget) : oracle_(oracle), budget_(budget) {}

  const std::vector<VertexName>* reply(const VertexName& a) {
    const auto it = cache_.find(a);
    if (it != cache_.end()) return &it->second;
    if (queries_ >= budget_) return nullptr;
    ++queries_;
    std::vector<VertexName> names;
    for (const auto& nb : oracle_.neighbors(a)) names.push_back(nb.name);
    return &cache_.emplace(a, std::move(names)).first->second;
  }

  long queries() const { return queries_; }

 private:
  const Oracle& oracle_;
  long budget_;
  long queries_ = 0;
  std::unordered_map<VertexName, std::vector<VertexName>, VertexNameHash> cache_;
};

struct BudgetExhausted {};
struct Contradiction {};

}  // namespace

TraversalResult traverse_identified_trees(const Oracle& oracle, long budget) {
  CachedOracle cache(oracle, budget);
  TraversalResult out;
  const VertexName entrance = oracle.entrance_name();

  auto reply_or_throw = [&](const VertexName& a) -> const std::vector<VertexName>& {
    const auto* r = cache.reply(a);
    if (!r) throw BudgetExhausted{};
    return *r;
  };

  try {
    std::unordered_map<VertexName, int, VertexNameHash> column;
    std::unordered_map<VertexName, VertexName, VertexNameHash> entry;
    std::unordered_set<std::uint64_t> visited;
    int n_center = -1;

    // Classifies a fresh degree-2 vertex: a central vertex's other neighbor
    // sits in the left tree next to more centrals; the exit's other neighbor
    // sees only degree-3 children. Costs at most three cached queries.
    auto is_central = [&](const VertexName& z, const VertexName& came_from) {
      const auto& zr = reply_or_throw(z);
      const VertexName o = zr[0] == came_from ? zr[1] : zr[0];
      for (const auto& q : reply_or_throw(o)) {
        if (q == z) continue;
        if (reply_or_throw(q).size() == 2) return true;
      }
      return false;
    };

    VertexName anchor = entrance;
    int anchor_col = 0;
    column[entrance] = 0;
    visited.insert(entrance.bits());
    std::vector<VertexName> path = {entrance};

    while (true) {
      const VertexName cur = path.back();
      const auto& nbrs = reply_or_throw(cur);
      VertexName next{0, 1};
      bool have = false;
      for (const auto& nb : nbrs)
        if (!visited.count(nb.bits()) && (!have || nb < next)) {
          next = nb;
          have = true;
        }

      if (!have) {
        // Dead end on explored ground: climb recorded columns upward until
        // something unexplored appears.
        const auto cit = column.find(cur);
        if (cit == column.end()) throw Contradiction{};
        bool climbed = false;
        for (const auto& nb : nbrs) {
          const auto nit = column.find(nb);
          if (nit != column.end() && nit->second == cit->second + 1) {
            anchor = nb;
            anchor_col = nit->second;
            path = {nb};
            climbed = true;
            break;
          }
        }
        if (!climbed) throw Contradiction{};
        continue;
      }

      visited.insert(next.bits());
      entry.emplace(next, cur);
      path.push_back(next);
      if (reply_or_throw(next).size() != 2) continue;

      // Degree-2 arrival: either the exit or a central-column vertex.
      const long k = static_cast<long>(path.size()) - 1;
      if (n_center < 0) {
        // the first descent runs straight down the left tree, so the first
        // degree-2 vertex fixes the central column
        n_center = static_cast<int>(k);
        if (n_center <= 2) break;  // tiny graph: exhaustive search below
      } else if (!is_central(next, cur)) {
        out.found = true;
        out.exit = next;
        out.queries = cache.queries();
        return out;
      }

      const long shift = k - (static_cast<long>(anchor_col) - n_center);
      if (shift < 0 || shift % 2) throw Contradiction{};
      const long u = shift / 2;
      if (u > k) throw Contradiction{};
      for (long i = 0; i <= u; ++i) column[path[static_cast<std::size_t>(i)]] = anchor_col + static_cast<int>(i);
      for (long i = u + 1; i <= k; ++i)
        column[path[static_cast<std::size_t>(i)]] = anchor_col + static_cast<int>(2 * u - i);
      if (column[path[static_cast<std::size_t>(k)]] != n_center) throw Contradiction{};

      const VertexName apex = path[static_cast<std::size_t>(u)];
      const VertexName before = u > 0 ? path[static_cast<std::size_t>(u) - 1] : entry.at(apex);
      VertexName onward{0, 1};
      bool found_edge = false;
      for (const auto& nb : reply_or_throw(apex)) {
        if (nb == before) continue;
        if (u < k && nb == path[static_cast<std::size_t>(u) + 1]) continue;
        onward = nb;
        found_edge = true;
      }
      if (!found_edge) throw Contradiction{};
      const int onward_col = column[apex] + 1;
      const auto oit = column.find(onward);
      if (oit != column.end() && oit->second != onward_col) throw Contradiction{};
      column[onward] = onward_col;
      if (!visited.count(onward.bits())) {
        visited.insert(onward.bits());
        entry.emplace(onward, apex);
      }
      // the vertex above the apex can be the exit itself
      if (reply_or_throw(onward).size() == 2) {
        if (is_central(onward, apex)) throw Contradiction{};  // no centrals above column n
        out.found = true;
        out.exit = onward;
        out.queries = cache.queries();
        return out;
      }
      anchor = onward;
      anchor_col = onward_col;
      path = {onward};
    }

    // Tiny instance (n <= 2): breadth-first search the whole graph and pick
    // the degree-2 vertex at distance 2n.
    std::unordered_map<VertexName, int, VertexNameHash> dist;
    std::deque<VertexName> queue{entrance};
    dist[entrance] = 0;
    while (!queue.empty()) {
      const VertexName cur = queue.front();
      queue.pop_front();
      for (const auto& nb : reply_or_throw(cur))
        if (!dist.count(nb)) {
          dist[nb] = dist[cur] + 1;
          queue.push_back(nb);
        }
    }
    for (const auto& [name, d] : dist)
      if (d == 2 * n_center && reply_or_throw(name).size() == 2) {
        out.found = true;
        out.exit = name;
        out.queries = cache.queries();
        return out;
      }
    throw Contradiction{};
  } catch (const BudgetExhausted&) {
    out.note = "budget exhausted";
  } catch (const Contradiction&) {
    out.note = "structure contradiction: oracle is not serving G_n";
  }
  out.queries = cache.queries();
  return out;
}

TraversalResult traverse_hypercube(const Oracle& oracle, long budget) {
  CachedOracle cache(oracle, budget);
  TraversalResult out;
  const VertexName entrance = oracle.entrance_name();

  auto reply = [&](const VertexName& a) -> const std::vector<VertexName>* { return cache.reply(a); };

  const auto* r0 = reply(entrance);
  if (!r0) {
    out.note = "budget exhausted";
    return out;
  }
  const int n = static_cast<int>(r0->size());
  if (n == 0) throw std::runtime_error("traverse_hypercube: entrance has no neighbors");

  VertexName cur = (*r0)[0];
  std::vector<VertexName> level_below = {entrance};  // S_{k-1}
  for (int k = 1; k < n; ++k) {
    const auto* rc = reply(cur);
    if (!rc) {
      out.note = "budget exhausted";
      out.queries = cache.queries();
      return out;
    }
    if (static_cast<int>(rc->size()) != n)
      throw std::runtime_error("traverse_hypercube: degree contradiction");
    // next vertex: any neighbor not in S_{k-1}
    VertexName next{0, 1};
    bool have = false;
    for (const auto& nb : *rc) {
      bool in_below = false;
      for (const auto& s : level_below) in_below = in_below || s == nb;
      if (!in_below && (!have || nb < next)) {
        next = nb;
        have = true;
      }
    }
    if (!have) throw std::runtime_error("traverse_hypercube: no way up, contradiction");

    // S_k = neighbors of `next` that neighbor something in S_{k-1}
    const auto* rn = reply(next);
    if (!rn) {
      out.note = "budget exhausted";
      out.queries = cache.queries();
      return out;
    }
    if (static_cast<int>(rn->size()) != n)
      throw std::runtime_error("traverse_hypercube: degree contradiction");
    std::unordered_set<std::uint64_t> below_nbrs;
    below_nbrs.insert(cur.bits());
    for (const auto& s : level_below) {
      const auto* rs = reply(s);
      if (!rs) {
        out.note = "budget exhausted";
        out.queries = cache.queries();
        return out;
      }
      for (const auto& q : *rs) below_nbrs.insert(q.bits());
    }
    std::vector<VertexName> level_now;
    for (const auto& nb : *rn)
      if (below_nbrs.count(nb.bits())) level_now.push_back(nb);
    if (static_cast<int>(level_now.size()) != k + 1)
      throw std::runtime_error("traverse_hypercube: level set size contradiction");
    cur = next;
    level_below = std::move(level_now);
  }
  out.found = true;
  out.exit = cur;
  out.queries = cache.queries();
  return out;
}

}  // namespace gluedtrees

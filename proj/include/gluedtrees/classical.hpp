#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gluedtrees/linalg.hpp"
#include "gluedtrees/oracle.hpp"

namespace gluedtrees {

// Infinitesimal generator of the continuous-time classical random walk:
// K = gamma * (A - D). Columns sum to zero, so probability is conserved.
// Reversible generators (detailed balance against `weights`) are evolved
// through a symmetrized eigendecomposition.
struct ClassicalGenerator {
  int dim = 0;
  std::vector<double> matrix;   // row-major K
  std::vector<double> weights;  // stationary weights (uniform for graphs)

  static ClassicalGenerator from_edges(int dim, const std::vector<std::pair<int, int>>& edges,
                                       double gamma);
  // Column-reduced birth-death chain of the glued-trees walk, 2n+2 states,
  // transition rates set by the per-vertex edge counts between columns.
  static ClassicalGenerator column_chain(int n, double gamma);
};

// p(t) = exp(Kt) p0.
std::vector<double> classical_master_evolve(const ClassicalGenerator& k,
                                            std::span<const double> p0, double t);

// A named, uncolored graph instance for the classical traversal problems,
// with ground truth kept outside the oracle.
struct ClassicalInstance {
  std::vector<std::vector<int>> adj;
  std::vector<std::uint64_t> names;
  int name_bits = 0;
  int entrance = 0;
  int exit = 0;

  AdjacencyOracle oracle() const {
    return AdjacencyOracle(adj, {}, names, name_bits, /*include_colors=*/false);
  }
  VertexName exit_name() const { return VertexName(names[static_cast<std::size_t>(exit)], name_bits); }
};

// G_n: two height-n binary trees with leaves identified (central column of
// degree-2 vertices). Name width grows past 2n when the tiny instances need
// the room.
ClassicalInstance make_identified_trees(int n, std::uint64_t seed);

// n-dimensional hypercube; the exit is the antipode of the entrance.
ClassicalInstance make_hypercube(int n, std::uint64_t seed);

struct TraversalResult {
  bool found = false;
  VertexName exit{0, 1};
  long queries = 0;
  std::string note;
};

// Walks G_n from the entrance using degree checks: descend to the first
// degree-2 vertex, then climb the right tree, detecting wrong turns by the
// return to a degree-2 vertex after k steps (wrong move at k/2) and taking
// the other edge. O(n^2) queries on G_n; on anything else it gives up when
// the budget runs out.
TraversalResult traverse_identified_trees(const Oracle& oracle, long budget);

// Level-by-level hypercube traversal: keep the set S_{k-1} of known
// level-(k-1) neighbors of the current vertex, step to any neighbor outside
// it, and rebuild the set by intersection. O(n^2) queries.
TraversalResult traverse_hypercube(const Oracle& oracle, long budget);

}  // namespace gluedtrees

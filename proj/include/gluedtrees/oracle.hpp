#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "gluedtrees/graph.hpp"
#include "gluedtrees/names.hpp"

namespace gluedtrees {

struct NeighborInfo {
  VertexName name;
  int color = kNoColor;  // kNoColor when the oracle variant withholds colors
};

// Black-box access to a named graph. Replies depend only on graph content;
// the query counter is the sole mutable element and is safe under concurrent
// use. Invalid inputs are answered with the reserved all-ones string rather
// than errors, matching the query model.
class Oracle {
 public:
  virtual ~Oracle() = default;

  std::vector<NeighborInfo> neighbors(const VertexName& a) const {
    queries_.fetch_add(1, std::memory_order_seq_cst);
    return neighbors_impl(a);
  }

  // v_c(a): the neighbor across the color-c edge, or 11...1 if a is not a
  // vertex or has no incident edge of that color.
  VertexName neighbor_by_color(const VertexName& a, int color) const {
    queries_.fetch_add(1, std::memory_order_seq_cst);
    return neighbor_by_color_impl(a, color);
  }

  // f_c(a): 1 iff v_c(a) = 11...1.
  int invalid_flag(const VertexName& a, int color) const {
    return neighbor_by_color(a, color).is_all_ones() ? 1 : 0;
  }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_seq_cst); }

  virtual int name_bits() const = 0;
  virtual bool provides_colors() const = 0;
  // Size of the color universe the per-color unitaries range over; 0 when
  // the variant withholds colors.
  virtual int num_colors() const = 0;
  VertexName entrance_name() const { return VertexName::zero(name_bits()); }
  VertexName not_a_vertex() const { return VertexName::all_ones(name_bits()); }

 protected:
  virtual std::vector<NeighborInfo> neighbors_impl(const VertexName& a) const = 0;
  virtual VertexName neighbor_by_color_impl(const VertexName& a, int color) const = 0;

 private:
  mutable std::atomic<std::uint64_t> queries_{0};
};

// Oracle over a materialized GluedTreesGraph. include_colors selects between
// the colored variant and the name-only variant used by the colorless games.
class GraphOracle : public Oracle {
 public:
  explicit GraphOracle(const GluedTreesGraph& g, bool include_colors = true);

  int name_bits() const override { return g_.name_bits(); }
  bool provides_colors() const override { return include_colors_; }
  int num_colors() const override { return include_colors_ ? kNumEdgeColors : 0; }
  const GluedTreesGraph& graph() const { return g_; }

 protected:
  std::vector<NeighborInfo> neighbors_impl(const VertexName& a) const override;
  VertexName neighbor_by_color_impl(const VertexName& a, int color) const override;

 private:
  const GluedTreesGraph& g_;
  bool include_colors_;
};

// Colored oracle over an arbitrary adjacency list with explicit names; used
// for small test graphs that exercise the circuit machinery at name widths
// where a full glued-trees instance cannot be named.
class AdjacencyOracle : public Oracle {
 public:
  AdjacencyOracle(std::vector<std::vector<int>> adj, std::vector<std::vector<int>> colors,
                  std::vector<std::uint64_t> names, int name_bits, bool include_colors = true);

  int name_bits() const override { return name_bits_; }
  bool provides_colors() const override { return include_colors_; }
  int num_colors() const override { return include_colors_ ? num_colors_ : 0; }
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  VertexName name_of(int v) const { return VertexName(names_[static_cast<std::size_t>(v)], name_bits_); }

 protected:
  std::vector<NeighborInfo> neighbors_impl(const VertexName& a) const override;
  VertexName neighbor_by_color_impl(const VertexName& a, int color) const override;

 private:
  int vertex_of(const VertexName& a) const;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> colors_;
  std::vector<std::uint64_t> names_;
  std::unordered_map<std::uint64_t, int> index_;
  int name_bits_;
  int num_colors_ = 0;
  bool include_colors_;
};

}  // namespace gluedtrees

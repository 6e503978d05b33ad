#include "gluedtrees/oracle.hpp"

#include <stdexcept>

namespace gluedtrees {

GraphOracle::GraphOracle(const GluedTreesGraph& g, bool include_colors)
    : g_(g), include_colors_(include_colors) {
  if (!g.has_names()) throw std::invalid_argument("GraphOracle: graph has no names");
  if (include_colors && !g.has_coloring())
    throw std::invalid_argument("GraphOracle: colored oracle needs a coloring");
}

std::vector<NeighborInfo> GraphOracle::neighbors_impl(const VertexName& a) const {
  std::vector<NeighborInfo> out;
  const int v = g_.vertex_by_name(a);
  if (v < 0) return out;
  out.reserve(3);
  for (int s = 0; s < g_.degree(v); ++s) {
    const int u = g_.adjacent(v)[static_cast<std::size_t>(s)];
    out.push_back({g_.name_of(u), include_colors_ ? g_.edge_color(v, s) : kNoColor});
  }
  return out;
}

VertexName GraphOracle::neighbor_by_color_impl(const VertexName& a, int color) const {
  if (!include_colors_) throw std::logic_error("oracle variant does not provide colors");
  const int v = g_.vertex_by_name(a);
  if (v < 0) return not_a_vertex();
  const int u = g_.neighbor_by_color(v, color);
  return u < 0 ? not_a_vertex() : g_.name_of(u);
}

AdjacencyOracle::AdjacencyOracle(std::vector<std::vector<int>> adj,
                                 std::vector<std::vector<int>> colors,
                                 std::vector<std::uint64_t> names, int name_bits,
                                 bool include_colors)
    : adj_(std::move(adj)),
      colors_(std::move(colors)),
      names_(std::move(names)),
      name_bits_(name_bits),
      include_colors_(include_colors) {
  if (adj_.size() != names_.size()) throw std::invalid_argument("AdjacencyOracle: size mismatch");
  if (include_colors_ && colors_.size() != adj_.size())
    throw std::invalid_argument("AdjacencyOracle: color list size mismatch");
  const std::uint64_t ones = VertexName::mask(name_bits_);
  for (std::size_t v = 0; v < names_.size(); ++v) {
    if (names_[v] >= ones) throw std::invalid_argument("AdjacencyOracle: reserved or oversized name");
    if (!index_.emplace(names_[v], static_cast<int>(v)).second)
      throw std::invalid_argument("AdjacencyOracle: duplicate name");
  }
  for (const auto& cs : colors_)
    for (int c : cs) num_colors_ = std::max(num_colors_, c + 1);
}

int AdjacencyOracle::vertex_of(const VertexName& a) const {
  if (a.width() != name_bits_) return -1;
  const auto it = index_.find(a.bits());
  return it == index_.end() ? -1 : it->second;
}

std::vector<NeighborInfo> AdjacencyOracle::neighbors_impl(const VertexName& a) const {
  std::vector<NeighborInfo> out;
  const int v = vertex_of(a);
  if (v < 0) return out;
  const auto& ns = adj_[static_cast<std::size_t>(v)];
  for (std::size_t s = 0; s < ns.size(); ++s) {
    const int c = include_colors_ ? colors_[static_cast<std::size_t>(v)][s] : kNoColor;
    out.push_back({name_of(ns[s]), c});
  }
  return out;
}

VertexName AdjacencyOracle::neighbor_by_color_impl(const VertexName& a, int color) const {
  if (!include_colors_) throw std::logic_error("oracle variant does not provide colors");
  const int v = vertex_of(a);
  if (v < 0) return not_a_vertex();
  const auto& cs = colors_[static_cast<std::size_t>(v)];
  for (std::size_t s = 0; s < cs.size(); ++s)
    if (cs[s] == color) return name_of(adj_[static_cast<std::size_t>(v)][s]);
  return not_a_vertex();
}

}  // namespace gluedtrees

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gluedtrees/names.hpp"

namespace gluedtrees {

// Nine edge colors: a letter drawn at even columns and a digit drawn at odd
// columns. Encoded as letter*3 + digit with letter, digit in {0,1,2}.
inline constexpr int kNumEdgeColors = 9;
inline constexpr int kNoColor = -1;

std::string color_to_string(int color);        // "A1".."C3"
int color_from_string(const std::string& s);   // -1 if malformed

// The random graph G'_n: two balanced binary trees of height n whose leaf
// columns are joined by a random cycle alternating between the sides.
// Vertices carry dense integer ids grouped by column; the 2n-bit names used
// by the oracle are a separate, optional layer on top.
class GluedTreesGraph {
 public:
  static constexpr std::size_t kDefaultVertexCap = std::size_t(1) << 24;

  // Draws the central cycle with the seeded generator: a left leaf at random,
  // joined to a right leaf at random, and so on with the remaining leaves,
  // alternating sides until the cycle closes.
  static GluedTreesGraph generate(int n, std::uint64_t seed,
                                  std::size_t max_vertices = kDefaultVertexCap);

  // Entrance gets name 0; every other vertex draws a distinct 2n-bit name
  // uniformly, with 0 and 11...1 excluded. Throws if the name space cannot
  // cover the vertex count (n = 1).
  void assign_names(std::uint64_t seed);

  // Even-column vertices map their incident edges onto distinct letters,
  // odd-column vertices onto distinct digits; an edge's color is the pair.
  void assign_coloring(std::uint64_t seed);

  int n() const { return n_; }
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const;
  int num_columns() const { return 2 * n_ + 2; }
  int column_of(int v) const { return column_of_[static_cast<std::size_t>(v)]; }
  int column_size(int j) const;
  int column_begin(int j) const { return column_begin_[static_cast<std::size_t>(j)]; }

  int degree(int v) const;
  // Neighbor ids in slot order; -1 pads unused slots.
  const std::array<std::int32_t, 3>& adjacent(int v) const { return adj_[static_cast<std::size_t>(v)]; }

  int entrance() const { return 0; }
  int exit_vertex() const { return vertex_count() - 1; }

  bool has_names() const { return !names_.empty(); }
  int name_bits() const { return 2 * n_; }
  VertexName name_of(int v) const { return VertexName(names_[static_cast<std::size_t>(v)], name_bits()); }
  // -1 when no vertex carries the name.
  int vertex_by_name(const VertexName& a) const;

  bool has_coloring() const { return !ecolor_.empty(); }
  int edge_color(int v, int slot) const { return ecolor_[static_cast<std::size_t>(v)][static_cast<std::size_t>(slot)]; }
  // -1 when v has no incident edge of that color.
  int neighbor_by_color(int v, int color) const;

  std::uint64_t graph_seed() const { return graph_seed_; }
  std::uint64_t name_seed() const { return name_seed_; }
  std::uint64_t color_seed() const { return color_seed_; }

  friend bool operator==(const GluedTreesGraph& a, const GluedTreesGraph& b);

  // Serialization (versioned text format, see graph_io.cpp).
  std::string serialize() const;
  static GluedTreesGraph deserialize(const std::string& bytes);

 private:
  friend class GraphReader;
  GluedTreesGraph() = default;
  void add_edge(int u, int v);

  int n_ = 0;
  std::vector<std::array<std::int32_t, 3>> adj_;
  std::vector<std::array<std::int8_t, 3>> ecolor_;
  std::vector<std::int32_t> column_of_;
  std::vector<std::int32_t> column_begin_;
  std::vector<std::uint64_t> names_;
  std::unordered_map<std::uint64_t, std::int32_t> name_index_;
  std::uint64_t graph_seed_ = 0, name_seed_ = 0, color_seed_ = 0;
  bool named_ = false, colored_ = false;
};

}  // namespace gluedtrees

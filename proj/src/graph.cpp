#include "gluedtrees/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "gluedtrees/rng.hpp"

namespace gluedtrees {

std::string color_to_string(int color) {
  if (color < 0 || color >= kNumEdgeColors) return "--";
  std::string s;
  s += static_cast<char>('A' + color / 3);
  s += static_cast<char>('1' + color % 3);
  return s;
}

int color_from_string(const std::string& s) {
  if (s.size() != 2 || s[0] < 'A' || s[0] > 'C' || s[1] < '1' || s[1] > '3') return kNoColor;
  return (s[0] - 'A') * 3 + (s[1] - '1');
}

void GluedTreesGraph::add_edge(int u, int v) {
  auto attach = [this](int a, int b) {
    auto& slots = adj_[static_cast<std::size_t>(a)];
    for (auto& s : slots) {
      if (s == -1) {
        s = b;
        return;
      }
    }
    throw std::logic_error("GluedTreesGraph: vertex degree exceeds 3");
  };
  attach(u, v);
  attach(v, u);
}

GluedTreesGraph GluedTreesGraph::generate(int n, std::uint64_t seed, std::size_t max_vertices) {
  if (n < 1) throw std::invalid_argument("generate_glued_trees: n must be >= 1");
  if (n >= 62) throw std::invalid_argument("generate_glued_trees: n too large");
  const std::uint64_t count = (std::uint64_t(1) << (n + 2)) - 2;
  if (count > max_vertices)
    throw std::invalid_argument("generate_glued_trees: vertex count " + std::to_string(count) +
                                " exceeds cap " + std::to_string(max_vertices));

  GluedTreesGraph g;
  g.n_ = n;
  g.graph_seed_ = seed;
  const int cols = 2 * n + 2;
  g.column_begin_.resize(static_cast<std::size_t>(cols) + 1);
  int off = 0;
  for (int j = 0; j < cols; ++j) {
    g.column_begin_[static_cast<std::size_t>(j)] = off;
    off += (j <= n) ? (1 << j) : (1 << (2 * n + 1 - j));
  }
  g.column_begin_[static_cast<std::size_t>(cols)] = off;
  g.adj_.assign(static_cast<std::size_t>(off), {-1, -1, -1});
  g.column_of_.resize(static_cast<std::size_t>(off));
  for (int j = 0; j < cols; ++j)
    for (int v = g.column_begin(j); v < g.column_begin(j + 1); ++v)
      g.column_of_[static_cast<std::size_t>(v)] = j;

  // Left tree: column j vertex i has children 2i and 2i+1 in column j+1.
  for (int j = 0; j < n; ++j) {
    const int b = g.column_begin(j), c = g.column_begin(j + 1);
    for (int i = 0; i < (1 << j); ++i) {
      g.add_edge(b + i, c + 2 * i);
      g.add_edge(b + i, c + 2 * i + 1);
    }
  }
  // Right tree, mirrored: column j vertex i has children in column j-1.
  for (int j = 2 * n + 1; j > n + 1; --j) {
    const int b = g.column_begin(j), c = g.column_begin(j - 1);
    for (int i = 0; i < (1 << (2 * n + 1 - j)); ++i) {
      g.add_edge(b + i, c + 2 * i);
      g.add_edge(b + i, c + 2 * i + 1);
    }
  }

  // Random alternating cycle over the two leaf columns. Each leaf keeps a
  // stub count; we draw uniformly among leaves with stubs remaining.
  Rng rng(seed, /*stream=*/1);
  const int nl = 1 << n;
  std::vector<int> left(static_cast<std::size_t>(nl)), right(static_cast<std::size_t>(nl));
  for (int i = 0; i < nl; ++i) {
    left[static_cast<std::size_t>(i)] = g.column_begin(n) + i;
    right[static_cast<std::size_t>(i)] = g.column_begin(n + 1) + i;
  }
  auto draw = [&rng](std::vector<int>& pool) {
    const std::size_t k = static_cast<std::size_t>(rng.below(pool.size()));
    const int v = pool[k];
    pool[k] = pool.back();
    pool.pop_back();
    return v;
  };
  const int first = draw(left);
  int cur = first;
  for (int step = 0; step < nl; ++step) {
    const int r = draw(right);
    g.add_edge(cur, r);
    if (step + 1 < nl) {
      cur = draw(left);
      g.add_edge(r, cur);
    } else {
      g.add_edge(r, first);  // close the cycle
    }
  }
  return g;
}

int GluedTreesGraph::edge_count() const {
  int deg = 0;
  for (int v = 0; v < vertex_count(); ++v) deg += degree(v);
  return deg / 2;
}

int GluedTreesGraph::column_size(int j) const {
  return column_begin(j + 1) - column_begin(j);
}

int GluedTreesGraph::degree(int v) const {
  const auto& s = adj_[static_cast<std::size_t>(v)];
  return static_cast<int>((s[0] != -1) + (s[1] != -1) + (s[2] != -1));
}

void GluedTreesGraph::assign_names(std::uint64_t seed) {
  if (named_) throw std::logic_error("assign_names: graph already named");
  const int w = name_bits();
  const std::uint64_t space = VertexName::mask(w) - 1;  // excludes 0 and 11...1
  const std::uint64_t needed = static_cast<std::uint64_t>(vertex_count()) - 1;
  if (needed > space)
    throw std::invalid_argument("assign_names: name space exhausted (n=" + std::to_string(n_) + ")");

  name_seed_ = seed;
  Rng rng(seed, /*stream=*/2);
  names_.assign(static_cast<std::size_t>(vertex_count()), 0);
  name_index_.clear();
  name_index_.reserve(static_cast<std::size_t>(vertex_count()) * 2);
  name_index_.emplace(0, 0);
  for (int v = 1; v < vertex_count(); ++v) {
    std::uint64_t b;
    do {
      b = 1 + rng.below(space);  // uniform in [1, 2^w - 2]
    } while (name_index_.count(b));
    names_[static_cast<std::size_t>(v)] = b;
    name_index_.emplace(b, v);
  }
  named_ = true;
}

int GluedTreesGraph::vertex_by_name(const VertexName& a) const {
  if (a.width() != name_bits()) return -1;
  const auto it = name_index_.find(a.bits());
  return it == name_index_.end() ? -1 : it->second;
}

void GluedTreesGraph::assign_coloring(std::uint64_t seed) {
  if (!named_) throw std::logic_error("assign_coloring: name the graph first");
  color_seed_ = seed;
  Rng rng(seed, /*stream=*/3);

  // Phase one: a random injection of each even-column vertex's edges into
  // the letters; phase two the same with digits at odd columns. Letters are
  // stored in the low two bits of a scratch value until both halves exist.
  const std::size_t V = static_cast<std::size_t>(vertex_count());
  std::vector<std::array<std::int8_t, 3>> letter(V, {-1, -1, -1});
  std::vector<std::array<std::int8_t, 3>> digit(V, {-1, -1, -1});
  auto draw_injection = [&rng]() {
    std::array<std::int8_t, 3> p = {0, 1, 2};
    for (int i = 2; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return p;
  };
  for (int v = 0; v < vertex_count(); ++v) {
    const int deg = degree(v);
    const auto p = draw_injection();
    if (column_of(v) % 2 == 0)
      for (int s = 0; s < deg; ++s) letter[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] = p[static_cast<std::size_t>(s)];
    else
      for (int s = 0; s < deg; ++s) digit[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] = p[static_cast<std::size_t>(s)];
  }

  ecolor_.assign(V, {-1, -1, -1});
  for (int v = 0; v < vertex_count(); ++v) {
    if (column_of(v) % 2 != 0) continue;
    for (int s = 0; s < degree(v); ++s) {
      const int u = adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
      int su = 0;
      while (adj_[static_cast<std::size_t>(u)][static_cast<std::size_t>(su)] != v) ++su;
      const int c = letter[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] * 3 +
                    digit[static_cast<std::size_t>(u)][static_cast<std::size_t>(su)];
      ecolor_[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] = static_cast<std::int8_t>(c);
      ecolor_[static_cast<std::size_t>(u)][static_cast<std::size_t>(su)] = static_cast<std::int8_t>(c);
    }
  }
  colored_ = true;
}

int GluedTreesGraph::neighbor_by_color(int v, int color) const {
  const auto& cs = ecolor_[static_cast<std::size_t>(v)];
  for (int s = 0; s < 3; ++s)
    if (cs[static_cast<std::size_t>(s)] == color) return adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
  return -1;
}

bool operator==(const GluedTreesGraph& a, const GluedTreesGraph& b) {
  return a.n_ == b.n_ && a.adj_ == b.adj_ && a.ecolor_ == b.ecolor_ && a.names_ == b.names_ &&
         a.graph_seed_ == b.graph_seed_ && a.name_seed_ == b.name_seed_ &&
         a.color_seed_ == b.color_seed_ && a.named_ == b.named_ && a.colored_ == b.colored_;
}

}  // namespace gluedtrees

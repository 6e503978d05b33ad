#include "gluedtrees/games.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gluedtrees {

std::vector<std::int64_t> MaterializedBackend::adjacent(std::int64_t slot) const {
  std::vector<std::int64_t> out;
  const int v = static_cast<int>(slot);
  for (int s = 0; s < g_->degree(v); ++s) out.push_back(g_->adjacent(v)[static_cast<std::size_t>(s)]);
  return out;
}

VirtualTreeBackend::VirtualTreeBackend(int n) : n_(n) {
  if (n < 3 || n > 47) throw std::invalid_argument("VirtualTreeBackend: n out of range");
}

std::vector<std::int64_t> VirtualTreeBackend::adjacent(std::int64_t slot) const {
  const int j = column_of(slot);
  const std::int64_t i = index_in_column(slot);
  if (j == n_ || j == n_ + 1)
    throw std::logic_error(
        "VirtualTreeBackend: central-column expansion needs the materialized cycle");
  std::vector<std::int64_t> out;
  if (j < n_) {
    if (j > 0) out.push_back(slot_at(j - 1, i >> 1));
    out.push_back(slot_at(j + 1, 2 * i));
    out.push_back(slot_at(j + 1, 2 * i + 1));
  } else {  // right tree, j >= n+2
    if (j < 2 * n_ + 1) out.push_back(slot_at(j + 1, i >> 1));
    out.push_back(slot_at(j - 1, 2 * i));
    out.push_back(slot_at(j - 1, 2 * i + 1));
  }
  return out;
}

LazyNameOracle::LazyNameOracle(const InstanceBackend& backend, std::uint64_t name_seed,
                               bool with_colors, std::uint64_t color_seed)
    : backend_(backend),
      with_colors_(with_colors),
      color_seed_(color_seed),
      rng_(name_seed, /*stream=*/21),
      named_per_column_(static_cast<std::size_t>(backend.columns()), 0) {
  const std::int64_t ent = backend_.entrance_slot();
  name_to_slot_.emplace(0, ent);
  slot_to_name_.emplace(ent, 0);
  named_idx_.emplace(ent, 1);
  named_per_column_[0] = 1;
}

std::uint64_t LazyNameOracle::fresh_name() const {
  const std::uint64_t space = VertexName::mask(name_bits()) - 1;  // excludes 0, 11..1
  std::uint64_t b;
  do {
    b = 1 + rng_.below(space);
  } while (name_to_slot_.count(b) || misses_.count(b));
  return b;
}

std::int64_t LazyNameOracle::sample_unnamed_slot() const {
  std::int64_t free_total = 0;
  for (int j = 0; j < backend_.columns(); ++j)
    free_total += backend_.column_size(j) - named_per_column_[static_cast<std::size_t>(j)];
  std::int64_t pick = static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(free_total)));
  for (int j = 0; j < backend_.columns(); ++j) {
    const std::int64_t free_here =
        backend_.column_size(j) - named_per_column_[static_cast<std::size_t>(j)];
    if (pick >= free_here) {
      pick -= free_here;
      continue;
    }
    std::int64_t slot;
    do {
      slot = backend_.slot_at(j, static_cast<std::int64_t>(
                                     rng_.below(static_cast<std::uint64_t>(backend_.column_size(j)))));
    } while (named_idx_.count(slot));
    return slot;
  }
  throw std::logic_error("sample_unnamed_slot: no free slots");
}

VertexName LazyNameOracle::name_of_slot(std::int64_t slot) const {
  const auto it = slot_to_name_.find(slot);
  if (it != slot_to_name_.end()) return VertexName(it->second, name_bits());
  const std::uint64_t b = fresh_name();
  name_to_slot_.emplace(b, slot);
  slot_to_name_.emplace(slot, b);
  named_idx_.emplace(slot, 1);
  ++named_per_column_[static_cast<std::size_t>(backend_.column_of(slot))];
  return VertexName(b, name_bits());
}

std::int64_t LazyNameOracle::resolve(const VertexName& a) const {
  if (a.width() != name_bits() || a.is_all_ones()) return -1;
  const auto it = name_to_slot_.find(a.bits());
  if (it != name_to_slot_.end()) return it->second;
  if (misses_.count(a.bits())) return -1;
  // Unseen name: it names one of the unrevealed vertices with the exact
  // conditional probability given everything revealed so far.
  const std::int64_t revealed = static_cast<std::int64_t>(name_to_slot_.size()) - 1;
  const std::int64_t hidden_vertices = backend_.vertex_total() - 1 - revealed;
  const std::int64_t hidden_names = static_cast<std::int64_t>(VertexName::mask(name_bits())) - 1 -
                                    revealed - static_cast<std::int64_t>(misses_.size());
  if (rng_.below(static_cast<std::uint64_t>(hidden_names)) <
      static_cast<std::uint64_t>(hidden_vertices)) {
    const std::int64_t slot = sample_unnamed_slot();
    name_to_slot_.emplace(a.bits(), slot);
    slot_to_name_.emplace(slot, a.bits());
    named_idx_.emplace(slot, 1);
    ++named_per_column_[static_cast<std::size_t>(backend_.column_of(slot))];
    return slot;
  }
  misses_.insert(a.bits());
  return -1;
}

int LazyNameOracle::edge_color(std::int64_t u, int slot_index_u) const {
  const auto draw = [this](std::int64_t slot) {
    Rng r(color_seed_, Rng::mix(static_cast<std::uint64_t>(slot)));
    std::array<int, 3> p = {0, 1, 2};
    for (int i = 2; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[r.below(static_cast<std::uint64_t>(i) + 1)]);
    return p;
  };
  const auto nbrs = backend_.adjacent(u);
  const std::int64_t v = nbrs[static_cast<std::size_t>(slot_index_u)];
  const auto back = backend_.adjacent(v);
  int slot_index_v = -1;
  for (std::size_t s = 0; s < back.size(); ++s)
    if (back[s] == u) slot_index_v = static_cast<int>(s);
  const bool u_even = backend_.column_of(u) % 2 == 0;
  const std::int64_t even = u_even ? u : v;
  const std::int64_t odd = u_even ? v : u;
  const int even_idx = u_even ? slot_index_u : slot_index_v;
  const int odd_idx = u_even ? slot_index_v : slot_index_u;
  return draw(even)[static_cast<std::size_t>(even_idx)] * 3 + draw(odd)[static_cast<std::size_t>(odd_idx)];
}

std::vector<NeighborInfo> LazyNameOracle::neighbors_impl(const VertexName& a) const {
  std::vector<NeighborInfo> out;
  const std::int64_t slot = resolve(a);
  if (slot < 0) return out;
  const auto nbrs = backend_.adjacent(slot);
  for (std::size_t s = 0; s < nbrs.size(); ++s)
    out.push_back({name_of_slot(nbrs[s]),
                   with_colors_ ? edge_color(slot, static_cast<int>(s)) : kNoColor});
  return out;
}

VertexName LazyNameOracle::neighbor_by_color_impl(const VertexName& a, int color) const {
  if (!with_colors_) throw std::logic_error("oracle variant does not provide colors");
  const std::int64_t slot = resolve(a);
  if (slot < 0) return not_a_vertex();
  const auto nbrs = backend_.adjacent(slot);
  for (std::size_t s = 0; s < nbrs.size(); ++s)
    if (edge_color(slot, static_cast<int>(s)) == color) return name_of_slot(nbrs[s]);
  return not_a_vertex();
}

bool LazyNameOracle::is_exit_name(const VertexName& a) const {
  if (a.width() != name_bits()) return false;
  const auto it = name_to_slot_.find(a.bits());
  return it != name_to_slot_.end() && it->second == backend_.exit_slot();
}

std::optional<int> LazyNameOracle::column_of_name(const VertexName& a) const {
  const auto it = name_to_slot_.find(a.bits());
  if (it == name_to_slot_.end()) return std::nullopt;
  return backend_.column_of(it->second);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t digest_mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

class UnionFind {
 public:
  int id(std::uint64_t name) {
    const auto [it, fresh] = index_.emplace(name, static_cast<int>(parent_.size()));
    if (fresh) parent_.push_back(it->second);
    return it->second;
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  // returns false when the edge closes a cycle
  bool unite(std::uint64_t a, std::uint64_t b) {
    const int ra = find(id(a)), rb = find(id(b));
    if (ra == rb) return false;
    parent_[static_cast<std::size_t>(ra)] = rb;
    return true;
  }

 private:
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<int> parent_;
};

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    return std::hash<std::uint64_t>()(p.first * 0x9e3779b97f4a7c15ull ^ p.second);
  }
};

}  // namespace

GameResult play_game(GameVariant game, Adversary& adv, const GameInstance& inst, long budget,
                     std::uint64_t seed, std::vector<TranscriptEvent>* transcript) {
  const Oracle& oracle = *inst.oracle;
  const bool colored_game = game == GameVariant::kOpenColored || game == GameVariant::kSeenColored;
  if (colored_game != oracle.provides_colors())
    throw std::invalid_argument("play_game: oracle variant does not match the game");

  GameResult result;
  result.game = game;
  result.seed = seed;
  adv.reset(oracle.name_bits(), seed);

  const VertexName entrance = oracle.entrance_name();
  std::unordered_set<std::uint64_t> seen{entrance.bits()};
  UnionFind uf;
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> edges;
  std::uint64_t digest = 0xcbf29ce484222325ull;
  std::vector<NeighborInfo> last_reply;

  for (long q = 1; q <= budget; ++q) {
    const VertexName query = adv.next_query(last_reply);
    result.queries = q;
    digest = digest_mix(digest, query.bits());

    const bool legal = game == GameVariant::kOpenColored || seen.count(query.bits());
    if (!legal || query.width() != oracle.name_bits()) {
      // Games 2-4 only accept names the oracle has sent; anything else is a
      // wasted query.
      if (transcript) transcript->push_back({query, true, {}});
      last_reply.clear();
      continue;
    }

    last_reply = oracle.neighbors(query);
    std::vector<VertexName> reply_names;
    for (const auto& nb : last_reply) {
      seen.insert(nb.name.bits());
      reply_names.push_back(nb.name);
      digest = digest_mix(digest, nb.name.bits());
    }
    if (transcript) transcript->push_back({query, false, reply_names});
    if (inst.is_exit(query)) {
      result.win = true;
      result.cause = GameResult::Cause::kExitFound;
      break;
    }

    if (game == GameVariant::kSeenPlainCycles && !last_reply.empty()) {
      bool cycle = false;
      for (const auto& nb : last_reply) {
        const std::uint64_t a = std::min(query.bits(), nb.name.bits());
        const std::uint64_t b = std::max(query.bits(), nb.name.bits());
        if (!edges.emplace(a, b).second) continue;  // edge already seen
        if (!uf.unite(a, b)) cycle = true;
      }
      if (cycle) {
        result.win = true;
        result.cause = GameResult::Cause::kCycleFound;
        break;
      }
    }
  }
  result.transcript_digest = digest;
  return result;
}

// ---------------------------------------------------------------------------
// Adversary catalog.

namespace {

class RandomWalker : public Adversary {
 public:
  std::string name() const override { return "random-walker"; }
  void reset(int name_bits, std::uint64_t seed) override {
    bits_ = name_bits;
    rng_ = Rng(seed, 31);
  }
  VertexName next_query(const std::vector<NeighborInfo>& last) override {
    if (last.empty()) return VertexName::zero(bits_);
    return last[rng_.below(last.size())].name;
  }

 private:
  int bits_ = 2;
  Rng rng_{0};
};

class NonBacktrackingWalker : public Adversary {
 public:
  std::string name() const override { return "non-backtracking-walker"; }
  void reset(int name_bits, std::uint64_t seed) override {
    bits_ = name_bits;
    rng_ = Rng(seed, 32);
    prev_ = current_ = VertexName::zero(name_bits);
  }
  VertexName next_query(const std::vector<NeighborInfo>& last) override {
    if (last.empty()) {
      prev_ = current_ = VertexName::zero(bits_);
      return current_;
    }
    std::vector<VertexName> options;
    for (const auto& nb : last)
      if (!(nb.name == prev_)) options.push_back(nb.name);
    if (options.empty())
      for (const auto& nb : last) options.push_back(nb.name);
    prev_ = current_;
    current_ = options[rng_.below(options.size())];
    return current_;
  }

 private:
  int bits_ = 2;
  Rng rng_{0};
  VertexName prev_{0, 2}, current_{0, 2};
};

class DepthFirstExplorer : public Adversary {
 public:
  std::string name() const override { return "depth-first-explorer"; }
  void reset(int name_bits, std::uint64_t seed) override {
    (void)seed;
    bits_ = name_bits;
    stack_.clear();
    queried_.clear();
  }
  VertexName next_query(const std::vector<NeighborInfo>& last) override {
    // push the newest reply's names, deepest-first exploration
    std::vector<VertexName> fresh;
    for (const auto& nb : last)
      if (!queried_.count(nb.name.bits())) fresh.push_back(nb.name);
    std::sort(fresh.begin(), fresh.end());
    for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) stack_.push_back(*it);
    while (!stack_.empty() && queried_.count(stack_.back().bits())) stack_.pop_back();
    VertexName next = stack_.empty() ? VertexName::zero(bits_) : stack_.back();
    if (!stack_.empty()) stack_.pop_back();
    queried_.insert(next.bits());
    return next;
  }

 private:
  int bits_ = 2;
  std::vector<VertexName> stack_;
  std::unordered_set<std::uint64_t> queried_;
};

// Degree-aware explorer in the spirit of the identified-trees traversal: it
// walks toward unvisited neighbors, and whenever a reply shows degree 2 it
// jumps back half its path and tries the other branch.
class DegreeBacktracker : public Adversary {
 public:
  std::string name() const override { return "degree-backtracker"; }
  void reset(int name_bits, std::uint64_t seed) override {
    (void)seed;
    bits_ = name_bits;
    path_.assign(1, VertexName::zero(name_bits));
    visited_.clear();
    visited_.insert(0);
    adj_.clear();
    first_ = true;
  }
  VertexName next_query(const std::vector<NeighborInfo>& last) override {
    if (first_) {
      first_ = false;
      return path_.back();
    }
    if (!last.empty()) {
      std::vector<VertexName> ns;
      for (const auto& nb : last) ns.push_back(nb.name);
      std::sort(ns.begin(), ns.end());
      adj_[path_.back().bits()] = ns;
      if (ns.size() == 2 && path_.size() > 1) {
        // degree-2 sighting away from the entrance: retreat half way
        path_.resize(path_.size() - path_.size() / 2);
      }
    }
    // step to the lexicographically smallest unvisited neighbor, retreating
    // while stuck
    while (!path_.empty()) {
      const auto it = adj_.find(path_.back().bits());
      if (it != adj_.end()) {
        for (const auto& nb : it->second)
          if (!visited_.count(nb.bits())) {
            visited_.insert(nb.bits());
            path_.push_back(nb);
            return nb;
          }
      }
      path_.pop_back();
    }
    path_.assign(1, VertexName::zero(bits_));
    return path_.back();
  }

 private:
  int bits_ = 2;
  bool first_ = true;
  std::vector<VertexName> path_;
  std::unordered_set<std::uint64_t> visited_;
  std::unordered_map<std::uint64_t, std::vector<VertexName>> adj_;
};

class RandomNameGuesser : public Adversary {
 public:
  std::string name() const override { return "random-name-guesser"; }
  void reset(int name_bits, std::uint64_t seed) override {
    bits_ = name_bits;
    rng_ = Rng(seed, 33);
  }
  VertexName next_query(const std::vector<NeighborInfo>&) override {
    return VertexName(rng_.below(VertexName::mask(bits_) + 1), bits_);
  }

 private:
  int bits_ = 2;
  Rng rng_{0};
};

}  // namespace

std::vector<std::unique_ptr<Adversary>> adversary_catalog() {
  std::vector<std::unique_ptr<Adversary>> out;
  out.push_back(std::make_unique<RandomWalker>());
  out.push_back(std::make_unique<NonBacktrackingWalker>());
  out.push_back(std::make_unique<DepthFirstExplorer>());
  out.push_back(std::make_unique<DegreeBacktracker>());
  out.push_back(std::make_unique<RandomNameGuesser>());
  return out;
}

std::unique_ptr<Adversary> make_adversary(const std::string& name) {
  for (auto& a : adversary_catalog())
    if (a->name() == name) return std::move(a);
  throw std::invalid_argument("unknown adversary: " + name);
}

// ---------------------------------------------------------------------------
// Rooted binary trees and random embeddings.

int RootedBinaryTree::depth() const {
  int best = 0;
  std::vector<int> d(static_cast<std::size_t>(size()), 0);
  for (int v = 1; v < size(); ++v) {
    d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])] + 1;
    best = std::max(best, d[static_cast<std::size_t>(v)]);
  }
  return best;
}

void RootedBinaryTree::validate() const {
  if (size() < 1 || parent[0] != -1) throw std::invalid_argument("tree: bad root");
  for (int v = 1; v < size(); ++v) {
    const int p = parent[static_cast<std::size_t>(v)];
    if (p < 0 || p >= v) throw std::invalid_argument("tree: labels must increase from the root");
    bool found = false;
    for (int c : children[static_cast<std::size_t>(p)]) found = found || c == v;
    if (!found) throw std::invalid_argument("tree: parent/child mismatch");
  }
}

RootedBinaryTree RootedBinaryTree::single() {
  RootedBinaryTree t;
  t.parent = {-1};
  t.children = {{-1, -1}};
  return t;
}

RootedBinaryTree RootedBinaryTree::path(int n) {
  if (n < 1) throw std::invalid_argument("tree path: n >= 1");
  RootedBinaryTree t;
  t.parent.resize(static_cast<std::size_t>(n));
  t.children.assign(static_cast<std::size_t>(n), {-1, -1});
  t.parent[0] = -1;
  for (int v = 1; v < n; ++v) {
    t.parent[static_cast<std::size_t>(v)] = v - 1;
    t.children[static_cast<std::size_t>(v) - 1][0] = v;
  }
  return t;
}

RootedBinaryTree RootedBinaryTree::complete(int n) {
  if (n < 1) throw std::invalid_argument("tree complete: n >= 1");
  RootedBinaryTree t;
  t.parent.resize(static_cast<std::size_t>(n));
  t.children.assign(static_cast<std::size_t>(n), {-1, -1});
  t.parent[0] = -1;
  for (int v = 1; v < n; ++v) {
    const int p = (v - 1) / 2;
    t.parent[static_cast<std::size_t>(v)] = p;
    t.children[static_cast<std::size_t>(p)][(v - 1) % 2] = v;
  }
  return t;
}

RootedBinaryTree RootedBinaryTree::random_full(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree random: n >= 1");
  RootedBinaryTree t = single();
  Rng rng(seed, 41);
  std::vector<int> leaves = {0};
  while (t.size() + 2 <= n) {
    const std::size_t pick = static_cast<std::size_t>(rng.below(leaves.size()));
    const int v = leaves[pick];
    leaves[pick] = leaves.back();
    leaves.pop_back();
    for (int c = 0; c < 2; ++c) {
      const int w = t.size();
      t.parent.push_back(v);
      t.children.push_back({-1, -1});
      t.children[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)] = w;
      leaves.push_back(w);
    }
  }
  if (t.size() < n) {  // one single-child vertex rounds out even sizes
    const int v = leaves[static_cast<std::size_t>(rng.below(leaves.size()))];
    const int w = t.size();
    t.parent.push_back(v);
    t.children.push_back({-1, -1});
    t.children[static_cast<std::size_t>(v)][0] = w;
  }
  return t;
}

Embedding random_embedding(const RootedBinaryTree& tree, const InstanceBackend& backend,
                           Rng& rng) {
  tree.validate();
  const int t = tree.size();
  Embedding e;
  e.image.assign(static_cast<std::size_t>(t), -1);
  e.image[0] = backend.entrance_slot();
  e.max_column = 0;

  auto assign_children = [&](int v, const std::vector<std::int64_t>& options) {
    const int c0 = tree.children[static_cast<std::size_t>(v)][0];
    const int c1 = tree.children[static_cast<std::size_t>(v)][1];
    if (c0 < 0 && c1 < 0) return;
    const bool flip = rng.below(2) == 1;
    const std::int64_t u = options[flip ? 1 : 0];
    const std::int64_t w = options[flip ? 0 : 1];
    if (c0 >= 0 && c1 >= 0) {
      e.image[static_cast<std::size_t>(c0)] = u;
      e.image[static_cast<std::size_t>(c1)] = w;
    } else {
      e.image[static_cast<std::size_t>(c0 >= 0 ? c0 : c1)] = u;
    }
  };

  // the root expands over both entrance neighbors
  assign_children(0, backend.adjacent(backend.entrance_slot()));

  for (int v = 1; v < t; ++v) {
    const std::int64_t img = e.image[static_cast<std::size_t>(v)];
    if (img < 0) continue;                             // parent halted
    if (tree.children[static_cast<std::size_t>(v)][0] < 0 &&
        tree.children[static_cast<std::size_t>(v)][1] < 0)
      continue;                                        // leaf
    if (img == backend.entrance_slot() || img == backend.exit_slot()) continue;  // halt
    const std::int64_t from = e.image[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(v)])];
    std::vector<std::int64_t> options;
    for (const std::int64_t nb : backend.adjacent(img))
      if (nb != from) options.push_back(nb);
    if (options.size() != 2)
      throw std::logic_error("random_embedding: expected exactly two forward neighbors");
    assign_children(v, options);
  }

  std::unordered_set<std::int64_t> used;
  for (int v = 0; v < t; ++v) {
    const std::int64_t img = e.image[static_cast<std::size_t>(v)];
    if (img < 0) continue;
    if (!used.insert(img).second) e.proper = false;
    if (img == backend.exit_slot()) e.exited = true;
    e.max_column = std::max(e.max_column, backend.column_of(img));
  }
  return e;
}

Embedding random_embedding(const RootedBinaryTree& tree, const GluedTreesGraph& g,
                           std::uint64_t seed) {
  MaterializedBackend backend(g);
  Rng rng(seed, 42);
  return random_embedding(tree, backend, rng);
}

WilsonInterval wilson(long wins, long trials, double z) {
  WilsonInterval w;
  if (trials <= 0) return w;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(wins) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.rate = p;
  w.lower = std::max(0.0, center - half);
  w.upper = std::min(1.0, center + half);
  return w;
}

Game5Estimate estimate_game5(const RootedBinaryTree& tree, int n, long trials,
                             std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("estimate_game5: need at least 100 trials");
  tree.validate();
  Game5Estimate est;
  est.trials = trials;

  const bool virtual_ok = tree.depth() + 1 < n;
  std::optional<VirtualTreeBackend> virt;
  if (virtual_ok) virt.emplace(n);

  for (long trial = 0; trial < trials; ++trial) {
    Rng rng(seed, 1000 + static_cast<std::uint64_t>(trial));
    Embedding e;
    if (virtual_ok) {
      // every G'_n shares the tree regions; shallow trees never see the cycle
      e = random_embedding(tree, *virt, rng);
    } else {
      auto g = GluedTreesGraph::generate(n, Rng::mix(seed ^ static_cast<std::uint64_t>(trial)));
      MaterializedBackend backend(g);
      e = random_embedding(tree, backend, rng);
    }
    const bool win = !e.proper || e.exited;
    est.wins += win;
    est.improper += !e.proper;
    est.exited += e.exited;
    est.deep_reach += e.max_column >= n + n / 2;
  }
  est.interval = wilson(est.wins, est.trials);
  return est;
}

TreeReplay transcript_to_tree(const std::vector<TranscriptEvent>& transcript,
                              const VertexName& entrance,
                              const std::function<bool(const VertexName&)>& is_exit) {
  TreeReplay out;
  out.tree.parent = {-1};
  out.tree.children = {{-1, -1}};
  out.image = {entrance};
  std::unordered_map<std::uint64_t, int> first_vertex{{entrance.bits(), 0}};
  std::unordered_map<std::uint64_t, char> name_seen{{entrance.bits(), 1}};
  std::unordered_set<int> expanded;

  if (is_exit(entrance)) out.exits = true;
  for (const auto& ev : transcript) {
    if (ev.rejected) continue;
    if (is_exit(ev.query)) {
      out.exits = true;
      out.exits_queried = true;
    }
    const auto qit = first_vertex.find(ev.query.bits());
    if (qit == first_vertex.end()) continue;  // open-game query outside the tree
    const int v = qit->second;
    if (!expanded.insert(v).second) continue;  // repeat query reveals nothing new
    const int parent_vertex = out.tree.parent[static_cast<std::size_t>(v)];
    int child_slot = 0;
    for (const auto& nb : ev.reply) {
      if (parent_vertex >= 0 && out.image[static_cast<std::size_t>(parent_vertex)] == nb) continue;
      if (is_exit(nb)) out.exits = true;
      const int w = out.tree.size();
      out.tree.parent.push_back(v);
      out.tree.children.push_back({-1, -1});
      if (child_slot < 2) out.tree.children[static_cast<std::size_t>(v)][static_cast<std::size_t>(child_slot)] = w;
      ++child_slot;
      out.image.push_back(nb);
      if (!name_seen.emplace(nb.bits(), 1).second) out.improper = true;
      first_vertex.emplace(nb.bits(), w);
    }
  }
  return out;
}

}  // namespace gluedtrees

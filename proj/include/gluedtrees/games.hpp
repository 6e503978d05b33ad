#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gluedtrees/graph.hpp"
#include "gluedtrees/oracle.hpp"
#include "gluedtrees/rng.hpp"

namespace gluedtrees {

// ---------------------------------------------------------------------------
// Instance backends: graph structure with ground truth, independent of names.

// Structure view of a glued-trees instance addressed by slots. Materialized
// backends wrap a generated graph; the virtual backend serves the
// deterministic tree regions of G'_n for huge n and refuses to expand the
// central columns (whose random cycle would otherwise need materializing).
class InstanceBackend {
 public:
  virtual ~InstanceBackend() = default;
  virtual int n() const = 0;
  virtual std::int64_t vertex_total() const = 0;
  virtual std::int64_t column_size(int j) const = 0;
  virtual int column_of(std::int64_t slot) const = 0;
  virtual std::int64_t slot_at(int column, std::int64_t idx) const = 0;
  virtual std::int64_t index_in_column(std::int64_t slot) const = 0;
  virtual std::vector<std::int64_t> adjacent(std::int64_t slot) const = 0;
  std::int64_t entrance_slot() const { return slot_at(0, 0); }
  std::int64_t exit_slot() const { return slot_at(2 * n() + 1, 0); }
  int columns() const { return 2 * n() + 2; }
};

class MaterializedBackend : public InstanceBackend {
 public:
  explicit MaterializedBackend(const GluedTreesGraph& g) : g_(&g) {}
  int n() const override { return g_->n(); }
  std::int64_t vertex_total() const override { return g_->vertex_count(); }
  std::int64_t column_size(int j) const override { return g_->column_size(j); }
  int column_of(std::int64_t slot) const override { return g_->column_of(static_cast<int>(slot)); }
  std::int64_t slot_at(int column, std::int64_t idx) const override {
    return g_->column_begin(column) + idx;
  }
  std::int64_t index_in_column(std::int64_t slot) const override {
    return slot - g_->column_begin(column_of(slot));
  }
  std::vector<std::int64_t> adjacent(std::int64_t slot) const override;

 private:
  const GluedTreesGraph* g_;
};

// Tree regions of G'_n by index arithmetic alone. Expanding a leaf-column
// vertex would require the random central cycle, so such queries throw;
// valid for query budgets below n, where no walk can reach the center.
class VirtualTreeBackend : public InstanceBackend {
 public:
  explicit VirtualTreeBackend(int n);
  int n() const override { return n_; }
  std::int64_t vertex_total() const override { return (std::int64_t(1) << (n_ + 2)) - 2; }
  std::int64_t column_size(int j) const override {
    return std::int64_t(1) << (j <= n_ ? j : 2 * n_ + 1 - j);
  }
  int column_of(std::int64_t slot) const override { return static_cast<int>(slot >> 48); }
  std::int64_t slot_at(int column, std::int64_t idx) const override {
    return std::int64_t(column) << 48 | idx;
  }
  std::int64_t index_in_column(std::int64_t slot) const override {
    return slot & ((std::int64_t(1) << 48) - 1);
  }
  std::vector<std::int64_t> adjacent(std::int64_t slot) const override;

 private:
  int n_;
};

// ---------------------------------------------------------------------------
// Lazily named oracle over a backend: names are drawn uniformly without
// replacement as vertices come into view, so a fixed structure can be
// resampled cheaply, and an unseen queried name is resolved by the exact
// conditional probability that it names an unrevealed vertex.
class LazyNameOracle : public Oracle {
 public:
  LazyNameOracle(const InstanceBackend& backend, std::uint64_t name_seed, bool with_colors,
                 std::uint64_t color_seed = 0);

  int name_bits() const override { return 2 * backend_.n(); }
  bool provides_colors() const override { return with_colors_; }
  int num_colors() const override { return with_colors_ ? kNumEdgeColors : 0; }

  // Adjudication and analysis; never counts as a query.
  bool is_exit_name(const VertexName& a) const;
  std::optional<int> column_of_name(const VertexName& a) const;
  VertexName name_of_slot(std::int64_t slot) const;  // forces the name out

 protected:
  std::vector<NeighborInfo> neighbors_impl(const VertexName& a) const override;
  VertexName neighbor_by_color_impl(const VertexName& a, int color) const override;

 private:
  std::int64_t resolve(const VertexName& a) const;  // -1 when not a vertex
  std::uint64_t fresh_name() const;
  std::int64_t sample_unnamed_slot() const;
  int edge_color(std::int64_t u, int slot_index_u) const;

  const InstanceBackend& backend_;
  bool with_colors_;
  std::uint64_t color_seed_;
  mutable Rng rng_;
  mutable std::unordered_map<std::uint64_t, std::int64_t> name_to_slot_;
  mutable std::unordered_map<std::int64_t, std::uint64_t> slot_to_name_;
  mutable std::unordered_set<std::uint64_t> misses_;
  mutable std::vector<std::int64_t> named_per_column_;
  mutable std::unordered_map<std::int64_t, char> named_idx_;  // keyed by slot
};

// ---------------------------------------------------------------------------
// Games 1-4.

enum class GameVariant {
  kOpenColored = 1,   // any name may be queried; replies carry colors
  kSeenColored = 2,   // only previously seen names; colors
  kSeenPlain = 3,     // only seen names; no colors
  kSeenPlainCycles = 4,  // game 3 plus the cycle win condition
};

struct TranscriptEvent {
  VertexName query;
  bool rejected = false;
  std::vector<VertexName> reply;
};

struct GameResult {
  GameVariant game = GameVariant::kOpenColored;
  long queries = 0;
  bool win = false;
  enum class Cause { kNone, kExitFound, kCycleFound } cause = Cause::kNone;
  std::uint64_t transcript_digest = 0;
  std::uint64_t seed = 0;
};

// Adversaries consume only oracle replies: the previous query's reply comes
// in, the next queried name goes out.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual void reset(int name_bits, std::uint64_t seed) = 0;
  virtual VertexName next_query(const std::vector<NeighborInfo>& last_reply) = 0;
};

// uniform random walker, non-backtracking walker, depth-first explorer,
// degree-aware backtracker, random name guesser
std::vector<std::unique_ptr<Adversary>> adversary_catalog();
std::unique_ptr<Adversary> make_adversary(const std::string& name);

struct GameInstance {
  const Oracle* oracle = nullptr;
  std::function<bool(const VertexName&)> is_exit;
};

GameResult play_game(GameVariant game, Adversary& adv, const GameInstance& inst, long budget,
                     std::uint64_t seed, std::vector<TranscriptEvent>* transcript = nullptr);

// ---------------------------------------------------------------------------
// Game 5: random embeddings of rooted binary trees.

struct RootedBinaryTree {
  std::vector<int> parent;                     // -1 at the root
  std::vector<std::array<int, 2>> children;    // -1 padded

  int size() const { return static_cast<int>(parent.size()); }
  int depth() const;
  void validate() const;  // labels increase away from the root, arity <= 2

  static RootedBinaryTree single();
  static RootedBinaryTree path(int t);
  static RootedBinaryTree complete(int t);               // BFS prefix of the complete tree
  static RootedBinaryTree random_full(int t, std::uint64_t seed);  // split random leaves
};

struct Embedding {
  std::vector<std::int64_t> image;  // slot per tree vertex, -1 unmapped
  bool proper = true;
  bool exited = false;
  int max_column = 0;
};

// The randomized embedding procedure: the root maps to the entrance, each
// expansion step assigns a vertex's children across the two non-parent
// neighbors with a fair coin, and expansion halts at leaves and at vertices
// mapped to the entrance or exit.
Embedding random_embedding(const RootedBinaryTree& tree, const InstanceBackend& backend, Rng& rng);
Embedding random_embedding(const RootedBinaryTree& tree, const GluedTreesGraph& g,
                           std::uint64_t seed);

struct WilsonInterval {
  double rate = 0, lower = 0, upper = 0;
};
// z defaults to the 99% two-sided normal quantile.
WilsonInterval wilson(long wins, long trials, double z = 2.5758293035489004);

struct Game5Estimate {
  long trials = 0;
  long wins = 0;       // improper or exited
  long improper = 0;   // cycle channel
  long exited = 0;
  long deep_reach = 0;  // image touched column >= n + n/2
  WilsonInterval interval;
};

// Monte Carlo over fresh graphs and embeddings; needs trials >= 100. Trees
// whose depth stays below n run on the virtual backend (the tree region is
// identical in every G'_n); deeper trees materialize a fresh graph per trial.
Game5Estimate estimate_game5(const RootedBinaryTree& tree, int n, long trials,
                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Transcript replay for the game-equivalence checks: rebuilds the rooted
// tree a transcript reveals, with the queried graph names as the embedding.
struct TreeReplay {
  RootedBinaryTree tree;
  std::vector<VertexName> image;  // graph name per tree vertex
  bool improper = false;
  bool exits = false;          // exit appears anywhere in the image
  bool exits_queried = false;  // exit was actually sent to the oracle
};

TreeReplay transcript_to_tree(const std::vector<TranscriptEvent>& transcript,
                              const VertexName& entrance,
                              const std::function<bool(const VertexName&)>& is_exit);

}  // namespace gluedtrees

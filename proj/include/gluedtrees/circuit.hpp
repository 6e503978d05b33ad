#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gluedtrees/linalg.hpp"
#include "gluedtrees/names.hpp"
#include "gluedtrees/oracle.hpp"

namespace gluedtrees {

// Register layout for the oracle-model walk: |a, b, r> with a, b name-width
// strings and r a single bit, plus one ancilla the T circuit borrows and
// returns in |0>. Vertex states are |a, 0, 0>.
struct RegisterLayout {
  int name_bits = 2;

  int total_qubits() const { return 2 * name_bits + 2; }
  std::uint64_t pack(std::uint64_t a, std::uint64_t b, int r, int anc) const {
    return a | b << name_bits | static_cast<std::uint64_t>(r) << (2 * name_bits) |
           static_cast<std::uint64_t>(anc) << (2 * name_bits + 1);
  }
  std::uint64_t a_of(std::uint64_t key) const { return key & VertexName::mask(name_bits); }
  std::uint64_t b_of(std::uint64_t key) const { return key >> name_bits & VertexName::mask(name_bits); }
  int r_of(std::uint64_t key) const { return static_cast<int>(key >> (2 * name_bits) & 1); }
  int anc_of(std::uint64_t key) const { return static_cast<int>(key >> (2 * name_bits + 1) & 1); }
};

// Amplitudes over the reachable basis states only: a walk started from
// vertex states touches at most a few keys per vertex between oracle calls.
// The dense simulator below covers small widths for gate-exact cross-checks.
class SparseCircuitState {
 public:
  explicit SparseCircuitState(int name_bits) : layout_{name_bits} {}

  static SparseCircuitState vertex_state(int name_bits,
                                         const std::vector<std::pair<VertexName, cplx>>& amps);

  const RegisterLayout& layout() const { return layout_; }
  int name_bits() const { return layout_.name_bits; }
  const std::unordered_map<std::uint64_t, cplx>& entries() const { return amps_; }
  void set(std::uint64_t a, std::uint64_t b, int r, int anc, cplx v);
  cplx amplitude(std::uint64_t a, std::uint64_t b, int r, int anc) const;
  cplx vertex_amplitude(const VertexName& a) const { return amplitude(a.bits(), 0, 0, 0); }

  double norm() const;
  // Probability mass outside the vertex states |a,0,0>|0>.
  double off_vertex_weight() const;

  // V_c: XORs v_c(a) into b and f_c(a) into r. Self-inverse.
  void apply_oracle_xor(const Oracle& oracle, int color);
  // exp(-iTt): rotates each (a,b)<->(b,a) pair in the r=0 sector, applies
  // e^{-it} on the a=b diagonal there, and leaves the r=1 sector untouched.
  void apply_exp_T(double t);
  // The (non-unitary) operator T itself: |a,b,0> -> |b,a,0>, kills r=1.
  SparseCircuitState apply_T_generator() const;

 private:
  RegisterLayout layout_;
  std::unordered_map<std::uint64_t, cplx> amps_;
};

// Full 2^(2m+2) statevector with the gate-level realization of exp(-iTt):
// W on every (a_l, b_l) pair, a Toffoli cascade accumulating the
// antisymmetric-pair parity into the ancilla (filled control on a_l, open on
// b_l), e^{-iZt} on the ancilla controlled on r=0, then uncomputation.
class DenseCircuitState {
 public:
  explicit DenseCircuitState(int name_bits);

  const RegisterLayout& layout() const { return layout_; }
  std::vector<cplx>& data() { return amps_; }
  const std::vector<cplx>& data() const { return amps_; }

  void apply_w(int qubit_x, int qubit_y);
  void apply_toffoli_open(int filled_control, int open_control, int target);
  void apply_phase_open_controlled(int open_control, int z_qubit, double t);
  void apply_exp_T_circuit(double t);
  void apply_oracle_xor(const Oracle& oracle, int color);

  double norm() const;

 private:
  RegisterLayout layout_;
  std::vector<cplx> amps_;
};

// Dense matrix of exp(-iTt) on the |a,b,r> space (dimension 2^(2m+1)),
// via the identity exp(-iTt) = I - T^2 + T^2 cos t - i T sin t (T^3 = T).
std::vector<cplx> dense_exp_T(int name_bits, double t);

struct TrotterPlan {
  double t = 0;
  long steps = 1;  // >= 1
};

// (prod_c V_c e^{-iT t/j} V_c)^j applied to a vertex-state superposition.
// Colors run in fixed ascending order; the realized Hamiltonian is the
// unweighted adjacency (gamma = 1), so rescale time for other couplings.
SparseCircuitState trotter_evolve(const Oracle& oracle,
                                  const std::vector<std::pair<VertexName, cplx>>& psi0,
                                  const TrotterPlan& plan);

struct HamActionCheck {
  std::vector<VertexName> neighbors;   // support of H|a,0,0>
  double max_weight_error = 0;         // deviation of neighbor weights from 1
  double off_support_weight = 0;       // finite-difference mass elsewhere
  bool algebraic_ok = false;           // V_c T V_c chain reproduced every term
  bool registers_restored = false;     // b and r back to zero after each block
};

// Confirms H|a,0,0> = sum over valid colors of |v_c(a),0,0> two ways: a
// finite-difference derivative of the Trotter step and the exact
// V_c T V_c algebra. Throws if a is not a vertex.
HamActionCheck verify_ham_action(const Oracle& oracle, const VertexName& a);

// Colored-oracle view over an uncolored bipartite neighbor oracle. The
// reply order of each vertex's neighbor list colors its directed edges; a
// parity bit tracked from the entrance (side 0) merges the two directions
// into one of nine (incoming, outgoing) pairs. Odd cycles surface as parity
// contradictions.
class DerivedColoringOracle : public Oracle {
 public:
  explicit DerivedColoringOracle(const Oracle& base);

  int name_bits() const override { return base_.name_bits(); }
  bool provides_colors() const override { return true; }
  int num_colors() const override { return 9; }
  std::uint64_t base_queries() const { return base_.query_count(); }

 protected:
  std::vector<NeighborInfo> neighbors_impl(const VertexName& a) const override;
  VertexName neighbor_by_color_impl(const VertexName& a, int color) const override;

 private:
  struct Local {
    std::vector<VertexName> order;  // base reply order = outgoing colors
  };
  const Local& lookup(const VertexName& a) const;
  int parity_of(const VertexName& a) const;

  const Oracle& base_;
  mutable std::unordered_map<VertexName, Local, VertexNameHash> cache_;
  mutable std::unordered_map<VertexName, int, VertexNameHash> parity_;
};

}  // namespace gluedtrees

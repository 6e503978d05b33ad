#include "gluedtrees/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace gluedtrees {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

SparseCircuitState SparseCircuitState::vertex_state(
    int name_bits, const std::vector<std::pair<VertexName, cplx>>& amps) {
  SparseCircuitState s(name_bits);
  for (const auto& [name, v] : amps) {
    if (name.width() != name_bits)
      throw std::invalid_argument("vertex_state: name width mismatch");
    s.amps_[s.layout_.pack(name.bits(), 0, 0, 0)] += v;
  }
  return s;
}

void SparseCircuitState::set(std::uint64_t a, std::uint64_t b, int r, int anc, cplx v) {
  amps_[layout_.pack(a, b, r, anc)] = v;
}

cplx SparseCircuitState::amplitude(std::uint64_t a, std::uint64_t b, int r, int anc) const {
  const auto it = amps_.find(layout_.pack(a, b, r, anc));
  return it == amps_.end() ? cplx(0) : it->second;
}

double SparseCircuitState::norm() const {
  double s = 0;
  for (const auto& [k, v] : amps_) s += std::norm(v);
  return std::sqrt(s);
}

double SparseCircuitState::off_vertex_weight() const {
  double s = 0;
  for (const auto& [k, v] : amps_)
    if (layout_.b_of(k) != 0 || layout_.r_of(k) != 0 || layout_.anc_of(k) != 0) s += std::norm(v);
  return s;
}

void SparseCircuitState::apply_oracle_xor(const Oracle& oracle, int color) {
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> vc_cache;
  std::unordered_map<std::uint64_t, cplx> next;
  next.reserve(amps_.size());
  const int w = layout_.name_bits;
  for (const auto& [key, amp] : amps_) {
    const std::uint64_t a = layout_.a_of(key);
    auto it = vc_cache.find(a);
    if (it == vc_cache.end()) {
      const VertexName va = oracle.neighbor_by_color(VertexName(a, w), color);
      it = vc_cache.emplace(a, std::make_pair(va.bits(), va.is_all_ones() ? 1 : 0)).first;
    }
    const std::uint64_t b = layout_.b_of(key) ^ it->second.first;
    const int r = layout_.r_of(key) ^ it->second.second;
    next[layout_.pack(a, b, r, layout_.anc_of(key))] += amp;
  }
  amps_ = std::move(next);
}

void SparseCircuitState::apply_exp_T(double t) {
  const cplx c = std::cos(t);
  const cplx mis = cplx(0, -1) * std::sin(t);
  std::unordered_map<std::uint64_t, cplx> next;
  next.reserve(amps_.size() * 2);
  for (const auto& [key, amp] : amps_) {
    if (layout_.r_of(key) == 1) {
      next[key] += amp;
      continue;
    }
    const std::uint64_t a = layout_.a_of(key), b = layout_.b_of(key);
    if (a == b) {
      next[key] += amp * std::polar(1.0, -t);
      continue;
    }
    const std::uint64_t partner = layout_.pack(b, a, 0, layout_.anc_of(key));
    next[key] += c * amp;
    next[partner] += mis * amp;
  }
  for (auto it = next.begin(); it != next.end();) {
    if (it->second == cplx(0))
      it = next.erase(it);
    else
      ++it;
  }
  amps_ = std::move(next);
}

SparseCircuitState SparseCircuitState::apply_T_generator() const {
  SparseCircuitState out(layout_.name_bits);
  for (const auto& [key, amp] : amps_) {
    if (layout_.r_of(key) == 1) continue;
    out.amps_[layout_.pack(layout_.b_of(key), layout_.a_of(key), 0, layout_.anc_of(key))] += amp;
  }
  return out;
}

DenseCircuitState::DenseCircuitState(int name_bits) : layout_{name_bits} {
  if (name_bits > 8) throw std::invalid_argument("DenseCircuitState: width too large for dense mode");
  amps_.assign(std::size_t(1) << layout_.total_qubits(), cplx(0));
}

double DenseCircuitState::norm() const {
  double s = 0;
  for (const auto& v : amps_) s += std::norm(v);
  return std::sqrt(s);
}

void DenseCircuitState::apply_w(int qx, int qy) {
  const std::uint64_t mx = std::uint64_t(1) << qx, my = std::uint64_t(1) << qy;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & mx) || (i & my)) continue;
    const std::uint64_t i01 = i | my, i10 = i | mx;  // |xy>: x on qx, y on qy
    const cplx v01 = amps_[i01], v10 = amps_[i10];
    amps_[i01] = kInvSqrt2 * (v01 + v10);
    amps_[i10] = kInvSqrt2 * (v01 - v10);
  }
}

void DenseCircuitState::apply_toffoli_open(int filled_control, int open_control, int target) {
  const std::uint64_t mf = std::uint64_t(1) << filled_control;
  const std::uint64_t mo = std::uint64_t(1) << open_control;
  const std::uint64_t mt = std::uint64_t(1) << target;
  for (std::uint64_t i = 0; i < amps_.size(); ++i)
    if ((i & mf) && !(i & mo) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
}

void DenseCircuitState::apply_phase_open_controlled(int open_control, int z_qubit, double t) {
  const std::uint64_t mo = std::uint64_t(1) << open_control;
  const std::uint64_t mz = std::uint64_t(1) << z_qubit;
  const cplx minus = std::polar(1.0, -t), plus = std::polar(1.0, t);
  for (std::uint64_t i = 0; i < amps_.size(); ++i)
    if (!(i & mo)) amps_[i] *= (i & mz) ? plus : minus;
}

void DenseCircuitState::apply_exp_T_circuit(double t) {
  const int m = layout_.name_bits;
  const int r = 2 * m, anc = 2 * m + 1;
  for (int l = 0; l < m; ++l) apply_w(l, m + l);
  for (int l = 0; l < m; ++l) apply_toffoli_open(l, m + l, anc);
  apply_phase_open_controlled(r, anc, t);
  for (int l = m - 1; l >= 0; --l) apply_toffoli_open(l, m + l, anc);
  for (int l = 0; l < m; ++l) apply_w(l, m + l);
}

void DenseCircuitState::apply_oracle_xor(const Oracle& oracle, int color) {
  const int m = layout_.name_bits;
  std::vector<cplx> next(amps_.size(), cplx(0));
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << m); ++a) {
    const VertexName va = oracle.neighbor_by_color(VertexName(a, m), color);
    const std::uint64_t vb = va.bits();
    const int f = va.is_all_ones() ? 1 : 0;
    for (std::uint64_t b = 0; b < (std::uint64_t(1) << m); ++b)
      for (int r = 0; r < 2; ++r)
        for (int anc = 0; anc < 2; ++anc)
          next[layout_.pack(a, b ^ vb, r ^ f, anc)] = amps_[layout_.pack(a, b, r, anc)];
  }
  amps_ = std::move(next);
}

std::vector<cplx> dense_exp_T(int name_bits, double t) {
  // T^2 is the identity on the r=0 sector (a double register swap) and T
  // kills r=1, so exp(-iTt) = cos t - i sin t * SWAP there and the identity
  // on r=1.
  const int m = name_bits;
  const std::size_t dim = std::size_t(1) << (2 * m + 1);
  RegisterLayout lay{m};
  std::vector<cplx> mat(dim * dim, cplx(0));
  const double ct = std::cos(t), st = std::sin(t);
  for (std::uint64_t col = 0; col < dim; ++col) {
    if (lay.r_of(col) == 1) {
      mat[col * dim + col] = 1.0;
      continue;
    }
    const std::uint64_t swapped = lay.pack(lay.b_of(col), lay.a_of(col), 0, 0);
    mat[col * dim + col] += ct;
    mat[swapped * dim + col] += cplx(0, -st);
  }
  return mat;
}

SparseCircuitState trotter_evolve(const Oracle& oracle,
                                  const std::vector<std::pair<VertexName, cplx>>& psi0,
                                  const TrotterPlan& plan) {
  if (plan.steps < 1) throw std::invalid_argument("trotter_evolve: need at least one step");
  const int k = oracle.num_colors();
  if (k <= 0) throw std::invalid_argument("trotter_evolve: oracle provides no colors");
  SparseCircuitState state = SparseCircuitState::vertex_state(oracle.name_bits(), psi0);
  const double dt = plan.t / static_cast<double>(plan.steps);
  for (long step = 0; step < plan.steps; ++step) {
    for (int c = 0; c < k; ++c) {
      state.apply_oracle_xor(oracle, c);
      state.apply_exp_T(dt);
      state.apply_oracle_xor(oracle, c);
    }
  }
  return state;
}

HamActionCheck verify_ham_action(const Oracle& oracle, const VertexName& a) {
  if (oracle.neighbors(a).empty()) throw std::invalid_argument("verify_ham_action: not a vertex");
  const int w = oracle.name_bits();
  const int k = oracle.num_colors();
  HamActionCheck out;

  // Expected column: v_c(a) over valid colors.
  std::vector<VertexName> expect;
  for (int c = 0; c < k; ++c) {
    const VertexName v = oracle.neighbor_by_color(a, c);
    if (!v.is_all_ones()) expect.push_back(v);
  }
  out.neighbors = expect;

  // Finite-difference generator of one Trotter step.
  const double delta = 1e-6;
  SparseCircuitState moved = trotter_evolve(oracle, {{a, 1.0}}, {delta, 1});
  std::unordered_map<std::uint64_t, cplx> deriv;
  for (const auto& [key, amp] : moved.entries()) deriv[key] += amp;
  deriv[moved.layout().pack(a.bits(), 0, 0, 0)] -= 1.0;
  for (auto& [key, amp] : deriv) amp *= cplx(0, 1) / delta;

  double off = 0;
  out.max_weight_error = 0;
  for (const auto& [key, amp] : deriv) {
    const RegisterLayout& lay = moved.layout();
    bool matched = false;
    if (lay.b_of(key) == 0 && lay.r_of(key) == 0 && lay.anc_of(key) == 0) {
      for (const auto& v : expect)
        if (v.bits() == lay.a_of(key)) {
          out.max_weight_error = std::max(out.max_weight_error, std::abs(amp - 1.0));
          matched = true;
        }
    }
    if (!matched && lay.pack(a.bits(), 0, 0, 0) != key) off += std::norm(amp);
  }
  out.off_support_weight = std::sqrt(off);

  // Exact algebra: V_c T V_c |a,0,0> = delta_{0,f_c(a)} |v_c(a),0,0>.
  out.algebraic_ok = true;
  out.registers_restored = true;
  for (int c = 0; c < k; ++c) {
    SparseCircuitState s = SparseCircuitState::vertex_state(w, {{a, 1.0}});
    s.apply_oracle_xor(oracle, c);
    SparseCircuitState ts = s.apply_T_generator();
    ts.apply_oracle_xor(oracle, c);
    const VertexName v = oracle.neighbor_by_color(a, c);
    if (v.is_all_ones()) {
      if (ts.norm() > 1e-14) out.algebraic_ok = false;
      continue;
    }
    if (std::abs(ts.vertex_amplitude(v) - 1.0) > 1e-14) out.algebraic_ok = false;
    if (ts.off_vertex_weight() > 1e-28) out.registers_restored = false;
  }
  return out;
}

DerivedColoringOracle::DerivedColoringOracle(const Oracle& base) : base_(base) {
  if (base.provides_colors())
    throw std::invalid_argument("DerivedColoringOracle: base oracle already colored");
  parity_.emplace(base.entrance_name(), 0);
}

const DerivedColoringOracle::Local& DerivedColoringOracle::lookup(const VertexName& a) const {
  auto it = cache_.find(a);
  if (it != cache_.end()) return it->second;
  Local loc;
  for (const auto& nb : base_.neighbors(a)) loc.order.push_back(nb.name);
  it = cache_.emplace(a, std::move(loc)).first;

  const auto pit = parity_.find(a);
  if (pit != parity_.end()) {
    const int np = pit->second ^ 1;
    for (const auto& nb : it->second.order) {
      const auto [nit, fresh] = parity_.emplace(nb, np);
      if (!fresh && nit->second != np)
        throw std::logic_error("bipartite coloring: odd cycle detected (parity contradiction)");
    }
  }
  return it->second;
}

int DerivedColoringOracle::parity_of(const VertexName& a) const {
  const auto it = parity_.find(a);
  if (it == parity_.end())
    throw std::logic_error("bipartite coloring: vertex parity unknown; reach it from the entrance");
  return it->second;
}

std::vector<NeighborInfo> DerivedColoringOracle::neighbors_impl(const VertexName& a) const {
  const Local& mine = lookup(a);
  if (mine.order.empty()) return {};
  const int pa = parity_of(a);
  std::vector<NeighborInfo> out;
  for (std::size_t s = 0; s < mine.order.size(); ++s) {
    const VertexName& nb = mine.order[s];
    const Local& theirs = lookup(nb);
    int back = -1;
    for (std::size_t u = 0; u < theirs.order.size(); ++u)
      if (theirs.order[u] == a) back = static_cast<int>(u);
    if (back < 0) throw std::logic_error("bipartite coloring: asymmetric neighbor lists");
    // directed colors: position s is the outgoing color at a, position
    // `back` the outgoing color at the neighbor (= incoming at a)
    const int incoming = back, outgoing = static_cast<int>(s);
    const int color = pa == 0 ? incoming * 3 + outgoing : outgoing * 3 + incoming;
    out.push_back({nb, color});
  }
  return out;
}

VertexName DerivedColoringOracle::neighbor_by_color_impl(const VertexName& a, int color) const {
  if (lookup(a).order.empty()) return not_a_vertex();
  for (const auto& nb : neighbors_impl(a))
    if (nb.color == color) return nb.name;
  return not_a_vertex();
}

}  // namespace gluedtrees

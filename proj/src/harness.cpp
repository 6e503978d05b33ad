#include "gluedtrees/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "gluedtrees/circuit.hpp"
#include "gluedtrees/classical.hpp"
#include "gluedtrees/games.hpp"
#include "gluedtrees/graph.hpp"
#include "gluedtrees/line.hpp"
#include "gluedtrees/oracle.hpp"
#include "gluedtrees/walk.hpp"

namespace gluedtrees {

using nlohmann::json;

namespace {

const char* kKinds[] = {"walk-curve", "trotter-scan", "spectrum",
                        "scattering", "hitting",      "classical-traversal",
                        "lowerbound-mc", "figure-data"};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"kind", c.kind},         {"n", c.n},
              {"n_max", c.n_max},       {"gamma", c.gamma},
              {"epsilon", c.epsilon},   {"tau_rule", c.tau_rule},
              {"trials", c.trials},     {"budget", c.budget},
              {"seed", c.seed},         {"tolerance", c.tolerance},
              {"variant", c.variant},   {"adversary", c.adversary},
              {"figure", c.figure},     {"out", c.out_path},
              {"record", c.record_path}};
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_to_json(*this).dump(2); }

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  c.kind = j.value("kind", c.kind);
  c.n = j.value("n", c.n);
  c.n_max = j.value("n_max", c.n_max);
  c.gamma = j.value("gamma", c.gamma);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.tau_rule = j.value("tau_rule", c.tau_rule);
  c.trials = j.value("trials", c.trials);
  c.budget = j.value("budget", c.budget);
  c.seed = j.value("seed", c.seed);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.variant = j.value("variant", c.variant);
  c.adversary = j.value("adversary", c.adversary);
  c.figure = j.value("figure", c.figure);
  c.out_path = j.value("out", c.out_path);
  c.record_path = j.value("record", c.record_path);
  return c;
}

void ExperimentConfig::validate() const {
  bool known = false;
  for (const char* k : kKinds) known = known || kind == k;
  if (!known) throw std::invalid_argument("config.kind: unknown experiment '" + kind + "'");
  if (n < 1) throw std::invalid_argument("config.n: must be >= 1");
  if (n_max >= 0 && n_max < n) throw std::invalid_argument("config.n_max: must be >= n");
  if (gamma <= 0) throw std::invalid_argument("config.gamma: must be positive");
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("config.epsilon: must be in (0,1)");
  if (tau_rule != "lemma" && tau_rule != "theorem")
    throw std::invalid_argument("config.tau_rule: lemma or theorem");
  if (trials < 1) throw std::invalid_argument("config.trials: must be >= 1");
}

bool ResultRecord::all_passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ResultRecord::rows_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < row_header.size(); ++i)
    out << (i ? "," : "") << row_header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

std::uint64_t ResultRecord::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, config_to_json(config).dump());
  h = fnv1a(h, rows_csv());
  for (const auto& c : checks)
    h = fnv1a(h, c.name + c.relation + format_double(c.value) + format_double(c.bound) +
                     (c.pass ? "1" : "0"));
  return h;
}

std::string ResultRecord::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["artifact_version"] = artifact_version;
  j["config"] = config_to_json(config);
  j["row_header"] = row_header;
  j["rows"] = rows;
  j["summary"] = summary;
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back(json{{"name", c.name},
                               {"value", c.value},
                               {"relation", c.relation},
                               {"bound", c.bound},
                               {"pass", c.pass}});
  j["digest"] = digest();
  j["wall_ms"] = wall_ms;
  return j.dump(2);
}

int worker_count_from_env() {
  if (const char* env = std::getenv("GLUEDTREES_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 2;
}

void parallel_for_indexed(long count, int workers, const std::function<void(long)>& body) {
  if (workers <= 1 || count < 2) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  const int use = std::min<long>(workers, count);
  pool.reserve(static_cast<std::size_t>(use));
  for (int w = 0; w < use; ++w)
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

namespace {

void add_check(ResultRecord& r, const std::string& name, double value, const std::string& rel,
               double bound) {
  bool pass = false;
  if (rel == "<") pass = value < bound;
  if (rel == "<=") pass = value <= bound;
  if (rel == ">") pass = value > bound;
  if (rel == ">=") pass = value >= bound;
  if (rel == "==") pass = value == bound;
  r.checks.push_back({name, value, bound, rel, pass});
}

void run_walk_curve(const ExperimentConfig& c, ResultRecord& r) {
  std::vector<double> times;
  const double t_end = 2.5 * c.n;
  for (double t = 0.0; t <= t_end; t += 0.25) times.push_back(t);
  const auto curve = exit_probability_curve(c.n, times, c.gamma);
  r.row_header = {"t", "exit_probability"};
  for (std::size_t i = 0; i < times.size(); ++i) r.rows.push_back({times[i], curve[i]});
  double peak = 0, peak_t = 0;
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve[i] > peak) {
      peak = curve[i];
      peak_t = times[i];
    }
  r.summary["peak_probability"] = peak;
  r.summary["peak_time"] = peak_t;
  add_check(r, "probability_at_t0", curve.front(), "==", 0.0);
  double worst = 0;
  for (double p : curve) worst = std::max({worst, -p, p - 1.0});
  add_check(r, "probabilities_within_unit_interval", worst, "<=", 0.0);
}

void run_trotter_scan(const ExperimentConfig& c, ResultRecord& r) {
  if (c.n < 2)
    throw std::invalid_argument("trotter-scan: named glued trees need n >= 2");
  auto g = GluedTreesGraph::generate(c.n, c.seed);
  g.assign_names(c.seed + 1);
  g.assign_coloring(c.seed + 2);
  GraphOracle oracle(g);
  auto h = WalkHamiltonian::adjacency(g, 1.0);
  WalkPropagator prop(h);
  std::vector<cplx> e0(static_cast<std::size_t>(g.vertex_count()), 0.0);
  e0[0] = 1.0;
  const double t = 1.0;
  const auto exact = prop.at(e0, t);

  r.row_header = {"steps", "statevector_error", "exit_probability_error"};
  const long base = c.budget > 0 ? c.budget : 125;
  std::vector<double> errs;
  for (long j = base; j <= base * 8; j *= 2) {
    auto s = trotter_evolve(oracle, {{g.name_of(0), 1.0}}, {t, j});
    double d2 = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
      d2 += std::norm(s.vertex_amplitude(g.name_of(v)) - exact[static_cast<std::size_t>(v)]);
    const double err = std::sqrt(d2);
    const double pexit =
        std::norm(s.vertex_amplitude(g.name_of(g.exit_vertex()))) -
        std::norm(exact[static_cast<std::size_t>(g.exit_vertex())]);
    errs.push_back(err);
    r.rows.push_back({static_cast<double>(j), err, std::abs(pexit)});
  }
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i + 1];
    add_check(r, "first_order_ratio_" + std::to_string(i), std::abs(ratio - 2.0), "<=", 0.4);
    r.summary["ratio_" + std::to_string(i)] = ratio;
  }
}

void run_spectrum(const ExperimentConfig& c, ResultRecord& r) {
  const auto rep = quantization_roots(c.n);
  r.row_header = {"index", "energy", "bound_state", "momentum_or_k", "branch"};
  int idx = 0;
  for (const auto& root : rep.real_roots)
    r.rows.push_back({static_cast<double>(idx++), root.energy, 0.0, root.p,
                      static_cast<double>(root.branch)});
  for (const auto& b : rep.bound_states)
    r.rows.push_back({static_cast<double>(idx++), b.energy, 1.0, b.k,
                      static_cast<double>(b.branch)});
  r.summary["eigenvalues"] = static_cast<double>(rep.eigenvalues.size());
  r.summary["min_gap"] = rep.min_gap;
  add_check(r, "eigenvalue_count", static_cast<double>(rep.eigenvalues.size()), "==", 2.0 * c.n);

  const auto es = ColumnChain::hitting_chain(c.n).eig(false);
  double worst = 0;
  for (int k = 0; k < es.dim; ++k)
    worst = std::max(worst, std::abs(rep.eigenvalues[static_cast<std::size_t>(k)] -
                                     es.values[static_cast<std::size_t>(k)]));
  const double tol = c.tolerance > 0 ? c.tolerance : 1e-10;
  add_check(r, "dense_diagonalization_agreement", worst, "<=", tol);
  add_check(r, "gap_lemma_lower_bound", rep.min_gap * std::pow(c.n, 3), ">", 8.0);
}

void run_scattering(const ExperimentConfig& c, ResultRecord& r) {
  r.row_header = {"momentum", "transmission_probability"};
  const int grid = 512;
  for (int g = 1; g < grid; ++g) {
    const double p = std::numbers::pi * g / grid;
    r.rows.push_back({p, std::norm(transmission(p, std::sqrt(2.0)).transmission)});
  }
  const double mid = std::norm(transmission(std::numbers::pi / 2, std::sqrt(2.0)).transmission);
  add_check(r, "halfband_transmission", std::abs(mid - 8.0 / 9.0), "<=", 1e-12);

  Rng rng(c.seed, 91);
  double worst = 0;
  for (long i = 0; i < 1000; ++i) {
    const double p = 1e-3 + (std::numbers::pi - 2e-3) * rng.uniform();
    const double alpha = 0.1 + 3.0 * rng.uniform();
    const auto s = transmission(p, alpha);
    worst = std::max(worst, std::abs(std::norm(s.transmission) + std::norm(s.reflection) - 1.0));
  }
  add_check(r, "unitarity_worst_deviation", worst, "<=", 1e-12);

  PacketSpec spec;
  spec.sigma = 12;
  spec.offset = 150;
  const auto packet = wavepacket_scatter(std::sqrt(2.0), spec);
  r.summary["packet_transmitted"] = packet.transmitted;
  r.summary["packet_predicted"] = packet.predicted;
  const double tol = c.tolerance > 0 ? c.tolerance : 0.02;
  add_check(r, "packet_vs_quadrature", std::abs(packet.transmitted / packet.predicted - 1.0), "<=",
            tol);
}

void run_hitting(const ExperimentConfig& c, ResultRecord& r) {
  const int n_hi = c.n_max >= 0 ? c.n_max : c.n;
  r.row_header = {"n", "tau", "avg_probability", "bound", "min_gap", "gap_bound_applies"};
  for (int n = c.n; n <= n_hi; ++n) {
    double tau;
    double applies = 1.0;
    if (c.tau_rule == "lemma") {
      tau = lemma1_tau(n, c.epsilon);
    } else {
      tau = std::pow(static_cast<double>(n), 4) / (2.0 * c.epsilon);
    }
    const auto avg = lemma1_average(n, c.epsilon, tau);
    if (c.tau_rule == "theorem")
      applies = 8.0 / std::pow(static_cast<double>(n), 3) < avg.min_gap ? 1.0 : 0.0;
    r.rows.push_back({static_cast<double>(n), tau, avg.closed_form.probability, avg.bound,
                      avg.min_gap, applies});
    add_check(r, "hitting_bound_n" + std::to_string(n), avg.closed_form.probability, ">",
              avg.bound);
  }
}

void run_classical_traversal(const ExperimentConfig& c, ResultRecord& r) {
  const bool hypercube = c.variant == "hypercube";
  r.row_header = {"trial", "found", "queries"};
  std::vector<std::array<double, 2>> results(static_cast<std::size_t>(c.trials));
  const int workers = c.workers > 0 ? c.workers : worker_count_from_env();
  parallel_for_indexed(c.trials, workers, [&](long trial) {
    const std::uint64_t seed = Rng::mix(c.seed + static_cast<std::uint64_t>(trial));
    if (hypercube) {
      auto inst = make_hypercube(c.n, seed);
      auto oracle = inst.oracle();
      auto res = traverse_hypercube(oracle, c.budget > 0 ? c.budget : 10000);
      results[static_cast<std::size_t>(trial)] = {
          res.found && res.exit == inst.exit_name() ? 1.0 : 0.0,
          static_cast<double>(res.queries)};
    } else {
      auto inst = make_identified_trees(c.n, seed);
      auto oracle = inst.oracle();
      auto res = traverse_identified_trees(
          oracle, c.budget > 0 ? c.budget : 40 + 12L * c.n * c.n);
      results[static_cast<std::size_t>(trial)] = {
          res.found && res.exit == inst.exit_name() ? 1.0 : 0.0,
          static_cast<double>(res.queries)};
    }
  });
  long found = 0;
  double max_queries = 0;
  for (long trial = 0; trial < c.trials; ++trial) {
    const auto& res = results[static_cast<std::size_t>(trial)];
    found += res[0] > 0.5;
    max_queries = std::max(max_queries, res[1]);
    r.rows.push_back({static_cast<double>(trial), res[0], res[1]});
  }
  r.summary["found_fraction"] = static_cast<double>(found) / static_cast<double>(c.trials);
  r.summary["max_queries"] = max_queries;
  add_check(r, "all_instances_traversed", static_cast<double>(found), "==",
            static_cast<double>(c.trials));
  add_check(r, "queries_quadratic", max_queries, "<=", 40.0 + 12.0 * c.n * c.n);
}

void run_lowerbound(const ExperimentConfig& c, ResultRecord& r) {
  const int n = c.n;
  const long budget = c.budget > 0 ? c.budget : static_cast<long>(std::pow(2.0, n / 6.0));
  const double envelope = 4.0 * std::pow(2.0, -static_cast<double>(n) / 6.0);
  const int workers = c.workers > 0 ? c.workers : worker_count_from_env();

  if (c.variant == "game5") {
    const auto tree = RootedBinaryTree::path(static_cast<int>(budget));
    const auto est = estimate_game5(tree, n, c.trials, c.seed);
    r.row_header = {"trials", "wins", "improper", "exited", "deep_reach", "upper_ci"};
    r.rows.push_back({static_cast<double>(est.trials), static_cast<double>(est.wins),
                      static_cast<double>(est.improper), static_cast<double>(est.exited),
                      static_cast<double>(est.deep_reach), est.interval.upper});
    add_check(r, "game5_upper_ci", est.interval.upper, "<=",
              3.0 * std::pow(2.0, -static_cast<double>(n) / 6.0) + 0.02);
    return;
  }

  r.row_header = {"adversary", "trials", "wins", "win_rate", "wilson_upper"};
  const bool virtual_ok = budget < n;
  std::optional<GluedTreesGraph> materialized_graph;
  if (!virtual_ok) materialized_graph.emplace(GluedTreesGraph::generate(n, c.seed));
  int adv_index = 0;
  for (auto& adv : adversary_catalog()) {
    if (c.adversary != "all" && adv->name() != c.adversary) {
      ++adv_index;
      continue;
    }
    std::vector<char> wins(static_cast<std::size_t>(c.trials), 0);
    parallel_for_indexed(c.trials, workers, [&](long trial) {
      const std::uint64_t tseed = Rng::mix(c.seed ^ (0x9e37ull + static_cast<std::uint64_t>(trial)));
      auto local_adv = make_adversary(adv->name());
      if (virtual_ok) {
        VirtualTreeBackend backend(n);
        LazyNameOracle oracle(backend, tseed, false);
        GameInstance inst{&oracle,
                          [&oracle](const VertexName& a) { return oracle.is_exit_name(a); }};
        wins[static_cast<std::size_t>(trial)] =
            play_game(GameVariant::kSeenPlainCycles, *local_adv, inst, budget, tseed).win;
      } else {
        MaterializedBackend backend(*materialized_graph);
        LazyNameOracle oracle(backend, tseed, false);
        GameInstance inst{&oracle,
                          [&oracle](const VertexName& a) { return oracle.is_exit_name(a); }};
        wins[static_cast<std::size_t>(trial)] =
            play_game(GameVariant::kSeenPlainCycles, *local_adv, inst, budget, tseed).win;
      }
    });
    long total = 0;
    for (char w : wins) total += w;
    const auto ci = wilson(total, c.trials);
    r.rows.push_back({static_cast<double>(adv_index), static_cast<double>(c.trials),
                      static_cast<double>(total), ci.rate, ci.upper});
    add_check(r, "game4_envelope_" + adv->name(), ci.upper, "<=", envelope);
    ++adv_index;
  }
}

void run_figure(const ExperimentConfig& c, ResultRecord& r) {
  if (c.figure.empty()) throw std::invalid_argument("figure-data: set --figure");
  const std::string csv = figure_csv(c.figure, c.n, c.gamma);
  // store rows for the record too
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      std::istringstream hs(line);
      std::string tok;
      while (std::getline(hs, tok, ',')) r.row_header.push_back(tok);
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ls, tok, ',')) row.push_back(std::strtod(tok.c_str(), nullptr));
    r.rows.push_back(row);
  }
  add_check(r, "rows_emitted", static_cast<double>(r.rows.size()), ">", 0.0);
}

}  // namespace

std::string figure_csv(const std::string& kind, int n, double gamma) {
  std::ostringstream out;
  if (kind == "transmission-curve") {
    out << "momentum,transmission_probability\n";
    const int grid = 512;
    for (int g = 1; g < grid; ++g) {
      const double p = std::numbers::pi * g / grid;
      out << format_double(p) << ","
          << format_double(std::norm(transmission(p, std::sqrt(2.0)).transmission)) << "\n";
    }
  } else if (kind == "exit-probability-curve") {
    out << "t,exit_probability\n";
    std::vector<double> times;
    for (double t = 0.0; t <= 2.5 * n; t += 0.25) times.push_back(t);
    const auto curve = exit_probability_curve(n, times, gamma);
    for (std::size_t i = 0; i < times.size(); ++i)
      out << format_double(times[i]) << "," << format_double(curve[i]) << "\n";
  } else if (kind == "quantization-lhs") {
    // sin((n+1)p)/sin(np) sampled at half-offset points so no sample sits on
    // a pole; pole_crossed marks rows whose interval from the previous row
    // contains a zero of sin(np), where plots should break the line.
    out << "momentum,lhs,pole_crossed\n";
    const int grid = 200 * n;
    double prev_denom = 0;
    for (int g = 0; g < grid; ++g) {
      const double p = std::numbers::pi * (g + 0.5) / grid;
      const double denom = std::sin(n * p);
      const bool pole_crossed = g > 0 && std::signbit(denom) != std::signbit(prev_denom);
      prev_denom = denom;
      out << format_double(p) << "," << format_double(std::sin((n + 1) * p) / denom) << ","
          << (pole_crossed ? "1" : "0") << "\n";
    }
  } else {
    throw std::invalid_argument("figure_csv: unknown figure kind '" + kind + "'");
  }
  return out.str();
}

ResultRecord run_experiment(const ExperimentConfig& config) {
  config.validate();
  ResultRecord r;
  r.config = config;
  const auto start = std::chrono::steady_clock::now();
  if (config.kind == "walk-curve") run_walk_curve(config, r);
  else if (config.kind == "trotter-scan") run_trotter_scan(config, r);
  else if (config.kind == "spectrum") run_spectrum(config, r);
  else if (config.kind == "scattering") run_scattering(config, r);
  else if (config.kind == "hitting") run_hitting(config, r);
  else if (config.kind == "classical-traversal") run_classical_traversal(config, r);
  else if (config.kind == "lowerbound-mc") run_lowerbound(config, r);
  else if (config.kind == "figure-data") run_figure(config, r);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  return r;
}

}  // namespace gluedtrees

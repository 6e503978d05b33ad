#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gluedtrees/graph.hpp"
#include "gluedtrees/harness.hpp"

namespace {

using gluedtrees::ExperimentConfig;
using gluedtrees::ResultRecord;

int finish(const ResultRecord& record) {
  if (!record.config.out_path.empty()) {
    std::ofstream out(record.config.out_path);
    if (!out) {
      std::cerr << "cannot open " << record.config.out_path << "\n";
      return 2;
    }
    out << record.rows_csv();
  }
  if (!record.config.record_path.empty()) {
    std::ofstream out(record.config.record_path);
    if (!out) {
      std::cerr << "cannot open " << record.config.record_path << "\n";
      return 2;
    }
    out << record.to_json() << "\n";
  }
  std::cout << "experiment: " << record.config.kind << "\n";
  for (const auto& [key, value] : record.summary)
    std::cout << "  " << key << " = " << value << "\n";
  for (const auto& check : record.checks)
    std::cout << "  [" << (check.pass ? "pass" : "FAIL") << "] " << check.name << ": "
              << check.value << " " << check.relation << " " << check.bound << "\n";
  std::cout << "rows: " << record.rows.size() << ", wall: " << record.wall_ms << " ms, digest: "
            << std::hex << record.digest() << std::dec << "\n";
  return record.all_passed() ? 0 : 1;
}

void add_common(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags take precedence");
  cmd->add_option("--n", cfg.n, "instance size parameter");
  cmd->add_option("--n-max", cfg.n_max, "end of the n range (inclusive)");
  cmd->add_option("--gamma", cfg.gamma, "walk coupling");
  cmd->add_option("--epsilon", cfg.epsilon, "hitting-bound epsilon");
  cmd->add_option("--tau-rule", cfg.tau_rule, "hitting time window: lemma or theorem");
  cmd->add_option("--trials", cfg.trials, "Monte Carlo trials");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--budget", cfg.budget, "query or step budget");
  cmd->add_option("--tolerance", cfg.tolerance, "tolerance override");
  cmd->add_option("--variant", cfg.variant, "experiment-specific selector");
  cmd->add_option("--adversary", cfg.adversary, "adversary name or 'all'");
  cmd->add_option("--figure", cfg.figure, "figure kind for figure-data");
  cmd->add_option("--out", cfg.out_path, "CSV output path");
  cmd->add_option("--record", cfg.record_path, "JSON record output path");
  cmd->add_option("--workers", cfg.workers, "worker threads (or GLUEDTREES_WORKERS)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glued-trees quantum walk laboratory"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    ExperimentConfig cfg;
    std::string config_path;
  };
  std::vector<Sub> subs;
  for (const char* kind : {"walk-curve", "trotter-scan", "spectrum", "scattering", "hitting",
                           "classical-traversal", "lowerbound-mc", "figure-data"}) {
    Sub s;
    s.cmd = app.add_subcommand(kind, std::string("run the ") + kind + " experiment");
    s.cfg.kind = kind;
    subs.push_back(std::move(s));
  }
  for (auto& s : subs) add_common(s.cmd, s.cfg, s.config_path);

  auto* graph_cmd = app.add_subcommand("graph", "generate and serialize a glued-trees graph");
  int graph_n = 4;
  std::uint64_t graph_seed = 1, name_seed = 2, color_seed = 3;
  std::string graph_out;
  bool with_names = true, with_colors = true;
  graph_cmd->add_option("--n", graph_n, "tree height");
  graph_cmd->add_option("--seed", graph_seed, "structure seed");
  graph_cmd->add_option("--name-seed", name_seed, "naming seed");
  graph_cmd->add_option("--color-seed", color_seed, "coloring seed");
  graph_cmd->add_flag("--names,!--no-names", with_names, "assign vertex names");
  graph_cmd->add_flag("--colors,!--no-colors", with_colors, "assign the edge coloring");
  graph_cmd->add_option("--out", graph_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (graph_cmd->parsed()) {
      auto g = gluedtrees::GluedTreesGraph::generate(graph_n, graph_seed);
      if (with_names) g.assign_names(name_seed);
      if (with_names && with_colors) g.assign_coloring(color_seed);
      const std::string bytes = g.serialize();
      if (graph_out.empty()) {
        std::cout << bytes;
      } else {
        std::ofstream out(graph_out);
        if (!out) {
          std::cerr << "cannot open " << graph_out << "\n";
          return 2;
        }
        out << bytes;
      }
      return 0;
    }
    for (auto& s : subs) {
      if (!s.cmd->parsed()) continue;
      ExperimentConfig cfg = s.cfg;
      if (!s.config_path.empty()) {
        std::ifstream in(s.config_path);
        if (!in) {
          std::cerr << "cannot open config " << s.config_path << "\n";
          return 2;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        ExperimentConfig from_file = ExperimentConfig::from_json_text(buf.str());
        from_file.kind = cfg.kind;
        // flags take precedence over the file
        for (const auto* opt : s.cmd->get_options()) {
          if (opt->count() == 0) continue;
          const std::string name = opt->get_name();
          if (name == "--n") from_file.n = cfg.n;
          else if (name == "--n-max") from_file.n_max = cfg.n_max;
          else if (name == "--gamma") from_file.gamma = cfg.gamma;
          else if (name == "--epsilon") from_file.epsilon = cfg.epsilon;
          else if (name == "--tau-rule") from_file.tau_rule = cfg.tau_rule;
          else if (name == "--trials") from_file.trials = cfg.trials;
          else if (name == "--seed") from_file.seed = cfg.seed;
          else if (name == "--budget") from_file.budget = cfg.budget;
          else if (name == "--tolerance") from_file.tolerance = cfg.tolerance;
          else if (name == "--variant") from_file.variant = cfg.variant;
          else if (name == "--adversary") from_file.adversary = cfg.adversary;
          else if (name == "--figure") from_file.figure = cfg.figure;
          else if (name == "--out") from_file.out_path = cfg.out_path;
          else if (name == "--record") from_file.record_path = cfg.record_path;
          else if (name == "--workers") from_file.workers = cfg.workers;
        }
        cfg = from_file;
      }
      return finish(gluedtrees::run_experiment(cfg));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

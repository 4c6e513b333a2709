// gutsim: run scenario batches, solve a single matrix game, or check a
// scenario file.

#include "gut/harness.hpp"
#include "gut/matgame.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

gut::PayoffMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read matrix file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<std::vector<double>> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    rows = nlohmann::json::parse(text).get<std::vector<std::vector<double>>>();
  } else {
    std::string line;
    while (std::getline(buf, line)) {
      std::istringstream ls(line);
      std::vector<double> row;
      for (double v; ls >> v;) row.push_back(v);
      if (!ls.eof()) throw std::runtime_error("matrix file has a non-numeric entry");
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw std::runtime_error("matrix file is empty");
  gut::PayoffMatrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::runtime_error("matrix rows differ in length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return a;
}

std::string vec_text(const gut::StrategyVector& v) {
  std::string s = "[";
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6f", i ? ", " : "", v(i));
    s += buf;
  }
  return s + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game-theoretic utility tree simulator"};
  app.require_subcommand(1);

  std::string scenario, policy, gut_mode, info, out;
  int trials = 10;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "run a batch of trials and write a CSV");
  run->add_option("--scenario", scenario, "scenario JSON file")->required();
  run->add_option("--policy", policy, "gut | qmix | qmix-gut (overrides the scenario)");
  run->add_option("--gut-mode", gut_mode, "greedy | map (overrides the scenario)");
  run->add_option("--info", info, "complete | linear | poly (overrides the scenario)");
  run->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out, "output CSV path")->required();
  run->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string matrix;
  auto* solve_cmd = app.add_subcommand("solve", "solve a zero-sum matrix game");
  solve_cmd->add_option("--matrix", matrix, "matrix file: whitespace rows or a JSON array of rows")->required();

  std::string check_path;
  auto* validate = app.add_subcommand("validate", "load and check a scenario file");
  validate->add_option("--scenario", check_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run) {
      gut::ScenarioConfig cfg = gut::load_scenario(scenario);
      if (!policy.empty()) cfg.policy = gut::parse_policy_mode(policy);
      if (!gut_mode.empty()) cfg.gut_mode = gut::parse_gut_mode(gut_mode);
      if (!info.empty()) cfg.info = gut::parse_info_mode(info);
      const gut::BatchMetrics batch = gut::run_batch(cfg, trials, seed, threads);
      gut::write_csv(batch, out);
      std::printf("%s policy=%s trials=%d win_rate=%.6f energy_per_win=%.6f hp_per_win=%.6f\n", cfg.name.c_str(),
                  gut::to_string(cfg.policy), trials, batch.win_rate, batch.means.system_energy_cost,
                  batch.means.system_hp_cost);
    } else if (*solve_cmd) {
      const gut::GameSolution s = gut::solve(read_matrix(matrix));
      std::printf("kind: %s\nvalue: %.6f\nrow_strategy: %s\ncol_strategy: %s\n",
                  s.kind == gut::SolutionKind::Pure ? "pure" : "mixed", s.value, vec_text(s.row_strategy).c_str(),
                  vec_text(s.col_strategy).c_str());
    } else if (*validate) {
      const gut::ScenarioConfig cfg = gut::load_scenario(check_path);
      std::printf("ok: %s explorers=%d monsters=%d obstacles=%zu policy=%s\n", cfg.name.c_str(), cfg.explorer_count,
                  cfg.monster_count, cfg.obstacles.size(), gut::to_string(cfg.policy));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

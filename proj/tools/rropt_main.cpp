// Command-line front end: single runs, multi-seed method comparisons,
// the verification suite, and log-log rate fitting on exported CSVs.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rropt/birr.hpp"
#include "rropt/checks.hpp"
#include "rropt/engine.hpp"
#include "rropt/harness.hpp"
#include "rropt/problem_io.hpp"

namespace {

using nlohmann::json;

rropt::FiniteSumProblem load_problem(const std::string& spec) {
  if (spec == "example1") return rropt::make_example1();
  if (spec == "quad7") return rropt::make_quadratic_problem(5, 5, 1.0, 7);
  if (spec == "smooth1") return rropt::make_smooth_problem(2, 4, 1.0, 1);
  std::ifstream in(spec);
  if (!in) throw std::runtime_error("cannot open problem file: " + spec);
  return rropt::problem_from_json(json::parse(in));
}

rropt::FiniteSumProblem problem_from_config(const json& config) {
  const auto& p = config.at("problem");
  if (p.is_string()) return load_problem(p.get<std::string>());
  return rropt::problem_from_json(p);
}

rropt::RunConfig run_config_from_json(const json& config, int dimension) {
  rropt::RunConfig rc;
  rc.method = rropt::method_from_name(config.at("method").get<std::string>());
  rc.schedule = rropt::StepsizeSchedule(config.value("R", 1.0), config.value("s", 0.75));
  rc.q = config.value("q", 1.0);
  rc.cycles = config.at("K").get<std::int64_t>();
  rc.seed = config.value("seed", std::uint64_t{0});
  rc.log_stride = config.value("log_stride", std::int64_t{1});
  rc.x0 = rropt::Vector::Ones(dimension);
  if (config.contains("x0")) {
    const auto x0 = config.at("x0").get<std::vector<double>>();
    rc.x0 = Eigen::Map<const rropt::Vector>(x0.data(), x0.size());
  }
  return rc;
}

int cmd_run(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config: " + config_path);
  const json config = json::parse(in);
  const auto problem = problem_from_config(config);
  const auto rc = run_config_from_json(config, problem.dimension());

  rropt::Trajectory traj;
  if (rc.method == rropt::Method::BIRR) {
    auto result = rropt::birr_run(problem, rc);
    traj = std::move(result.trajectory);
    std::cout << "output_dist " << (result.output - problem.optimum()).norm() << '\n';
  } else {
    traj = rropt::run(problem, rc);
  }
  std::ofstream out(out_path);
  traj.write_csv(out);
  std::cout << "final_dist " << traj.dist.back() << "\nwrote " << out_path << '\n';
  return 0;
}

int cmd_compare(const std::string& problem_spec, const std::string& methods_csv, int seeds,
                double R, double s, double q, std::int64_t K, const std::string& out_path,
                double fit_kmin, bool figures) {
  const auto problem = load_problem(problem_spec);
  std::vector<rropt::Method> methods;
  std::stringstream ss(methods_csv);
  std::string token;
  while (std::getline(ss, token, ',')) methods.push_back(rropt::method_from_name(token));

  rropt::RunConfig base;
  base.schedule = rropt::StepsizeSchedule(R, s);
  base.q = q;
  base.cycles = K;
  base.x0 = rropt::Vector::Ones(problem.dimension());
  const auto curves =
      rropt::compare_methods(problem, base, methods, rropt::seed_range(seeds), fit_kmin);

  json report;
  report["problem"] = problem_spec;
  report["config"] = {{"R", R}, {"s", s}, {"q", q}, {"K", K}, {"seeds", seeds}};
  report["methods"] = json::array();
  for (const auto& curve : curves) {
    report["methods"].push_back(curve.to_json());
    std::cout << rropt::method_name(curve.method) << ": slope " << curve.fit.slope
              << " (r2 " << curve.fit.r_squared << ", diverged " << curve.n_diverged
              << ")\n";
    if (figures) {
      const std::string fig_path =
          out_path + "." + rropt::method_name(curve.method) + ".csv";
      std::ofstream fig(fig_path);
      fig << "k,median,p10,p90\n";
      for (std::size_t i = 0; i < curve.k_grid.size(); ++i)
        fig << curve.k_grid[i] << ',' << curve.median_gap[i] << ',' << curve.p10_gap[i]
            << ',' << curve.p90_gap[i] << '\n';
    }
  }
  std::ofstream out(out_path);
  out << report.dump(2) << '\n';
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int cmd_suite(const std::string& out_path) {
  const auto results = rropt::checks::run_all();
  bool all = true;
  for (const auto& res : results) {
    std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.id << ' ' << res.name << '\n';
    all = all && res.pass;
  }
  std::ofstream out(out_path);
  out << rropt::checks::report_json(results).dump(2) << '\n';
  std::cout << "wrote " << out_path << '\n';
  return all ? 0 : 1;
}

int cmd_fit(const std::string& csv_path, const std::string& column, double kmin, double kmax) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open csv: " + csv_path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> headers;
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) headers.push_back(cell);
  const auto it = std::find(headers.begin(), headers.end(), column);
  if (it == headers.end()) throw std::runtime_error("no column named " + column);
  const auto col = static_cast<std::size_t>(it - headers.begin());

  std::vector<double> ks, ys;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() <= col) continue;
    ks.push_back(std::stod(cells[0]));
    ys.push_back(std::stod(cells[col]));
  }
  const auto fit = rropt::fit_rate(ks, ys, kmin, kmax);
  std::cout << fit.to_json().dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-sum incremental gradient experiment runner"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "execute one run from a JSON config");
  std::string config_path, run_out = "trajectory.csv";
  run_cmd->add_option("--config", config_path, "run config JSON")->required();
  run_cmd->add_option("--out", run_out, "trajectory CSV path");

  auto* compare_cmd = app.add_subcommand("compare", "multi-seed method comparison");
  std::string problem_spec, methods_csv = "rr,sgd";
  std::string compare_out = "compare.json";
  int seeds = 20;
  double R = 1.0, s = 0.75, q = 0.5, fit_kmin = 1e3;
  std::int64_t K = 100000;
  bool figures = false;
  compare_cmd->add_option("--problem", problem_spec, "fixture name or problem JSON file")
      ->required();
  compare_cmd->add_option("--methods", methods_csv, "comma-separated: rr,sgd,ig,birr");
  compare_cmd->add_option("--seeds", seeds, "number of seeds");
  compare_cmd->add_option("--R", R, "stepsize scale");
  compare_cmd->add_option("--s", s, "stepsize exponent");
  compare_cmd->add_option("--q", q, "suffix averaging parameter");
  compare_cmd->add_option("--K", K, "cycle count");
  compare_cmd->add_option("--kmin", fit_kmin, "rate-fit window start");
  compare_cmd->add_option("--out", compare_out, "report JSON path");
  compare_cmd->add_flag("--figures", figures, "write per-method k,median,p10,p90 CSVs");

  auto* suite_cmd = app.add_subcommand("suite", "run the verification suite");
  std::string suite_out = "report.json";
  suite_cmd->add_option("--out", suite_out, "report JSON path");

  auto* fit_cmd = app.add_subcommand("fit", "log-log slope fit on a trajectory CSV");
  std::string csv_path, column = "f_gap";
  double kmin = 1e3, kmax = 1e18;
  fit_cmd->add_option("--csv", csv_path, "trajectory CSV")->required();
  fit_cmd->add_option("--column", column, "column to fit");
  fit_cmd->add_option("--kmin", kmin, "window start");
  fit_cmd->add_option("--kmax", kmax, "window end");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return cmd_run(config_path, run_out);
    if (*compare_cmd)
      return cmd_compare(problem_spec, methods_csv, seeds, R, s, q, K, compare_out,
                         fit_kmin, figures);
    if (*suite_cmd) return cmd_suite(suite_out);
    if (*fit_cmd) return cmd_fit(csv_path, column, kmin, kmax);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}

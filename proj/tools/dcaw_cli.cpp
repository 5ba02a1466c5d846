#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcaw/errors.hpp"
#include "dcaw/harness.hpp"
#include "dcaw/lnat_system.hpp"
#include "dcaw/matching.hpp"
#include "dcaw/norms.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kUsageError = 1;
constexpr int kSolverError = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dcaw::ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw dcaw::ParseError("'" + path + "': " + ex.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw dcaw::ParseError("cannot write '" + path + "'");
  out << text;
}

// {"p": [...]} or, for matching, {"s": [...], "t": [...]}.
std::vector<double> read_prediction(const std::string& path, const dcaw::ProblemInstance& inst) {
  if (path.empty()) return std::vector<double>(inst.dimension(), 0.0);
  const json j = read_json(path);
  if (j.contains("s")) return dcaw::RealDualPair::from_json(j).joined();
  try {
    return j.at("p").get<std::vector<double>>();
  } catch (const json::exception& ex) {
    throw dcaw::ParseError("prediction: " + std::string(ex.what()));
  }
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--k", "'" + item + "' is not an integer");
    }
  }
  return out;
}

dcaw::StepKind parse_step(const std::string& s) {
  return s == "unit" ? dcaw::StepKind::Unit : dcaw::StepKind::Long;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warm-started discrete convex solvers"};
  app.require_subcommand(1);

  dcaw::GenOptions gen;
  std::string gen_kind = "matching";
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("--kind", gen_kind, "matching | matroid | energy | generic")
      ->check(CLI::IsMember({"matching", "matroid", "energy", "generic"}));
  gen_cmd->add_option("--n", gen.n, "Vertex or element count");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--fixture", gen.fixture, "path (matching) | tight (matroid) | toy (energy)");
  gen_cmd->add_option("--W", gen.weight, "Weight scale");
  gen_cmd->add_option("--out", gen_out, "Output file (stdout by default)");

  std::string solve_instance;
  std::string solve_prediction;
  std::string solve_step = "long";
  std::string solve_format = "json";
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance from a prediction");
  solve_cmd->add_option("--instance", solve_instance, "Instance file")->required();
  solve_cmd->add_option("--prediction", solve_prediction, "Prediction file (zero by default)");
  solve_cmd->add_option("--step", solve_step, "unit | long")->check(CLI::IsMember({"unit", "long"}));
  solve_cmd->add_option("--format", solve_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  std::string project_instance;
  std::string project_point;
  auto* project_cmd = app.add_subcommand("project", "Project a point onto a feasible region and round");
  project_cmd->add_option("--instance", project_instance, "Constraint system or matching instance")
      ->required();
  project_cmd->add_option("--point", project_point, "Point file {\"p\": [...]}")->required();

  dcaw::SweepConfig sweep;
  std::string sweep_kind = "matching";
  std::string sweep_ks = "0,1,2,4,8,16";
  std::string sweep_step = "long";
  std::string sweep_out;
  bool sweep_no_timing = false;
  auto* sweep_cmd = app.add_subcommand("warmstart-sweep", "Perturbation sweep CSV");
  sweep_cmd->add_option("--kind", sweep_kind, "matching | matroid | energy | generic")
      ->check(CLI::IsMember({"matching", "matroid", "energy", "generic"}));
  sweep_cmd->add_option("--n", sweep.n, "Instance size");
  sweep_cmd->add_option("--k", sweep_ks, "Comma-separated perturbation magnitudes");
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per magnitude");
  sweep_cmd->add_option("--seed", sweep.seed, "Random seed");
  sweep_cmd->add_option("--step", sweep_step, "unit | long")->check(CLI::IsMember({"unit", "long"}));
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (default: DCAWARM_THREADS or 1)");
  sweep_cmd->add_flag("--no-timing", sweep_no_timing, "Write 0 in the time_us column");
  sweep_cmd->add_option("--out", sweep_out, "Output CSV (stdout by default)");

  dcaw::LearningConfig learn;
  std::string learn_kind = "matching";
  std::string learn_step = "long";
  std::string learn_out;
  std::string learn_summary_out;
  auto* learn_cmd = app.add_subcommand("learn", "Online learning experiment");
  learn_cmd->add_option("--kind", learn_kind, "matching | matroid")
      ->check(CLI::IsMember({"matching", "matroid"}));
  learn_cmd->add_option("--n", learn.n, "Instance size");
  learn_cmd->add_option("--T", learn.rounds, "Rounds");
  learn_cmd->add_option("--C", learn.radius, "Box radius (recommended value by default)");
  learn_cmd->add_option("--shift", learn.shift, "Per-round weight noise");
  learn_cmd->add_option("--seed", learn.seed, "Random seed");
  learn_cmd->add_option("--holdout", learn.holdout, "Held-out instances for the A/B comparison");
  learn_cmd->add_option("--step", learn_step, "unit | long")->check(CLI::IsMember({"unit", "long"}));
  learn_cmd->add_option("--out", learn_out, "Per-round CSV (stdout by default)");
  learn_cmd->add_option("--summary", learn_summary_out, "Summary JSON file (stderr by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen_cmd) {
      gen.kind = dcaw::parse_problem_kind(gen_kind);
      emit(gen_out, dcaw::gen_instance(gen).dump(2) + "\n");
    } else if (*solve_cmd) {
      const dcaw::ProblemInstance inst = dcaw::ProblemInstance::from_json(read_json(solve_instance));
      const std::vector<double> p_hat = read_prediction(solve_prediction, inst);
      const dcaw::SolveOutcome sol = dcaw::solve_problem(inst, p_hat, {parse_step(solve_step), {}});
      const bool verified = dcaw::verify_certificate(inst, sol);
      if (solve_format == "json") {
        json out = {{"problem", dcaw::problem_name(inst.kind())},
                    {"value", sol.value},
                    {"start", sol.start.values()},
                    {"point", sol.point.values()},
                    {"iterations", sol.trace.iterations},
                    {"oracle_calls", reported_oracle_calls(sol.trace)},
                    {"certified", sol.certified && verified},
                    {"solution", sol.detail}};
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << "problem,value,iterations,oracle_calls,certified\n"
                  << dcaw::problem_name(inst.kind()) << ',' << sol.value << ','
                  << sol.trace.iterations << ',' << reported_oracle_calls(sol.trace) << ','
                  << ((sol.certified && verified) ? "true" : "false") << "\n";
      }
      if (!verified) return kSolverError;
    } else if (*project_cmd) {
      const json inst = read_json(project_instance);
      const json point = read_json(project_point);
      json out;
      if (inst.contains("type") && inst["type"] == "matching") {
        const auto m = dcaw::MatchingInstance::from_json(inst);
        const auto pred = point.contains("s") ? dcaw::RealDualPair::from_json(point)
                                              : dcaw::RealDualPair{};
        const dcaw::DualProjection proj = dcaw::project_dual(m, pred);
        out = {{"epsilon", proj.epsilon},
               {"projection", proj.projected.to_json()},
               {"rounded", {{"s", proj.rounded.s.values()}, {"t", proj.rounded.t.values()}}}};
      } else {
        const dcaw::LNatSystem s = dcaw::LNatSystem::from_json(inst);
        const auto p_hat = point.at("p").get<std::vector<double>>();
        const dcaw::Projection proj = dcaw::project_general(s, p_hat);
        const dcaw::IntVector rounded = dcaw::round_into(s, proj.point);
        std::vector<double> diff(p_hat.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rounded[i] - p_hat[i];
        out = {{"projection", proj.point},
               {"distance_pm", proj.distance.total},
               {"rounded", rounded.values()},
               {"rounded_distance_pm", dcaw::linf_pm_norm(diff).total},
               {"arcs", proj.arc_count}};
      }
      std::cout << out.dump(2) << "\n";
    } else if (*sweep_cmd) {
      sweep.kind = dcaw::parse_problem_kind(sweep_kind);
      sweep.ks = parse_list(sweep_ks);
      sweep.step = parse_step(sweep_step);
      std::ostringstream csv;
      dcaw::write_sweep_csv(csv, dcaw::run_warmstart_sweep(sweep), !sweep_no_timing);
      emit(sweep_out, csv.str());
    } else if (*learn_cmd) {
      learn.kind = dcaw::parse_problem_kind(learn_kind);
      learn.step = parse_step(learn_step);
      const dcaw::LearningReport report = dcaw::run_learning_experiment(learn);
      std::ostringstream csv;
      dcaw::write_learning_csv(csv, report);
      emit(learn_out, csv.str());
      const std::string summary = dcaw::learning_summary(report).dump(2) + "\n";
      if (learn_summary_out.empty()) {
        std::cerr << summary;
      } else {
        emit(learn_summary_out, summary);
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsageError;
  } catch (const dcaw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return 0;
}

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "entrocone/cone.hpp"
#include "entrocone/dist.hpp"
#include "entrocone/expr.hpp"
#include "entrocone/model.hpp"
#include "entrocone/pipeline.hpp"
#include "entrocone/polyhedron.hpp"
#include "entrocone/scenarios.hpp"
#include "entrocone/verify.hpp"

namespace {

using namespace entrocone;

CausalStructure load_structure_arg(const std::string& path) {
  // Registered scenario names double as inputs everywhere a file is accepted.
  if (auto scenario = named_scenario(path)) return *scenario;
  return load_structure(path);
}

LinearExpression resolve_inequality(const std::string& text) {
  if (auto named = named_inequality(text)) return named->expr;
  return parse_inequality(text);
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  return file;
}

int cmd_validate(const std::string& path) {
  const CausalStructure structure = load_structure_arg(path);
  const ValidationReport report = validate(structure);
  std::cout << report.summary() << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_cone(const std::string& path, bool marginal_only,
             const std::string& out_path) {
  const CausalStructure structure = load_structure_arg(path);
  const ValidationReport report = validate(structure);
  if (!report.ok()) {
    std::cerr << report.summary() << "\n";
    return 1;
  }
  const ConstraintSystem system =
      marginal_only ? marginal_cone(structure) : assemble(structure);
  std::ofstream file;
  write_system(open_or_stdout(out_path, file), system);
  return 0;
}

int cmd_rays(const std::string& path, bool marginal_only,
             const std::string& out_path) {
  const CausalStructure structure = load_structure_arg(path);
  const ValidationReport report = validate(structure);
  if (!report.ok()) {
    std::cerr << report.summary() << "\n";
    return 1;
  }
  const ConstraintSystem system =
      marginal_only ? marginal_cone(structure) : assemble(structure);
  const ConeVRep vrep = extreme_rays(system);
  std::ofstream file;
  write_poi(open_or_stdout(out_path, file), vrep);
  return 0;
}

int cmd_check(const std::string& path, const std::string& ineq,
              const std::string& cert_path) {
  const CausalStructure structure = load_structure_arg(path);
  const ValidationReport report = validate(structure);
  if (!report.ok()) {
    std::cerr << report.summary() << "\n";
    return 1;
  }
  const ConstraintSystem system = assemble(structure);
  const LinearExpression expr = resolve_inequality(ineq);
  const std::vector<Candidate> candidates = to_candidates(expr, system.index);
  bool all_valid = true;
  Certificate last;
  for (const auto& candidate : candidates) {
    last = is_valid(system, candidate);
    if (!last.valid()) {
      all_valid = false;
      break;
    }
  }
  std::cout << (all_valid ? "valid" : "not implied") << "\n";
  if (!cert_path.empty()) {
    std::ofstream file(cert_path);
    if (!file) throw std::runtime_error("cannot write '" + cert_path + "'");
    write_certificate(file, system, candidates.back(), last);
  }
  return 0;
}

int cmd_eval(const std::string& dist_path, const std::string& ineq) {
  const JointDistribution dist = load_distribution(dist_path);
  const LinearExpression expr = resolve_inequality(ineq);
  const EntropyVector vector = entropy_vector_full(dist);
  const double slack = evaluate(expr, vector);
  std::cout.setf(std::ios::showpos);
  std::cout.precision(9);
  std::cout << std::fixed << slack << "\n";
  return 0;
}

int cmd_scan(const std::string& scenario, const std::string& ineq,
             const std::string& step_text, const std::string& out_path) {
  if (scenario != "ic2" && scenario != "ic-2")
    throw std::runtime_error(
        "scan: only the two-receiver coding scenario ('ic2') is scannable");
  const LinearExpression expr = resolve_inequality(ineq);
  const Rat step = parse_rational(step_text);
  const std::vector<ScanPoint> points = scan_boundary(expr, step);
  std::ofstream file;
  write_scan_csv(open_or_stdout(out_path, file), expr.text(), step, points);
  return 0;
}

int cmd_scenario(const std::string& name, bool emit,
                 const std::string& out_path) {
  const auto structure = named_scenario(name);
  if (!structure) {
    std::cerr << "unknown scenario '" << name << "'; known forms:\n";
    for (const auto& line : named_scenario_help())
      std::cerr << "  " << line << "\n";
    return 1;
  }
  std::ofstream file;
  std::ostream& out = open_or_stdout(out_path, file);
  if (emit) {
    out << emit_structure(*structure);
    return 0;
  }
  out << "systems: " << structure->n() << ", preparations: "
      << structure->preparations.size()
      << ", operations: " << structure->operations.size() << "\n";
  out << "maximal coexisting sets:\n";
  for (Mask set : coexisting_sets(*structure))
    out << "  {" << structure->label(set) << "}\n";
  out << "marginal contexts:\n";
  for (const auto& context : structure->marginal_contexts)
    out << "  {" << structure->label(structure->mask_of(context)) << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "entrocone: entropic constraints of classical-quantum causal structures"};
  app.require_subcommand(1);

  std::string path, ineq, cert_path, out_path, dist_path, scenario, step;
  bool marginal_only = false, emit = false;

  auto* validate_cmd = app.add_subcommand("validate", "check a structure file");
  validate_cmd->add_option("file", path, "structure file or scenario name")
      ->required();

  auto* cone_cmd =
      app.add_subcommand("cone", "emit the entropic constraint system");
  cone_cmd->add_option("file", path, "structure file or scenario name")
      ->required();
  cone_cmd->add_flag("--marginal-only", marginal_only,
                     "project onto the declared marginal scenario");
  cone_cmd->add_option("-o,--output", out_path, "write to a file");

  auto* rays_cmd = app.add_subcommand("rays", "emit extreme rays");
  rays_cmd->add_option("file", path, "structure file or scenario name")
      ->required();
  rays_cmd->add_flag("--marginal-only", marginal_only,
                     "project onto the declared marginal scenario first");
  rays_cmd->add_option("-o,--output", out_path, "write to a file");

  auto* check_cmd =
      app.add_subcommand("check", "prove or refute an inequality");
  check_cmd->add_option("file", path, "structure file or scenario name")
      ->required();
  check_cmd->add_option("--ineq", ineq, "inequality text or registered name")
      ->required();
  check_cmd->add_option("--cert", cert_path, "write the certificate as JSON");

  auto* eval_cmd =
      app.add_subcommand("eval", "slack of an inequality on a distribution");
  eval_cmd->add_option("--dist", dist_path, "distribution JSON file")
      ->required();
  eval_cmd->add_option("--ineq", ineq, "inequality text or registered name")
      ->required();

  auto* scan_cmd =
      app.add_subcommand("scan", "violation boundary over mixed boxes");
  scan_cmd->add_option("--scenario", scenario, "scannable scenario (ic2)")
      ->required();
  scan_cmd->add_option("--ineq", ineq, "inequality text or registered name")
      ->required();
  scan_cmd->add_option("--step", step, "epsilon grid step, rational in (0,1/8]")
      ->required();
  scan_cmd->add_option("-o,--output", out_path, "write CSV to a file");

  auto* scenario_cmd =
      app.add_subcommand("scenario", "inspect or emit a named scenario");
  scenario_cmd->add_option("name", scenario, "scenario name")->required();
  scenario_cmd->add_flag("--emit", emit, "emit the structure file text");
  scenario_cmd->add_option("-o,--output", out_path, "write to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(path);
    if (cone_cmd->parsed()) return cmd_cone(path, marginal_only, out_path);
    if (rays_cmd->parsed()) return cmd_rays(path, marginal_only, out_path);
    if (check_cmd->parsed()) return cmd_check(path, ineq, cert_path);
    if (eval_cmd->parsed()) return cmd_eval(dist_path, ineq);
    if (scan_cmd->parsed()) return cmd_scan(scenario, ineq, step, out_path);
    if (scenario_cmd->parsed()) return cmd_scenario(scenario, emit, out_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

// SPDX-License-Identifier: Apache-2.0
//
// hamricc: batch front-end for the analyze -> dichotomy -> riccati pipeline.
//
// Exit codes: 0 all checks passed, 1 config error, 2 not dichotomous /
// spectrum hit, 3 accuracy or consistency failure, 4 cross-method
// disagreement.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hamricc/config.hpp"
#include "hamricc/linalg.hpp"
#include "hamricc/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotDichotomous = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitDisagreement = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<double> tol;
  std::optional<double> quad_tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "run config file")->required();
  cmd->add_option("--out", o.out_dir, "output directory (overrides config paths)");
  cmd->add_option("--tol", o.tol, "residual tolerance override");
  cmd->add_option("--quad-tol", o.quad_tol, "quadrature tolerance override");
  cmd->add_option("--seed", o.seed, "problem seed override");
  cmd->add_option("--format", o.format, "report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
}

hamricc::ParsedConfig load(const CommonOpts& o) {
  hamricc::ParsedConfig cfg = hamricc::parse_config_file(o.config_path);
  if (o.tol) cfg.run.policy.residual_tol = *o.tol;
  if (o.quad_tol) cfg.run.policy.quad_abs_tol = *o.quad_tol;
  if (o.seed) cfg.run.problem.seed = *o.seed;
  if (o.format)
    cfg.run.format = (*o.format == "json") ? hamricc::ReportFormat::json
                                           : hamricc::ReportFormat::text;
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    const std::filesystem::path base(o.out_dir);
    cfg.run.report_path = (base / "report.txt").string();
    cfg.run.csv_dir = base.string();
  }
  return cfg;
}

void emit(const std::string& content, const std::string& path) {
  std::cout << content;
  if (!path.empty()) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
  }
}

int cmd_solve(const CommonOpts& o) {
  const hamricc::ParsedConfig cfg = load(o);
  const hamricc::RunReport rep = hamricc::run_solve(cfg.run);
  const std::string rendered = cfg.run.format == hamricc::ReportFormat::json
                                   ? hamricc::render_json(rep)
                                   : hamricc::render_text(rep);
  emit(rendered, cfg.run.report_path);
  return rep.all_pass ? kExitOk : kExitAccuracy;
}

int cmd_scan(const CommonOpts& o, const std::string& scan_kind) {
  hamricc::ParsedConfig cfg = load(o);
  if (!scan_kind.empty()) {
    if (scan_kind == "axis_decay") cfg.scan.kind = hamricc::ScanKind::axis_decay;
    else if (scan_kind == "sector") cfg.scan.kind = hamricc::ScanKind::sector;
    else if (scan_kind == "sv_probe") cfg.scan.kind = hamricc::ScanKind::sv_probe;
    else throw hamricc::ConfigError("unknown scan kind: " + scan_kind);
    cfg.has_scan = true;
  }
  if (!cfg.has_scan) throw hamricc::ConfigError("no [scan] section and no --scan kind");
  const hamricc::ScanResult res = hamricc::run_scan(cfg.run, cfg.scan);
  std::string csv_path;
  if (!cfg.run.csv_dir.empty()) {
    std::filesystem::create_directories(cfg.run.csv_dir);
    csv_path = (std::filesystem::path(cfg.run.csv_dir) / "scan.csv").string();
  }
  emit(hamricc::render_csv(res), csv_path);
  return res.hit_spectrum ? kExitNotDichotomous : kExitOk;
}

int cmd_compare(const CommonOpts& o) {
  const hamricc::ParsedConfig cfg = load(o);
  const hamricc::CompareReport rep = hamricc::run_compare(cfg.run);
  const std::string rendered = cfg.run.format == hamricc::ReportFormat::json
                                   ? hamricc::render_compare_json(rep)
                                   : hamricc::render_compare_text(rep);
  emit(rendered, cfg.run.report_path);
  return rep.pass ? kExitOk : kExitDisagreement;
}

int cmd_generate(const CommonOpts& o) {
  const hamricc::ParsedConfig cfg = load(o);
  const std::string dir = o.out_dir.empty() ? "." : o.out_dir;
  std::filesystem::create_directories(dir);
  const hamricc::SystemData sys = hamricc::generate(cfg.run.problem, cfg.run.policy);
  const std::filesystem::path base(dir);
  hamricc::write_matrix_csv((base / "A.csv").string(), sys.A);
  hamricc::write_matrix_csv((base / "B.csv").string(), sys.B);
  hamricc::write_matrix_csv((base / "C.csv").string(), sys.C);
  std::ofstream meta(base / "system.cfg", std::ios::binary);
  meta << "# generated system: " << sys.label << "\n";
  meta << "[problem]\n";
  meta << "kind = custom\n";
  meta << "label = " << sys.label << "\n";
  meta << "r = " << hamricc::format_full(sys.r) << "\n";
  meta << "s = " << hamricc::format_full(sys.s) << "\n";
  meta << "A = file:A.csv\n";
  meta << "B = file:B.csv\n";
  meta << "C = file:C.csv\n";
  std::cout << "wrote " << (base / "A.csv").string() << " " << (base / "B.csv").string()
            << " " << (base / "C.csv").string() << " " << (base / "system.cfg").string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riccati solutions from dichotomy projections of Hamiltonian matrices"};
  app.require_subcommand(1);

  CommonOpts solve_opts, scan_opts, compare_opts, generate_opts;
  std::string scan_kind;

  CLI::App* solve = app.add_subcommand("solve", "run the full pipeline on one config");
  add_common(solve, solve_opts);
  CLI::App* scan = app.add_subcommand("scan", "emit plot-ready CSV scan data");
  add_common(scan, scan_opts);
  scan->add_option("--scan", scan_kind, "axis_decay, sector or sv_probe");
  CLI::App* compare = app.add_subcommand("compare", "contour vs eigendecomposition oracle");
  add_common(compare, compare_opts);
  CLI::App* generate = app.add_subcommand("generate", "emit a generated system to files");
  add_common(generate, generate_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : kExitOk;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_opts);
    if (scan->parsed()) return cmd_scan(scan_opts, scan_kind);
    if (compare->parsed()) return cmd_compare(compare_opts);
    if (generate->parsed()) return cmd_generate(generate_opts);
  } catch (const hamricc::NotDichotomousError& e) {
    std::cerr << "not dichotomous: " << e.what() << "\n";
    return kExitNotDichotomous;
  } catch (const hamricc::SingularityError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return kExitNotDichotomous;
  } catch (const hamricc::AccuracyError& e) {
    std::cerr << "accuracy: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const hamricc::ConsistencyError& e) {
    std::cerr << "consistency: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const hamricc::ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hamricc::ParameterError& e) {
    std::cerr << "parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hamricc::DimensionError& e) {
    std::cerr << "dimension: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hamricc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAccuracy;
  }
  return kExitConfig;
}

// SPDX-License-Identifier: Apache-2.0
#include "hamricc/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hamricc/linalg.hpp"

namespace hamricc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + key + "': " + v);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for '" + key + "': " + v);
  }
}

/// "[[a, b],[c, d]]" -> dense matrix; or "file:PATH" -> CSV.
Eigen::MatrixXcd parse_matrix_value(const std::string& key, const std::string& raw,
                                    const std::string& base_dir) {
  const std::string v = trim(raw);
  if (v.rfind("file:", 0) == 0) {
    std::filesystem::path p = trim(v.substr(5));
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return read_matrix_csv(p.string());
  }
  if (v.size() < 4 || v.front() != '[' || v.back() != ']')
    throw ConfigError("matrix '" + key + "' must be [[...],[...]] or file:PATH");
  const std::string inner = trim(v.substr(1, v.size() - 2));
  std::vector<std::vector<Cx>> rows;
  std::size_t i = 0;
  while (i < inner.size()) {
    if (inner[i] == ',' || std::isspace(static_cast<unsigned char>(inner[i]))) {
      ++i;
      continue;
    }
    if (inner[i] != '[') throw ConfigError("matrix '" + key + "': expected row '['");
    const std::size_t close = inner.find(']', i);
    if (close == std::string::npos)
      throw ConfigError("matrix '" + key + "': unterminated row");
    std::vector<Cx> row;
    std::stringstream ss(inner.substr(i + 1, close - i - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) row.push_back(parse_complex(tok));
    }
    if (row.empty()) throw ConfigError("matrix '" + key + "': empty row");
    rows.push_back(std::move(row));
    i = close + 1;
  }
  if (rows.empty()) throw ConfigError("matrix '" + key + "': no rows");
  Eigen::MatrixXcd m(rows.size(), rows[0].size());
  for (std::size_t rr = 0; rr < rows.size(); ++rr) {
    if (rows[rr].size() != rows[0].size())
      throw ConfigError("matrix '" + key + "': ragged rows");
    for (std::size_t cc = 0; cc < rows[rr].size(); ++cc) m(rr, cc) = rows[rr][cc];
  }
  return m;
}

ProblemKind parse_kind(const std::string& v) {
  if (v == "scalar") return ProblemKind::scalar;
  if (v == "random_stable") return ProblemKind::random_stable;
  if (v == "random_shifted") return ProblemKind::random_shifted;
  if (v == "heat1d") return ProblemKind::heat1d;
  if (v == "axis_eigen_detect") return ProblemKind::axis_eigen_detect;
  if (v == "custom") return ProblemKind::custom;
  throw ConfigError("unknown problem kind: " + v);
}

ResolventNorm parse_which(const std::string& v) {
  if (v == "v0") return ResolventNorm::v0;
  if (v == "v") return ResolventNorm::v;
  if (v == "v0_to_v1") return ResolventNorm::v0_to_v1;
  if (v == "v0_to_v") return ResolventNorm::v0_to_v;
  throw ConfigError("unknown norm selector: " + v);
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  ParsedConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) {
      // keep '#'/';' inside matrix brackets or paths? the formats never use
      // them, so a plain cut is fine
      line = line.substr(0, comment);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");

    auto& prob = cfg.run.problem;
    auto& pol = cfg.run.policy;
    auto& flags = cfg.run.flags;
    if (section == "problem") {
      if (key == "kind") prob.kind = parse_kind(value);
      else if (key == "n") prob.n = parse_int(key, value);
      else if (key == "m") prob.m = parse_int(key, value);
      else if (key == "p") prob.p = parse_int(key, value);
      else if (key == "r") prob.r = parse_double(key, value);
      else if (key == "s") prob.s = parse_double(key, value);
      else if (key == "seed") prob.seed = static_cast<std::uint64_t>(parse_int(key, value));
      else if (key == "label") prob.label = value;
      else if (key == "a") prob.a = parse_double(key, value);
      else if (key == "b") prob.b = parse_double(key, value);
      else if (key == "c") prob.c = parse_double(key, value);
      else if (key == "margin") prob.margin = parse_double(key, value);
      else if (key == "mu") prob.mu = parse_double(key, value);
      else if (key == "k_unstable") prob.k_unstable = parse_int(key, value);
      else if (key == "control_node") prob.control_node = parse_double(key, value);
      else if (key == "obs_node") prob.obs_node = parse_double(key, value);
      else if (key == "omega") prob.omega = parse_double(key, value);
      else if (key == "axis_zero_obs") prob.axis_zero_obs = parse_bool(key, value);
      else if (key == "A") prob.A_custom = parse_matrix_value(key, value, base_dir);
      else if (key == "B") prob.B_custom = parse_matrix_value(key, value, base_dir);
      else if (key == "C") prob.C_custom = parse_matrix_value(key, value, base_dir);
      else throw ConfigError("unknown key 'problem." + key + "'");
    } else if (section == "policy") {
      if (key == "rel_tol") pol.rel_tol = parse_double(key, value);
      else if (key == "quad_abs_tol") pol.quad_abs_tol = parse_double(key, value);
      else if (key == "axis_tol") pol.axis_tol = parse_double(key, value);
      else if (key == "residual_tol") pol.residual_tol = parse_double(key, value);
      else if (key == "proj_tol_floor") pol.proj_tol_floor = parse_double(key, value);
      else if (key == "match_tol") pol.match_tol = parse_double(key, value);
      else if (key == "pbh_tol") pol.pbh_tol = parse_double(key, value);
      else if (key == "graph_margin_min") pol.graph_margin_min = parse_double(key, value);
      else if (key == "quad_max_evals")
        pol.quad_max_evals = static_cast<std::size_t>(parse_int(key, value));
      else throw ConfigError("unknown key 'policy." + key + "'");
    } else if (section == "pipeline") {
      if (key == "symmetry") flags.symmetry = parse_bool(key, value);
      else if (key == "sq_identity") flags.sq_identity = parse_bool(key, value);
      else if (key == "decay_scan") flags.decay_scan = parse_bool(key, value);
      else if (key == "f1f2") flags.f1f2 = parse_bool(key, value);
      else if (key == "closed_loop_scan") flags.closed_loop_scan = parse_bool(key, value);
      else throw ConfigError("unknown key 'pipeline." + key + "'");
    } else if (section == "outputs") {
      if (key == "report") cfg.run.report_path = value;
      else if (key == "csv_dir") cfg.run.csv_dir = value;
      else if (key == "format") {
        if (value == "text") cfg.run.format = ReportFormat::text;
        else if (value == "json") cfg.run.format = ReportFormat::json;
        else throw ConfigError("unknown format: " + value);
      } else throw ConfigError("unknown key 'outputs." + key + "'");
    } else if (section == "scan") {
      cfg.has_scan = true;
      if (key == "kind") {
        if (value == "axis_decay") cfg.scan.kind = ScanKind::axis_decay;
        else if (value == "sector") cfg.scan.kind = ScanKind::sector;
        else if (value == "sv_probe") cfg.scan.kind = ScanKind::sv_probe;
        else throw ConfigError("unknown scan kind: " + value);
      } else if (key == "which") cfg.scan.which = parse_which(value);
      else if (key == "t") {
        cfg.scan.t_values.clear();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          tok = trim(tok);
          if (!tok.empty()) cfg.scan.t_values.push_back(parse_double(key, tok));
        }
      } else if (key == "t_min") cfg.scan.t_min = parse_double(key, value);
      else if (key == "t_max") cfg.scan.t_max = parse_double(key, value);
      else if (key == "t_count") cfg.scan.t_count = static_cast<int>(parse_int(key, value));
      else if (key == "slope_row") cfg.scan.slope_row = parse_bool(key, value);
      else throw ConfigError("unknown key 'scan." + key + "'");
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }

  if (!(cfg.run.policy.quad_abs_tol > 0.0) || !(cfg.run.policy.residual_tol > 0.0))
    throw ConfigError("tolerances must be positive");
  return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::filesystem::path(path).parent_path().string());
}

Eigen::MatrixXcd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file: " + path);
  std::vector<std::vector<Cx>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<Cx> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) row.push_back(parse_complex(tok));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("matrix file is empty: " + path);
  Eigen::MatrixXcd m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw ConfigError("ragged matrix file: " + path);
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write matrix file: " + path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ",";
      out << format_complex(m(r, c), /*full_precision=*/true);
    }
    out << "\n";
  }
}

}  // namespace hamricc

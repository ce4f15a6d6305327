// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>

#include "hamricc/pipeline.hpp"
#include "hamricc/types.hpp"

namespace hamricc {

struct ParsedConfig {
  RunConfig run;
  ScanSpec scan;
  bool has_scan = false;
};

/// Flat key = value config with [sections]. '#' and ';' start comments.
/// Matrices may be inlined as dense rows ("[[1, 2+1i], [0, 3]]") or referenced
/// as CSV files ("file:relative/path.csv", resolved against the config file).
ParsedConfig parse_config_file(const std::string& path);
ParsedConfig parse_config_text(const std::string& text, const std::string& base_dir);

/// Comma-separated complex entries, one matrix row per line, full round-trip
/// precision on write.
Eigen::MatrixXcd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m);

}  // namespace hamricc

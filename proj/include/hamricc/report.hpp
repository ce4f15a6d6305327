// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "hamricc/pipeline.hpp"

namespace hamricc {

/// Deterministic human-readable rendering; the timestamp and wall time live
/// in the single leading header line, everything below is reproducible
/// byte-for-byte for a fixed config and arithmetic profile.
std::string render_text(const RunReport& rep);

/// Structured rendering (sorted keys, fixed float formatting). The header
/// field again carries the only non-reproducible content on one line.
std::string render_json(const RunReport& rep);

std::string render_compare_text(const CompareReport& rep);
std::string render_compare_json(const CompareReport& rep);

/// CSV with header row, LF endings, full round-trip precision.
std::string render_csv(const ScanResult& scan);

}  // namespace hamricc

#pragma once

#include "ccmssc/branch_and_cut.hpp"

#include <string>
#include <vector>

namespace ccmssc {

inline constexpr const char* kReportSchema = "ccmssc-report/1";

/// Everything a run writes: inputs, the configuration actually used, and the
/// result with its node trace. Wall time is only serialized on request so
/// that reports of deterministic runs compare byte for byte.
struct Report {
  std::string data;
  int n = 0;
  int d = 0;
  std::vector<int> cards;
  BncConfig config;
  bool timing = false;
  SolveReport result;
};

std::string report_to_json(const Report& r);
/// Throws MalformedData on schema mismatch or missing fields.
Report report_from_json(const std::string& text);

bool operator==(const NodeTrace& a, const NodeTrace& b);
bool operator==(const SolveReport& a, const SolveReport& b);
bool operator==(const Report& a, const Report& b);

}  // namespace ccmssc

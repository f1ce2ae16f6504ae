#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spoisson {

/// Payload for the CLI report and the benchmark harness.
struct SolveReport {
  std::string solver;
  int n = 0;
  double eps = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::vector<std::pair<std::string, double>> seconds;  // per pipeline stage, in order
  std::vector<std::string> warnings;

  double stage(const std::string& name) const {
    for (const auto& [k, v] : seconds)
      if (k == name) return v;
    return 0.0;
  }
  void add_stage(const std::string& name, double s) {
    for (auto& [k, v] : seconds)
      if (k == name) {
        v += s;
        return;
      }
    seconds.emplace_back(name, s);
  }
};

}  // namespace spoisson

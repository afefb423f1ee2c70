#pragma once

// The acceptance grid: one entry per criterion, shared by the acceptance
// test binary and `msflow selftest`.

#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "msflow/manifold.hpp"

namespace msflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  /// wall-clock budget for the criterion, 0 for none
  double budget = 0;
};

std::vector<CriterionResult> run_acceptance();

/// Random connected gluing of 2..max_pieces pieces with genus, exceptional
/// count and boundary count drawn from [0,max_g], [0,max_n], [1,max_k].
GraphManifold random_graph(std::mt19937_64& rng, int max_pieces = 5, int max_g = 3, int max_n = 3, int max_k = 3);

/// "[PASS] 1 name (0.001 s): detail"
std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace msflow

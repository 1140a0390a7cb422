#pragma once

#include <string>
#include <vector>

namespace singlab::acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;
};

/// Number of criteria.
int count();
/// Runs one criterion, 1-based.  Exceptions become failed outcomes.
Outcome run(int id);
std::vector<Outcome> run_all();

}  // namespace singlab::acceptance

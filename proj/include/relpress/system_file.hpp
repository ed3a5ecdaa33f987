#pragma once

#include <optional>
#include <string>

#include "relpress/experiments.hpp"
#include "relpress/potential.hpp"
#include "relpress/sft.hpp"

namespace relpress {

/// One (X, pi, f, y, mu) bundle parsed from a system definition file.
/// The file is JSON with top-level keys `alphabet_x`, `edges_x`, `code` and
/// optional `potential`, `point`, `markov` sections; unknown keys are
/// rejected. See README for the format.
struct SystemSpec {
  FactorCode code;
  LocallyConstantPotential potential;  // zero potential when absent
  bool has_potential = false;
  std::optional<EventuallyPeriodicPoint> point;
  std::optional<MarkovSampler> markov;
};

/// Throws std::runtime_error with a field-level diagnostic on any parse or
/// validation problem.
SystemSpec load_system_file(const std::string& path);
SystemSpec parse_system_text(const std::string& text, const std::string& origin);

}  // namespace relpress

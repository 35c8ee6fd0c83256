#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hrde {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// One-line numeric summary (observed values against the pinned tolerances).
  std::string detail;
  /// Extra observations that do not affect the verdict.
  std::vector<std::string> notes;
};

// Each criterion is callable on its own; run_acceptance_suite runs all eleven.
CriterionResult criterion_rewriting_equivalence();
CriterionResult criterion_rate_iv();
CriterionResult criterion_rate_gc();
CriterionResult criterion_rate_iv_x();
CriterionResult criterion_lyapunov_contraction();
CriterionResult criterion_gradient_step();
CriterionResult criterion_continuous();
CriterionResult criterion_monotonicity_window();
CriterionResult criterion_discriminant_law();
CriterionResult criterion_acceleration();
CriterionResult criterion_rk4_order();

std::vector<CriterionResult> run_acceptance_suite();

/// Runs only the criteria whose ids are listed (1-based).
std::vector<CriterionResult> run_acceptance_suite(const std::vector<int>& ids);

/// gap-vs-k CSVs for gd, heavy-ball, nag-classic, nag-modified and iv-phase on
/// the kappa = 100 quadratic. Returns the written paths.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir);

}  // namespace hrde

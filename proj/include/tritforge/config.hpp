#pragma once

namespace tritforge {

/// Numerical tolerances shared by every module.
struct Tolerances {
  double unitarity = 1e-10;
  double equivalence = 1e-10;
  double normalization = 1e-12;
  double hermiticity = 1e-12;
  double min_eigenvalue = -1e-10;
  /// Threshold for "output is a basis state" in truth tables.
  double basis_output = 1e-10;
  /// Purity slack for separability checks.
  double purity = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace tritforge

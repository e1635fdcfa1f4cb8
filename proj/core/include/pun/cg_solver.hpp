#pragma once

#include <vector>

#include "pun/forward_model.hpp"
#include "pun/image.hpp"

namespace pun {

/// Data-consistency weight and conjugate-gradient stopping rule.
struct DcConfig {
  double lambda = 1.0;
  double tol = 1e-6;  // relative residual ||b - Mx|| / ||b||
  int max_iter = 50;

  void validate() const;
};

struct DcResult {
  ComplexImage x;
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;
  /// Relative residual before the first and after every iteration.
  std::vector<double> residual_history;
};

/// Solves (A^H A + lambda I) x = A^H y + lambda z, i.e. the minimiser of
/// ||Ax - y||^2 + lambda ||x - z||^2, by CG started at `initial` (defaults to z).
/// Hitting max_iter is reported through `converged`, not thrown.
DcResult solve_dc(const ForwardOperator& op, const KSpaceData& y, const ComplexImage& z,
                  const DcConfig& cfg, const ComplexImage* initial = nullptr);

/// lambda (A^H A + lambda I)^{-1} g: the Jacobian of solve_dc with respect to z
/// (Hermitian, so it is also its own vector-Jacobian product).
DcResult dc_gradient(const ForwardOperator& op, const ComplexImage& g, const DcConfig& cfg);

}  // namespace pun

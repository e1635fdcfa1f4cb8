#pragma once

#include <span>
#include <vector>

#include "pun/cg_solver.hpp"
#include "pun/denoiser.hpp"
#include "pun/forward_model.hpp"
#include "pun/phantom.hpp"

namespace pun {

struct UnrollConfig {
  int num_unrolls = 8;
  DcConfig dc;

  void validate() const;
};

/// Intermediate iterates of one unrolled pass, kept for reverse mode.
struct UnrollTrace {
  std::vector<ComplexImage> x;  // x^(0) .. x^(N)
  std::vector<DenoiserTape> tapes;
  int dc_iterations = 0;
  bool dc_converged = true;
};

/// x^(0) = A^H y; then N times: z = D(x), x = solve_dc(z). The same parameter
/// vector (and mask) is used in every block.
ComplexImage reconstruct(const KSpaceData& y, const ForwardOperator& op,
                         const DenoiserParams& params, std::span<const double> mask,
                         const UnrollConfig& cfg, UnrollTrace* trace = nullptr);

ComplexImage reconstruct(const SampleRecord& sample, const DenoiserParams& params,
                         std::span<const double> mask, const UnrollConfig& cfg);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Mean over the batch of the per-pixel mean |x^(N) - target|^2, and its exact
/// gradient with respect to the effective parameters theta * mask (not yet
/// multiplied by the mask).
LossGrad loss_and_effective_grad(std::span<const SampleRecord> batch, const DenoiserParams& params,
                                 std::span<const double> mask, const UnrollConfig& cfg);

/// As above, with the gradient taken with respect to theta: masked-out
/// coordinates are exactly zero.
LossGrad loss_and_grad(std::span<const SampleRecord> batch, const DenoiserParams& params,
                       std::span<const double> mask, const UnrollConfig& cfg);

/// Loss only.
double batch_loss(std::span<const SampleRecord> batch, const DenoiserParams& params,
                  std::span<const double> mask, const UnrollConfig& cfg);

}  // namespace pun

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace pun {

struct OptimizerConfig {
  double learning_rate = 3e-3;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 2;
  int epochs = 30;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One bias-corrected Adam update at step t >= 1. Coordinates with
/// active[j] == 0 are left untouched (parameters and moments).
void adam_step(std::span<double> params, std::span<const double> grad, std::span<double> moment1,
               std::span<double> moment2, long t, const OptimizerConfig& cfg,
               std::span<const std::uint8_t> active = {});

}  // namespace pun

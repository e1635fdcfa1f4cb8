#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pun/denoiser.hpp"
#include "pun/optimizer.hpp"
#include "pun/phantom.hpp"
#include "pun/pruning.hpp"
#include "pun/unrolled_net.hpp"

namespace pun {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_psnr_db = 0.0;  // NaN without a validation set
  double wall_seconds = 0.0;
  std::size_t active_params = 0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  DenoiserParams params;
  std::optional<BinaryMask> mask;
};

/// Thrown when a batch loss is not finite; carries the parameters from the
/// end of the last completed epoch.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, DenoiserParams last_good, int epoch)
      : std::runtime_error(what), last_good_(std::move(last_good)), epoch_(epoch) {}
  const DenoiserParams& last_good() const { return last_good_; }
  int epoch() const { return epoch_; }

 private:
  DenoiserParams last_good_;
  int epoch_;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Supervised training of the unrolled network. Batches come from a seeded
/// permutation per epoch (seed + epoch). With a mask only its active
/// coordinates are ever updated. With a schedule the mask starts all-ones
/// and magnitude pruning is applied at each event's epoch.
TrainReport train(std::span<const SampleRecord> train_set, std::span<const SampleRecord> val_set,
                  DenoiserParams params, std::optional<BinaryMask> mask,
                  const UnrollConfig& unroll, const OptimizerConfig& opt,
                  std::span<const PruneEvent> schedule = {}, const EpochCallback& on_epoch = {});

/// Per-sample PSNR of the network output against the scaled ground truth.
std::vector<double> evaluate_psnr(std::span<const SampleRecord> samples,
                                  const DenoiserParams& params, const BinaryMask* mask,
                                  const UnrollConfig& cfg);

/// Per-sample PSNR of the zero-filled reconstruction A^H y.
std::vector<double> zero_filled_psnr(std::span<const SampleRecord> samples);

/// Number of nonzero entries of theta * mask.
std::size_t count_nonzero_effective(const DenoiserParams& params, const BinaryMask* mask);

}  // namespace pun

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pun/denoiser.hpp"
#include "pun/optimizer.hpp"
#include "pun/phantom.hpp"
#include "pun/unrolled_net.hpp"

namespace pun {

/// Throughout, a "sparsity level" is the fraction of parameters that are
/// KEPT (a 3% level leaves 3% of the weights).

struct BinaryMask {
  std::vector<std::uint8_t> bits;

  static BinaryMask all_ones(std::size_t d) { return {std::vector<std::uint8_t>(d, 1)}; }
  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
  /// 0/1 multipliers for denoiser_forward.
  std::vector<double> weights() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Bernoulli mask distribution, parametrised by logits so p = sigmoid(logits)
/// stays strictly inside (0, 1).
struct PruneState {
  std::vector<double> logits;
  double target_p0 = 0.0;
  std::size_t budget = 0;
  double temperature = 0.2;
  /// Multiplier on KL / d; the objective is loss + kl_weight * KL / d.
  double kl_weight = 1.0;

  /// logits = 0 (p = 0.5), budget = round(sparsity * d), p0 = budget / d.
  static PruneState initial(std::size_t d, double sparsity, double temperature = 0.2,
                            double kl_weight = 1.0);

  std::size_t size() const { return logits.size(); }
  std::vector<double> probabilities() const;
  double effective_kl_weight() const;
  void validate() const;
};

double sigmoid(double t);
double logit(double p);

/// Relaxed Bernoulli sample for one entry, sigmoid((logit + g_l - g_k) / T).
double relaxed_mask_value(double logit, double g_l, double g_k, double temperature);

struct RelaxedMask {
  std::vector<double> values;           // in (0, 1)
  std::vector<double> dvalues_dlogits;  // m (1 - m) / T
};

/// Relaxed mask from explicit Gumbel draws (one pair per entry).
RelaxedMask relax_with_draws(std::span<const double> logits, std::span<const double> g_l,
                             std::span<const double> g_k, double temperature);

/// Draws fresh standard Gumbel pairs from `seed` and relaxes the state.
RelaxedMask sample_relaxed_mask(const PruneState& state, std::uint64_t seed);

/// KL(Ber(p) || Ber(p0)) summed over entries.
double kl_bernoulli(std::span<const double> p, double p0);

struct MaskSearchReport {
  PruneState state;
  std::vector<double> epoch_objective;  // mean relaxed objective per epoch
};

/// Adam on the logits of the relaxed objective
///   E_m[mean loss(theta_init * m)] + kl_weight * KL(Ber(p) || Ber(p0)) / d,
/// one Gumbel sample per batch. theta_init is never modified.
MaskSearchReport optimize_probabilities(std::span<const SampleRecord> dataset,
                                        const DenoiserParams& theta_init, PruneState state,
                                        const UnrollConfig& cfg, const OptimizerConfig& opt,
                                        int epochs, std::uint64_t seed);

/// Monte-Carlo estimate of the relaxed objective over `draws` fixed Gumbel
/// samples derived from `seed` (same draws for the same seed).
double relaxed_objective(std::span<const SampleRecord> dataset, const DenoiserParams& theta_init,
                         const PruneState& state, const UnrollConfig& cfg, std::uint64_t seed,
                         int draws);

/// Ones at the s largest scores; ties go to the lower index.
BinaryMask top_s_mask(std::span<const double> scores, std::size_t s);
BinaryMask binarize_top_s(const PruneState& state);

/// Among currently active weights keep the round(keep_fraction * active)
/// largest by |value| (ties to the lower index). Inactive weights stay off.
BinaryMask magnitude_prune(const DenoiserParams& params, const BinaryMask& current,
                           double keep_fraction);
BinaryMask magnitude_prune_to_count(const DenoiserParams& params, const BinaryMask& current,
                                    std::size_t keep);

/// A pruning-while-training event applied at the start of `epoch` (0-based).
struct PruneEvent {
  int epoch = 0;
  double keep_fraction = 1.0;       // of the weights alive before the event
  double surviving_fraction = 1.0;  // of all weights after the event
};

/// Halving events evenly spaced in the first 80% of training, then a clamp
/// event so the surviving fraction equals `target_sparsity` exactly.
std::vector<PruneEvent> pun_wt_schedule(int total_epochs, double target_sparsity);

/// Geometric milestones target^(k / rounds), k = 1..rounds.
std::vector<double> pun_at_milestones(int rounds, double target_sparsity);

}  // namespace pun

#include "pun/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pun/metrics.hpp"
#include "pun/parallel.hpp"
#include "pun/rng.hpp"

namespace pun {

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("OptimizerConfig: learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("OptimizerConfig: beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("OptimizerConfig: beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("OptimizerConfig: epsilon must be > 0");
  if (batch_size < 1) throw std::invalid_argument("OptimizerConfig: batch_size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("OptimizerConfig: epochs must be >= 0");
}

void adam_step(std::span<double> params, std::span<const double> grad, std::span<double> moment1,
               std::span<double> moment2, long t, const OptimizerConfig& cfg,
               std::span<const std::uint8_t> active) {
  const std::size_t n = params.size();
  if (grad.size() != n || moment1.size() != n || moment2.size() != n ||
      (!active.empty() && active.size() != n)) {
    throw std::invalid_argument("adam_step: length mismatch");
  }
  if (t < 1) throw std::invalid_argument("adam_step: step index must be >= 1");
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t j = 0; j < n; ++j) {
    if (!active.empty() && active[j] == 0) continue;
    moment1[j] = cfg.beta1 * moment1[j] + (1.0 - cfg.beta1) * grad[j];
    moment2[j] = cfg.beta2 * moment2[j] + (1.0 - cfg.beta2) * grad[j] * grad[j];
    const double m_hat = moment1[j] / bc1;
    const double v_hat = moment2[j] / bc2;
    params[j] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

std::vector<double> evaluate_psnr(std::span<const SampleRecord> samples,
                                  const DenoiserParams& params, const BinaryMask* mask,
                                  const UnrollConfig& cfg) {
  const std::vector<double> weights = mask != nullptr ? mask->weights() : std::vector<double>{};
  std::vector<double> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    out[i] = psnr(reconstruct(samples[i], params, weights, cfg), samples[i].target());
  });
  return out;
}

std::vector<double> zero_filled_psnr(std::span<const SampleRecord> samples) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = psnr(apply_adjoint(samples[i].op(), samples[i].kspace), samples[i].target());
  }
  return out;
}

std::size_t count_nonzero_effective(const DenoiserParams& params, const BinaryMask* mask) {
  std::size_t n = 0;
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double m = mask != nullptr ? (mask->bits[j] ? 1.0 : 0.0) : 1.0;
    if (params.flat[j] * m != 0.0) ++n;
  }
  return n;
}

TrainReport train(std::span<const SampleRecord> train_set, std::span<const SampleRecord> val_set,
                  DenoiserParams params, std::optional<BinaryMask> mask,
                  const UnrollConfig& unroll, const OptimizerConfig& opt,
                  std::span<const PruneEvent> schedule, const EpochCallback& on_epoch) {
  unroll.validate();
  opt.validate();
  params.validate();
  const std::size_t d = params.size();
  if (!schedule.empty()) {
    if (mask && mask->count() != d) {
      throw std::invalid_argument("train: a pruning schedule requires an all-ones starting mask");
    }
    mask = BinaryMask::all_ones(d);
  }
  if (mask && mask->size() != d) throw std::invalid_argument("train: mask length mismatch");
  if (opt.epochs > 0 && train_set.empty()) throw std::invalid_argument("train: empty training set");

  TrainReport report;
  std::vector<double> m1(d, 0.0);
  std::vector<double> m2(d, 0.0);
  std::vector<std::size_t> order(train_set.size());
  long step = 0;
  DenoiserParams last_good = params;

  auto apply_event = [&](const PruneEvent& ev) {
    const auto keep = static_cast<std::size_t>(std::llround(ev.surviving_fraction * static_cast<double>(d)));
    mask = magnitude_prune_to_count(params, *mask, std::min(keep, mask->count()));
  };
  std::size_t next_event = 0;

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    while (next_event < schedule.size() && schedule[next_event].epoch <= epoch) {
      apply_event(schedule[next_event++]);
    }
    const std::vector<double> weights = mask ? mask->weights() : std::vector<double>{};
    const std::span<const std::uint8_t> active = mask ? std::span<const std::uint8_t>(mask->bits)
                                                      : std::span<const std::uint8_t>{};

    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = make_rng(opt.seed + static_cast<std::uint64_t>(epoch), streams::kShuffle);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      std::vector<SampleRecord> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + opt.batch_size); ++i) {
        batch.push_back(train_set[order[i]]);
      }
      const LossGrad lg = loss_and_grad(batch, params, weights, unroll);
      if (!std::isfinite(lg.loss)) {
        throw TrainingAborted("train: non-finite loss at epoch " + std::to_string(epoch), last_good, epoch);
      }
      loss_sum += lg.loss;
      ++batches;
      adam_step(params.flat, lg.grad, m1, m2, ++step, opt, active);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    rec.active_params = mask ? mask->count() : d;
    rec.val_psnr_db = std::numeric_limits<double>::quiet_NaN();
    if (!val_set.empty()) {
      const auto values = evaluate_psnr(val_set, params, mask ? &*mask : nullptr, unroll);
      rec.val_psnr_db = summarize(values).mean;
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.epochs.push_back(rec);
    last_good = params;
    if (on_epoch) on_epoch(rec);
  }
  // Events scheduled past the final epoch still determine the returned mask.
  while (next_event < schedule.size()) apply_event(schedule[next_event++]);

  report.params = std::move(params);
  report.mask = std::move(mask);
  return report;
}

}  // namespace pun

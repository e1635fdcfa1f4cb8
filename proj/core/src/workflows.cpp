#include "pun/workflows.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pun {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PunAtResult pun_at(std::span<const SampleRecord> train_set, std::span<const SampleRecord> val_set,
                   const DenoiserParams& trained_params, double target_sparsity, int rounds,
                   int retrain_epochs, const UnrollConfig& cfg, const OptimizerConfig& opt) {
  if (retrain_epochs < 0) throw std::invalid_argument("pun_at: negative retrain epochs");
  const std::vector<double> milestones = pun_at_milestones(rounds, target_sparsity);
  const std::size_t d = trained_params.size();

  PunAtResult result{BinaryMask::all_ones(d), trained_params, {}};
  OptimizerConfig round_opt = opt;
  round_opt.epochs = retrain_epochs;
  for (std::size_t k = 0; k < milestones.size(); ++k) {
    const auto keep = static_cast<std::size_t>(std::llround(milestones[k] * static_cast<double>(d)));
    result.mask = magnitude_prune_to_count(result.params, result.mask, keep);
    round_opt.seed = opt.seed + 1000 * (k + 1);
    TrainReport rep = train(train_set, val_set, result.params, result.mask, cfg, round_opt);
    result.params = rep.params;
    result.rounds.push_back(std::move(rep));
  }
  return result;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Dense: return "dense";
    case Method::PunIt: return "pun-it";
    case Method::PunWt: return "pun-wt";
    case Method::PunAt: return "pun-at";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "dense") return Method::Dense;
  if (name == "pun-it") return Method::PunIt;
  if (name == "pun-wt") return Method::PunWt;
  if (name == "pun-at") return Method::PunAt;
  throw std::invalid_argument("unknown method '" + name + "'");
}

OptimizerConfig WorkflowConfig::mask_optimizer() const {
  OptimizerConfig m = opt;
  m.learning_rate = mask_learning_rate;
  return m;
}

WorkflowResult run_dense(std::span<const SampleRecord> train_set,
                         std::span<const SampleRecord> val_set, const WorkflowConfig& cfg,
                         const EpochCallback& on_epoch) {
  const auto start = std::chrono::steady_clock::now();
  WorkflowResult r;
  r.method = Method::Dense;
  TrainReport rep = train(train_set, val_set, init_params(cfg.arch, cfg.init_seed), std::nullopt,
                          cfg.unroll, cfg.opt, {}, on_epoch);
  r.params = rep.params;
  r.reports.push_back(std::move(rep));
  r.wall_seconds = seconds_since(start);
  return r;
}

WorkflowResult run_pun_it(std::span<const SampleRecord> train_set,
                          std::span<const SampleRecord> val_set, const WorkflowConfig& cfg,
                          const EpochCallback& on_epoch) {
  const auto start = std::chrono::steady_clock::now();
  const DenoiserParams theta_init = init_params(cfg.arch, cfg.init_seed);
  PruneState state = PruneState::initial(theta_init.size(), cfg.it_sparsity, cfg.temperature, cfg.kl_weight);
  MaskSearchReport search = optimize_probabilities(train_set, theta_init, std::move(state), cfg.unroll,
                                                   cfg.mask_optimizer(), cfg.mask_epochs, cfg.opt.seed);
  BinaryMask mask = binarize_top_s(search.state);

  WorkflowResult r;
  r.method = Method::PunIt;
  TrainReport rep = train(train_set, val_set, theta_init, mask, cfg.unroll, cfg.opt, {}, on_epoch);
  r.params = rep.params;
  r.mask = std::move(mask);
  r.prune_state = std::move(search.state);
  r.mask_objective = std::move(search.epoch_objective);
  r.reports.push_back(std::move(rep));
  r.wall_seconds = seconds_since(start);
  return r;
}

WorkflowResult run_pun_wt(std::span<const SampleRecord> train_set,
                          std::span<const SampleRecord> val_set, const WorkflowConfig& cfg,
                          const EpochCallback& on_epoch) {
  const auto start = std::chrono::steady_clock::now();
  const auto schedule = pun_wt_schedule(cfg.opt.epochs, cfg.wt_sparsity);
  WorkflowResult r;
  r.method = Method::PunWt;
  TrainReport rep = train(train_set, val_set, init_params(cfg.arch, cfg.init_seed), std::nullopt,
                          cfg.unroll, cfg.opt, schedule, on_epoch);
  r.params = rep.params;
  r.mask = rep.mask;
  r.reports.push_back(std::move(rep));
  r.wall_seconds = seconds_since(start);
  return r;
}

WorkflowResult run_pun_at(std::span<const SampleRecord> train_set,
                          std::span<const SampleRecord> val_set, const DenoiserParams& dense,
                          const WorkflowConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PunAtResult at = pun_at(train_set, val_set, dense, cfg.at_sparsity, cfg.at_rounds,
                          cfg.at_retrain_epochs, cfg.unroll, cfg.opt);
  WorkflowResult r;
  r.method = Method::PunAt;
  r.params = std::move(at.params);
  r.mask = std::move(at.mask);
  r.reports = std::move(at.rounds);
  r.wall_seconds = seconds_since(start);
  return r;
}

}  // namespace pun

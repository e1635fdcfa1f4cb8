#include "pun/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pun/rng.hpp"

namespace pun {

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

std::vector<double> BinaryMask::weights() const {
  std::vector<double> w(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) w[i] = bits[i] ? 1.0 : 0.0;
  return w;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

PruneState PruneState::initial(std::size_t d, double sparsity, double temperature,
                               double kl_weight) {
  if (d == 0) throw std::invalid_argument("PruneState: empty parameter vector");
  if (!(sparsity > 0.0 && sparsity < 1.0)) {
    throw std::invalid_argument("PruneState: sparsity level must lie in (0, 1)");
  }
  const auto budget = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(d)));
  if (budget == 0 || budget >= d) {
    throw std::invalid_argument("PruneState: sparsity level leaves " + std::to_string(budget) +
                                " of " + std::to_string(d) + " parameters");
  }
  PruneState s;
  s.logits.assign(d, 0.0);
  s.budget = budget;
  s.target_p0 = static_cast<double>(budget) / static_cast<double>(d);
  s.temperature = temperature;
  s.kl_weight = kl_weight;
  s.validate();
  return s;
}

std::vector<double> PruneState::probabilities() const {
  std::vector<double> p(logits.size());
  std::transform(logits.begin(), logits.end(), p.begin(), sigmoid);
  return p;
}

double PruneState::effective_kl_weight() const {
  return kl_weight / static_cast<double>(logits.size());
}

void PruneState::validate() const {
  if (logits.empty()) throw std::invalid_argument("PruneState: no logits");
  if (budget > logits.size()) throw std::invalid_argument("PruneState: budget exceeds d");
  if (!(target_p0 > 0.0 && target_p0 < 1.0)) throw std::invalid_argument("PruneState: p0 must lie in (0, 1)");
  if (!(temperature > 0.0)) throw std::invalid_argument("PruneState: temperature must be > 0");
  if (!(kl_weight >= 0.0)) throw std::invalid_argument("PruneState: kl_weight must be >= 0");
}

double relaxed_mask_value(double logit_value, double g_l, double g_k, double temperature) {
  return sigmoid((logit_value + g_l - g_k) / temperature);
}

RelaxedMask relax_with_draws(std::span<const double> logits, std::span<const double> g_l,
                             std::span<const double> g_k, double temperature) {
  if (g_l.size() != logits.size() || g_k.size() != logits.size()) {
    throw std::invalid_argument("relax_with_draws: draw count mismatch");
  }
  if (!(temperature > 0.0)) throw std::invalid_argument("relax_with_draws: temperature must be > 0");
  RelaxedMask m;
  m.values.resize(logits.size());
  m.dvalues_dlogits.resize(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    const double v = relaxed_mask_value(logits[j], g_l[j], g_k[j], temperature);
    m.values[j] = v;
    m.dvalues_dlogits[j] = v * (1.0 - v) / temperature;
  }
  return m;
}

RelaxedMask sample_relaxed_mask(const PruneState& state, std::uint64_t seed) {
  Rng rng = make_rng(seed, streams::kGumbel);
  std::vector<double> g_l(state.size());
  std::vector<double> g_k(state.size());
  for (std::size_t j = 0; j < state.size(); ++j) {
    g_l[j] = gumbel(rng);
    g_k[j] = gumbel(rng);
  }
  return relax_with_draws(state.logits, g_l, g_k, state.temperature);
}

double kl_bernoulli(std::span<const double> p, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("kl_bernoulli: p0 must lie in (0, 1)");
  double kl = 0.0;
  for (double pj : p) {
    if (!(pj > 0.0 && pj < 1.0)) throw std::invalid_argument("kl_bernoulli: p must lie in (0, 1)");
    if (pj == p0) continue;
    kl += pj * std::log(pj / p0) + (1.0 - pj) * std::log((1.0 - pj) / (1.0 - p0));
  }
  return kl;
}

namespace {

// Objective value and logit gradient for one batch at one relaxed sample.
double relaxed_batch_objective(std::span<const SampleRecord> batch, const DenoiserParams& theta_init,
                               const PruneState& state, const RelaxedMask& relaxed,
                               const UnrollConfig& cfg, std::vector<double>* grad_logits) {
  const double kl_w = state.effective_kl_weight();
  const std::vector<double> p = state.probabilities();
  const double logit_p0 = logit(state.target_p0);
  if (grad_logits == nullptr) {
    return batch_loss(batch, theta_init, relaxed.values, cfg) + kl_w * kl_bernoulli(p, state.target_p0);
  }
  const LossGrad lg = loss_and_effective_grad(batch, theta_init, relaxed.values, cfg);
  grad_logits->resize(state.size());
  for (std::size_t j = 0; j < state.size(); ++j) {
    // d loss / d m_j = d loss / d (theta_j m_j) * theta_j
    const double data_term = lg.grad[j] * theta_init.flat[j] * relaxed.dvalues_dlogits[j];
    // d KL / d logit_j = (logit_j - logit(p0)) * p_j (1 - p_j)
    const double kl_term = (state.logits[j] - logit_p0) * p[j] * (1.0 - p[j]);
    (*grad_logits)[j] = data_term + kl_w * kl_term;
  }
  return lg.loss + kl_w * kl_bernoulli(p, state.target_p0);
}

}  // namespace

MaskSearchReport optimize_probabilities(std::span<const SampleRecord> dataset,
                                        const DenoiserParams& theta_init, PruneState state,
                                        const UnrollConfig& cfg, const OptimizerConfig& opt,
                                        int epochs, std::uint64_t seed) {
  state.validate();
  opt.validate();
  cfg.validate();
  if (state.size() != theta_init.size()) {
    throw std::invalid_argument("optimize_probabilities: state and parameters differ in length");
  }
  if (dataset.empty() && epochs > 0) throw std::invalid_argument("optimize_probabilities: empty dataset");

  MaskSearchReport report;
  std::vector<double> m1(state.size(), 0.0);
  std::vector<double> m2(state.size(), 0.0);
  std::vector<double> grad;
  std::vector<std::size_t> order(dataset.size());
  long step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = make_rng(seed + static_cast<std::uint64_t>(epoch), streams::kShuffle);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double objective_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      std::vector<SampleRecord> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + opt.batch_size); ++i) {
        batch.push_back(dataset[order[i]]);
      }
      ++step;
      const RelaxedMask relaxed =
          sample_relaxed_mask(state, derive_seed(seed, static_cast<std::uint64_t>(step)));
      const double objective = relaxed_batch_objective(batch, theta_init, state, relaxed, cfg, &grad);
      if (!std::isfinite(objective)) {
        throw std::runtime_error("optimize_probabilities: non-finite objective at epoch " +
                                 std::to_string(epoch) + ", step " + std::to_string(step));
      }
      objective_sum += objective;
      ++batches;
      adam_step(state.logits, grad, m1, m2, step, opt);
    }
    report.epoch_objective.push_back(objective_sum / static_cast<double>(batches));
  }
  report.state = std::move(state);
  return report;
}

double relaxed_objective(std::span<const SampleRecord> dataset, const DenoiserParams& theta_init,
                         const PruneState& state, const UnrollConfig& cfg, std::uint64_t seed,
                         int draws) {
  if (draws < 1) throw std::invalid_argument("relaxed_objective: need at least one draw");
  double total = 0.0;
  for (int k = 0; k < draws; ++k) {
    const RelaxedMask relaxed = sample_relaxed_mask(state, derive_seed(seed, static_cast<std::uint64_t>(k)));
    total += relaxed_batch_objective(dataset, theta_init, state, relaxed, cfg, nullptr);
  }
  return total / static_cast<double>(draws);
}

BinaryMask top_s_mask(std::span<const double> scores, std::size_t s) {
  if (s > scores.size()) throw std::invalid_argument("top_s_mask: s exceeds vector length");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  BinaryMask m{std::vector<std::uint8_t>(scores.size(), 0)};
  for (std::size_t i = 0; i < s; ++i) m.bits[idx[i]] = 1;
  return m;
}

BinaryMask binarize_top_s(const PruneState& state) {
  return top_s_mask(state.probabilities(), state.budget);
}

BinaryMask magnitude_prune_to_count(const DenoiserParams& params, const BinaryMask& current,
                                    std::size_t keep) {
  if (current.size() != params.size()) throw std::invalid_argument("magnitude_prune: mask length mismatch");
  std::vector<std::size_t> alive;
  for (std::size_t j = 0; j < current.size(); ++j)
    if (current.bits[j]) alive.push_back(j);
  if (keep > alive.size()) throw std::invalid_argument("magnitude_prune: cannot keep more weights than are alive");
  std::stable_sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(params.flat[a]) > std::abs(params.flat[b]);
  });
  BinaryMask out{std::vector<std::uint8_t>(current.size(), 0)};
  for (std::size_t i = 0; i < keep; ++i) out.bits[alive[i]] = 1;
  return out;
}

BinaryMask magnitude_prune(const DenoiserParams& params, const BinaryMask& current,
                           double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw std::invalid_argument("magnitude_prune: keep_fraction must lie in (0, 1]");
  }
  const auto keep =
      static_cast<std::size_t>(std::llround(keep_fraction * static_cast<double>(current.count())));
  return magnitude_prune_to_count(params, current, keep);
}

std::vector<PruneEvent> pun_wt_schedule(int total_epochs, double target_sparsity) {
  if (!(target_sparsity > 0.0 && target_sparsity < 1.0)) {
    throw std::invalid_argument("pun_wt_schedule: target sparsity level must lie in (0, 1)");
  }
  if (total_epochs < 0) throw std::invalid_argument("pun_wt_schedule: negative epoch count");
  const int halvings = static_cast<int>(std::floor(std::log(target_sparsity) / std::log(0.5) + 1e-9));
  const int last_epoch = std::max(0, total_epochs - 1);
  const double horizon = 0.8 * static_cast<double>(total_epochs);
  const int interval = static_cast<int>(std::lround(horizon / static_cast<double>(halvings + 1)));

  std::vector<PruneEvent> events;
  double surviving = 1.0;
  for (int k = 1; k <= halvings; ++k) {
    surviving *= 0.5;
    events.push_back({std::min(k * interval, last_epoch), 0.5, surviving});
  }
  if (std::abs(surviving - target_sparsity) > 1e-12) {
    int epoch = static_cast<int>(std::lround(horizon));
    if (!events.empty()) epoch = std::max(epoch, events.back().epoch);
    events.push_back({std::min(epoch, last_epoch), target_sparsity / surviving, target_sparsity});
  }
  return events;
}

std::vector<double> pun_at_milestones(int rounds, double target_sparsity) {
  if (rounds < 1) throw std::invalid_argument("pun_at: need at least one round");
  if (!(target_sparsity > 0.0 && target_sparsity < 1.0)) {
    throw std::invalid_argument("pun_at: target sparsity level must lie in (0, 1)");
  }
  std::vector<double> milestones;
  for (int k = 1; k <= rounds; ++k) {
    milestones.push_back(k == rounds ? target_sparsity
                                     : std::pow(target_sparsity, static_cast<double>(k) / rounds));
  }
  return milestones;
}

}  // namespace pun

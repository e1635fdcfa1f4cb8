#include "pun/unrolled_net.hpp"

#include <stdexcept>

#include "pun/parallel.hpp"

namespace pun {

void UnrollConfig::validate() const {
  if (num_unrolls < 0) throw std::invalid_argument("UnrollConfig: num_unrolls must be >= 0");
  dc.validate();
}

ComplexImage reconstruct(const KSpaceData& y, const ForwardOperator& op,
                         const DenoiserParams& params, std::span<const double> mask,
                         const UnrollConfig& cfg, UnrollTrace* trace) {
  cfg.validate();
  ComplexImage x = apply_adjoint(op, y);
  if (trace != nullptr) {
    *trace = UnrollTrace{};
    trace->x.push_back(x);
  }
  for (int n = 0; n < cfg.num_unrolls; ++n) {
    DenoiserTape* tape = nullptr;
    if (trace != nullptr) tape = &trace->tapes.emplace_back();
    const ComplexImage z = denoiser_forward(x, params, mask, tape);
    DcResult dc = solve_dc(op, y, z, cfg.dc);
    x = std::move(dc.x);
    if (trace != nullptr) {
      trace->x.push_back(x);
      trace->dc_iterations += dc.iterations;
      trace->dc_converged = trace->dc_converged && dc.converged;
    }
  }
  return x;
}

ComplexImage reconstruct(const SampleRecord& sample, const DenoiserParams& params,
                         std::span<const double> mask, const UnrollConfig& cfg) {
  return reconstruct(sample.kspace, sample.op(), params, mask, cfg);
}

namespace {

struct SampleLossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

SampleLossGrad sample_loss_and_grad(const SampleRecord& sample, const DenoiserParams& params,
                                    std::span<const double> mask, const UnrollConfig& cfg,
                                    bool with_grad) {
  const ForwardOperator op = sample.op();
  UnrollTrace trace;
  const ComplexImage out = reconstruct(sample.kspace, op, params, mask, cfg, &trace);
  const ComplexImage target = sample.target();
  if (!out.same_shape(target)) throw std::invalid_argument("loss: ground truth shape mismatch");

  const double inv_pixels = 1.0 / static_cast<double>(out.size());
  ComplexImage g(out.height(), out.width());
  double loss = 0.0;
  {
    const auto os = out.data();
    const auto ts = target.data();
    auto gs = g.data();
    for (std::size_t i = 0; i < os.size(); ++i) {
      const cplx diff = os[i] - ts[i];
      loss += std::norm(diff);
      // d/dRe + i d/dIm of |diff|^2 is 2 * diff.
      gs[i] = 2.0 * inv_pixels * diff;
    }
  }
  SampleLossGrad result{loss * inv_pixels, {}};
  if (!with_grad) return result;

  result.grad.assign(params.size(), 0.0);
  for (int n = cfg.num_unrolls; n-- > 0;) {
    // x^(n+1) = solve_dc(z^(n)); the Jacobian w.r.t. z is Hermitian.
    const ComplexImage gz = dc_gradient(op, g, cfg.dc).x;
    DenoiserGrads dg = denoiser_backward(trace.x[static_cast<std::size_t>(n)], params, mask, gz,
                                         &trace.tapes[static_cast<std::size_t>(n)]);
    for (std::size_t j = 0; j < result.grad.size(); ++j) result.grad[j] += dg.grad_params[j];
    g = std::move(dg.grad_x);
  }
  return result;
}

LossGrad reduce(std::span<const SampleRecord> batch, const DenoiserParams& params,
                std::span<const double> mask, const UnrollConfig& cfg, bool with_grad) {
  if (batch.empty()) throw std::invalid_argument("loss: batch must not be empty");
  std::vector<SampleLossGrad> parts(batch.size());
  parallel_for(batch.size(), [&](std::size_t i) {
    parts[i] = sample_loss_and_grad(batch[i], params, mask, cfg, with_grad);
  });
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  LossGrad out;
  if (with_grad) out.grad.assign(params.size(), 0.0);
  for (const auto& p : parts) {
    out.loss += p.loss;
    for (std::size_t j = 0; j < p.grad.size(); ++j) out.grad[j] += p.grad[j];
  }
  out.loss *= inv_batch;
  for (auto& v : out.grad) v *= inv_batch;
  return out;
}

}  // namespace

LossGrad loss_and_effective_grad(std::span<const SampleRecord> batch, const DenoiserParams& params,
                                 std::span<const double> mask, const UnrollConfig& cfg) {
  return reduce(batch, params, mask, cfg, true);
}

LossGrad loss_and_grad(std::span<const SampleRecord> batch, const DenoiserParams& params,
                       std::span<const double> mask, const UnrollConfig& cfg) {
  LossGrad lg = reduce(batch, params, mask, cfg, true);
  if (!mask.empty()) {
    for (std::size_t j = 0; j < lg.grad.size(); ++j) lg.grad[j] *= mask[j];
  }
  return lg;
}

double batch_loss(std::span<const SampleRecord> batch, const DenoiserParams& params,
                  std::span<const double> mask, const UnrollConfig& cfg) {
  return reduce(batch, params, mask, cfg, false).loss;
}

}  // namespace pun

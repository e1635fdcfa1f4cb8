#include "pun/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pun/rng.hpp"

namespace pun {

void DenoiserArch::validate() const {
  if (num_layers < 1) throw std::invalid_argument("DenoiserArch: need at least one layer");
  if (num_layers > 1 && hidden_channels < 1) {
    throw std::invalid_argument("DenoiserArch: hidden_channels must be positive");
  }
  if (kernel_size % 2 == 0) throw std::invalid_argument("DenoiserArch: kernel_size must be odd");
}

std::string to_string(BlockKind kind) {
  return kind == BlockKind::ConvWeight ? "conv_weight" : "conv_bias";
}

BlockKind block_kind_from_string(const std::string& name) {
  if (name == "conv_weight") return BlockKind::ConvWeight;
  if (name == "conv_bias") return BlockKind::ConvBias;
  throw std::invalid_argument("unknown parameter block kind '" + name + "'");
}

std::size_t ParamBlock::count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<ParamBlock> make_layout(const DenoiserArch& arch) {
  arch.validate();
  std::vector<ParamBlock> layout;
  std::size_t offset = 0;
  const std::size_t k = arch.kernel_size;
  for (std::size_t l = 0; l < arch.num_layers; ++l) {
    ParamBlock w{BlockKind::ConvWeight, l, {arch.out_channels(l), arch.in_channels(l), k, k}, offset};
    offset += w.count();
    ParamBlock b{BlockKind::ConvBias, l, {arch.out_channels(l)}, offset};
    offset += b.count();
    layout.push_back(std::move(w));
    layout.push_back(std::move(b));
  }
  return layout;
}

std::size_t parameter_count(const DenoiserArch& arch) {
  const auto layout = make_layout(arch);
  return layout.back().offset + layout.back().count();
}

void DenoiserParams::validate() const {
  arch.validate();
  if (layout != make_layout(arch)) throw std::invalid_argument("DenoiserParams: layout does not match arch");
  if (flat.size() != parameter_count(arch)) {
    throw std::invalid_argument("DenoiserParams: expected " + std::to_string(parameter_count(arch)) +
                                " parameters, got " + std::to_string(flat.size()));
  }
  for (double v : flat)
    if (!std::isfinite(v)) throw std::invalid_argument("DenoiserParams: non-finite parameter");
}

DenoiserParams zero_params(const DenoiserArch& arch) {
  return DenoiserParams{arch, std::vector<double>(parameter_count(arch), 0.0), make_layout(arch)};
}

DenoiserParams init_params(const DenoiserArch& arch, std::uint64_t seed) {
  DenoiserParams p = zero_params(arch);
  Rng rng = make_rng(seed, streams::kInit);
  for (const auto& block : p.layout) {
    if (block.kind != BlockKind::ConvWeight) continue;
    const double fan_in = static_cast<double>(block.shape[1] * block.shape[2] * block.shape[3]);
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
    for (std::size_t i = 0; i < block.count(); ++i) p.flat[block.offset + i] = normal(rng);
  }
  return p;
}

namespace {

struct ConvShape {
  std::size_t in, out, k, height, width;
  std::size_t plane() const { return height * width; }
};

// Valid output range for a tap at offset d: rows r with 0 <= r + d < n.
inline std::size_t lo(long d) { return d < 0 ? static_cast<std::size_t>(-d) : 0; }
inline std::size_t hi(long d, std::size_t n) {
  return d > 0 ? n - static_cast<std::size_t>(d) : n;
}

void conv_forward(const ConvShape& s, const double* input, const double* weight,
                  const double* bias, double* output) {
  const long pad = static_cast<long>(s.k / 2);
  for (std::size_t o = 0; o < s.out; ++o) {
    double* out = output + o * s.plane();
    std::fill(out, out + s.plane(), bias[o]);
    for (std::size_t i = 0; i < s.in; ++i) {
      const double* in = input + i * s.plane();
      for (std::size_t ky = 0; ky < s.k; ++ky) {
        const long dy = static_cast<long>(ky) - pad;
        for (std::size_t kx = 0; kx < s.k; ++kx) {
          const long dx = static_cast<long>(kx) - pad;
          const double w = weight[((o * s.in + i) * s.k + ky) * s.k + kx];
          if (w == 0.0) continue;
          const std::size_t c0 = lo(dx), c1 = hi(dx, s.width);
          for (std::size_t r = lo(dy); r < hi(dy, s.height); ++r) {
            double* orow = out + r * s.width;
            const double* irow = in + static_cast<std::size_t>(static_cast<long>(r) + dy) * s.width + dx;
            for (std::size_t c = c0; c < c1; ++c) orow[c] += w * irow[c];
          }
        }
      }
    }
  }
}

// grad_input may be null when the input gradient is not needed.
void conv_backward(const ConvShape& s, const double* input, const double* weight,
                   const double* grad_output, double* grad_input, double* grad_weight,
                   double* grad_bias) {
  const long pad = static_cast<long>(s.k / 2);
  for (std::size_t o = 0; o < s.out; ++o) {
    const double* gout = grad_output + o * s.plane();
    grad_bias[o] += std::accumulate(gout, gout + s.plane(), 0.0);
    for (std::size_t i = 0; i < s.in; ++i) {
      const double* in = input + i * s.plane();
      double* gin = grad_input != nullptr ? grad_input + i * s.plane() : nullptr;
      for (std::size_t ky = 0; ky < s.k; ++ky) {
        const long dy = static_cast<long>(ky) - pad;
        for (std::size_t kx = 0; kx < s.k; ++kx) {
          const long dx = static_cast<long>(kx) - pad;
          const std::size_t widx = ((o * s.in + i) * s.k + ky) * s.k + kx;
          const double w = weight[widx];
          const std::size_t c0 = lo(dx), c1 = hi(dx, s.width);
          double acc = 0.0;
          for (std::size_t r = lo(dy); r < hi(dy, s.height); ++r) {
            const double* grow = gout + r * s.width;
            const std::size_t src = static_cast<std::size_t>(static_cast<long>(r) + dy) * s.width;
            const double* irow = in + src + dx;
            for (std::size_t c = c0; c < c1; ++c) acc += grow[c] * irow[c];
            if (gin != nullptr && w != 0.0) {
              double* girow = gin + src + dx;
              for (std::size_t c = c0; c < c1; ++c) girow[c] += w * grow[c];
            }
          }
          grad_weight[widx] += acc;
        }
      }
    }
  }
}

std::vector<double> effective_params(const DenoiserParams& params, std::span<const double> mask) {
  if (mask.empty()) return params.flat;
  if (mask.size() != params.size()) {
    throw std::invalid_argument("denoiser: mask length " + std::to_string(mask.size()) +
                                " does not match parameter count " + std::to_string(params.size()));
  }
  std::vector<double> eff(params.size());
  for (std::size_t i = 0; i < eff.size(); ++i) eff[i] = params.flat[i] * mask[i];
  return eff;
}

ConvShape layer_shape(const DenoiserArch& arch, std::size_t l, const ComplexImage& x) {
  return {arch.in_channels(l), arch.out_channels(l), arch.kernel_size, x.height(), x.width()};
}

std::vector<double> to_channels(const ComplexImage& x) {
  const std::size_t n = x.size();
  std::vector<double> ch(2 * n);
  const auto xs = x.data();
  for (std::size_t i = 0; i < n; ++i) {
    ch[i] = xs[i].real();
    ch[n + i] = xs[i].imag();
  }
  return ch;
}

void check_params(const DenoiserParams& params) {
  if (params.flat.size() != parameter_count(params.arch)) {
    throw std::invalid_argument("denoiser: parameter vector does not match architecture");
  }
}

}  // namespace

ComplexImage denoiser_forward(const ComplexImage& x, const DenoiserParams& params,
                              std::span<const double> mask, DenoiserTape* tape) {
  check_params(params);
  const auto& arch = params.arch;
  const std::vector<double> eff = effective_params(params, mask);
  const std::size_t n = x.size();

  std::vector<double> act = to_channels(x);
  if (tape != nullptr) tape->layer_inputs.assign(arch.num_layers, {});
  for (std::size_t l = 0; l < arch.num_layers; ++l) {
    const ConvShape s = layer_shape(arch, l, x);
    const auto& wblock = params.layout[2 * l];
    const auto& bblock = params.layout[2 * l + 1];
    std::vector<double> next(s.out * s.plane());
    conv_forward(s, act.data(), eff.data() + wblock.offset, eff.data() + bblock.offset, next.data());
    if (l + 1 < arch.num_layers) {
      for (auto& v : next) v = v > 0.0 ? v : 0.0;
    }
    if (tape != nullptr) tape->layer_inputs[l] = std::move(act);
    act = std::move(next);
  }

  ComplexImage out(x.height(), x.width());
  auto os = out.data();
  const auto xs = x.data();
  for (std::size_t i = 0; i < n; ++i) {
    os[i] = cplx{act[i], act[n + i]};
    if (arch.residual) os[i] += xs[i];
  }
  return out;
}

DenoiserGrads denoiser_backward(const ComplexImage& x, const DenoiserParams& params,
                                std::span<const double> mask, const ComplexImage& upstream,
                                const DenoiserTape* tape) {
  check_params(params);
  if (!upstream.same_shape(x)) throw std::invalid_argument("denoiser_backward: upstream shape mismatch");
  DenoiserTape local;
  if (tape == nullptr) {
    denoiser_forward(x, params, mask, &local);
    tape = &local;
  }
  const auto& arch = params.arch;
  const std::vector<double> eff = effective_params(params, mask);

  DenoiserGrads grads{ComplexImage(x.height(), x.width()), std::vector<double>(params.size(), 0.0)};
  std::vector<double> g = to_channels(upstream);
  for (std::size_t l = arch.num_layers; l-- > 0;) {
    const ConvShape s = layer_shape(arch, l, x);
    const auto& wblock = params.layout[2 * l];
    const auto& bblock = params.layout[2 * l + 1];
    const auto& input = tape->layer_inputs[l];
    std::vector<double> gin(s.in * s.plane(), 0.0);
    conv_backward(s, input.data(), eff.data() + wblock.offset, g.data(), gin.data(),
                  grads.grad_params.data() + wblock.offset, grads.grad_params.data() + bblock.offset);
    if (l > 0) {
      // input = relu(pre-activation); derivative is 1 where input > 0, else 0.
      for (std::size_t i = 0; i < gin.size(); ++i)
        if (!(input[i] > 0.0)) gin[i] = 0.0;
    }
    g = std::move(gin);
  }

  const std::size_t n = x.size();
  auto gx = grads.grad_x.data();
  const auto us = upstream.data();
  for (std::size_t i = 0; i < n; ++i) {
    gx[i] = cplx{g[i], g[n + i]};
    if (arch.residual) gx[i] += us[i];
  }
  return grads;
}

}  // namespace pun

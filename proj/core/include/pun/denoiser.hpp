#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pun/image.hpp"

namespace pun {

/// Plain residual CNN: 2 channels (re, im) -> hidden -> ... -> 2 channels,
/// same-size zero-padded convolutions with ReLU between layers.
struct DenoiserArch {
  std::size_t num_layers = 3;
  std::size_t hidden_channels = 16;
  std::size_t kernel_size = 3;
  bool residual = true;

  void validate() const;
  std::size_t in_channels(std::size_t layer) const { return layer == 0 ? 2 : hidden_channels; }
  std::size_t out_channels(std::size_t layer) const {
    return layer + 1 == num_layers ? 2 : hidden_channels;
  }

  friend bool operator==(const DenoiserArch&, const DenoiserArch&) = default;
};

enum class BlockKind { ConvWeight, ConvBias };

std::string to_string(BlockKind kind);
BlockKind block_kind_from_string(const std::string& name);

/// A contiguous slice of the flat parameter vector.
struct ParamBlock {
  BlockKind kind;
  std::size_t layer;
  std::vector<std::size_t> shape;  // weights: out, in, k, k; biases: out
  std::size_t offset;

  std::size_t count() const;
  friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

/// theta: one flat vector shared by every unrolled block.
struct DenoiserParams {
  DenoiserArch arch;
  std::vector<double> flat;
  std::vector<ParamBlock> layout;

  std::size_t size() const { return flat.size(); }
  /// Checks layout/arch/flat consistency and finiteness.
  void validate() const;

  friend bool operator==(const DenoiserParams&, const DenoiserParams&) = default;
};

std::vector<ParamBlock> make_layout(const DenoiserArch& arch);
std::size_t parameter_count(const DenoiserArch& arch);

DenoiserParams zero_params(const DenoiserArch& arch);
/// Kaiming-normal weights (std sqrt(2 / fan_in)), zero biases.
DenoiserParams init_params(const DenoiserArch& arch, std::uint64_t seed);

/// Layer inputs recorded during a forward pass, reused by the backward pass.
struct DenoiserTape {
  std::vector<std::vector<double>> layer_inputs;
};

/// D_theta(x). With a non-empty `mask` the network runs on theta * mask
/// (elementwise); masks may be binary or relaxed values in (0, 1).
ComplexImage denoiser_forward(const ComplexImage& x, const DenoiserParams& params,
                              std::span<const double> mask = {}, DenoiserTape* tape = nullptr);

struct DenoiserGrads {
  ComplexImage grad_x;
  /// Gradient with respect to the effective parameters theta * mask. Callers
  /// multiply by the mask (for theta) or by theta (for the mask).
  std::vector<double> grad_params;
};

/// Vector-Jacobian product of denoiser_forward for `upstream`. Reuses `tape`
/// when given, otherwise recomputes the forward pass.
DenoiserGrads denoiser_backward(const ComplexImage& x, const DenoiserParams& params,
                                std::span<const double> mask, const ComplexImage& upstream,
                                const DenoiserTape* tape = nullptr);

}  // namespace pun

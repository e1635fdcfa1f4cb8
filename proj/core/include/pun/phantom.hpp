#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pun/forward_model.hpp"
#include "pun/image.hpp"

namespace pun {

/// Ellipse and phase statistics of a synthetic image family. `base` is the
/// training distribution; `shifted` is an out-of-distribution analogue with
/// more, smaller and brighter structures and a rougher phase field.
struct PhantomFamily {
  std::string name;
  int min_ellipses;
  int max_ellipses;
  double min_axis;
  double max_axis;
  double min_intensity;
  double max_intensity;
  double max_phase_frequency;

  static PhantomFamily base();
  static PhantomFamily shifted();
  static PhantomFamily by_name(const std::string& name);
};

/// Sum of random ellipses times exp(i * phase), magnitude clipped to [0, 1],
/// |phase| <= pi/4. Deterministic in (size, seed, family).
ComplexImage generate_phantom(std::size_t size, std::uint64_t seed,
                              const PhantomFamily& family = PhantomFamily::base());

/// Smooth complex Gaussian coil profiles placed on a ring, SOS-normalised.
SensitivityMaps generate_maps(std::size_t size, std::size_t num_coils, std::uint64_t seed);

struct DatasetConfig {
  std::size_t num_samples = 64;
  std::size_t image_size = 32;
  std::size_t num_coils = 4;
  double acceleration = 4.0;
  std::size_t acs_width = 4;
  double noise_sigma = 0.0;
  std::uint64_t base_seed = 0;
  std::string family = "base";

  void validate() const;
};

struct SampleRecord {
  ComplexImage ground_truth;
  KSpaceData kspace;
  SensitivityMaps maps;
  SamplingMask mask;
  double scale = 1.0;
  std::uint64_t seed = 0;

  ForwardOperator op() const { return ForwardOperator(mask, maps); }
  /// Ground truth on the same scale as the normalised k-space.
  ComplexImage target() const;
};

/// Simulates one acquisition of `truth`: forward -> mask -> noise -> normalise.
SampleRecord simulate_sample(ComplexImage truth, SensitivityMaps maps, SamplingMask mask,
                             double noise_sigma, std::uint64_t seed);

/// Sample i uses seed base_seed + i.
std::vector<SampleRecord> build_dataset(const DatasetConfig& cfg);

/// Acquires the ground truth and coils of `sample` again under a new
/// acceleration and noise level. Mask and noise come from a seed derived from
/// (sample.seed, eval_seed), so they never coincide with the training draws.
SampleRecord reacquire(const SampleRecord& sample, double acceleration, std::size_t acs_width,
                       double noise_sigma, std::uint64_t eval_seed = 0);

}  // namespace pun

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pun/image.hpp"

namespace pun {

/// Coil sensitivities S, normalised so that sum_c |S_c|^2 = 1 at every pixel.
class SensitivityMaps : public CoilArray {
 public:
  SensitivityMaps() = default;
  /// Takes raw (unnormalised) coil profiles and applies the per-pixel
  /// root-sum-of-squares normalisation. Throws if any pixel has zero energy.
  static SensitivityMaps normalized(CoilArray raw);
  /// Wraps already-normalised profiles (e.g. loaded from disk) without
  /// touching them; throws if any pixel's SOS deviates from 1 by more than tol.
  static SensitivityMaps from_normalized(CoilArray maps, double tol = 1e-10);
  /// Uniform single-coil map S = 1.
  static SensitivityMaps unit(std::size_t height, std::size_t width);

  friend bool operator==(const SensitivityMaps&, const SensitivityMaps&) = default;

 private:
  explicit SensitivityMaps(CoilArray a) : CoilArray(std::move(a)) {}
};

/// Cartesian undersampling pattern: one flag per phase-encode column.
struct SamplingMask {
  std::vector<std::uint8_t> lines;
  double acceleration = 1.0;
  std::size_t acs_width = 0;

  std::size_t width() const { return lines.size(); }
  std::size_t num_sampled() const;
  bool sampled(std::size_t col) const { return lines[col] != 0; }

  static SamplingMask full(std::size_t width);
  static SamplingMask empty(std::size_t width);

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;
};

/// Multi-coil measurement operator A = M F S.
class ForwardOperator {
 public:
  ForwardOperator(SamplingMask mask, SensitivityMaps maps);

  const SamplingMask& mask() const { return mask_; }
  const SensitivityMaps& maps() const { return maps_; }
  std::size_t height() const { return maps_.height(); }
  std::size_t width() const { return maps_.width(); }
  std::size_t num_coils() const { return maps_.num_coils(); }

 private:
  SamplingMask mask_;
  SensitivityMaps maps_;
};

KSpaceData apply_forward(const ForwardOperator& op, const ComplexImage& x);
ComplexImage apply_adjoint(const ForwardOperator& op, const KSpaceData& y);
/// A^H A x without materialising intermediate k-space beyond one coil.
ComplexImage apply_normal(const ForwardOperator& op, const ComplexImage& x);

/// Number of phase-encode lines kept at the given acceleration.
std::size_t line_budget(std::size_t width, double acceleration);

/// Variable-density 1-D Poisson-style Cartesian mask.
///
/// The `acs_width` centre columns are always sampled. The remaining budget is
/// filled by seeded dart throwing over columns with a minimum gap
/// g(k) = max(1, round(gamma * (1 + |k - c| / c))) that grows away from the
/// centre c. gamma is bisected so that the budget round(width / acceleration)
/// is met exactly; if a throw stalls, the remainder is filled uniformly at
/// random without replacement.
SamplingMask generate_mask(std::size_t width, double acceleration, std::size_t acs_width,
                           std::uint64_t seed);

/// Divides y by the largest absolute real or imaginary component. Returns the
/// scaled data and that scale. Throws on all-zero input.
std::pair<KSpaceData, double> normalize_kspace(const KSpaceData& y);

/// Adds i.i.d. complex Gaussian noise (std `sigma` on each of re/im) to the
/// sampled columns only.
KSpaceData add_noise(const KSpaceData& y, const SamplingMask& mask, double sigma,
                     std::uint64_t seed);

}  // namespace pun

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pun/image.hpp"

namespace pun {

/// PSNR in dB between magnitude images, peak = max |ref|.
/// Returns +infinity when the magnitudes agree exactly.
double psnr(const ComplexImage& x, const ComplexImage& ref);

/// Label written next to every PSNR so that numbers are self-describing.
inline constexpr const char* kPsnrConvention = "magnitude; peak=max|ref| per image; 10*log10(peak^2/MSE)";

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Quantile with linear interpolation between order statistics,
/// position q * (n - 1). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

/// Box-plot statistics. Throws on an empty input.
Summary summarize(std::span<const double> values);

}  // namespace pun

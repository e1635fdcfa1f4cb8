#include "pun/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pun {

double psnr(const ComplexImage& x, const ComplexImage& ref) {
  if (!x.same_shape(ref)) throw std::invalid_argument("psnr: image sizes differ");
  if (ref.size() == 0) throw std::invalid_argument("psnr: empty image");
  double peak = 0.0;
  for (const auto& v : ref.data()) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: reference image is all zeros");

  const auto xs = x.data();
  const auto rs = ref.data();
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = std::abs(xs[i]) - std::abs(rs[i]);
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(xs.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Summary s;
  s.count = sorted.size();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

}  // namespace pun

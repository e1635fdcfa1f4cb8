#include "pun/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pun/fft.hpp"
#include "pun/rng.hpp"

namespace pun {

namespace {

std::string dims(std::size_t h, std::size_t w) { return std::to_string(h) + "x" + std::to_string(w); }

void check_image(const ForwardOperator& op, const ComplexImage& x) {
  if (x.height() != op.height() || x.width() != op.width()) {
    throw std::invalid_argument("image is " + dims(x.height(), x.width()) + " but operator expects " +
                                dims(op.height(), op.width()));
  }
}

void check_kspace(const ForwardOperator& op, const KSpaceData& y) {
  if (y.num_coils() != op.num_coils() || y.height() != op.height() || y.width() != op.width()) {
    throw std::invalid_argument("k-space is " + std::to_string(y.num_coils()) + "x" +
                                dims(y.height(), y.width()) + " but operator expects " +
                                std::to_string(op.num_coils()) + "x" +
                                dims(op.height(), op.width()));
  }
}

void apply_mask(std::span<cplx> plane, const SamplingMask& mask, std::size_t height) {
  const std::size_t width = mask.width();
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (!mask.sampled(c)) plane[r * width + c] = cplx{};
    }
  }
}

}  // namespace

SensitivityMaps SensitivityMaps::normalized(CoilArray raw) {
  const std::size_t n = raw.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    double energy = 0.0;
    for (std::size_t c = 0; c < raw.num_coils(); ++c) energy += std::norm(raw.coil(c)[i]);
    if (!(energy > 0.0) || !std::isfinite(energy)) {
      throw std::invalid_argument("SensitivityMaps: pixel " + std::to_string(i) +
                                  " has no coil energy");
    }
    const double inv = 1.0 / std::sqrt(energy);
    for (std::size_t c = 0; c < raw.num_coils(); ++c) raw.coil(c)[i] *= inv;
  }
  return SensitivityMaps(std::move(raw));
}

SensitivityMaps SensitivityMaps::from_normalized(CoilArray maps, double tol) {
  for (std::size_t i = 0; i < maps.plane_size(); ++i) {
    double energy = 0.0;
    for (std::size_t c = 0; c < maps.num_coils(); ++c) energy += std::norm(maps.coil(c)[i]);
    if (!(std::abs(energy - 1.0) <= tol)) {
      throw std::invalid_argument("SensitivityMaps: pixel " + std::to_string(i) +
                                  " is not SOS-normalised (sum |S|^2 = " + std::to_string(energy) + ")");
    }
  }
  return SensitivityMaps(std::move(maps));
}

SensitivityMaps SensitivityMaps::unit(std::size_t height, std::size_t width) {
  return SensitivityMaps(CoilArray(1, height, width, std::vector<cplx>(height * width, cplx{1.0, 0.0})));
}

std::size_t SamplingMask::num_sampled() const {
  return static_cast<std::size_t>(std::count(lines.begin(), lines.end(), std::uint8_t{1}));
}

SamplingMask SamplingMask::full(std::size_t width) {
  return SamplingMask{std::vector<std::uint8_t>(width, 1), 1.0, width};
}

SamplingMask SamplingMask::empty(std::size_t width) {
  return SamplingMask{std::vector<std::uint8_t>(width, 0), 0.0, 0};
}

ForwardOperator::ForwardOperator(SamplingMask mask, SensitivityMaps maps)
    : mask_(std::move(mask)), maps_(std::move(maps)) {
  if (mask_.width() != maps_.width()) {
    throw std::invalid_argument("ForwardOperator: mask has " + std::to_string(mask_.width()) +
                                " lines but maps are " + std::to_string(maps_.width()) + " wide");
  }
}

KSpaceData apply_forward(const ForwardOperator& op, const ComplexImage& x) {
  check_image(op, x);
  const std::size_t h = op.height();
  const std::size_t w = op.width();
  KSpaceData y(op.num_coils(), h, w);
  std::vector<cplx> weighted(h * w);
  for (std::size_t c = 0; c < op.num_coils(); ++c) {
    const auto s = op.maps().coil(c);
    const auto xs = x.data();
    for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = s[i] * xs[i];
    centered_fft2(weighted, y.coil(c), h, w, FftDirection::Forward);
    apply_mask(y.coil(c), op.mask(), h);
  }
  return y;
}

ComplexImage apply_adjoint(const ForwardOperator& op, const KSpaceData& y) {
  check_kspace(op, y);
  const std::size_t h = op.height();
  const std::size_t w = op.width();
  ComplexImage x(h, w);
  std::vector<cplx> masked(h * w);
  std::vector<cplx> image(h * w);
  for (std::size_t c = 0; c < op.num_coils(); ++c) {
    std::copy(y.coil(c).begin(), y.coil(c).end(), masked.begin());
    apply_mask(masked, op.mask(), h);
    centered_fft2(masked, image, h, w, FftDirection::Inverse);
    const auto s = op.maps().coil(c);
    auto xs = x.data();
    for (std::size_t i = 0; i < image.size(); ++i) xs[i] += std::conj(s[i]) * image[i];
  }
  return x;
}

ComplexImage apply_normal(const ForwardOperator& op, const ComplexImage& x) {
  check_image(op, x);
  const std::size_t h = op.height();
  const std::size_t w = op.width();
  ComplexImage out(h, w);
  std::vector<cplx> a(h * w);
  std::vector<cplx> b(h * w);
  for (std::size_t c = 0; c < op.num_coils(); ++c) {
    const auto s = op.maps().coil(c);
    const auto xs = x.data();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = s[i] * xs[i];
    centered_fft2(a, b, h, w, FftDirection::Forward);
    apply_mask(b, op.mask(), h);
    centered_fft2(b, a, h, w, FftDirection::Inverse);
    auto os = out.data();
    for (std::size_t i = 0; i < a.size(); ++i) os[i] += std::conj(s[i]) * a[i];
  }
  return out;
}

std::size_t line_budget(std::size_t width, double acceleration) {
  if (!(acceleration >= 1.0)) throw std::invalid_argument("acceleration must be >= 1");
  return static_cast<std::size_t>(std::llround(static_cast<double>(width) / acceleration));
}

namespace {

// One seeded dart-throwing pass at a given gap scale. Returns the mask; its
// count may fall short of the budget when the throw stalls.
std::vector<std::uint8_t> throw_darts(std::size_t width, std::size_t budget,
                                      const std::vector<std::uint8_t>& acs, double gamma,
                                      std::uint64_t seed) {
  std::vector<std::uint8_t> lines = acs;
  std::size_t count = static_cast<std::size_t>(std::count(lines.begin(), lines.end(), 1));
  const double centre = static_cast<double>(width / 2);
  const double half = std::max(1.0, centre);
  auto gap = [&](std::size_t k) {
    const double g = gamma * (1.0 + std::abs(static_cast<double>(k) - centre) / half);
    return std::max<long>(1, std::lround(g));
  };
  Rng rng = make_rng(seed, streams::kMask);
  std::uniform_int_distribution<std::size_t> pick(0, width - 1);
  std::size_t rejections = 0;
  const std::size_t max_rejections = 10 * width;
  while (count < budget && rejections < max_rejections) {
    const std::size_t k = pick(rng);
    const long g = gap(k);
    bool ok = lines[k] == 0;
    for (long off = -(g - 1); ok && off <= g - 1; ++off) {
      const long j = static_cast<long>(k) + off;
      if (j >= 0 && j < static_cast<long>(width) && lines[static_cast<std::size_t>(j)]) ok = false;
    }
    if (ok) {
      lines[k] = 1;
      ++count;
      rejections = 0;
    } else {
      ++rejections;
    }
  }
  return lines;
}

}  // namespace

SamplingMask generate_mask(std::size_t width, double acceleration, std::size_t acs_width,
                           std::uint64_t seed) {
  if (width == 0) throw std::invalid_argument("generate_mask: width must be positive");
  const std::size_t budget = line_budget(width, acceleration);
  if (budget < acs_width) {
    throw std::invalid_argument("generate_mask: line budget " + std::to_string(budget) +
                                " is smaller than ACS width " + std::to_string(acs_width));
  }
  std::vector<std::uint8_t> acs(width, 0);
  const std::size_t acs_start = width / 2 - std::min(width / 2, acs_width / 2);
  for (std::size_t i = 0; i < acs_width; ++i) acs[acs_start + i] = 1;

  auto reaches_budget = [&](const std::vector<std::uint8_t>& lines) {
    return static_cast<std::size_t>(std::count(lines.begin(), lines.end(), 1)) == budget;
  };

  // gamma = 0 gives g = 1 everywhere, i.e. plain sampling without replacement,
  // which always fills the budget. Bisect for the sparsest gap that still does.
  double lo = 0.0;
  double hi = static_cast<double>(width);
  std::vector<std::uint8_t> best = throw_darts(width, budget, acs, lo, seed);
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = 0.5 * (lo + hi);
    auto lines = throw_darts(width, budget, acs, mid, seed);
    if (reaches_budget(lines)) {
      lo = mid;
      best = std::move(lines);
    } else {
      hi = mid;
    }
  }

  std::size_t count = static_cast<std::size_t>(std::count(best.begin(), best.end(), 1));
  if (count < budget) {
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < width; ++k)
      if (!best[k]) free.push_back(k);
    Rng rng = make_rng(seed, streams::kMask + 1000);
    std::shuffle(free.begin(), free.end(), rng);
    for (std::size_t i = 0; count < budget; ++i, ++count) best[free[i]] = 1;
  }
  return SamplingMask{std::move(best), acceleration, acs_width};
}

std::pair<KSpaceData, double> normalize_kspace(const KSpaceData& y) {
  double scale = 0.0;
  for (const auto& v : y.data()) scale = std::max({scale, std::abs(v.real()), std::abs(v.imag())});
  if (!(scale > 0.0)) throw std::invalid_argument("normalize_kspace: k-space is all zeros");
  if (!std::isfinite(scale)) throw std::invalid_argument("normalize_kspace: non-finite k-space");
  KSpaceData out = y;
  for (auto& v : out.data()) v /= scale;
  return {std::move(out), scale};
}

KSpaceData add_noise(const KSpaceData& y, const SamplingMask& mask, double sigma,
                     std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be non-negative");
  if (mask.width() != y.width()) throw std::invalid_argument("add_noise: mask width mismatch");
  KSpaceData out = y;
  if (sigma == 0.0) return out;
  Rng rng = make_rng(seed, streams::kNoise);
  std::normal_distribution<double> normal(0.0, sigma);
  for (std::size_t c = 0; c < y.num_coils(); ++c) {
    for (std::size_t r = 0; r < y.height(); ++r) {
      for (std::size_t k = 0; k < y.width(); ++k) {
        if (!mask.sampled(k)) continue;
        const double re = normal(rng);
        const double im = normal(rng);
        out(c, r, k) += cplx{re, im};
      }
    }
  }
  return out;
}

}  // namespace pun

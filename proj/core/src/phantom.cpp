#include "pun/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pun/parallel.hpp"
#include "pun/rng.hpp"

namespace pun {

PhantomFamily PhantomFamily::base() { return {"base", 5, 12, 0.10, 0.50, 0.2, 1.0, 1.5}; }

PhantomFamily PhantomFamily::shifted() { return {"shifted", 12, 20, 0.04, 0.25, 0.5, 1.0, 3.0}; }

PhantomFamily PhantomFamily::by_name(const std::string& name) {
  if (name == "base") return base();
  if (name == "shifted") return shifted();
  throw std::invalid_argument("unknown phantom family '" + name + "' (expected base or shifted)");
}

ComplexImage generate_phantom(std::size_t size, std::uint64_t seed, const PhantomFamily& family) {
  if (size < 8) throw std::invalid_argument("generate_phantom: size must be >= 8");
  Rng rng = make_rng(seed, streams::kPhantom);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double a, double b) { return a + (b - a) * unit(rng); };

  struct Ellipse {
    double cx, cy, a, b, cos_t, sin_t, intensity;
  };
  std::uniform_int_distribution<int> count_dist(family.min_ellipses, family.max_ellipses);
  const int count = count_dist(rng);
  std::vector<Ellipse> ellipses;
  for (int e = 0; e < count; ++e) {
    const double theta = between(0.0, std::numbers::pi);
    ellipses.push_back({between(-0.6, 0.6), between(-0.6, 0.6),
                        between(family.min_axis, family.max_axis),
                        between(family.min_axis, family.max_axis), std::cos(theta),
                        std::sin(theta), between(family.min_intensity, family.max_intensity)});
  }

  // Low-order sinusoidal phase; the weights sum to at most 1 so |phase| <= pi/4.
  struct Wave {
    double fx, fy, offset, weight;
  };
  std::vector<Wave> waves;
  double weight_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    Wave w{between(-family.max_phase_frequency, family.max_phase_frequency),
           between(-family.max_phase_frequency, family.max_phase_frequency),
           between(0.0, 2.0 * std::numbers::pi), between(0.2, 1.0)};
    weight_sum += w.weight;
    waves.push_back(w);
  }
  for (auto& w : waves) w.weight /= weight_sum;

  ComplexImage img(size, size);
  const double half = static_cast<double>(size) / 2.0;
  for (std::size_t r = 0; r < size; ++r) {
    const double y = (static_cast<double>(r) - half + 0.5) / half;
    for (std::size_t c = 0; c < size; ++c) {
      const double x = (static_cast<double>(c) - half + 0.5) / half;
      double magnitude = 0.0;
      for (const auto& e : ellipses) {
        const double dx = x - e.cx;
        const double dy = y - e.cy;
        const double u = (dx * e.cos_t + dy * e.sin_t) / e.a;
        const double v = (-dx * e.sin_t + dy * e.cos_t) / e.b;
        if (u * u + v * v <= 1.0) magnitude += e.intensity;
      }
      magnitude = std::clamp(magnitude, 0.0, 1.0);
      double phase = 0.0;
      for (const auto& w : waves) {
        phase += w.weight * std::cos(std::numbers::pi * (w.fx * x + w.fy * y) + w.offset);
      }
      phase *= std::numbers::pi / 4.0;
      img(r, c) = std::polar(magnitude, phase);
    }
  }
  return img;
}

SensitivityMaps generate_maps(std::size_t size, std::size_t num_coils, std::uint64_t seed) {
  if (num_coils < 1) throw std::invalid_argument("generate_maps: need at least one coil");
  if (size < 1) throw std::invalid_argument("generate_maps: size must be positive");
  Rng rng = make_rng(seed, streams::kMaps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double a, double b) { return a + (b - a) * unit(rng); };

  CoilArray raw(num_coils, size, size);
  const double half = static_cast<double>(size) / 2.0;
  for (std::size_t c = 0; c < num_coils; ++c) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                             static_cast<double>(num_coils) +
                         between(-0.1, 0.1);
    const double radius = between(0.9, 1.1);
    const double cx = radius * std::cos(angle);
    const double cy = radius * std::sin(angle);
    const double width = between(0.6, 0.9);
    const double phase0 = between(-std::numbers::pi, std::numbers::pi);
    const double kx = between(-1.0, 1.0);
    const double ky = between(-1.0, 1.0);
    for (std::size_t r = 0; r < size; ++r) {
      const double y = (static_cast<double>(r) - half + 0.5) / half;
      for (std::size_t col = 0; col < size; ++col) {
        const double x = (static_cast<double>(col) - half + 0.5) / half;
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        // Floor keeps every pixel's SOS energy strictly positive.
        const double magnitude = std::exp(-d2 / (2.0 * width * width)) + 1e-3;
        raw(c, r, col) = std::polar(magnitude, phase0 + kx * x + ky * y);
      }
    }
  }
  return SensitivityMaps::normalized(std::move(raw));
}

void DatasetConfig::validate() const {
  if (num_samples < 1) throw std::invalid_argument("dataset: num_samples must be >= 1");
  if (image_size < 8 || (image_size & (image_size - 1)) != 0) {
    throw std::invalid_argument("dataset: image_size must be a power of two >= 8");
  }
  if (num_coils < 1) throw std::invalid_argument("dataset: num_coils must be >= 1");
  if (!(acceleration >= 1.0)) throw std::invalid_argument("dataset: acceleration must be >= 1");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("dataset: noise_sigma must be >= 0");
  if (acs_width > line_budget(image_size, acceleration)) {
    throw std::invalid_argument("dataset: acs_width " + std::to_string(acs_width) + " exceeds the " +
                                std::to_string(line_budget(image_size, acceleration)) +
                                "-line budget at this size and acceleration");
  }
  PhantomFamily::by_name(family);
}

ComplexImage SampleRecord::target() const {
  ComplexImage t = ground_truth;
  for (auto& v : t.data()) v /= scale;
  return t;
}

SampleRecord simulate_sample(ComplexImage truth, SensitivityMaps maps, SamplingMask mask,
                             double noise_sigma, std::uint64_t seed) {
  const ForwardOperator op(mask, maps);
  KSpaceData y = apply_forward(op, truth);
  y = add_noise(y, mask, noise_sigma, seed);
  auto [normalized, scale] = normalize_kspace(y);
  return SampleRecord{std::move(truth), std::move(normalized), std::move(maps), std::move(mask),
                      scale, seed};
}

std::vector<SampleRecord> build_dataset(const DatasetConfig& cfg) {
  cfg.validate();
  const PhantomFamily family = PhantomFamily::by_name(cfg.family);
  std::vector<SampleRecord> records(cfg.num_samples);
  parallel_for(cfg.num_samples, [&](std::size_t i) {
    const std::uint64_t seed = cfg.base_seed + i;
    records[i] = simulate_sample(generate_phantom(cfg.image_size, seed, family),
                                 generate_maps(cfg.image_size, cfg.num_coils, seed),
                                 generate_mask(cfg.image_size, cfg.acceleration, cfg.acs_width, seed),
                                 cfg.noise_sigma, seed);
  });
  return records;
}

SampleRecord reacquire(const SampleRecord& sample, double acceleration, std::size_t acs_width,
                       double noise_sigma, std::uint64_t eval_seed) {
  const std::uint64_t seed = derive_seed(derive_seed(sample.seed, streams::kEval), eval_seed);
  return simulate_sample(sample.ground_truth, sample.maps,
                         generate_mask(sample.mask.width(), acceleration, acs_width, seed),
                         noise_sigma, seed);
}

}  // namespace pun

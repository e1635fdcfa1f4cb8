#include "pun/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace pun {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) and kept for the
// life of the process.
class PlanCache {
 public:
  fftw_plan get(std::size_t height, std::size_t width, FftDirection direction) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(height, width, direction);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = height * width;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), in, out,
                                      direction == FftDirection::Forward ? FFTW_FORWARD
                                                                         : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, FftDirection>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// out[r][c] = in[(r + sr) % H][(c + sc) % W]
void circular_shift(std::span<const cplx> in, std::span<cplx> out, std::size_t height,
                    std::size_t width, std::size_t shift_rows, std::size_t shift_cols) {
  for (std::size_t r = 0; r < height; ++r) {
    const std::size_t src_r = (r + shift_rows) % height;
    for (std::size_t c = 0; c < width; ++c) {
      out[r * width + c] = in[src_r * width + (c + shift_cols) % width];
    }
  }
}

}  // namespace

void centered_fft2(std::span<const cplx> in, std::span<cplx> out, std::size_t height,
                   std::size_t width, FftDirection direction) {
  const std::size_t n = height * width;
  if (in.size() != n || out.size() != n) throw std::invalid_argument("centered_fft2: size mismatch");
  fftw_plan plan = plan_cache().get(height, width, direction);

  std::vector<cplx> shifted(n);
  std::vector<cplx> transformed(n);
  // ifftshift moves index floor(n/2) to 0.
  circular_shift(in, shifted, height, width, height / 2, width / 2);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(shifted.data()),
                   reinterpret_cast<fftw_complex*>(transformed.data()));
  // fftshift moves index 0 to floor(n/2).
  circular_shift(transformed, out, height, width, (height + 1) / 2, (width + 1) / 2);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

}  // namespace pun

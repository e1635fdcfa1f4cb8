#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pun {

using cplx = std::complex<double>;

/// Row-major H x W complex image.
class ComplexImage {
 public:
  ComplexImage() = default;
  ComplexImage(std::size_t height, std::size_t width);
  ComplexImage(std::size_t height, std::size_t width, std::vector<cplx> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  cplx& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  bool same_shape(const ComplexImage& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const;

  friend bool operator==(const ComplexImage&, const ComplexImage&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<cplx> data_;
};

/// C x H x W complex stack, one H x W plane per receive coil.
class CoilArray {
 public:
  CoilArray() = default;
  CoilArray(std::size_t coils, std::size_t height, std::size_t width);
  CoilArray(std::size_t coils, std::size_t height, std::size_t width, std::vector<cplx> data);

  std::size_t num_coils() const { return coils_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t plane_size() const { return height_ * width_; }
  std::size_t size() const { return data_.size(); }

  std::span<cplx> coil(std::size_t c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const cplx> coil(std::size_t c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  cplx& operator()(std::size_t c, std::size_t row, std::size_t col) {
    return data_[(c * height_ + row) * width_ + col];
  }
  const cplx& operator()(std::size_t c, std::size_t row, std::size_t col) const {
    return data_[(c * height_ + row) * width_ + col];
  }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }
  bool all_finite() const;

  friend bool operator==(const CoilArray&, const CoilArray&) = default;

 private:
  std::size_t coils_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<cplx> data_;
};

/// Multi-coil k-space measurements y.
class KSpaceData : public CoilArray {
 public:
  using CoilArray::CoilArray;
  friend bool operator==(const KSpaceData&, const KSpaceData&) = default;
};

// Complex inner product <a, b> = sum conj(a_i) b_i.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double squared_norm(std::span<const cplx> a);
double norm(std::span<const cplx> a);

}  // namespace pun

#include "pun/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pun {

namespace {

bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

ComplexImage::ComplexImage(std::size_t height, std::size_t width)
    : height_(height), width_(width), data_(height * width) {}

ComplexImage::ComplexImage(std::size_t height, std::size_t width, std::vector<cplx> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != height * width) {
    throw std::invalid_argument("ComplexImage: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(height) + "x" +
                                std::to_string(width));
  }
}

bool ComplexImage::all_finite() const { return std::all_of(data_.begin(), data_.end(), finite); }

CoilArray::CoilArray(std::size_t coils, std::size_t height, std::size_t width)
    : coils_(coils), height_(height), width_(width), data_(coils * height * width) {}

CoilArray::CoilArray(std::size_t coils, std::size_t height, std::size_t width,
                     std::vector<cplx> data)
    : coils_(coils), height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != coils * height * width) {
    throw std::invalid_argument("CoilArray: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(coils) + "x" +
                                std::to_string(height) + "x" + std::to_string(width));
  }
}

bool CoilArray::all_finite() const { return std::all_of(data_.begin(), data_.end(), finite); }

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double squared_norm(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return acc;
}

double norm(std::span<const cplx> a) { return std::sqrt(squared_norm(a)); }

}  // namespace pun

#include "pun/cg_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pun {

void DcConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("DcConfig: lambda must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("DcConfig: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("DcConfig: max_iter must be >= 1");
}

namespace {

// CG on the Hermitian positive-definite system (A^H A + lambda I) x = b.
DcResult conjugate_gradient(const ForwardOperator& op, const ComplexImage& b, ComplexImage x,
                            const DcConfig& cfg) {
  auto apply = [&](const ComplexImage& v) {
    ComplexImage out = apply_normal(op, v);
    auto o = out.data();
    const auto vs = v.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += cfg.lambda * vs[i];
    return out;
  };

  DcResult result;
  const double b_norm = norm(b.data());
  if (b_norm == 0.0) {
    result.x = ComplexImage(b.height(), b.width());
    result.converged = true;
    result.residual_history.push_back(0.0);
    return result;
  }

  ComplexImage r = b;
  {
    const ComplexImage mx = apply(x);
    auto rs = r.data();
    const auto ms = mx.data();
    for (std::size_t i = 0; i < rs.size(); ++i) rs[i] -= ms[i];
  }
  double rr = squared_norm(r.data());
  result.residual_history.push_back(std::sqrt(rr) / b_norm);

  ComplexImage p = r;
  int iter = 0;
  while (std::sqrt(rr) / b_norm > cfg.tol && iter < cfg.max_iter) {
    const ComplexImage mp = apply(p);
    const double pmp = inner(p.data(), mp.data()).real();
    if (!(pmp > 0.0)) break;
    const double alpha = rr / pmp;
    auto xs = x.data();
    auto rs = r.data();
    const auto ps = p.data();
    const auto ms = mp.data();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] += alpha * ps[i];
      rs[i] -= alpha * ms[i];
    }
    const double rr_next = squared_norm(r.data());
    const double beta = rr_next / rr;
    auto pw = p.data();
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = rs[i] + beta * pw[i];
    rr = rr_next;
    ++iter;
    result.residual_history.push_back(std::sqrt(rr) / b_norm);
  }

  result.x = std::move(x);
  result.iterations = iter;
  result.relative_residual = std::sqrt(rr) / b_norm;
  result.converged = result.relative_residual <= cfg.tol;
  return result;
}

void require_finite(const ComplexImage& v, const char* what) {
  if (!v.all_finite()) throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

void require_shape(const ForwardOperator& op, const ComplexImage& v, const char* what) {
  if (v.height() != op.height() || v.width() != op.width()) {
    throw std::invalid_argument(std::string(what) + " does not match the operator's image size");
  }
}

}  // namespace

DcResult solve_dc(const ForwardOperator& op, const KSpaceData& y, const ComplexImage& z,
                  const DcConfig& cfg, const ComplexImage* initial) {
  cfg.validate();
  require_shape(op, z, "z");
  require_finite(z, "z");
  if (!y.all_finite()) throw std::invalid_argument("y contains non-finite values");
  if (initial != nullptr) {
    require_shape(op, *initial, "initial iterate");
    require_finite(*initial, "initial iterate");
  }

  ComplexImage b = apply_adjoint(op, y);
  auto bs = b.data();
  const auto zs = z.data();
  for (std::size_t i = 0; i < bs.size(); ++i) bs[i] += cfg.lambda * zs[i];
  return conjugate_gradient(op, b, initial != nullptr ? *initial : z, cfg);
}

DcResult dc_gradient(const ForwardOperator& op, const ComplexImage& g, const DcConfig& cfg) {
  cfg.validate();
  require_shape(op, g, "gradient");
  require_finite(g, "gradient");
  ComplexImage b = g;
  for (auto& v : b.data()) v *= cfg.lambda;
  return conjugate_gradient(op, b, g, cfg);
}

}  // namespace pun

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <cblas.h>
#include <fftw3.h>
#include <lapacke.h>

#include "inls/radial.hpp"

namespace inls {

namespace detail {

// Dense orthonormal eigenbasis of the reference (h = 1) operator, cached per
// (dimension, node count). The tridiagonal scales exactly like 1/h^2, so one
// decomposition serves every grid extent.
struct DenseBasis {
  std::vector<double> eigenvalues; // ascending, at h = 1
  std::vector<double> vectors;     // column-major M x M
};

inline void reference_tridiag(int N, std::size_t M, std::vector<double>& diag,
                              std::vector<double>& off) {
  const double h = 1.0;
  const double inv_h2 = 1.0 / (h * h);
  const double coef = 0.25 * (N - 1) * (N - 3);
  diag.assign(M, 0.0);
  off.assign(M > 0 ? M - 1 : 0, -inv_h2);
  for (std::size_t j = 0; j < M; ++j) {
    const double r = (static_cast<double>(j) + 0.5) * h;
    diag[j] = 2.0 * inv_h2 + coef / (r * r);
  }
  // regularity at the origin: even mirror for N = 1, odd mirror otherwise
  diag[0] += (N == 1) ? -inv_h2 : inv_h2;
  // homogeneous Dirichlet wall half a cell beyond the last node
  diag[M - 1] += inv_h2;
}

inline std::shared_ptr<const DenseBasis> dense_basis(int N, std::size_t M) {
  static std::mutex mu;
  static std::map<std::pair<int, std::size_t>, std::shared_ptr<const DenseBasis>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(N, M);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto basis = std::make_shared<DenseBasis>();
  std::vector<double> off;
  reference_tridiag(N, M, basis->eigenvalues, off);
  basis->vectors.assign(M * M, 0.0);
  lapack_int info = LAPACKE_dstevd(
      LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(M),
      basis->eigenvalues.data(), off.data(), basis->vectors.data(),
      static_cast<lapack_int>(M));
  if (info != 0)
    throw std::runtime_error("tridiagonal eigendecomposition failed");
  auto shared = std::shared_ptr<const DenseBasis>(basis);
  cache[key] = shared;
  return shared;
}

struct DstPlans {
  fftw_plan forward = nullptr;  // RODFT10
  fftw_plan backward = nullptr; // RODFT01
  std::size_t M = 0;
  ~DstPlans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

inline std::shared_ptr<const DstPlans> dst_plans(std::size_t M) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const DstPlans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  auto plans = std::make_shared<DstPlans>();
  plans->M = M;
  std::vector<double> in(M), out(M);
  plans->forward =
      fftw_plan_r2r_1d(static_cast<int>(M), in.data(), out.data(),
                       FFTW_RODFT10, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans->backward =
      fftw_plan_r2r_1d(static_cast<int>(M), in.data(), out.data(),
                       FFTW_RODFT01, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans->forward || !plans->backward)
    throw std::runtime_error("FFTW plan creation failed");
  auto shared = std::shared_ptr<const DstPlans>(plans);
  cache[M] = shared;
  return shared;
}

} // namespace detail

// Discrete radial -Laplacian in the similarity-transformed variable
// w = r^((N-1)/2) u, where it becomes the symmetric tridiagonal
// -w'' + (N-1)(N-3)/(4 r^2) w with a Dirichlet wall at R_max. All norms and
// flows act on the weighted representation psi_j = sqrt(w_j) u_j, in which
// the operator has an orthonormal eigenbasis. For N = 3 the potential
// vanishes and the eigenbasis is exactly the half-sample sine basis, computed
// via fast transforms; other dimensions use the dense decomposition.
class SpectralLaplacian {
public:
  explicit SpectralLaplacian(GridPtr grid) : grid_(std::move(grid)) {
    const std::size_t M = grid_->size();
    const double h = grid_->spacing();
    const double inv_h2 = 1.0 / (h * h);
    const int N = grid_->dim();
    const double coef = 0.25 * (N - 1) * (N - 3);

    diag_.assign(M, 0.0);
    off_.assign(M - 1, -inv_h2);
    for (std::size_t j = 0; j < M; ++j) {
      const double r = grid_->node(j);
      diag_[j] = 2.0 * inv_h2 + coef / (r * r);
    }
    diag_[0] += (N == 1) ? -inv_h2 : inv_h2;
    diag_[M - 1] += inv_h2;

    sqrtw_.resize(M);
    for (std::size_t j = 0; j < M; ++j) sqrtw_[j] = std::sqrt(grid_->weight(j));

    if (N == 3) {
      plans_ = detail::dst_plans(M);
      eigenvalues_.resize(M);
      for (std::size_t k = 1; k <= M; ++k)
        eigenvalues_[k - 1] =
            (2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(k) /
                                  static_cast<double>(M))) *
            inv_h2;
    } else {
      basis_ = detail::dense_basis(N, M);
      eigenvalues_.resize(M);
      for (std::size_t k = 0; k < M; ++k)
        eigenvalues_[k] = basis_->eigenvalues[k] * inv_h2;
    }
  }

  const RadialGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

  // Delta u via the tridiagonal action (same numbers as the spectral form).
  RadialField apply_laplacian(const RadialField& u) const {
    check(u);
    std::vector<Complex> psi = to_weighted(u);
    std::vector<Complex> t = tridiag_apply(psi);
    RadialField out(u.grid);
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = -t[j] / sqrtw_[j];
    return out;
  }

  // (-Delta)^s u for s in (0, 1]; s = 1 matches -apply_laplacian to round-off.
  RadialField apply_fractional(const RadialField& u, double s) const {
    check(u);
    if (!(s > 0.0 && s <= 1.0))
      throw std::domain_error("fractional power s must lie in (0,1]");
    std::vector<Complex> c = to_spectral(u);
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] *= std::pow(std::max(eigenvalues_[k], 0.0), s);
    return from_spectral(c);
  }

  double grad_norm(const RadialField& u) const {
    check(u);
    std::vector<Complex> psi = to_weighted(u);
    std::vector<Complex> t = tridiag_apply(psi);
    double acc = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j)
      acc += (t[j] * std::conj(psi[j])).real();
    return std::sqrt(std::max(acc, 0.0));
  }

  // Homogeneous Sobolev norm of order s in [0, 1] (spectral).
  double hs_norm(const RadialField& u, double s) const {
    check(u);
    std::vector<Complex> c = to_spectral(u);
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      acc += std::pow(std::max(eigenvalues_[k], 0.0), s) * std::norm(c[k]);
    return std::sqrt(acc);
  }

  // (c0 - Delta)^-1 f, c0 >= 0.
  RadialField helmholtz_inverse(double c0, const RadialField& f) const {
    check(f);
    std::vector<double> shift(f.size(), c0);
    return shifted_inverse(shift, f);
  }

  // (-Delta + diag(shift))^-1 f with shift_j >= 0 (tridiagonal solve).
  RadialField shifted_inverse(const std::vector<double>& shift,
                              const RadialField& f) const {
    check(f);
    const std::size_t M = f.size();
    if (shift.size() != M)
      throw std::invalid_argument("shift length does not match grid");
    std::vector<double> d(M), e(off_);
    for (std::size_t j = 0; j < M; ++j) d[j] = diag_[j] + shift[j];
    std::vector<double> rhs(2 * M);
    for (std::size_t j = 0; j < M; ++j) {
      const Complex psi = f[j] * sqrtw_[j];
      rhs[j] = psi.real();
      rhs[M + j] = psi.imag();
    }
    lapack_int info = LAPACKE_dptsv(LAPACK_COL_MAJOR,
                                    static_cast<lapack_int>(M), 2, d.data(),
                                    e.data(), rhs.data(),
                                    static_cast<lapack_int>(M));
    if (info != 0)
      throw std::runtime_error("tridiagonal solve failed (not positive definite?)");
    RadialField out(f.grid);
    for (std::size_t j = 0; j < M; ++j)
      out[j] = Complex(rhs[j], rhs[M + j]) / sqrtw_[j];
    return out;
  }

  // u <- exp(i dt Delta) u, exact in the discrete eigenbasis (unitary).
  void linear_phase(RadialField& u, double dt) const {
    check(u);
    std::vector<Complex> c = to_spectral(u);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double phase = -eigenvalues_[k] * dt;
      c[k] *= Complex(std::cos(phase), std::sin(phase));
    }
    RadialField v = from_spectral(c);
    u.values = std::move(v.values);
  }

  // Coefficients in the orthonormal eigenbasis of the weighted representation.
  std::vector<Complex> to_spectral(const RadialField& u) const {
    check(u);
    return transform(to_weighted(u), true);
  }

  RadialField from_spectral(const std::vector<Complex>& c) const {
    if (c.size() != grid_->size())
      throw std::invalid_argument("coefficient length does not match grid");
    std::vector<Complex> psi = transform(c, false);
    RadialField out(grid_);
    for (std::size_t j = 0; j < psi.size(); ++j) out[j] = psi[j] / sqrtw_[j];
    return out;
  }

private:
  void check(const RadialField& u) const {
    if (!u.grid || !u.grid->compatible(*grid_))
      throw std::invalid_argument("field grid does not match operator grid");
  }

  std::vector<Complex> to_weighted(const RadialField& u) const {
    std::vector<Complex> psi(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) psi[j] = u[j] * sqrtw_[j];
    return psi;
  }

  std::vector<Complex> tridiag_apply(const std::vector<Complex>& psi) const {
    const std::size_t M = psi.size();
    std::vector<Complex> t(M);
    for (std::size_t j = 0; j < M; ++j) {
      Complex acc = diag_[j] * psi[j];
      if (j > 0) acc += off_[j - 1] * psi[j - 1];
      if (j + 1 < M) acc += off_[j] * psi[j + 1];
      t[j] = acc;
    }
    return t;
  }

  // forward: psi -> coefficients; backward: coefficients -> psi
  std::vector<Complex> transform(const std::vector<Complex>& in,
                                 bool forward) const {
    const std::size_t M = in.size();
    std::vector<double> re(M), im(M), re_out(M), im_out(M);
    for (std::size_t j = 0; j < M; ++j) {
      re[j] = in[j].real();
      im[j] = in[j].imag();
    }
    if (plans_) {
      const double s = std::sqrt(2.0 / static_cast<double>(M));
      const double sM = std::sqrt(1.0 / static_cast<double>(M));
      if (forward) {
        fftw_execute_r2r(plans_->forward, re.data(), re_out.data());
        fftw_execute_r2r(plans_->forward, im.data(), im_out.data());
        for (std::size_t k = 0; k + 1 < M; ++k) {
          re_out[k] *= 0.5 * s;
          im_out[k] *= 0.5 * s;
        }
        re_out[M - 1] *= 0.5 * sM;
        im_out[M - 1] *= 0.5 * sM;
      } else {
        for (std::size_t k = 0; k + 1 < M; ++k) {
          re[k] *= 0.5 * s;
          im[k] *= 0.5 * s;
        }
        re[M - 1] *= sM;
        im[M - 1] *= sM;
        fftw_execute_r2r(plans_->backward, re.data(), re_out.data());
        fftw_execute_r2r(plans_->backward, im.data(), im_out.data());
      }
    } else {
      const auto trans = forward ? CblasTrans : CblasNoTrans;
      cblas_dgemv(CblasColMajor, trans, static_cast<int>(M),
                  static_cast<int>(M), 1.0, basis_->vectors.data(),
                  static_cast<int>(M), re.data(), 1, 0.0, re_out.data(), 1);
      cblas_dgemv(CblasColMajor, trans, static_cast<int>(M),
                  static_cast<int>(M), 1.0, basis_->vectors.data(),
                  static_cast<int>(M), im.data(), 1, 0.0, im_out.data(), 1);
    }
    std::vector<Complex> out(M);
    for (std::size_t j = 0; j < M; ++j) out[j] = Complex(re_out[j], im_out[j]);
    return out;
  }

  GridPtr grid_;
  std::vector<double> diag_, off_, sqrtw_;
  std::vector<double> eigenvalues_;
  std::shared_ptr<const detail::DenseBasis> basis_;
  std::shared_ptr<const detail::DstPlans> plans_;
};

// Norm dispatcher used by callers that take a norm kind at runtime.
enum class NormKind { Lp, GradL2, HsDot };

inline double norm(const RadialField& u, const SpectralLaplacian& op,
                   NormKind kind, double parameter) {
  switch (kind) {
    case NormKind::Lp: return lp_norm(u, parameter);
    case NormKind::GradL2: return op.grad_norm(u);
    case NormKind::HsDot: return op.hs_norm(u, parameter);
  }
  throw std::logic_error("unknown norm kind");
}

} // namespace inls

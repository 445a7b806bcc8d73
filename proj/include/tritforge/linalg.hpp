#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "tritforge/config.hpp"
#include "tritforge/errors.hpp"

namespace tritforge {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Primitive cube root of unity e^{i 2 pi / 3}.
inline cplx omega() { return std::polar(1.0, 2.0 * kPi / 3.0); }

/// Largest entrywise modulus of (a - b).
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Square complex matrix with U^dagger U = I.
class Unitary {
 public:
  Unitary() = default;

  /// Validating constructor; throws NotUnitaryError.
  explicit Unitary(Matrix m, double tol = kDefaultTolerances.unitarity) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw NotUnitaryError("unitary must be square and non-empty");
    const double dev = max_abs_diff(m_.adjoint() * m_, Matrix::Identity(m_.rows(), m_.cols()));
    if (dev > tol)
      throw NotUnitaryError("matrix is not unitary (deviation " + std::to_string(dev) + ")");
  }

  /// Skips the unitarity check. Only for products of already-validated unitaries.
  static Unitary trusted(Matrix m) {
    Unitary u;
    u.m_ = std::move(m);
    return u;
  }

  static Unitary identity(std::size_t dim) {
    return trusted(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  cplx operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  Unitary adjoint() const { return trusted(m_.adjoint()); }

  /// Matrix product (this applied after rhs).
  friend Unitary operator*(const Unitary& a, const Unitary& b) {
    if (a.dim() != b.dim()) throw EmbeddingError("unitary dimension mismatch in product");
    return trusted(a.m_ * b.m_);
  }

 private:
  Matrix m_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityOperator {
 public:
  DensityOperator() = default;

  explicit DensityOperator(Matrix rho, const Tolerances& tol = kDefaultTolerances)
      : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
      throw DensityError("density operator must be square and non-empty");
    if (max_abs_diff(rho_, rho_.adjoint()) > tol.hermiticity)
      throw DensityError("density operator is not Hermitian");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > tol.normalization)
      throw DensityError("density operator trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol.min_eigenvalue)
      throw DensityError("density operator has a negative eigenvalue");
  }

  static DensityOperator trusted(Matrix rho) {
    DensityOperator d;
    d.rho_ = std::move(rho);
    return d;
  }

  /// |v><v| for a normalized vector.
  static DensityOperator pure(const Vector& v) { return trusted(v * v.adjoint()); }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& matrix() const noexcept { return rho_; }
  cplx operator()(std::size_t r, std::size_t c) const {
    return rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

 private:
  Matrix rho_;
};

/// Tr(rho^2).
inline double purity(const DensityOperator& rho) {
  // Tr(rho rho) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.matrix().cwiseAbs2().sum();
}

/// <v| rho |v> for a normalized pure reference state.
inline double fidelity(const DensityOperator& rho, const Vector& v) {
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

}  // namespace tritforge

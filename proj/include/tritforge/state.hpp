#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tritforge/config.hpp"
#include "tritforge/errors.hpp"
#include "tritforge/linalg.hpp"
#include "tritforge/register.hpp"

namespace tritforge {

/// Normalized amplitudes over a mixed-dimension register.
class StateVector {
 public:
  StateVector() = default;

  StateVector(QuditRegister reg, Vector amps, double tol = kDefaultTolerances.normalization)
      : reg_(std::move(reg)), amps_(std::move(amps)) {
    if (static_cast<std::size_t>(amps_.size()) != reg_.total_dim())
      throw NormalizationError("amplitude vector length " + std::to_string(amps_.size()) +
                               " does not match register dimension " +
                               std::to_string(reg_.total_dim()));
    const double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > tol)
      throw NormalizationError("state is not normalized (norm^2 = " + std::to_string(n2) + ")");
  }

  /// Rescales to unit norm; throws if the vector is zero.
  static StateVector normalized(QuditRegister reg, Vector amps) {
    const double n = amps.norm();
    if (n == 0.0) throw NormalizationError("cannot normalize the zero vector");
    amps /= n;
    return StateVector(std::move(reg), std::move(amps));
  }

  const QuditRegister& reg() const noexcept { return reg_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
  cplx amplitude(std::span<const int> digits) const { return (*this)[reg_.index_of(digits)]; }
  double norm() const { return amps_.norm(); }

  /// Unchecked replacement of the amplitudes. Caller preserves the norm.
  void assign_unchecked(Vector amps) { amps_ = std::move(amps); }
  Vector& mutable_amplitudes() noexcept { return amps_; }

 private:
  QuditRegister reg_;
  Vector amps_;
};

inline StateVector basis_state(const QuditRegister& reg, std::span<const int> digits) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  v(static_cast<Eigen::Index>(reg.index_of(digits))) = 1.0;
  return StateVector(reg, std::move(v));
}

inline StateVector basis_state(const QuditRegister& reg, std::initializer_list<int> digits) {
  return basis_state(reg, std::span<const int>(digits.begin(), digits.size()));
}

namespace detail {

inline void check_sites(const QuditRegister& reg, std::span<const std::size_t> sites) {
  if (sites.empty()) throw EmbeddingError("gate must act on at least one site");
  for (std::size_t a = 0; a < sites.size(); ++a) {
    if (sites[a] >= reg.size())
      throw EmbeddingError("site " + std::to_string(sites[a]) + " out of range for register " +
                           reg.to_string());
    for (std::size_t b = a + 1; b < sites.size(); ++b)
      if (sites[a] == sites[b]) throw EmbeddingError("gate sites must be distinct");
  }
}

/// Offsets (in the full index space) of each local basis state on `sites`.
inline std::vector<std::size_t> local_offsets(const QuditRegister& reg,
                                              std::span<const std::size_t> sites) {
  std::vector<std::size_t> offs{0};
  for (auto s : sites) {
    std::vector<std::size_t> next;
    next.reserve(offs.size() * static_cast<std::size_t>(reg.dim(s)));
    for (auto o : offs)
      for (int l = 0; l < reg.dim(s); ++l) next.push_back(o + static_cast<std::size_t>(l) * reg.stride(s));
    offs = std::move(next);
  }
  return offs;
}

/// Full-space indices whose digits on `sites` are all zero.
inline std::vector<std::size_t> rest_bases(const QuditRegister& reg,
                                           std::span<const std::size_t> sites) {
  std::vector<std::size_t> out;
  out.reserve(reg.total_dim() / reg.subsystem_dim(sites));
  for (std::size_t i = 0; i < reg.total_dim(); ++i) {
    bool zero = true;
    for (auto s : sites)
      if (reg.digit(i, s) != 0) {
        zero = false;
        break;
      }
    if (zero) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Applies `local` (dimension = product of dims over `sites`, sites in the
/// listed order with the first most significant) to `amps` in place.
inline void apply_local(Vector& amps, const QuditRegister& reg, const Matrix& local,
                        std::span<const std::size_t> sites) {
  detail::check_sites(reg, sites);
  const std::size_t ld = reg.subsystem_dim(sites);
  if (static_cast<std::size_t>(local.rows()) != ld || static_cast<std::size_t>(local.cols()) != ld)
    throw EmbeddingError("local gate dimension " + std::to_string(local.rows()) +
                         " does not match site dimension product " + std::to_string(ld));
  const auto offs = detail::local_offsets(reg, sites);
  const auto bases = detail::rest_bases(reg, sites);
  Vector in(static_cast<Eigen::Index>(ld));
  for (auto base : bases) {
    for (std::size_t l = 0; l < ld; ++l) in(static_cast<Eigen::Index>(l)) = amps(static_cast<Eigen::Index>(base + offs[l]));
    const Vector out = local * in;
    for (std::size_t l = 0; l < ld; ++l) amps(static_cast<Eigen::Index>(base + offs[l])) = out(static_cast<Eigen::Index>(l));
  }
}

/// Partial trace keeping `keep_sites` (in the listed order).
inline DensityOperator reduced_density(const StateVector& state,
                                       std::span<const std::size_t> keep_sites) {
  const auto& reg = state.reg();
  detail::check_sites(reg, keep_sites);
  const std::size_t kd = reg.subsystem_dim(keep_sites);
  const auto offs = detail::local_offsets(reg, keep_sites);
  const auto bases = detail::rest_bases(reg, keep_sites);
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
  Vector v(static_cast<Eigen::Index>(kd));
  for (auto base : bases) {
    for (std::size_t l = 0; l < kd; ++l) v(static_cast<Eigen::Index>(l)) = state[base + offs[l]];
    rho.noalias() += v * v.adjoint();
  }
  return DensityOperator(std::move(rho));
}

inline DensityOperator reduced_density(const StateVector& state,
                                       std::initializer_list<std::size_t> keep_sites) {
  return reduced_density(state, std::span<const std::size_t>(keep_sites.begin(), keep_sites.size()));
}

/// rho -> K rho K^dagger with K acting on `sites`. K need not be unitary.
inline void apply_local_density(Matrix& rho, const QuditRegister& reg, const Matrix& local,
                                std::span<const std::size_t> sites) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      Vector col = rho.col(c);
      apply_local(col, reg, local, sites);
      rho.col(c) = col;
    }
    rho.adjointInPlace();
  }
}

/// Partial trace of a full-register density matrix.
inline DensityOperator reduced_density(const Matrix& rho_full, const QuditRegister& reg,
                                       std::span<const std::size_t> keep_sites) {
  detail::check_sites(reg, keep_sites);
  const std::size_t kd = reg.subsystem_dim(keep_sites);
  const auto offs = detail::local_offsets(reg, keep_sites);
  const auto bases = detail::rest_bases(reg, keep_sites);
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
  for (auto base : bases)
    for (std::size_t r = 0; r < kd; ++r)
      for (std::size_t c = 0; c < kd; ++c)
        rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
            rho_full(static_cast<Eigen::Index>(base + offs[r]), static_cast<Eigen::Index>(base + offs[c]));
  return DensityOperator(std::move(rho));
}

inline DensityOperator reduced_density(const Matrix& rho_full, const QuditRegister& reg,
                                       std::initializer_list<std::size_t> keep_sites) {
  return reduced_density(rho_full, reg, std::span<const std::size_t>(keep_sites.begin(), keep_sites.size()));
}

/// Population of each level of `site`.
inline std::vector<double> level_populations(const StateVector& state, std::size_t site) {
  const auto& reg = state.reg();
  std::vector<double> pop(static_cast<std::size_t>(reg.dim(site)), 0.0);
  for (std::size_t i = 0; i < reg.total_dim(); ++i)
    pop[static_cast<std::size_t>(reg.digit(i, site))] += std::norm(state[i]);
  return pop;
}

/// Total population outside the 0/1 subspace on any site.
inline double leakage_population(const StateVector& state) {
  const auto& reg = state.reg();
  double p = 0.0;
  for (std::size_t i = 0; i < reg.total_dim(); ++i) {
    for (std::size_t s = 0; s < reg.size(); ++s)
      if (reg.digit(i, s) >= 2) {
        p += std::norm(state[i]);
        break;
      }
  }
  return p;
}

}  // namespace tritforge

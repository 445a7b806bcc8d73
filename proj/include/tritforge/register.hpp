#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tritforge/errors.hpp"

namespace tritforge {

/// Ordered list of per-site local dimensions (2 or 3).
///
/// Basis index of |q1 q2 ... qn> is the mixed-radix number with q1 most
/// significant, so index = sum_k q_k * stride(k).
class QuditRegister {
 public:
  static constexpr std::size_t kMaxSites = 8;

  QuditRegister() = default;

  explicit QuditRegister(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw RegisterError("register must have at least one site");
    if (dims_.size() > kMaxSites)
      throw RegisterError("register exceeds " + std::to_string(kMaxSites) + " sites");
    for (int d : dims_) {
      if (d != 2 && d != 3)
        throw RegisterError("local dimension must be 2 or 3, got " + std::to_string(d));
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t k = dims_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * dims_[k];
    total_ = strides_.front() * static_cast<std::size_t>(dims_.front());
  }

  /// Register of `n` sites all with dimension `d`.
  static QuditRegister uniform(std::size_t n, int d) {
    return QuditRegister(std::vector<int>(n, d));
  }

  std::size_t size() const noexcept { return dims_.size(); }
  std::size_t total_dim() const noexcept { return total_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  int dim(std::size_t site) const { return dims_.at(site); }
  std::size_t stride(std::size_t site) const { return strides_.at(site); }

  /// Mixed-radix index of a digit string.
  std::size_t index_of(std::span<const int> digits) const {
    if (digits.size() != dims_.size())
      throw InvalidLevelError("expected " + std::to_string(dims_.size()) + " digits, got " +
                              std::to_string(digits.size()));
    std::size_t idx = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (digits[k] < 0 || digits[k] >= dims_[k])
        throw InvalidLevelError("level " + std::to_string(digits[k]) + " out of range for site " +
                                std::to_string(k) + " (dim " + std::to_string(dims_[k]) + ")");
      idx += static_cast<std::size_t>(digits[k]) * strides_[k];
    }
    return idx;
  }

  std::vector<int> digits_of(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      out[k] = static_cast<int>(index / strides_[k]);
      index %= strides_[k];
    }
    return out;
  }

  int digit(std::size_t index, std::size_t site) const {
    return static_cast<int>((index / strides_[site]) % static_cast<std::size_t>(dims_[site]));
  }

  /// Product of local dimensions over `sites`.
  std::size_t subsystem_dim(std::span<const std::size_t> sites) const {
    std::size_t d = 1;
    for (auto s : sites) d *= static_cast<std::size_t>(dim(s));
    return d;
  }

  /// Sub-register made of `sites` in the listed order.
  QuditRegister sub(std::span<const std::size_t> sites) const {
    std::vector<int> d;
    d.reserve(sites.size());
    for (auto s : sites) d.push_back(dim(s));
    return QuditRegister(std::move(d));
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(dims_[k]);
    }
    return s + "]";
  }

  friend bool operator==(const QuditRegister& a, const QuditRegister& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

/// Basis label such as "110" (digits of a mixed-radix index).
inline std::string basis_label(std::span<const int> digits) {
  std::string s;
  for (int d : digits) s += static_cast<char>('0' + d);
  return s;
}

}  // namespace tritforge

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <regex>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tritforge/errors.hpp"
#include "tritforge/linalg.hpp"

namespace tritforge {

enum class HardwareFlag : std::uint8_t {
  /// Needs the 0-2 transition, i.e. a two-photon drive.
  kTwoPhoton = 1u << 0,
  /// Acts as exact identity for every non-firing control level, |2> included.
  kExclusive = 1u << 1,
  /// Controlled-qutrit gate beyond the conventional CNOT (driven at w12 or
  /// on a cyclic/phase structure); counts as an "active" two-qutrit gate.
  kActiveQ1Q2 = 1u << 2,
};

class HardwareFlags {
 public:
  constexpr HardwareFlags() = default;
  constexpr HardwareFlags(std::initializer_list<HardwareFlag> fs) {
    for (auto f : fs) bits_ |= static_cast<std::uint8_t>(f);
  }
  constexpr bool has(HardwareFlag f) const { return bits_ & static_cast<std::uint8_t>(f); }
  constexpr void set(HardwareFlag f) { bits_ |= static_cast<std::uint8_t>(f); }
  constexpr std::uint8_t bits() const { return bits_; }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    if (has(HardwareFlag::kTwoPhoton)) out.emplace_back("two_photon");
    if (has(HardwareFlag::kExclusive)) out.emplace_back("exclusive");
    if (has(HardwareFlag::kActiveQ1Q2)) out.emplace_back("active_q1q2");
    return out;
  }
  friend constexpr bool operator==(HardwareFlags, HardwareFlags) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// A named local gate with its matrix and cost metadata.
struct GateDef {
  std::string name;
  std::vector<int> local_dims;
  Unitary matrix;
  /// In CNOT-time units. Zero for single-site gates.
  double duration_weight = 0.0;
  HardwareFlags flags;

  GateDef() = default;
  GateDef(std::string n, std::vector<int> dims, Unitary u, HardwareFlags f = {})
      : name(std::move(n)), local_dims(std::move(dims)), matrix(std::move(u)), flags(f) {
    std::size_t d = 1;
    for (int x : local_dims) d *= static_cast<std::size_t>(x);
    if (local_dims.empty() || d != matrix.dim())
      throw EmbeddingError("gate " + name + ": matrix dimension " + std::to_string(matrix.dim()) +
                           " does not match local dims");
    duration_weight = local_dims.size() >= 2 ? 1.0 : 0.0;
  }

  std::size_t arity() const noexcept { return local_dims.size(); }
  bool is_two_site() const noexcept { return local_dims.size() == 2; }
};

enum class CyclicDirection { kPlus, kMinus };

namespace detail {

inline Matrix permutation_matrix(std::size_t dim, const std::function<std::size_t(std::size_t)>& f) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(f(c)), static_cast<Eigen::Index>(c)) = 1.0;
  return m;
}

inline void check_level(int l) {
  if (l < 0 || l > 2) throw InvalidSubspaceError("qutrit level " + std::to_string(l) + " out of range");
}

/// Shortest round-trip decimal form.
inline std::string format_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("invalid number '" + std::string(s) + "'");
  return x;
}

/// 9x9 block-diagonal gate: block `c` of the control is `blocks[c]`.
inline Matrix controlled_blocks(const Matrix& b0, const Matrix& b1, const Matrix& b2) {
  Matrix m = Matrix::Zero(9, 9);
  m.block(0, 0, 3, 3) = b0;
  m.block(3, 3, 3, 3) = b1;
  m.block(6, 6, 3, 3) = b2;
  return m;
}

inline Matrix controlled_on_level(int control_level, const Matrix& target) {
  const Matrix id = Matrix::Identity(3, 3);
  return controlled_blocks(control_level == 0 ? target : id, control_level == 1 ? target : id,
                           control_level == 2 ? target : id);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-qutrit gates

/// Pauli X in the |i>-|j> subspace, identity on the remaining level.
inline GateDef subspace_x(int i, int j) {
  detail::check_level(i);
  detail::check_level(j);
  if (i == j) throw InvalidSubspaceError("subspace levels must differ");
  const int lo = std::min(i, j), hi = std::max(i, j);
  auto m = detail::permutation_matrix(3, [&](std::size_t n) -> std::size_t {
    if (static_cast<int>(n) == lo) return static_cast<std::size_t>(hi);
    if (static_cast<int>(n) == hi) return static_cast<std::size_t>(lo);
    return n;
  });
  HardwareFlags f;
  if (lo == 0 && hi == 2) f.set(HardwareFlag::kTwoPhoton);
  return GateDef("X" + std::to_string(lo) + std::to_string(hi), {3}, Unitary(m), f);
}

/// X+ : |n> -> |n+1 mod 3>, X- : |n> -> |n-1 mod 3>.
inline Matrix cyclic_matrix(CyclicDirection dir) {
  const std::size_t shift = dir == CyclicDirection::kPlus ? 1 : 2;
  return detail::permutation_matrix(3, [&](std::size_t n) { return (n + shift) % 3; });
}

inline GateDef cyclic_x(CyclicDirection dir) {
  return GateDef(dir == CyclicDirection::kPlus ? "X+" : "X-", {3}, Unitary(cyclic_matrix(dir)));
}

/// (1/sqrt3) [[1,1,1],[1,w,w^-1],[1,w^-1,w]], w = e^{i 2pi/3}.
inline Matrix qutrit_hadamard_matrix() {
  Matrix h(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) h(j, k) = std::polar(1.0 / std::sqrt(3.0), 2.0 * kPi / 3.0 * ((j * k) % 3));
  return h;
}

inline GateDef qutrit_hadamard() { return GateDef("H3", {3}, Unitary(qutrit_hadamard_matrix())); }
inline GateDef qutrit_hadamard_dagger() {
  return GateDef("H3dg", {3}, Unitary(Matrix(qutrit_hadamard_matrix().adjoint())));
}

/// diag(1, w, w^2).
inline Matrix qutrit_z_matrix() {
  Matrix z = Matrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j) z(j, j) = std::polar(1.0, 2.0 * kPi / 3.0 * j);
  return z;
}

inline GateDef qutrit_z() { return GateDef("Z3", {3}, Unitary(qutrit_z_matrix())); }

/// Standard 2x2 Hadamard on the 01 subspace, identity on |2>.
inline GateDef qubit_hadamard_on_qutrit() {
  Matrix m = Matrix::Identity(3, 3);
  const double r = 1.0 / std::sqrt(2.0);
  m(0, 0) = r;
  m(0, 1) = r;
  m(1, 0) = r;
  m(1, 1) = -r;
  return GateDef("H01", {3}, Unitary(m));
}

/// cos(t/2) I - i sin(t/2) X on the 01 subspace, identity on |2>.
inline Matrix rx_matrix(double theta) {
  Matrix m = Matrix::Identity(3, 3);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  m(0, 0) = c;
  m(1, 1) = c;
  m(0, 1) = -kI * s;
  m(1, 0) = -kI * s;
  return m;
}

/// Bit-flip error rotation about X.
inline GateDef rx_error(double theta) {
  return GateDef("RX(" + detail::format_real(theta) + ")", {3}, Unitary(rx_matrix(theta)));
}

/// Phase-flip error rotation: H01 . RX(theta) . H01 (a Z-axis rotation on 01).
inline GateDef rz_error(double theta) {
  const Matrix h = qubit_hadamard_on_qutrit().matrix.matrix();
  return GateDef("RZ(" + detail::format_real(theta) + ")", {3}, Unitary(Matrix(h * rx_matrix(theta) * h)));
}

// ---------------------------------------------------------------------------
// Two-qutrit gates. The first site is the control.

/// sum_n |n><n| (x) Z^n.
inline GateDef controlled_phase() {
  const Matrix z = qutrit_z_matrix();
  return GateDef("CPHI", {3, 3},
                 Unitary(detail::controlled_blocks(Matrix::Identity(3, 3), z, z * z)),
                 {HardwareFlag::kActiveQ1Q2});
}

/// Which qutrit Hadamard sits on each side of CPHI, in matrix order
/// (I (x) after) . CPHI . (I (x) before).
struct PhaseSandwich {
  bool before_is_dagger;
  bool after_is_dagger;
};

namespace detail {

inline Matrix sum_permutation(int sign) {
  return permutation_matrix(9, [sign](std::size_t idx) {
    const int m = static_cast<int>(idx / 3), n = static_cast<int>(idx % 3);
    return static_cast<std::size_t>(3 * m + ((n + sign * m) % 3 + 3) % 3);
  });
}

inline Matrix sandwich_matrix(PhaseSandwich s) {
  const Matrix h = qutrit_hadamard_matrix();
  const Matrix hd = h.adjoint();
  const Matrix id = Matrix::Identity(3, 3);
  Matrix before = Eigen::kroneckerProduct(id, s.before_is_dagger ? hd : h);
  Matrix after = Eigen::kroneckerProduct(id, s.after_is_dagger ? hd : h);
  return after * controlled_phase().matrix.matrix() * before;
}

}  // namespace detail

/// Searches the four H/H^dagger placements around CPHI for one reproducing
/// CSUM (sign=+1) or CMIN (sign=-1). Throws if none matches.
inline PhaseSandwich find_sum_sandwich(int sign) {
  const Matrix target = detail::sum_permutation(sign);
  for (bool b : {false, true})
    for (bool a : {false, true}) {
      PhaseSandwich s{b, a};
      if (max_abs_diff(detail::sandwich_matrix(s), target) < 1e-12) return s;
    }
  throw ConstructionIntegrityError("no Hadamard sandwich of CPHI reproduces the sum gate");
}

/// CSUM = (I (x) H^dagger) CPHI (I (x) H); CMIN = (I (x) H) CPHI (I (x) H^dagger).
inline constexpr PhaseSandwich kCsumSandwich{false, true};
inline constexpr PhaseSandwich kCminSandwich{true, false};

namespace detail {

inline GateDef sum_gate(const char* name, PhaseSandwich s, int sign) {
  Matrix m = sandwich_matrix(s);
  if (max_abs_diff(m, sum_permutation(sign)) > 1e-12)
    throw ConstructionIntegrityError(std::string(name) + ": pinned Hadamard sandwich fails its truth table");
  return GateDef(name, {3, 3}, Unitary(std::move(m)), {HardwareFlag::kActiveQ1Q2});
}

}  // namespace detail

/// CSUM|m,n> = |m, n+m mod 3>, built from the pinned CPHI sandwich.
inline GateDef csum() { return detail::sum_gate("CSUM", kCsumSandwich, +1); }

/// CMIN|m,n> = |m, n-m mod 3>.
inline GateDef cmin() { return detail::sum_gate("CMIN", kCminSandwich, -1); }

/// Applies X_ij on the target iff the control is exactly at `control_level`.
inline GateDef controlled_subspace_x(int control_level, int i, int j) {
  detail::check_level(control_level);
  const GateDef x = subspace_x(i, j);
  HardwareFlags f{HardwareFlag::kExclusive};
  if (x.flags.has(HardwareFlag::kTwoPhoton)) f.set(HardwareFlag::kTwoPhoton);
  const std::string sub = x.name.substr(1);
  if (!(control_level == 1 && sub == "01")) f.set(HardwareFlag::kActiveQ1Q2);
  return GateDef("CX[" + std::to_string(control_level) + ";" + sub + "]", {3, 3},
                 Unitary(detail::controlled_on_level(control_level, x.matrix.matrix())), f);
}

/// Conventional CNOT, i.e. |1>-controlled X01.
inline GateDef cnot() { return controlled_subspace_x(1, 0, 1); }

/// Applies X+ or X- on the target iff the control is at `control_level`.
inline GateDef controlled_cyclic_x(int control_level, CyclicDirection dir) {
  detail::check_level(control_level);
  return GateDef("CX[" + std::to_string(control_level) + (dir == CyclicDirection::kPlus ? ";X+]" : ";X-]"),
                 {3, 3}, Unitary(detail::controlled_on_level(control_level, cyclic_matrix(dir))),
                 {HardwareFlag::kExclusive, HardwareFlag::kActiveQ1Q2});
}

/// |00>->|00>, |01>->i|10>, |10>->i|01>, |11>->|11>; identity wherever a site holds |2>.
inline GateDef iswap() {
  Matrix m = Matrix::Identity(9, 9);
  const Eigen::Index i01 = 1, i10 = 3;
  m(i01, i01) = 0.0;
  m(i10, i10) = 0.0;
  m(i10, i01) = kI;
  m(i01, i10) = kI;
  return GateDef("ISWAP", {3, 3}, Unitary(m));
}

/// Phase -1 on |control_level, 1>; diagonal.
inline GateDef controlled_z_on_level(int control_level) {
  if (control_level != 0 && control_level != 1)
    throw InvalidSubspaceError("controlled-Z control level must be 0 or 1");
  Matrix m = Matrix::Identity(9, 9);
  m(3 * control_level + 1, 3 * control_level + 1) = -1.0;
  return GateDef("CZ" + std::to_string(control_level), {3, 3}, Unitary(m));
}

/// Hardware CNOT that leaks a partial rotation RX(epsilon2) onto the target
/// when the control sits in |2>. epsilon2 = 0 is the exclusive CNOT.
inline GateDef imperfect_cnot(double epsilon2) {
  const Matrix x01 = subspace_x(0, 1).matrix.matrix();
  HardwareFlags f;
  if (epsilon2 == 0.0) f.set(HardwareFlag::kExclusive);
  return GateDef("CNOTeps(" + detail::format_real(epsilon2) + ")", {3, 3},
                 Unitary(detail::controlled_blocks(Matrix::Identity(3, 3), x01, rx_matrix(epsilon2))), f);
}

// ---------------------------------------------------------------------------
// Plain qubit gates for qubit-only reference circuits.

inline GateDef qubit_h() {
  Matrix m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return GateDef("H", {2}, Unitary(m));
}

inline GateDef qubit_t(bool dagger = false) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = std::polar(1.0, (dagger ? -1.0 : 1.0) * kPi / 4.0);
  return GateDef(dagger ? "Tdg" : "T", {2}, Unitary(m));
}

inline GateDef qubit_cnot() {
  auto m = detail::permutation_matrix(4, [](std::size_t i) { return i >= 2 ? (i ^ 1u) : i; });
  return GateDef("CNOT", {2, 2}, Unitary(m));
}

// ---------------------------------------------------------------------------

/// Reconstructs a gate from its stable name.
inline GateDef gate_from_name(const std::string& name) {
  static const std::map<std::string, std::function<GateDef()>> fixed = {
      {"X01", [] { return subspace_x(0, 1); }},
      {"X12", [] { return subspace_x(1, 2); }},
      {"X02", [] { return subspace_x(0, 2); }},
      {"X+", [] { return cyclic_x(CyclicDirection::kPlus); }},
      {"X-", [] { return cyclic_x(CyclicDirection::kMinus); }},
      {"H3", [] { return qutrit_hadamard(); }},
      {"H3dg", [] { return qutrit_hadamard_dagger(); }},
      {"Z3", [] { return qutrit_z(); }},
      {"H01", [] { return qubit_hadamard_on_qutrit(); }},
      {"CPHI", [] { return controlled_phase(); }},
      {"CSUM", [] { return csum(); }},
      {"CMIN", [] { return cmin(); }},
      {"ISWAP", [] { return iswap(); }},
      {"CZ0", [] { return controlled_z_on_level(0); }},
      {"CZ1", [] { return controlled_z_on_level(1); }},
      {"H", [] { return qubit_h(); }},
      {"T", [] { return qubit_t(false); }},
      {"Tdg", [] { return qubit_t(true); }},
      {"CNOT", [] { return qubit_cnot(); }},
  };
  if (auto it = fixed.find(name); it != fixed.end()) return it->second();

  static const std::regex cx_sub(R"(CX\[([0-2]);([0-2])([0-2])\])");
  static const std::regex cx_cyc(R"(CX\[([0-2]);X([+-])\])");
  static const std::regex param(R"((RX|RZ|CNOTeps)\((.+)\))");
  std::smatch m;
  if (std::regex_match(name, m, cx_sub))
    return controlled_subspace_x(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]));
  if (std::regex_match(name, m, cx_cyc))
    return controlled_cyclic_x(std::stoi(m[1]), m[2] == "+" ? CyclicDirection::kPlus : CyclicDirection::kMinus);
  if (std::regex_match(name, m, param)) {
    const double x = detail::parse_real(m[2].str());
    if (m[1] == "RX") return rx_error(x);
    if (m[1] == "RZ") return rz_error(x);
    return imperfect_cnot(x);
  }
  throw ParseError("unknown gate name '" + name + "'");
}

}  // namespace tritforge

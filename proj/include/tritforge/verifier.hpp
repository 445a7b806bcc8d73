#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tritforge/circuit.hpp"
#include "tritforge/config.hpp"
#include "tritforge/entry.hpp"
#include "tritforge/errors.hpp"
#include "tritforge/rng.hpp"
#include "tritforge/state.hpp"

namespace tritforge {

struct EquivalenceReport {
  bool equivalent = false;
  double global_phase = 0.0;
  double max_deviation = 0.0;
  double leakage_norm = 0.0;
  /// Smallest target purity seen (incomplete checks only).
  double min_purity = 1.0;
  /// Deviation per qubit-basis input label, in input order.
  std::vector<std::pair<std::string, double>> per_input_deviation;
  std::string detail;
};

struct TauReport {
  /// Control input label -> duration in CNOT units.
  std::vector<std::pair<std::string, double>> per_input;
  double tau_max = 0.0;

  double at(const std::string& label) const {
    for (const auto& [k, v] : per_input)
      if (k == label) return v;
    throw NotApplicableError("no tau entry for input " + label);
  }
};

struct TruthRow {
  std::vector<int> input;
  /// Empty when the output is superposed.
  std::optional<std::vector<int>> output;
  double phase = 0.0;
};

/// 2^(n+1)-dimensional permutation flipping the last qubit iff the first n are 1.
inline Unitary oracle_multi_controlled_x(std::size_t n) {
  if (n < 1) throw NotApplicableError("oracle needs at least one control");
  const std::size_t dim = std::size_t{1} << (n + 1);
  const std::size_t all_ones = dim - 2;  // 11..10
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t r = (c & ~std::size_t{1}) == all_ones ? (c ^ 1u) : c;
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1.0;
  }
  return Unitary(m);
}

namespace detail {

inline std::vector<std::vector<int>> qubit_patterns(std::size_t n) {
  std::vector<std::vector<int>> out;
  for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
    std::vector<int> bits(n);
    for (std::size_t k = 0; k < n; ++k) bits[k] = static_cast<int>((x >> (n - 1 - k)) & 1u);
    out.push_back(std::move(bits));
  }
  return out;
}

inline const RoleMap& require_roles(const Circuit& c) {
  if (!c.roles()) throw WrongCheckerError("circuit has no role map");
  const auto& r = *c.roles();
  if (r.controls.size() + 1 != c.reg().size())
    throw WrongCheckerError("every register site must carry a role");
  return r;
}

/// Full-register digits for control bits `ctrl` and target level `t`.
inline std::vector<int> place_roles(const RoleMap& r, std::size_t nsites, const std::vector<int>& ctrl, int t) {
  std::vector<int> d(nsites, 0);
  for (std::size_t k = 0; k < r.controls.size(); ++k) d[r.controls[k]] = ctrl[k];
  d[r.target] = t;
  return d;
}

inline double qubit_leak_norm(const StateVector& s) { return std::sqrt(leakage_population(s)); }

inline bool fires(const TargetBehavior& b, const std::vector<int>& ctrl) { return ctrl == b.firing_pattern; }

inline double behavior_phase(const TargetBehavior& b, const std::vector<int>& ctrl) {
  return b.phase_on_pattern && b.phase_on_pattern->first == ctrl ? b.phase_on_pattern->second : 0.0;
}

}  // namespace detail

/// Checks a complete circuit against a target behavior on every qubit basis
/// input, allowing one global phase common to all inputs.
inline EquivalenceReport check_behavior(const Circuit& circuit, const TargetBehavior& behavior,
                                        double tolerance = kDefaultTolerances.equivalence) {
  const auto& roles = detail::require_roles(circuit);
  const auto& reg = circuit.reg();
  if (behavior.firing_pattern.size() != roles.controls.size())
    throw WrongCheckerError("behavior control count does not match the role map");

  struct Column {
    std::string label;
    StateVector out;
    std::size_t expected_index;
    cplx expected_factor;
  };
  std::vector<Column> cols;
  for (const auto& ctrl : detail::qubit_patterns(roles.controls.size())) {
    for (int t : {0, 1}) {
      const auto in = detail::place_roles(roles, reg.size(), ctrl, t);
      const int t_out = detail::fires(behavior, ctrl) ? 1 - t : t;
      const auto expect = detail::place_roles(roles, reg.size(), ctrl, t_out);
      cols.push_back({basis_label(ctrl) + std::to_string(t), apply_circuit(circuit, basis_state(reg, in)),
                      reg.index_of(expect), std::polar(1.0, detail::behavior_phase(behavior, ctrl))});
    }
  }

  EquivalenceReport rep;
  std::optional<cplx> phase;
  for (const auto& c : cols) {
    const cplx a = c.out[c.expected_index] / c.expected_factor;
    if (std::abs(a) > 0.5) {
      phase = a / std::abs(a);
      break;
    }
  }
  if (!phase) {
    rep.detail = "no input lands on its expected output";
    rep.max_deviation = std::sqrt(2.0);
    phase = cplx{1.0, 0.0};
  }
  rep.global_phase = std::arg(*phase);

  std::string worst;
  double worst_dev = -1.0;
  for (const auto& c : cols) {
    Vector diff = c.out.amplitudes();
    diff(static_cast<Eigen::Index>(c.expected_index)) -= *phase * c.expected_factor;
    const double dev = diff.norm();
    rep.per_input_deviation.emplace_back(c.label, dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    rep.leakage_norm = std::max(rep.leakage_norm, detail::qubit_leak_norm(c.out));
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = c.label;
    }
  }
  rep.equivalent = rep.max_deviation < tolerance && rep.leakage_norm < tolerance;
  if (!rep.equivalent && rep.detail.empty()) rep.detail = "worst input |" + worst + ">";
  return rep;
}

/// Multi-controlled-X (Toffoli) equivalence on the qubit subspace.
inline EquivalenceReport toffoli_equivalence(const DecompositionEntry& entry,
                                             double tolerance = kDefaultTolerances.equivalence) {
  if (!entry.complete)
    throw WrongCheckerError(entry.id + " is incomplete; use incomplete_check");
  const auto& roles = detail::require_roles(entry.circuit);
  return check_behavior(entry.circuit, TargetBehavior::multi_controlled_x(roles.controls.size()), tolerance);
}

/// Checks a complete entry against its own declared behavior.
inline EquivalenceReport declared_behavior_check(const DecompositionEntry& entry,
                                                 double tolerance = kDefaultTolerances.equivalence) {
  if (!entry.complete)
    throw WrongCheckerError(entry.id + " is incomplete; use incomplete_check");
  return check_behavior(entry.circuit, entry.behavior, tolerance);
}

/// Random normalized qubit amplitudes (alpha, beta).
inline std::pair<cplx, cplx> random_qubit_state(SplitMix64& rng) {
  cplx a{rng.normal(), rng.normal()}, b{rng.normal(), rng.normal()};
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

/// Incomplete-variant check: the target ends in the oracle-predicted pure
/// state for every control pattern, over basis and 20 random target states.
/// Control sites may end anywhere, but must match the declared junk table
/// when one is given.
inline EquivalenceReport incomplete_check(const DecompositionEntry& entry,
                                          double tolerance = kDefaultTolerances.equivalence,
                                          std::uint64_t seed = 20210901, std::size_t random_states = 20) {
  if (entry.complete) throw WrongCheckerError(entry.id + " is complete; use toffoli_equivalence");
  const auto& circuit = entry.circuit;
  const auto& roles = detail::require_roles(circuit);
  const auto& reg = circuit.reg();
  const auto tsite = roles.target;
  if (reg.dim(tsite) != 3) throw WrongCheckerError("incomplete check expects a qutrit target");

  std::vector<std::pair<cplx, cplx>> targets = {{1.0, 0.0}, {0.0, 1.0}};
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < random_states; ++k) targets.push_back(random_qubit_state(rng));

  EquivalenceReport rep;
  rep.equivalent = true;
  for (const auto& ctrl : detail::qubit_patterns(roles.controls.size())) {
    double dev_pattern = 0.0;
    const std::vector<int>* junk = nullptr;
    for (const auto& [in, out] : entry.junk)
      if (in == ctrl) junk = &out;
    for (const auto& [alpha, beta] : targets) {
      const auto d0 = detail::place_roles(roles, reg.size(), ctrl, 0);
      const auto d1 = detail::place_roles(roles, reg.size(), ctrl, 1);
      Vector v = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
      v(static_cast<Eigen::Index>(reg.index_of(d0))) = alpha;
      v(static_cast<Eigen::Index>(reg.index_of(d1))) = beta;
      const auto out = apply_circuit(circuit, StateVector(reg, v));

      const auto rho = reduced_density(out, {tsite});
      Vector expect = Vector::Zero(3);
      const bool flip = detail::fires(entry.behavior, ctrl);
      expect(0) = flip ? beta : alpha;
      expect(1) = flip ? alpha : beta;
      const double dev = max_abs_diff(rho.matrix(), expect * expect.adjoint());
      const double pur = purity(rho);
      rep.min_purity = std::min(rep.min_purity, pur);
      dev_pattern = std::max(dev_pattern, dev);
      rep.leakage_norm = std::max(rep.leakage_norm, std::sqrt(std::max(0.0, rho(2, 2).real())));
      if (pur < 1.0 - tolerance) rep.equivalent = false;

      if (junk) {
        Vector cv = Vector::Zero(static_cast<Eigen::Index>(reg.sub(roles.controls).total_dim()));
        cv(static_cast<Eigen::Index>(reg.sub(roles.controls).index_of(*junk))) = 1.0;
        const double jd = max_abs_diff(reduced_density(out, roles.controls).matrix(), cv * cv.adjoint());
        dev_pattern = std::max(dev_pattern, jd);
      }
    }
    rep.per_input_deviation.emplace_back(basis_label(ctrl), dev_pattern);
    rep.max_deviation = std::max(rep.max_deviation, dev_pattern);
  }
  if (rep.max_deviation >= tolerance || rep.leakage_norm >= tolerance) rep.equivalent = false;
  if (!rep.equivalent) rep.detail = "target or junk mismatch";
  return rep;
}

/// Time Q2 (second control) spends in |2>, in CNOT units, per control input
/// with the target at |0>. Ops during which Q2 stays in |2> count their full
/// duration weight; ops that move Q2 into or out of |2> count half.
inline TauReport tau_metric(const DecompositionEntry& entry) {
  if (!entry.is_qutrit_based())
    throw NotApplicableError("tau metric applies to qutrit-based decompositions only (" + entry.id + ")");
  const auto& roles = detail::require_roles(entry.circuit);
  if (roles.controls.size() < 2) throw NotApplicableError("tau metric needs two controls");
  const auto q2 = roles.controls[1];
  const auto& reg = entry.circuit.reg();

  TauReport rep;
  for (const auto& ctrl : detail::qubit_patterns(roles.controls.size())) {
    auto state = basis_state(reg, detail::place_roles(roles, reg.size(), ctrl, 0));
    double tau = 0.0;
    bool in2 = level_populations(state, q2)[2] > 0.5;
    for (const auto& op : entry.circuit.ops()) {
      apply_op(state, op);
      const bool now2 = level_populations(state, q2)[2] > 0.5;
      if (in2 && now2)
        tau += op.gate.duration_weight;
      else if (in2 != now2)
        tau += 0.5 * op.gate.duration_weight;
      in2 = now2;
    }
    rep.per_input.emplace_back(basis_label(ctrl), tau);
    rep.tau_max = std::max(rep.tau_max, tau);
  }
  return rep;
}

/// Basis-in -> basis-out (with phase) for every full basis input.
inline std::vector<TruthRow> truth_table(const Circuit& circuit, double tol = kDefaultTolerances.basis_output) {
  const auto& reg = circuit.reg();
  std::vector<TruthRow> rows;
  rows.reserve(reg.total_dim());
  for (std::size_t i = 0; i < reg.total_dim(); ++i) {
    TruthRow row;
    row.input = reg.digits_of(i);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    const auto out = apply_circuit(circuit, StateVector(reg, v));
    Eigen::Index arg = 0;
    out.amplitudes().cwiseAbs().maxCoeff(&arg);
    const cplx a = out[static_cast<std::size_t>(arg)];
    if (std::abs(std::abs(a) - 1.0) < tol) {
      row.output = reg.digits_of(static_cast<std::size_t>(arg));
      row.phase = std::arg(a);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<TruthRow> truth_table(const DecompositionEntry& entry) { return truth_table(entry.circuit); }

}  // namespace tritforge

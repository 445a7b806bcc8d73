#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tritforge/catalog.hpp"
#include "tritforge/circuit.hpp"
#include "tritforge/errors.hpp"
#include "tritforge/gate.hpp"
#include "tritforge/rng.hpp"
#include "tritforge/state.hpp"

namespace tritforge::qec {

// Register layout |A1 D A2>.
inline constexpr std::size_t kA1 = 0, kData = 1, kA2 = 2;

enum class Basis { kBit, kPhase };
enum class AxisSchedule { kBit, kPhase, kAlternating };
enum class ErrorMode { kFixedAngles, kRandomSingle, kRandomIndependent };

inline std::string to_string(Basis b) { return b == Basis::kBit ? "bit" : "phase"; }
inline std::string to_string(AxisSchedule a) {
  switch (a) {
    case AxisSchedule::kBit: return "bit";
    case AxisSchedule::kPhase: return "phase";
    default: return "alternating";
  }
}
inline std::string to_string(ErrorMode m) {
  switch (m) {
    case ErrorMode::kFixedAngles: return "fixed_angles";
    case ErrorMode::kRandomSingle: return "random_single";
    default: return "random_independent";
  }
}

inline AxisSchedule axis_from_string(const std::string& s) {
  if (s == "bit") return AxisSchedule::kBit;
  if (s == "phase") return AxisSchedule::kPhase;
  if (s == "alternating") return AxisSchedule::kAlternating;
  throw ParseError("unknown axis schedule '" + s + "'");
}
inline ErrorMode mode_from_string(const std::string& s) {
  if (s == "fixed_angles" || s == "fixed") return ErrorMode::kFixedAngles;
  if (s == "random_single") return ErrorMode::kRandomSingle;
  if (s == "random_independent") return ErrorMode::kRandomIndependent;
  throw ParseError("unknown error mode '" + s + "'");
}

struct ErrorModel {
  ErrorMode mode = ErrorMode::kFixedAngles;
  /// Rotation angle per site of |A1 D A2>.
  std::array<double, 3> angles{0.0, 0.0, 0.0};
  AxisSchedule axis_schedule = AxisSchedule::kAlternating;
  double p_error = 0.0;
  std::uint64_t seed = 0;
  /// fixed_angles only: shift the angle triple by one site every cycle.
  bool rotate_site = false;

  void validate() const {
    for (double a : angles)
      if (!std::isfinite(a)) throw InvalidBudgetError("error angles must be finite");
    if (!(p_error >= 0.0 && p_error <= 1.0)) throw InvalidBudgetError("p_error must lie in [0, 1]");
  }

  Basis basis_for_cycle(std::size_t cycle) const {
    switch (axis_schedule) {
      case AxisSchedule::kBit: return Basis::kBit;
      case AxisSchedule::kPhase: return Basis::kPhase;
      default: return cycle % 2 == 0 ? Basis::kBit : Basis::kPhase;
    }
  }

  /// Angle applied to each site on `cycle`. Zero means no error there.
  std::array<double, 3> angles_for_cycle(std::size_t cycle) const {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    switch (mode) {
      case ErrorMode::kFixedAngles:
        for (std::size_t s = 0; s < 3; ++s) out[s] = angles[rotate_site ? (s + 3 - cycle % 3) % 3 : s];
        break;
      case ErrorMode::kRandomSingle: {
        auto rng = SplitMix64::substream(seed, {cycle, 3, 0});
        if (rng.uniform() < p_error) {
          const auto site = rng.below(3);
          out[site] = 2.0 * kPi * rng.uniform();
        }
        break;
      }
      case ErrorMode::kRandomIndependent:
        for (std::size_t s = 0; s < 3; ++s) {
          auto rng = SplitMix64::substream(seed, {cycle, s, 0});
          if (rng.uniform() < p_error) out[s] = 2.0 * kPi * rng.uniform();
        }
        break;
    }
    return out;
  }
};

struct ResetChannel {
  /// Probability that the reset leaves the excited population in |1>.
  double epsilon_reset = 0.0;
  double duration_ns = 280.0;

  void validate() const {
    if (!(epsilon_reset >= 0.0 && epsilon_reset <= 1.0)) throw InvalidBudgetError("epsilon_reset must lie in [0, 1]");
    if (!(duration_ns >= 0.0)) throw InvalidBudgetError("reset duration must be non-negative");
  }
};

/// Options for the correction step.
struct CorrectionOptions {
  /// Replace the central exclusive CNOT with imperfect_cnot(epsilon).
  std::optional<double> central_cnot_epsilon;
  /// Use A1 as the lifted control (decomposition Q2) instead of A2.
  bool lift_a1 = false;
  double entanglement_tolerance = 1e-9;
};

struct CycleRecord {
  std::size_t cycle = 0;
  Basis basis = Basis::kBit;
  std::vector<int> error_sites;
  std::vector<double> theta;
  double fidelity = 1.0;
  bool leakage_flag = false;
};

struct FidelityReport {
  std::size_t cycles = 0;
  std::vector<CycleRecord> records;
  std::vector<double> per_cycle_fidelity;
  double final_fidelity = 1.0;
  std::size_t leakage_events = 0;
  std::vector<std::string> warnings;

  double mean_fidelity() const {
    double s = 0;
    for (double f : per_cycle_fidelity) s += f;
    return per_cycle_fidelity.empty() ? 1.0 : s / static_cast<double>(per_cycle_fidelity.size());
  }
  double min_fidelity() const {
    double m = 1.0;
    for (double f : per_cycle_fidelity) m = std::min(m, f);
    return m;
  }
};

struct CycleDiagnostics {
  /// Ancilla amplitudes before reset, indexed |A1 A2> over 3x3 levels
  /// (only meaningful when the data is separable).
  DensityOperator ancilla_before_reset;
  double data_purity_before_reset = 1.0;
  bool reset_failed = false;
  std::vector<std::string> warnings;
};

inline const QuditRegister& code_register() {
  static const QuditRegister reg = QuditRegister::uniform(3, 3);
  return reg;
}

namespace detail {

inline void check_qubit_amplitudes(cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kDefaultTolerances.normalization)
    throw NormalizationError("|alpha|^2 + |beta|^2 must be 1");
}

inline void encoding_cnots(StateVector& s) {
  const auto cx = cnot();
  apply_op(s, Op{cx, {kData, kA1}});
  apply_op(s, Op{cx, {kData, kA2}});
}

inline void hadamard_all(StateVector& s) {
  const auto h = qubit_hadamard_on_qutrit();
  for (std::size_t site = 0; site < 3; ++site) apply_op(s, Op{h, {site}});
}

/// Site permutation taking the catalog's (Q1, Q2, Q3) onto the code register.
inline std::vector<std::size_t> role_placement(bool lift_a1) {
  return lift_a1 ? std::vector<std::size_t>{kA2, kA1, kData} : std::vector<std::size_t>{kA1, kA2, kData};
}

}  // namespace detail

/// alpha|000> + beta|111> on |A1 D A2>, via two CNOTs from the data.
inline StateVector encode(cplx alpha, cplx beta) {
  detail::check_qubit_amplitudes(alpha, beta);
  const auto& reg = code_register();
  Vector v = Vector::Zero(27);
  v(static_cast<Eigen::Index>(reg.index_of(std::vector<int>{0, 0, 0}))) = alpha;
  v(static_cast<Eigen::Index>(reg.index_of(std::vector<int>{0, 1, 0}))) = beta;
  StateVector s(reg, v);
  detail::encoding_cnots(s);
  return s;
}

/// Re-encodes a state whose ancillas were reset; in the phase basis the
/// three sites are then rotated by H01.
inline StateVector reencode(StateVector s, Basis basis) {
  detail::encoding_cnots(s);
  if (basis == Basis::kPhase) detail::hadamard_all(s);
  return s;
}

/// X-axis rotations (bit basis) or Z-axis rotations (phase basis).
inline StateVector inject_error(StateVector s, const std::array<double, 3>& angles, Basis basis) {
  for (std::size_t site = 0; site < 3; ++site) {
    if (angles[site] == 0.0) continue;
    apply_op(s, Op{basis == Basis::kBit ? rx_error(angles[site]) : rz_error(angles[site]), {site}});
  }
  return s;
}

inline StateVector inject_error(StateVector s, const ErrorModel& model, std::size_t cycle, Basis basis) {
  return inject_error(std::move(s), model.angles_for_cycle(cycle), basis);
}

/// The incomplete decomposition placed on the code register.
inline Circuit correction_circuit(const std::string& decomposition_id, const CorrectionOptions& opt = {}) {
  auto entry = incomplete(decomposition_id);
  Circuit c = entry.circuit;
  if (opt.central_cnot_epsilon) {
    const auto k = *entry.central_index;
    if (c.ops()[k].gate.name != cnot().name)
      throw NotApplicableError(decomposition_id + ": central gate is " + c.ops()[k].gate.name +
                               ", not an exclusive CNOT");
    c = c.with_op_replaced(k, imperfect_cnot(*opt.central_cnot_epsilon));
  }
  return c.relabeled(detail::role_placement(opt.lift_a1));
}

/// Pure-state reset of one site. Success (1 - epsilon) applies |0><j|;
/// failure applies |0><0|, |1><1|, |1><2|. The Kraus branch is drawn from `rng`.
inline StateVector ddr_reset(StateVector s, std::size_t site, const ResetChannel& ch, SplitMix64& rng,
                             bool* failed = nullptr) {
  ch.validate();
  const bool fail = ch.epsilon_reset > 0.0 && rng.uniform() < ch.epsilon_reset;
  if (failed) *failed = fail;
  std::array<Matrix, 3> kraus;
  for (auto& k : kraus) k = Matrix::Zero(3, 3);
  if (!fail) {
    for (int j = 0; j < 3; ++j) kraus[static_cast<std::size_t>(j)](0, j) = 1.0;
  } else {
    kraus[0](0, 0) = 1.0;
    kraus[1](1, 1) = 1.0;
    kraus[2](1, 2) = 1.0;
  }
  std::array<Vector, 3> branches;
  std::array<double, 3> weights{};
  const std::array<std::size_t, 1> sites{site};
  for (std::size_t b = 0; b < 3; ++b) {
    branches[b] = s.amplitudes();
    apply_local(branches[b], s.reg(), kraus[b], sites);
    weights[b] = branches[b].squaredNorm();
  }
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = 0;
  for (std::size_t b = 0; b < 3; ++b) {
    if (weights[b] <= 0.0) continue;
    pick = b;
    acc += weights[b];
    if (u < acc) break;
  }
  return StateVector::normalized(s.reg(), branches[pick]);
}

/// Exact reset channel on a density operator over any register.
inline DensityOperator ddr_reset_channel(const DensityOperator& rho, const QuditRegister& reg, std::size_t site,
                                         const ResetChannel& ch) {
  ch.validate();
  if (reg.dim(site) != 3) throw EmbeddingError("reset acts on a qutrit site");
  if (rho.dim() != reg.total_dim()) throw EmbeddingError("density operator does not match the register");
  const double e = ch.epsilon_reset;
  std::vector<std::pair<double, Matrix>> kraus;
  for (int j = 0; j < 3; ++j) {
    Matrix k = Matrix::Zero(3, 3);
    k(0, j) = 1.0;
    kraus.emplace_back(1.0 - e, k);
  }
  for (auto [r, c] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{1, 2}}) {
    Matrix k = Matrix::Zero(3, 3);
    k(r, c) = 1.0;
    kraus.emplace_back(e, k);
  }
  const std::array<std::size_t, 1> sites{site};
  const auto n = static_cast<Eigen::Index>(reg.total_dim());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [w, k] : kraus) {
    if (w == 0.0) continue;
    Matrix m = rho.matrix();
    apply_local_density(m, reg, k, sites);
    out += w * m;
  }
  return DensityOperator(out);
}

namespace detail {

inline CycleDiagnostics diagnose(const DensityOperator& ancillas, const DensityOperator& data, double tol) {
  CycleDiagnostics diag;
  diag.ancilla_before_reset = ancillas;
  diag.data_purity_before_reset = purity(data);
  if (diag.data_purity_before_reset < 1.0 - tol)
    diag.warnings.push_back("entangled reset: data purity " +
                            tritforge::detail::format_real(diag.data_purity_before_reset) +
                            " before resetting the ancillas");
  return diag;
}

}  // namespace detail

/// Undo the basis change, decode, apply the prebuilt correction circuit and
/// reset both ancillas. Reset branches come from substreams of (seed, cycle).
inline std::pair<StateVector, CycleDiagnostics> correct_cycle(StateVector s, const Circuit& correction,
                                                              const ResetChannel& reset, Basis basis,
                                                              std::uint64_t seed = 0, std::size_t cycle = 0,
                                                              double entanglement_tolerance = 1e-9) {
  if (!(s.reg() == code_register())) throw InvalidCircuitError("correction expects the [3,3,3] code register");
  if (basis == Basis::kPhase) detail::hadamard_all(s);
  detail::encoding_cnots(s);
  s = apply_circuit(correction, s);

  auto diag = detail::diagnose(reduced_density(s, {kA1, kA2}), reduced_density(s, {kData}), entanglement_tolerance);
  for (auto site : {kA1, kA2}) {
    auto rng = SplitMix64::substream(seed, {cycle, site, 1});
    bool failed = false;
    s = ddr_reset(std::move(s), site, reset, rng, &failed);
    diag.reset_failed = diag.reset_failed || failed;
  }
  return {std::move(s), std::move(diag)};
}

inline std::pair<StateVector, CycleDiagnostics> correct_cycle(StateVector s, const std::string& decomposition_id,
                                                              const ResetChannel& reset, Basis basis,
                                                              std::uint64_t seed = 0, std::size_t cycle = 0,
                                                              const CorrectionOptions& opt = {}) {
  return correct_cycle(std::move(s), correction_circuit(decomposition_id, opt), reset, basis, seed, cycle,
                       opt.entanglement_tolerance);
}

/// Fidelity of the data site with alpha|0> + beta|1>.
inline double data_fidelity(const StateVector& s, cplx alpha, cplx beta) {
  Vector psi = Vector::Zero(3);
  psi(0) = alpha;
  psi(1) = beta;
  return std::clamp(fidelity(reduced_density(s, {kData}), psi), 0.0, 1.0);
}

struct ProtocolOptions {
  CorrectionOptions correction;
  /// Evolve the density operator through the exact reset channel instead of
  /// sampling reset branches.
  bool channel_mode = false;
  /// Population outside |0> on an ancilla after reset that counts as leakage.
  double leakage_threshold = 1e-9;
};

/// One full cycle before the reset, starting from reset ancillas:
/// encode, basis change, errors, basis change back, decode, correction.
inline Circuit cycle_circuit(Basis basis, const std::array<double, 3>& angles, const Circuit& correction) {
  Circuit c(code_register());
  const auto cx = cnot(), h = qubit_hadamard_on_qutrit();
  c.add(cx, {kData, kA1}).add(cx, {kData, kA2});
  if (basis == Basis::kPhase)
    for (std::size_t s = 0; s < 3; ++s) c.add(h, {s});
  for (std::size_t s = 0; s < 3; ++s)
    if (angles[s] != 0.0) c.add(basis == Basis::kBit ? rx_error(angles[s]) : rz_error(angles[s]), {s});
  if (basis == Basis::kPhase)
    for (std::size_t s = 0; s < 3; ++s) c.add(h, {s});
  c.add(cx, {kData, kA1}).add(cx, {kData, kA2});
  for (const auto& op : correction.ops()) c.add(op.gate, op.sites);
  return c;
}

namespace detail {

inline CycleRecord make_record(std::size_t k, Basis basis, const std::array<double, 3>& angles) {
  CycleRecord rec;
  rec.cycle = k;
  rec.basis = basis;
  for (std::size_t site = 0; site < 3; ++site)
    if (angles[site] != 0.0) {
      rec.error_sites.push_back(static_cast<int>(site));
      rec.theta.push_back(angles[site]);
    }
  return rec;
}

}  // namespace detail

/// Starts from |0>|psi>|0>; every cycle encodes, suffers the model's errors,
/// is corrected and has its ancillas reset. Records the data fidelity.
inline FidelityReport run_protocol(cplx alpha, cplx beta, std::size_t cycles, const std::string& decomposition_id,
                                   const ErrorModel& model, const ResetChannel& reset,
                                   const ProtocolOptions& opt = {}) {
  if (cycles < 1) throw InvalidBudgetError("protocol needs at least one cycle");
  model.validate();
  reset.validate();
  detail::check_qubit_amplitudes(alpha, beta);
  const Circuit correction = correction_circuit(decomposition_id, opt.correction);
  const auto& reg = code_register();

  Vector psi = Vector::Zero(3);
  psi(0) = alpha;
  psi(1) = beta;
  Vector start = Vector::Zero(27);
  start(static_cast<Eigen::Index>(reg.index_of(std::vector<int>{0, 0, 0}))) = alpha;
  start(static_cast<Eigen::Index>(reg.index_of(std::vector<int>{0, 1, 0}))) = beta;
  StateVector s(reg, start);
  Matrix rho = start * start.adjoint();

  FidelityReport rep;
  rep.cycles = cycles;
  for (std::size_t k = 0; k < cycles; ++k) {
    const Basis basis = model.basis_for_cycle(k);
    const auto angles = model.angles_for_cycle(k);
    const auto cyc = cycle_circuit(basis, angles, correction);
    auto rec = detail::make_record(k, basis, angles);
    std::vector<std::string> warnings;
    std::array<double, 2> excited{};

    if (!opt.channel_mode) {
      s = apply_circuit(cyc, s);
      auto diag = detail::diagnose(reduced_density(s, {kA1, kA2}), reduced_density(s, {kData}),
                                   opt.correction.entanglement_tolerance);
      warnings = std::move(diag.warnings);
      for (auto site : {kA1, kA2}) {
        auto rng = SplitMix64::substream(model.seed, {k, site, 1});
        s = ddr_reset(std::move(s), site, reset, rng);
      }
      rec.fidelity = std::clamp(fidelity(reduced_density(s, {kData}), psi), 0.0, 1.0);
      excited = {1.0 - level_populations(s, kA1)[0], 1.0 - level_populations(s, kA2)[0]};
    } else {
      for (const auto& op : cyc.ops()) apply_local_density(rho, reg, op.gate.matrix.matrix(), op.sites);
      auto diag = detail::diagnose(reduced_density(rho, reg, {kA1, kA2}), reduced_density(rho, reg, {kData}),
                                   opt.correction.entanglement_tolerance);
      warnings = std::move(diag.warnings);
      for (auto site : {kA1, kA2}) rho = ddr_reset_channel(DensityOperator(rho), reg, site, reset).matrix();
      rec.fidelity = std::clamp(fidelity(reduced_density(rho, reg, {kData}), psi), 0.0, 1.0);
      excited = {1.0 - reduced_density(rho, reg, {kA1})(0, 0).real(),
                 1.0 - reduced_density(rho, reg, {kA2})(0, 0).real()};
    }
    rec.leakage_flag = excited[0] > opt.leakage_threshold || excited[1] > opt.leakage_threshold;
    if (rec.leakage_flag) ++rep.leakage_events;
    for (auto& w : warnings) rep.warnings.push_back("cycle " + std::to_string(k) + ": " + w);
    rep.per_cycle_fidelity.push_back(rec.fidelity);
    rep.records.push_back(std::move(rec));
  }
  rep.final_fidelity = rep.per_cycle_fidelity.back();
  return rep;
}

/// Closed-form states for one rotation error of angle theta on `site`, in
/// the bit basis, for data alpha|0> + beta|1>.
struct StageAmplitudes {
  Vector post_error;
  Vector post_decode;
  /// After an ideal Toffoli (controls A1, A2; target D).
  Vector post_toffoli;
  /// Ancilla amplitudes after the Toffoli, keyed by |A1 A2>.
  std::map<std::string, cplx> ancilla;
};

inline StageAmplitudes analytic_amplitudes(double theta, std::size_t site = kData, cplx alpha = 1.0,
                                           cplx beta = 0.0) {
  if (site > 2) throw EmbeddingError("error site must be 0, 1 or 2");
  const auto& reg = code_register();
  const cplx c = std::cos(theta / 2), ms = -kI * std::sin(theta / 2);
  auto ket = [&](int a1, int d, int a2) {
    Vector v = Vector::Zero(27);
    v(static_cast<Eigen::Index>(reg.index_of(std::vector<int>{a1, d, a2}))) = 1.0;
    return v;
  };
  const std::array<int, 3> e{site == kA1 ? 1 : 0, site == kData ? 1 : 0, site == kA2 ? 1 : 0};

  StageAmplitudes out;
  // alpha(c|000> - i s|e>) + beta(c|111> - i s|111 xor e>)
  out.post_error = alpha * (c * ket(0, 0, 0) + ms * ket(e[0], e[1], e[2])) +
                   beta * (c * ket(1, 1, 1) + ms * ket(1 - e[0], 1 - e[1], 1 - e[2]));
  // Syndrome on the ancillas: A1 -> 10, A2 -> 01, D -> 11 (and D's value flipped).
  const int s1 = e[0] | e[1], s2 = e[2] | e[1];
  const bool flip = e[1] == 1;
  out.post_decode = c * (alpha * ket(0, 0, 0) + beta * ket(0, 1, 0)) +
                    ms * (alpha * ket(s1, flip ? 1 : 0, s2) + beta * ket(s1, flip ? 0 : 1, s2));
  out.post_toffoli = c * (alpha * ket(0, 0, 0) + beta * ket(0, 1, 0)) + ms * (alpha * ket(s1, 0, s2) + beta * ket(s1, 1, s2));
  out.ancilla = {{"00", c}, {"01", 0.0}, {"10", 0.0}, {"11", 0.0}};
  out.ancilla[std::to_string(s1) + std::to_string(s2)] += ms;
  return out;
}

/// Closed-form state after the incomplete decomposition: the Toffoli stage
/// with each ancilla pattern moved through the entry's junk table.
inline Vector relabel_through_junk(const Vector& post_toffoli, const JunkTable& junk, bool lift_a1 = false) {
  const auto& reg = code_register();
  Vector out = Vector::Zero(27);
  for (std::size_t i = 0; i < 27; ++i) {
    const cplx a = post_toffoli(static_cast<Eigen::Index>(i));
    if (a == cplx{}) continue;
    auto d = reg.digits_of(i);
    // Control order in the catalog is (Q1, Q2).
    std::vector<int> ctrl = lift_a1 ? std::vector<int>{d[kA2], d[kA1]} : std::vector<int>{d[kA1], d[kA2]};
    for (const auto& [in, o] : junk)
      if (in == ctrl) {
        ctrl = o;
        break;
      }
    if (lift_a1) {
      d[kA2] = ctrl[0];
      d[kA1] = ctrl[1];
    } else {
      d[kA1] = ctrl[0];
      d[kA2] = ctrl[1];
    }
    out(static_cast<Eigen::Index>(reg.index_of(d))) += a;
  }
  return out;
}

/// Plain key=value configuration (one per line, '#' comments).
struct QecConfig {
  std::size_t cycles = 10;
  std::string decomposition = "B3";
  ErrorModel model;
  ResetChannel reset;
  std::optional<double> central_cnot_epsilon;
  bool lift_a1 = false;
  bool channel_mode = false;
  cplx alpha = 1.0 / std::sqrt(2.0);
  cplx beta = 1.0 / std::sqrt(2.0);

  void set(const std::string& key, const std::string& value);
};

namespace detail {

inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tritforge::detail::parse_real(tok));
  return out;
}

inline bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ParseError("expected a boolean, got '" + v + "'");
}

}  // namespace detail

/// theta: one value (site A1) or three comma-separated values.
inline std::array<double, 3> theta_triple(const std::string& value) {
  const auto t = detail::parse_real_list(value);
  if (t.size() == 1) return {t[0], 0.0, 0.0};
  if (t.size() == 3) return {t[0], t[1], t[2]};
  throw ParseError("theta takes one or three values");
}

inline void QecConfig::set(const std::string& key, const std::string& value) {
  using tritforge::detail::parse_real;
  if (key == "cycles") {
    cycles = static_cast<std::size_t>(std::stoull(value));
  } else if (key == "decomposition") {
    decomposition = value;
  } else if (key == "mode") {
    model.mode = mode_from_string(value);
  } else if (key == "theta") {
    model.angles = theta_triple(value);
  } else if (key == "theta1" || key == "theta2" || key == "theta3") {
    model.angles[static_cast<std::size_t>(key.back() - '1')] = parse_real(value);
  } else if (key == "axis") {
    model.axis_schedule = axis_from_string(value);
  } else if (key == "p_error") {
    model.p_error = parse_real(value);
    if (model.mode == ErrorMode::kFixedAngles) model.mode = ErrorMode::kRandomSingle;
  } else if (key == "seed") {
    model.seed = std::stoull(value);
  } else if (key == "rotate_site") {
    model.rotate_site = detail::parse_bool(value);
  } else if (key == "epsilon_reset") {
    reset.epsilon_reset = parse_real(value);
  } else if (key == "reset_ns") {
    reset.duration_ns = parse_real(value);
  } else if (key == "epsilon_cnot") {
    central_cnot_epsilon = parse_real(value);
  } else if (key == "lift_a1") {
    lift_a1 = detail::parse_bool(value);
  } else if (key == "channel_mode") {
    channel_mode = detail::parse_bool(value);
  } else if (key == "alpha") {
    alpha = parse_real(value);
  } else if (key == "beta") {
    beta = parse_real(value);
  } else {
    throw ParseError("unknown qec config key '" + key + "'");
  }
}

inline QecConfig parse_qec_config(const std::string& text, QecConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    try {
      base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(no) + ": " + e.what());
    }
  }
  return base;
}

inline FidelityReport run_protocol(const QecConfig& cfg) {
  ProtocolOptions opt;
  opt.correction.central_cnot_epsilon = cfg.central_cnot_epsilon;
  opt.correction.lift_a1 = cfg.lift_a1;
  opt.channel_mode = cfg.channel_mode;
  const double n = std::sqrt(std::norm(cfg.alpha) + std::norm(cfg.beta));
  if (n == 0.0) throw NormalizationError("data amplitudes are both zero");
  return run_protocol(cfg.alpha / n, cfg.beta / n, cfg.cycles, cfg.decomposition, cfg.model, cfg.reset, opt);
}

}  // namespace tritforge::qec

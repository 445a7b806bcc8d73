#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tritforge/errors.hpp"

namespace tritforge {

struct TimingComponent {
  std::string name;
  double duration_ns = 0.0;
  bool relevant = true;
  friend bool operator==(const TimingComponent&, const TimingComponent&) = default;
};

struct TimingBudget {
  std::string label;
  std::vector<TimingComponent> components;
  double total_ns = 0.0;
  std::string overlap_note;

  double component(const std::string& name) const {
    for (const auto& c : components)
      if (c.name == name) return c.duration_ns;
    throw InvalidBudgetError("no component named '" + name + "'");
  }
  friend bool operator==(const TimingBudget&, const TimingBudget&) = default;
};

namespace detail {
inline void require_nonnegative(const std::string& name, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidBudgetError(name + " must be a finite non-negative duration");
}
}  // namespace detail

/// Measurement-free cycle with the incomplete B3 Toffoli: one single-qutrit
/// slot, the Q1-Q2 two-qutrit gate, the exclusive CNOT, and the reset.
inline TimingBudget mf_budget(double single_gate_ns = 30, double two_qutrit_ns = 90, double exclusive_cnot_ns = 125,
                              double reset_ns = 280) {
  detail::require_nonnegative("single_gate_ns", single_gate_ns);
  detail::require_nonnegative("two_qutrit_ns", two_qutrit_ns);
  detail::require_nonnegative("exclusive_cnot_ns", exclusive_cnot_ns);
  detail::require_nonnegative("reset_ns", reset_ns);
  TimingBudget b;
  b.label = "measurement-free";
  b.components = {
      {"Latency (cable + electronics)", 0, false},
      {"Kernel integration", 0, false},
      {"Resonator emptying", 0, false},
      {"Branch determination", 0, false},
      {"Single-qubit/qutrit gate", single_gate_ns, true},
      {"Two-qutrit gate (Q1-Q2)", two_qutrit_ns, true},
      {"Exclusive CNOT gate (Q2-Q3)", exclusive_cnot_ns, true},
      {"Double drive qutrit reset", reset_ns, true},
  };
  for (const auto& c : b.components)
    if (c.relevant) b.total_ns += c.duration_ns;
  b.overlap_note = "sequential: total is the plain sum of relevant rows";
  return b;
}

inline constexpr double kMeasurementBasedTotalNs = 1400.0;

/// Measurement-based reference. The total is fixed at 1400 ns, not
/// the sum of the rows, since integration and branch determination overlap.
inline TimingBudget mb_budget() {
  TimingBudget b;
  b.label = "measurement-based";
  b.components = {
      {"Latency (cable + electronics)", 160, true},
      {"Kernel integration", 320, true},
      {"Resonator emptying", 260, true},
      {"Branch determination", 420, true},
      {"Single-qubit/qutrit gate", 30, true},
      {"Two-qutrit gate (Q1-Q2)", 0, false},
      {"Exclusive CNOT gate (Q2-Q3)", 0, false},
      {"Double drive qutrit reset", 0, false},
      {"Cycle multiplicity", 2, true},
  };
  b.total_ns = kMeasurementBasedTotalNs;
  b.overlap_note =
      "total pinned at 1400 ns: sizeable overlap between the kernel integration and the branch "
      "determination times, cycle multiplicity 2";
  return b;
}

/// Naive one-pass sum of the duration rows (multiplicity excluded).
inline double naive_sum_ns(const TimingBudget& b) {
  double s = 0;
  for (const auto& c : b.components)
    if (c.relevant && c.name != "Cycle multiplicity") s += c.duration_ns;
  return s;
}

/// Cycles per microsecond.
inline double repetition_rate(const TimingBudget& b) {
  if (!(b.total_ns > 0.0)) throw InvalidBudgetError("repetition rate needs a positive total");
  return 1000.0 / b.total_ns;
}

inline double speedup(const TimingBudget& mb, const TimingBudget& mf) {
  if (!(mf.total_ns > 0.0)) throw InvalidBudgetError("speedup needs a positive measurement-free total");
  return mb.total_ns / mf.total_ns;
}

inline double speedup() { return speedup(mb_budget(), mf_budget()); }

}  // namespace tritforge

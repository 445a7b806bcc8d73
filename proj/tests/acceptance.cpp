// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tritforge/cli.hpp"
#include "tritforge/tritforge.hpp"

using namespace tritforge;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

const std::vector<std::string> kToffoliIds = {"A1", "A2", "B1", "B2", "B3", "C1", "C2",
                                              "C3", "D1", "D2", "D3", "ISWAP", "REF10CX"};
const std::vector<std::string> kQutritIds = {"A1", "A2", "B1", "B2", "B3", "C1",
                                             "C2", "C3", "D1", "D1S", "D2", "D3"};
const std::vector<std::string> kIncompleteIds = {"A1", "A2", "B1", "B2", "B3", "C1",
                                                 "C2", "C3", "D1", "D2", "D3"};

Outcome catalog_correctness() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_dev = 0, worst_leak = 0;
  for (const auto& id : kToffoliIds) {
    const auto r = toffoli_equivalence(build(id));
    worst_dev = std::max(worst_dev, r.max_deviation);
    worst_leak = std::max(worst_leak, r.leakage_norm);
    o.require(r.equivalent && r.max_deviation < 1e-10 && r.leakage_norm < 1e-10, id + " not Toffoli");
  }
  const auto d1s = build("D1S");
  o.require(!toffoli_equivalence(d1s).equivalent, "D1S passes as Toffoli");
  o.require(declared_behavior_check(d1s).equivalent && d1s.behavior.firing_pattern == std::vector<int>{1, 0},
            "D1S is not the |10>-conditioned NOT");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + fmt(t) + " s");
  o.detail = "13 Toffoli entries, max dev " + fmt(worst_dev) + ", max leak " + fmt(worst_leak) + ", D1S = |10>-NOT, " +
             fmt(t) + " s" + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome gate_counts() {
  Outcome o;
  for (const auto& id : {"A1", "B1", "C1"})
    o.require(build(id).circuit.two_site_count() == 3, std::string(id) + " two-site count");
  for (const auto& id : {"A2", "B2", "C2"}) {
    const auto c = build(id).circuit;
    o.require(c.count("CX[1;01]") == 3 && c.two_site_count() == 3, std::string(id) + " CNOT count");
  }
  o.require(build("D2").circuit.two_site_count() == 5, "D2 count");
  o.require(build("D3").circuit.two_site_count() == 3, "D3 count");
  for (const auto& id : {"A1", "A2", "B1", "B2", "B3", "C1", "C2", "C3"})
    o.require(incomplete(id).circuit.two_site_count() == 2, std::string(id) + " incomplete count");
  const auto ref = build("REF10CX").circuit;
  o.require(ref.count("CNOT") == 10, "REF10CX CNOTs " + std::to_string(ref.count("CNOT")));
  o.require(ref.single_site_count() == 9, "REF10CX singles " + std::to_string(ref.single_site_count()));
  o.require(ref.depth() == 15, "REF10CX depth " + std::to_string(ref.depth()));
  if (o.pass) o.detail = "A1/B1/C1 3, A2/B2/C2 3 CNOTs, D2 5, D3 3, incomplete 2, REF10CX 10/9/15";
  return o;
}

Outcome incomplete_correctness() {
  Outcome o;
  double min_purity = 1.0, worst = 0.0;
  for (const auto& id : kIncompleteIds) {
    const auto r = incomplete_check(incomplete(id), kDefaultTolerances.equivalence, 20210901, 20);
    min_purity = std::min(min_purity, r.min_purity);
    worst = std::max(worst, r.max_deviation);
    o.require(r.equivalent && r.min_purity >= 1.0 - 1e-9, id + ": " + r.detail);
  }
  o.detail = std::to_string(kIncompleteIds.size()) + " incomplete entries x 22 target states, min purity " +
             fmt(min_purity) + ", max dev " + fmt(worst) + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome n_controlled_scaling() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int n = 2; n <= 5; ++n) {
    const auto e = n_controlled(n);
    const auto r = toffoli_equivalence(e);
    worst = std::max(worst, r.max_deviation);
    o.require(r.equivalent && r.max_deviation < 1e-10, "n=" + std::to_string(n) + " not equivalent");
    o.require(e.circuit.two_site_count() == static_cast<std::size_t>(2 * n - 1), "n=" + std::to_string(n) + " count");
  }
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime " + fmt(t) + " s");
  o.detail = "n=2..5, counts 3/5/7/9, max dev " + fmt(worst) + ", " + fmt(t) + " s" + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome qec_stage_oracle() {
  using namespace tritforge::qec;
  Outcome o;
  const cplx a{0.6, 0.1};
  const cplx b = std::sqrt(1.0 - std::norm(a));
  const auto corr = correction_circuit("B3");
  const auto junk = incomplete("B3").junk;
  double worst = 0;
  for (int k = 0; k < 32; ++k) {
    const double th = 2 * kPi * k / 32;
    const auto an = analytic_amplitudes(th, kData, a, b);
    auto s = inject_error(encode(a, b), {0, th, 0}, Basis::kBit);
    worst = std::max(worst, (s.amplitudes() - an.post_error).cwiseAbs().maxCoeff());
    Circuit dec(code_register());
    dec.add(cnot(), {kData, kA1}).add(cnot(), {kData, kA2});
    s = apply_circuit(dec, s);
    worst = std::max(worst, (s.amplitudes() - an.post_decode).cwiseAbs().maxCoeff());
    s = apply_circuit(corr, s);
    worst = std::max(worst, (s.amplitudes() - relabel_through_junk(an.post_toffoli, junk)).cwiseAbs().maxCoeff());
  }
  o.require(worst < 1e-10, "theta2 sweep deviation " + fmt(worst));

  // Single errors on A1 / A2. Ancilla kets are written |A2 A1>, so an A1 error
  // reads |01> and an A2 error |10>. The complete Toffoli must give exactly
  // that; the incomplete one gives it up to its junk relabeling.
  const auto full = build("B3").circuit.relabeled(qec::detail::role_placement(false));
  auto pattern_index = [](std::vector<int> ctrl, const JunkTable* jt) {
    if (jt)
      for (const auto& [in, out] : *jt)
        if (in == ctrl) {
          ctrl = out;
          break;
        }
    return static_cast<Eigen::Index>(ctrl[1] * 3 + ctrl[0]);
  };
  Vector psi = Vector::Zero(3);
  psi(0) = a;
  psi(1) = b;
  double worst_anc = 0;
  for (std::size_t site : {kA1, kA2}) {
    const std::vector<int> flag = site == kA1 ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
    for (const JunkTable* jt : {static_cast<const JunkTable*>(nullptr), &junk}) {
      const Circuit& c = jt ? corr : full;
      for (int k = 0; k < 32; ++k) {
        const double th = 2 * kPi * k / 32;
        std::array<double, 3> ang{0, 0, 0};
        ang[site] = th;
        Circuit pre(code_register());
        pre.add(cnot(), {kData, kA1}).add(cnot(), {kData, kA2});
        const auto out = apply_circuit(c, apply_circuit(pre, inject_error(encode(a, b), ang, Basis::kBit)));
        Vector phi = Vector::Zero(9);
        phi(pattern_index({0, 0}, jt)) += std::cos(th / 2);
        phi(pattern_index(flag, jt)) += -kI * std::sin(th / 2);
        worst_anc = std::max(worst_anc, max_abs_diff(reduced_density(out, {kA2, kA1}).matrix(), phi * phi.adjoint()));
        worst_anc = std::max(worst_anc, 1.0 - fidelity(reduced_density(out, {kData}), psi));
      }
    }
  }
  o.require(worst_anc < 1e-10, "theta1/theta3 ancilla deviation " + fmt(worst_anc));
  o.detail = "32-point theta2 sweep, 3 stages, max dev " + fmt(worst) + "; theta1/theta3 ancilla patterns (complete and incomplete) dev " +
             fmt(worst_anc) + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome single_error_perfection() {
  using namespace tritforge::qec;
  Outcome o;
  const cplx a{0.6, 0.1};
  const cplx b = std::sqrt(1.0 - std::norm(a));
  double worst = 0;
  for (std::size_t start = 0; start < 3; ++start)
    for (double th : {0.3, 1.0, kPi / 2, 2.5, kPi, 5.0}) {
      ErrorModel m;
      m.angles = {0, 0, 0};
      m.angles[start] = th;
      m.rotate_site = true;
      const auto r = run_protocol(a, b, 10, "B3", m, ResetChannel{});
      for (double f : r.per_cycle_fidelity) worst = std::max(worst, std::abs(1.0 - f));
    }
  o.require(worst < 1e-9, "ideal fidelity deviation " + fmt(worst));

  double sum = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    ErrorModel m;
    m.mode = ErrorMode::kRandomSingle;
    m.p_error = 1.0;
    m.seed = t;
    sum += run_protocol(a, b, 10, "B3", m, ResetChannel{0.01}).mean_fidelity();
  }
  const double mean = sum / 1000;
  o.require(mean >= 0.99, "mean fidelity " + fmt(mean));
  o.detail = "18 ten-cycle runs, max |1-F| " + fmt(worst) + "; epsilon_reset=0.01 mean over 1000 trials " + fmt(mean) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome reset_totality() {
  Outcome o;
  SplitMix64 rng(77);
  const auto reg = QuditRegister({3});
  Matrix zero = Matrix::Zero(3, 3);
  zero(0, 0) = 1.0;
  double worst = 0;
  std::vector<Vector> inputs;
  for (int k = 0; k < 3; ++k) inputs.push_back(Vector::Unit(3, k));
  for (int k = 0; k < 200; ++k) {
    Vector v(3);
    for (int i = 0; i < 3; ++i) v(i) = cplx(rng.normal(), rng.normal());
    inputs.push_back(v.normalized());
  }
  for (const auto& v : inputs) {
    const auto out = qec::ddr_reset_channel(DensityOperator::pure(v), reg, 0, qec::ResetChannel{});
    worst = std::max(worst, max_abs_diff(out.matrix(), zero));
  }
  // Mixed input as well.
  const auto mixed = qec::ddr_reset_channel(DensityOperator(Matrix::Identity(3, 3) / 3.0), reg, 0, qec::ResetChannel{});
  worst = std::max(worst, max_abs_diff(mixed.matrix(), zero));
  o.require(worst < 1e-12, "deviation " + fmt(worst));
  o.detail = "204 qutrit inputs, max deviation from |0><0| " + fmt(worst) + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome timing_arithmetic() {
  Outcome o;
  const auto mf = mf_budget();
  o.require(mf.total_ns == 525.0, "MF total " + fmt(mf.total_ns));
  const double rate = repetition_rate(mf);
  o.require(std::abs(rate - 1.905) < 5e-4 && rate >= 1.0, "rate " + fmt(rate));
  const double sp = speedup();
  o.require(std::abs(sp - 2.667) < 5e-4 && sp == 1400.0 / 525.0, "speedup " + fmt(sp));
  o.require(mf_budget(30, 90, 125, 80).total_ns == 325.0, "reset 80 ns total");
  o.detail = "MF 525 ns, " + fmt(rate) + " MHz, speedup " + fmt(sp) + ", reset 80 ns -> " +
             fmt(mf_budget(30, 90, 125, 80).total_ns) + " ns" + (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome tau_properties() {
  Outcome o;
  std::string nonzero;
  for (const auto& id : kQutritIds) {
    const auto t = tau_metric(build(id));
    if (t.at("00") != 0.0) nonzero += (nonzero.empty() ? "" : ",") + id + "=" + fmt(t.at("00"));
  }
  o.require(nonzero.empty(), "per_input[00] nonzero for " + nonzero);
  const double b2 = tau_metric(build("B2")).tau_max, b3 = tau_metric(build("B3")).tau_max;
  const double c2 = tau_metric(build("C2")).tau_max, c3 = tau_metric(build("C3")).tau_max;
  o.require(b3 <= b2, "B3 > B2");
  o.require(c3 <= c2, "C3 > C2");
  const double b1 = tau_metric(build("B1")).at("11");
  o.require(b1 == 2.0, "B1 |11> = " + fmt(b1));
  o.detail = "B3 " + fmt(b3) + " <= B2 " + fmt(b2) + ", C3 " + fmt(c3) + " <= C2 " + fmt(c2) + ", B1|11> " + fmt(b1) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path();
  const std::vector<std::vector<std::string>> invocations = {
      {"verify", "--all", "--format", "json"},
      {"verify", "--all", "--format", "csv"},
      {"tau", "--all", "--format", "json"},
      {"tau", "--all", "--format", "csv"},
      {"timing", "--format", "json"},
      {"timing", "--format", "csv"},
      {"list", "--format", "json"},
      {"qec", "--cycles", "20", "--mode", "random_independent", "--p-error", "0.3", "--epsilon-reset", "0.2",
       "--seed", "31337", "--format", "json"},
      {"qec", "--cycles", "20", "--p-error", "0.7", "--seed", "5", "--format", "csv"},
  };
  std::size_t checked = 0;
  for (const auto& args : invocations) {
    std::ostringstream a, b, ea, eb;
    const int ca = cli::run_cli(args, a, ea), cb = cli::run_cli(args, b, eb);
    o.require(ca == cb && a.str() == b.str() && !a.str().empty(), "differs: " + args[0]);
    ++checked;
  }
  // File outputs.
  std::vector<std::string> f = {"qec", "--cycles", "15", "--p-error", "0.5", "--epsilon-reset", "0.1", "--seed", "9"};
  const auto pa = (dir / "tritforge_accept_a").string(), pb = (dir / "tritforge_accept_b").string();
  auto fa = f, fb = f;
  fa.insert(fa.end(), {"--out", pa});
  fb.insert(fb.end(), {"--out", pb});
  std::ostringstream sink, esink;
  cli::run_cli(fa, sink, esink);
  cli::run_cli(fb, sink, esink);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto* ext : {".json", ".csv"}) {
    const auto x = slurp(pa + ext), y = slurp(pb + ext);
    o.require(!x.empty() && x == y, std::string("qec file ") + ext + " differs");
    ++checked;
    std::filesystem::remove(pa + ext);
    std::filesystem::remove(pb + ext);
  }
  o.detail = std::to_string(checked) + " outputs byte-identical across repeated runs" + (o.pass ? "" : " | " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"catalog correctness", catalog_correctness},
      {"gate-count claims", gate_counts},
      {"incomplete-variant correctness", incomplete_correctness},
      {"n-controlled scaling", n_controlled_scaling},
      {"qec stage oracle", qec_stage_oracle},
      {"single-error perfection", single_error_perfection},
      {"reset totality", reset_totality},
      {"timing arithmetic", timing_arithmetic},
      {"tau properties", tau_properties},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

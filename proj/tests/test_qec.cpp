#include <gtest/gtest.h>

#include "tritforge/qec.hpp"

using namespace tritforge;
using namespace tritforge::qec;

namespace {

const cplx kAlpha{0.6, 0.1};
const cplx kBeta = std::sqrt(1.0 - std::norm(kAlpha));

Vector code_ket(int a1, int d, int a2) {
  Vector v = Vector::Zero(27);
  v(9 * a1 + 3 * d + a2) = 1.0;
  return v;
}

std::array<double, 3> on_site(std::size_t site, double theta) {
  std::array<double, 3> a{0, 0, 0};
  a[site] = theta;
  return a;
}

double dist(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Encode, Examples) {
  EXPECT_LT(dist(encode(1, 0).amplitudes(), code_ket(0, 0, 0)), 1e-15);
  EXPECT_LT(dist(encode(0, 1).amplitudes(), code_ket(1, 1, 1)), 1e-15);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_LT(dist(encode(r, r).amplitudes(), r * (code_ket(0, 0, 0) + code_ket(1, 1, 1))), 1e-15);
  EXPECT_THROW(encode(1, 1), NormalizationError);
}

TEST(InjectError, Examples) {
  const auto s = encode(kAlpha, kBeta);
  EXPECT_LT(dist(inject_error(s, {0, 0, 0}, Basis::kBit).amplitudes(), s.amplitudes()), 1e-15);
  const double th = 0.7, c = std::cos(th / 2), sn = std::sin(th / 2);
  const Vector eq1 = kAlpha * (c * code_ket(0, 0, 0) - kI * sn * code_ket(0, 1, 0)) +
                     kBeta * (c * code_ket(1, 1, 1) - kI * sn * code_ket(1, 0, 1));
  EXPECT_LT(dist(inject_error(s, on_site(kData, th), Basis::kBit).amplitudes(), eq1), 1e-15);
  const Vector flip = -kI * (kAlpha * code_ket(1, 0, 0) + kBeta * code_ket(0, 1, 1));
  EXPECT_LT(dist(inject_error(s, on_site(kA1, kPi), Basis::kBit).amplitudes(), flip), 1e-15);
}

TEST(Analytic, Examples) {
  const auto zero = analytic_amplitudes(0.0, kData, kAlpha, kBeta);
  const Vector enc = encode(kAlpha, kBeta).amplitudes();
  EXPECT_LT(dist(zero.post_error, enc), 1e-15);
  EXPECT_NEAR(std::norm(analytic_amplitudes(kPi).ancilla.at("11")), 1.0, 1e-15);
  const auto third = analytic_amplitudes(kPi / 3);
  EXPECT_NEAR(std::norm(third.ancilla.at("00")), 0.75, 1e-15);
  EXPECT_NEAR(std::norm(third.ancilla.at("11")), 0.25, 1e-15);
}

TEST(StageOracle, SweepEverySite) {
  const auto corr = correction_circuit("B3");
  const auto junk = incomplete("B3").junk;
  for (std::size_t site : {kA1, kData, kA2})
    for (int k = 0; k < 32; ++k) {
      const double th = 2 * kPi * k / 32;
      const auto an = analytic_amplitudes(th, site, kAlpha, kBeta);
      auto s = inject_error(encode(kAlpha, kBeta), on_site(site, th), Basis::kBit);
      EXPECT_LT(dist(s.amplitudes(), an.post_error), 1e-10);
      Circuit decode(code_register());
      decode.add(cnot(), {kData, kA1}).add(cnot(), {kData, kA2});
      s = apply_circuit(decode, s);
      EXPECT_LT(dist(s.amplitudes(), an.post_decode), 1e-10);
      s = apply_circuit(corr, s);
      EXPECT_LT(dist(s.amplitudes(), relabel_through_junk(an.post_toffoli, junk)), 1e-10);
    }
}

TEST(StageOracle, JunkRelabelingAcrossDecompositions) {
  for (const auto& id : {"A1", "B1", "C1", "C2", "D1"}) {
    const auto corr = correction_circuit(id);
    const auto junk = incomplete(id).junk;
    for (std::size_t site : {kA1, kData, kA2}) {
      const double th = 1.1;
      const auto an = analytic_amplitudes(th, site, kAlpha, kBeta);
      auto s = apply_circuit(corr, StateVector(code_register(), an.post_decode));
      EXPECT_LT(dist(s.amplitudes(), relabel_through_junk(an.post_toffoli, junk)), 1e-10) << id;
    }
  }
}

TEST(CorrectCycle, AncillaPatterns) {
  ResetChannel ideal;
  const double th = 0.9, c = std::cos(th / 2), s = std::sin(th / 2);
  // Error on the data: ancillas c|00> - i s|11> in |A1 A2> order.
  auto st = inject_error(encode(kAlpha, kBeta), on_site(kData, th), Basis::kBit);
  auto [out, diag] = correct_cycle(st, "B3", ideal, Basis::kBit);
  const auto& anc = diag.ancilla_before_reset;
  EXPECT_NEAR(anc(0, 0).real(), c * c, 1e-12);
  EXPECT_NEAR(anc(4, 4).real(), s * s, 1e-12);
  EXPECT_LT(std::abs(anc(0, 4) - c * (kI * s)), 1e-12);
  EXPECT_NEAR(data_fidelity(out, kAlpha, kBeta), 1.0, 1e-12);

  // Error on A1: the excitation sits on A1 (|10> in |A1 A2> order).
  st = inject_error(encode(kAlpha, kBeta), on_site(kA1, th), Basis::kBit);
  auto [out1, diag1] = correct_cycle(st, "B3", ideal, Basis::kBit);
  EXPECT_NEAR(diag1.ancilla_before_reset(3, 3).real(), s * s, 1e-12);
  EXPECT_NEAR(diag1.ancilla_before_reset(1, 1).real(), 0.0, 1e-12);
  EXPECT_NEAR(data_fidelity(out1, kAlpha, kBeta), 1.0, 1e-12);
  EXPECT_TRUE(diag1.warnings.empty());
}

TEST(CorrectCycle, NoErrorReturnsToCodeState) {
  auto [out, diag] = correct_cycle(encode(kAlpha, kBeta), "B3", ResetChannel{}, Basis::kBit);
  const auto re = reencode(out, Basis::kBit);
  EXPECT_LT(dist(re.amplitudes(), encode(kAlpha, kBeta).amplitudes()), 1e-12);
}

TEST(CorrectCycle, UnknownDecomposition) {
  EXPECT_THROW(correct_cycle(encode(1, 0), "NOSUCH", ResetChannel{}, Basis::kBit), CatalogError);
}

TEST(DdrReset, PureStateExamples) {
  const auto reg = QuditRegister({3});
  SplitMix64 rng(1);
  auto s = ddr_reset(basis_state(reg, {2}), 0, ResetChannel{}, rng);
  EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-15);
  s = ddr_reset(basis_state(reg, {0}), 0, ResetChannel{0.5}, rng);
  EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-15);
}

TEST(DdrReset, ChannelDiscardsPhase) {
  const auto reg = QuditRegister({3});
  Vector v = Vector::Zero(3);
  v(0) = v(1) = 1 / std::sqrt(2.0);
  const auto out = ddr_reset_channel(DensityOperator::pure(v), reg, 0, ResetChannel{});
  Matrix expect = Matrix::Zero(3, 3);
  expect(0, 0) = 1.0;
  EXPECT_LT(max_abs_diff(out.matrix(), expect), 1e-15);
}

TEST(DdrReset, ChannelTotalityOnRandomStates) {
  SplitMix64 rng(8);
  const auto reg = QuditRegister({3, 3});
  Matrix zero = Matrix::Zero(3, 3);
  zero(0, 0) = 1.0;
  for (int k = 0; k < 50; ++k) {
    Vector v(9);
    for (int i = 0; i < 9; ++i) v(i) = cplx(rng.normal(), rng.normal());
    v.normalize();
    const auto out = ddr_reset_channel(DensityOperator::pure(v), reg, 1, ResetChannel{});
    EXPECT_LT(max_abs_diff(reduced_density(out.matrix(), reg, {1}).matrix(), zero), 1e-12);
  }
}

TEST(DdrReset, FailureLeavesOne) {
  const auto reg = QuditRegister({3});
  const auto out = ddr_reset_channel(DensityOperator::pure(basis_state(reg, {2}).amplitudes()), reg, 0,
                                     ResetChannel{0.01});
  EXPECT_NEAR(out(0, 0).real(), 0.99, 1e-15);
  EXPECT_NEAR(out(1, 1).real(), 0.01, 1e-15);
  EXPECT_NEAR(out(2, 2).real(), 0.0, 1e-15);
}

TEST(Protocol, RotatingFixedError) {
  ErrorModel m;
  m.angles = {0.3, 0, 0};
  m.rotate_site = true;
  const auto r = run_protocol(kAlpha, kBeta, 10, "B3", m, ResetChannel{});
  ASSERT_EQ(r.per_cycle_fidelity.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_NEAR(r.per_cycle_fidelity[k], 1.0, 1e-9);
    EXPECT_EQ(r.records[k].error_sites, (std::vector<int>{static_cast<int>(k % 3)}));
    EXPECT_EQ(r.records[k].basis, k % 2 == 0 ? Basis::kBit : Basis::kPhase);
  }
  EXPECT_EQ(r.leakage_events, 0u);
}

TEST(Protocol, NoErrorsManyCycles) {
  const auto r = run_protocol(kAlpha, kBeta, 100, "B3", ErrorModel{}, ResetChannel{});
  EXPECT_NEAR(r.final_fidelity, 1.0, 1e-9);
}

TEST(Protocol, DoubleFullFlipFails) {
  ErrorModel m;
  m.angles = {kPi, 0, kPi};
  m.axis_schedule = AxisSchedule::kBit;
  EXPECT_LT(run_protocol(kAlpha, kBeta, 1, "B3", m, ResetChannel{}).final_fidelity, 1.0 - 1e-3);
}

TEST(Protocol, SingleErrorPerfectionSweep) {
  for (const auto& id : {"A1", "A2", "B1", "B2", "B3", "C1", "C2", "C3", "D1", "D2", "D3"})
    for (bool lift_a1 : {false, true})
      for (std::size_t site = 0; site < 3; ++site)
        for (double th : {0.2, 1.3, kPi, 4.4}) {
          ErrorModel m;
          m.angles = on_site(site, th);
          ProtocolOptions o;
          o.correction.lift_a1 = lift_a1;
          const auto r = run_protocol(kAlpha, kBeta, 2, id, m, ResetChannel{}, o);
          EXPECT_NEAR(r.min_fidelity(), 1.0, 1e-9) << id << " site " << site << " theta " << th;
          EXPECT_TRUE(r.warnings.empty()) << id;
        }
}

TEST(Protocol, SeparableBeforeReset) {
  for (std::size_t site = 0; site < 3; ++site) {
    auto st = inject_error(encode(kAlpha, kBeta), on_site(site, 2.1), Basis::kBit);
    const auto [out, diag] = correct_cycle(st, "B3", ResetChannel{}, Basis::kBit);
    EXPECT_GE(diag.data_purity_before_reset, 1.0 - 1e-9);
  }
}

TEST(Protocol, EntangledResetWarning) {
  auto st = inject_error(encode(kAlpha, kBeta), {0.8, 0, 0.8}, Basis::kBit);
  const auto [out, diag] = correct_cycle(st, "B3", ResetChannel{}, Basis::kBit);
  EXPECT_LT(diag.data_purity_before_reset, 1.0 - 1e-9);
  ASSERT_FALSE(diag.warnings.empty());
  EXPECT_NE(diag.warnings[0].find("entangled reset"), std::string::npos);
}

TEST(Protocol, Determinism) {
  ErrorModel m;
  m.mode = ErrorMode::kRandomIndependent;
  m.p_error = 0.3;
  m.seed = 99;
  const auto a = run_protocol(kAlpha, kBeta, 20, "B3", m, ResetChannel{0.2});
  const auto b = run_protocol(kAlpha, kBeta, 20, "B3", m, ResetChannel{0.2});
  ASSERT_EQ(a.per_cycle_fidelity.size(), b.per_cycle_fidelity.size());
  for (std::size_t k = 0; k < a.per_cycle_fidelity.size(); ++k) {
    EXPECT_EQ(std::memcmp(&a.per_cycle_fidelity[k], &b.per_cycle_fidelity[k], sizeof(double)), 0);
    EXPECT_EQ(a.records[k].theta, b.records[k].theta);
  }
  m.seed = 100;
  const auto c = run_protocol(kAlpha, kBeta, 20, "B3", m, ResetChannel{0.2});
  bool differs = false;
  for (std::size_t k = 0; k < c.records.size(); ++k) differs = differs || c.records[k].theta != a.records[k].theta;
  EXPECT_TRUE(differs);
}

TEST(Protocol, ImperfectCnotDegradesMonotonically) {
  ErrorModel m;
  m.angles = on_site(kA2, kPi / 2);
  m.axis_schedule = AxisSchedule::kBit;
  ProtocolOptions o;
  o.channel_mode = true;
  double prev = 2.0;
  for (int k = 0; k < 7; ++k) {
    o.correction.central_cnot_epsilon = 0.05 * k;
    const double f = run_protocol(kAlpha, kBeta, 1, "B3", m, ResetChannel{}, o).final_fidelity;
    EXPECT_LE(f, prev + 1e-15) << k;
    prev = f;
  }
  EXPECT_LT(prev, 1.0 - 1e-4);
  o.correction.central_cnot_epsilon = 0.1;
  EXPECT_THROW(run_protocol(kAlpha, kBeta, 1, "B1", m, ResetChannel{}, o), NotApplicableError);
}

TEST(Protocol, ChannelModeMatchesPureForIdealReset) {
  ErrorModel m;
  m.angles = {0.4, 0, 0};
  m.rotate_site = true;
  ProtocolOptions o;
  o.channel_mode = true;
  const auto r = run_protocol(kAlpha, kBeta, 6, "B3", m, ResetChannel{}, o);
  for (double f : r.per_cycle_fidelity) EXPECT_NEAR(f, 1.0, 1e-9);
}

TEST(Protocol, ResetFailureMeanFidelity) {
  double sum = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    ErrorModel m;
    m.mode = ErrorMode::kRandomSingle;
    m.p_error = 1.0;
    m.seed = t;
    sum += run_protocol(kAlpha, kBeta, 10, "B3", m, ResetChannel{0.01}).mean_fidelity();
  }
  EXPECT_GE(sum / 200, 0.99);
}

TEST(Protocol, Validation) {
  ErrorModel m;
  m.p_error = 1.5;
  EXPECT_THROW(run_protocol(1, 0, 1, "B3", m, ResetChannel{}), InvalidBudgetError);
  EXPECT_THROW(run_protocol(1, 0, 0, "B3", ErrorModel{}, ResetChannel{}), InvalidBudgetError);
  EXPECT_THROW(run_protocol(1, 0, 1, "ISWAP", ErrorModel{}, ResetChannel{}), CatalogError);
  EXPECT_THROW(run_protocol(1, 0, 1, "B3", ErrorModel{}, ResetChannel{-0.1}), InvalidBudgetError);
}

TEST(Config, KeyValueParsing) {
  const auto cfg = parse_qec_config(
      "# sweep\ncycles = 4\ndecomposition=C3\ntheta=0.1,0.2,0.3\naxis=bit\nseed=5\nepsilon_reset=0.01\n"
      "rotate_site=true\n");
  EXPECT_EQ(cfg.cycles, 4u);
  EXPECT_EQ(cfg.decomposition, "C3");
  EXPECT_EQ(cfg.model.angles[2], 0.3);
  EXPECT_EQ(cfg.model.axis_schedule, AxisSchedule::kBit);
  EXPECT_EQ(cfg.model.seed, 5u);
  EXPECT_EQ(cfg.reset.epsilon_reset, 0.01);
  EXPECT_TRUE(cfg.model.rotate_site);
  EXPECT_THROW(parse_qec_config("bogus=1\n"), ParseError);
  EXPECT_THROW(parse_qec_config("cycles\n"), ParseError);
}

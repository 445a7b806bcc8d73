#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tritforge/catalog.hpp"
#include "tritforge/qec.hpp"
#include "tritforge/timing.hpp"
#include "tritforge/verifier.hpp"

namespace tritforge {

using json = nlohmann::ordered_json;

/// Scientific notation, 3 significant digits.
inline std::string sci3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

/// One verification outcome as printed by the CLI.
struct VerifyRecord {
  std::string id;
  std::string check;      // "declared", "incomplete"
  std::string behavior;   // e.g. "Toffoli"
  bool equivalent = false;
  double global_phase = 0.0;
  double max_deviation = 0.0;
  double leakage_norm = 0.0;
  std::size_t two_site_count = 0;
  std::size_t expected_two_site_count = 0;
  bool pass = false;
  std::string detail;
  friend bool operator==(const VerifyRecord&, const VerifyRecord&) = default;
};

struct TauRow {
  std::string id;
  std::string input;
  double tau = 0.0;
  double tau_max = 0.0;
  friend bool operator==(const TauRow&, const TauRow&) = default;
};

inline void to_json(json& j, const VerifyRecord& r) {
  j = json{{"id", r.id},
           {"check", r.check},
           {"behavior", r.behavior},
           {"equivalent", r.equivalent},
           {"global_phase", r.global_phase},
           {"max_deviation", r.max_deviation},
           {"leakage_norm", r.leakage_norm},
           {"two_site_count", r.two_site_count},
           {"expected_two_site_count", r.expected_two_site_count},
           {"pass", r.pass},
           {"detail", r.detail}};
}
inline void from_json(const json& j, VerifyRecord& r) {
  j.at("id").get_to(r.id);
  j.at("check").get_to(r.check);
  j.at("behavior").get_to(r.behavior);
  j.at("equivalent").get_to(r.equivalent);
  j.at("global_phase").get_to(r.global_phase);
  j.at("max_deviation").get_to(r.max_deviation);
  j.at("leakage_norm").get_to(r.leakage_norm);
  j.at("two_site_count").get_to(r.two_site_count);
  j.at("expected_two_site_count").get_to(r.expected_two_site_count);
  j.at("pass").get_to(r.pass);
  j.at("detail").get_to(r.detail);
}

inline void to_json(json& j, const TauRow& r) {
  j = json{{"id", r.id}, {"input", r.input}, {"tau", r.tau}, {"tau_max", r.tau_max}};
}
inline void from_json(const json& j, TauRow& r) {
  j.at("id").get_to(r.id);
  j.at("input").get_to(r.input);
  j.at("tau").get_to(r.tau);
  j.at("tau_max").get_to(r.tau_max);
}

inline void to_json(json& j, const TimingComponent& c) {
  j = json{{"name", c.name}, {"duration_ns", c.duration_ns}, {"relevant", c.relevant}};
}
inline void from_json(const json& j, TimingComponent& c) {
  j.at("name").get_to(c.name);
  j.at("duration_ns").get_to(c.duration_ns);
  j.at("relevant").get_to(c.relevant);
}
inline void to_json(json& j, const TimingBudget& b) {
  j = json{{"label", b.label}, {"components", b.components}, {"total_ns", b.total_ns}, {"overlap_note", b.overlap_note}};
}
inline void from_json(const json& j, TimingBudget& b) {
  j.at("label").get_to(b.label);
  j.at("components").get_to(b.components);
  j.at("total_ns").get_to(b.total_ns);
  j.at("overlap_note").get_to(b.overlap_note);
}

namespace qec {

inline void to_json(json& j, const CycleRecord& r) {
  j = json{{"cycle", r.cycle},       {"basis", to_string(r.basis)}, {"error_sites", r.error_sites},
           {"theta", r.theta},       {"fidelity", r.fidelity},      {"leakage_flag", r.leakage_flag}};
}
inline void from_json(const json& j, CycleRecord& r) {
  j.at("cycle").get_to(r.cycle);
  r.basis = j.at("basis").get<std::string>() == "bit" ? Basis::kBit : Basis::kPhase;
  j.at("error_sites").get_to(r.error_sites);
  j.at("theta").get_to(r.theta);
  j.at("fidelity").get_to(r.fidelity);
  j.at("leakage_flag").get_to(r.leakage_flag);
}
inline void to_json(json& j, const FidelityReport& r) {
  j = json{{"cycles", r.cycles},
           {"final_fidelity", r.final_fidelity},
           {"mean_fidelity", r.mean_fidelity()},
           {"min_fidelity", r.min_fidelity()},
           {"leakage_events", r.leakage_events},
           {"per_cycle", r.records},
           {"warnings", r.warnings}};
}
inline void from_json(const json& j, FidelityReport& r) {
  j.at("cycles").get_to(r.cycles);
  j.at("final_fidelity").get_to(r.final_fidelity);
  j.at("leakage_events").get_to(r.leakage_events);
  j.at("per_cycle").get_to(r.records);
  j.at("warnings").get_to(r.warnings);
  r.per_cycle_fidelity.clear();
  for (const auto& c : r.records) r.per_cycle_fidelity.push_back(c.fidelity);
}

}  // namespace qec

namespace csv {

inline std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + std::to_string(v[k]);
  return s;
}
inline std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + detail::format_real(v[k]);
  return s;
}

inline std::string fidelity_report(const qec::FidelityReport& r) {
  std::string out = "cycle,basis,error_sites,theta,fidelity,leakage_flag\n";
  for (const auto& c : r.records)
    out += std::to_string(c.cycle) + "," + qec::to_string(c.basis) + "," + join_ints(c.error_sites) + "," +
           join_reals(c.theta) + "," + detail::format_real(c.fidelity) + "," + (c.leakage_flag ? "1" : "0") + "\n";
  return out;
}

inline std::string tau_rows(const std::vector<TauRow>& rows) {
  std::string out = "id,input,tau,tau_max\n";
  for (const auto& r : rows)
    out += r.id + "," + r.input + "," + detail::format_real(r.tau) + "," + detail::format_real(r.tau_max) + "\n";
  return out;
}

inline std::string verify_records(const std::vector<VerifyRecord>& rows) {
  std::string out =
      "id,check,behavior,pass,equivalent,global_phase,max_deviation,leakage_norm,two_site_count,"
      "expected_two_site_count\n";
  for (const auto& r : rows)
    out += r.id + "," + r.check + "," + r.behavior + "," + (r.pass ? "1" : "0") + "," + (r.equivalent ? "1" : "0") +
           "," + sci3(r.global_phase) + "," + sci3(r.max_deviation) + "," + sci3(r.leakage_norm) + "," +
           std::to_string(r.two_site_count) + "," + std::to_string(r.expected_two_site_count) + "\n";
  return out;
}

inline std::string budgets(const std::vector<TimingBudget>& bs) {
  std::string out = "budget,component,duration_ns,relevant\n";
  for (const auto& b : bs) {
    for (const auto& c : b.components)
      out += b.label + "," + c.name + "," + detail::format_real(c.duration_ns) + "," + (c.relevant ? "1" : "0") + "\n";
    out += b.label + ",Total," + detail::format_real(b.total_ns) + ",1\n";
  }
  return out;
}

}  // namespace csv

}  // namespace tritforge

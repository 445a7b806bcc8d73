#pragma once

#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tritforge/catalog.hpp"
#include "tritforge/qec.hpp"
#include "tritforge/report_io.hpp"
#include "tritforge/timing.hpp"
#include "tritforge/verifier.hpp"

namespace tritforge::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

struct RunConfig {
  std::string format = "table";
  std::string out_path;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> ids;
  bool all = false;
  bool with_incomplete = false;
  bool uncompensated_iswap = false;
  // qec
  std::size_t cycles = 10;
  std::string theta;
  bool rotate_site = false;
  std::string mode;
  std::string axis = "alternating";
  std::optional<double> p_error;
  double epsilon_reset = 0.0;
  std::optional<double> epsilon_cnot;
  std::string decomposition = "B3";
  std::string config_file;
  bool lift_a1 = false;
  bool channel = false;
  double alpha = 1.0 / std::sqrt(2.0);
  double beta = 1.0 / std::sqrt(2.0);
  // timing
  double single_ns = 30, two_qutrit_ns = 90, cnot_ns = 125, reset_ns = 280;
};

namespace detail {

inline double tolerance(const RunConfig& c) { return c.tolerance.value_or(kDefaultTolerances.equivalence); }

inline std::uint64_t seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("TRITFORGE_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("TRITFORGE_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

inline void require_known(const std::vector<std::string>& ids) {
  for (const auto& id : ids)
    if (!is_catalog_id(id)) throw CatalogError("unknown decomposition id '" + id + "'");
}

inline VerifyRecord record_of(const DecompositionEntry& e, const EquivalenceReport& r) {
  VerifyRecord v;
  v.id = e.id;
  v.check = e.complete ? "declared" : "incomplete";
  v.behavior = e.behavior.describe();
  v.equivalent = r.equivalent;
  v.global_phase = r.global_phase;
  v.max_deviation = r.max_deviation;
  v.leakage_norm = r.leakage_norm;
  v.two_site_count = e.circuit.two_site_count();
  v.expected_two_site_count = e.expected_two_site_count;
  v.pass = r.equivalent && v.two_site_count == v.expected_two_site_count;
  v.detail = r.detail;
  return v;
}

inline std::vector<VerifyRecord> verify_one(const std::string& id, bool with_incomplete, double tol) {
  std::vector<VerifyRecord> out;
  auto failed = [&](const std::string& check, const std::exception& ex) {
    VerifyRecord v;
    v.id = id;
    v.check = check;
    v.detail = ex.what();
    out.push_back(v);
  };
  try {
    const auto e = build(id);
    out.push_back(record_of(e, declared_behavior_check(e, tol)));
  } catch (const Error& ex) {
    failed("declared", ex);
  }
  if (with_incomplete && has_incomplete(id)) {
    try {
      const auto e = incomplete(id);
      out.push_back(record_of(e, incomplete_check(e, tol)));
    } catch (const Error& ex) {
      failed("incomplete", ex);
    }
  }
  return out;
}

inline void emit(std::ostream& os, const std::string& text, const RunConfig& c, const std::string& ext = "") {
  if (c.out_path.empty()) {
    os << text;
    return;
  }
  const auto path = c.out_path + ext;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ParseError("failed writing output file '" + path + "'");
}

inline std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace detail

inline int cmd_verify(const RunConfig& c, std::ostream& os) {
  auto ids = c.ids;
  if (c.all || ids.empty()) ids = catalog_ids();
  detail::require_known(ids);
  const double tol = detail::tolerance(c);

  std::vector<std::future<std::vector<VerifyRecord>>> jobs;
  for (const auto& id : ids)
    jobs.push_back(std::async(std::launch::async, detail::verify_one, id, c.with_incomplete, tol));
  std::vector<VerifyRecord> rows;
  for (auto& j : jobs)
    for (auto& r : j.get()) rows.push_back(std::move(r));
  if (c.uncompensated_iswap) {
    const auto e = iswap_uncompensated();
    rows.push_back(detail::record_of(e, declared_behavior_check(e, tol)));
  }

  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.pass;

  std::string text;
  if (c.format == "json") {
    text = json{{"pass", all_pass}, {"results", rows}}.dump(2) + "\n";
  } else if (c.format == "csv") {
    text = csv::verify_records(rows);
  } else {
    for (const auto& r : rows) {
      text += std::string(r.pass ? "PASS " : "FAIL ") + detail::pad(r.id, 8) + detail::pad(r.check, 11) +
              detail::pad(r.behavior, 34) + "phase=" + sci3(r.global_phase) + " dev=" + sci3(r.max_deviation) +
              " leak=" + sci3(r.leakage_norm) + " 2q=" + std::to_string(r.two_site_count) + "/" +
              std::to_string(r.expected_two_site_count);
      if (!r.pass && !r.detail.empty()) text += "  (" + r.detail + ")";
      text += "\n";
    }
  }
  detail::emit(os, text, c);
  return all_pass ? kOk : kFailed;
}

inline int cmd_tau(const RunConfig& c, std::ostream& os) {
  auto ids = c.ids;
  if (c.all || ids.empty())
    for (const auto& id : catalog_ids())
      if (id != "ISWAP" && id != "REF10CX") ids.push_back(id);
  detail::require_known(ids);
  std::vector<TauRow> rows;
  for (const auto& id : ids) {
    const auto rep = tau_metric(build(id));
    for (const auto& [input, tau] : rep.per_input) rows.push_back({id, input, tau, rep.tau_max});
  }
  std::string text;
  if (c.format == "json") {
    text = json(rows).dump(2) + "\n";
  } else if (c.format == "csv") {
    text = csv::tau_rows(rows);
  } else {
    text = "id      input  tau   tau_max\n";
    for (const auto& r : rows)
      text += detail::pad(r.id, 8) + detail::pad(r.input, 7) + detail::pad(tritforge::detail::format_real(r.tau), 6) +
              tritforge::detail::format_real(r.tau_max) + "\n";
  }
  detail::emit(os, text, c);
  return kOk;
}

inline qec::QecConfig qec_config(const RunConfig& c) {
  qec::QecConfig q;
  if (!c.config_file.empty()) {
    std::ifstream f(c.config_file);
    if (!f) throw ParseError("cannot read config file '" + c.config_file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    q = qec::parse_qec_config(ss.str(), q);
  }
  q.cycles = c.cycles;
  q.decomposition = c.decomposition;
  if (!c.theta.empty()) q.model.angles = qec::theta_triple(c.theta);
  if (c.rotate_site) q.model.rotate_site = true;
  if (c.p_error) {
    q.model.p_error = *c.p_error;
    q.model.mode = qec::ErrorMode::kRandomSingle;
  }
  if (!c.mode.empty()) q.model.mode = qec::mode_from_string(c.mode);
  q.model.axis_schedule = qec::axis_from_string(c.axis);
  q.model.seed = detail::seed(c);
  q.reset.epsilon_reset = c.epsilon_reset;
  q.reset.duration_ns = c.reset_ns;
  if (c.epsilon_cnot) q.central_cnot_epsilon = c.epsilon_cnot;
  q.lift_a1 = q.lift_a1 || c.lift_a1;
  q.channel_mode = q.channel_mode || c.channel;
  q.alpha = c.alpha;
  q.beta = c.beta;
  return q;
}

inline int cmd_qec(const RunConfig& c, std::ostream& os) {
  if (!is_catalog_id(c.decomposition)) throw CatalogError("unknown decomposition id '" + c.decomposition + "'");
  const auto q = qec_config(c);
  const auto rep = qec::run_protocol(q);
  const std::string js = json(rep).dump(2) + "\n";
  const std::string cs = csv::fidelity_report(rep);
  std::ostringstream summary;
  summary << "cycles=" << rep.cycles << " mean_fidelity=" << tritforge::detail::format_real(rep.mean_fidelity())
          << " min_fidelity=" << tritforge::detail::format_real(rep.min_fidelity())
          << " leakage_events=" << rep.leakage_events << "\n";
  if (!c.out_path.empty()) {
    detail::emit(os, js, c, ".json");
    detail::emit(os, cs, c, ".csv");
    os << summary.str();
  } else if (c.format == "json") {
    os << js;
  } else if (c.format == "csv") {
    os << cs;
  } else {
    os << "cycle basis  errors  fidelity\n";
    for (const auto& r : rep.records)
      os << detail::pad(std::to_string(r.cycle), 6) << detail::pad(qec::to_string(r.basis), 7)
         << detail::pad(r.error_sites.empty() ? "-" : csv::join_ints(r.error_sites), 8)
         << tritforge::detail::format_real(r.fidelity) << (r.leakage_flag ? "  leak" : "") << "\n";
    os << summary.str();
  }
  for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
  return kOk;
}

inline int cmd_timing(const RunConfig& c, std::ostream& os) {
  const auto mf = mf_budget(c.single_ns, c.two_qutrit_ns, c.cnot_ns, c.reset_ns);
  const auto mb = mb_budget();
  std::string text;
  if (c.format == "json") {
    text = json{{"mf", mf},
                {"mb", mb},
                {"mf_repetition_rate_mhz", repetition_rate(mf)},
                {"mb_repetition_rate_mhz", repetition_rate(mb)},
                {"speedup", speedup(mb, mf)}}
               .dump(2) +
           "\n";
  } else if (c.format == "csv") {
    text = csv::budgets({mf, mb});
  } else {
    auto cell = [](const TimingComponent& x) {
      if (!x.relevant) return std::string("NR");
      return tritforge::detail::format_real(x.duration_ns) + (x.name == "Cycle multiplicity" ? "" : " ns");
    };
    text = detail::pad("", 32) + detail::pad("MF", 12) + "MB\n";
    for (std::size_t k = 0; k < mb.components.size(); ++k) {
      const auto& b = mb.components[k];
      const std::string a = k < mf.components.size() ? cell(mf.components[k]) : "NR";
      text += detail::pad(b.name, 32) + detail::pad(a, 12) + cell(b) + "\n";
    }
    std::ostringstream t;
    t << std::fixed << std::setprecision(3);
    t << detail::pad("Total", 32) << detail::pad(tritforge::detail::format_real(mf.total_ns) + " ns", 12)
      << tritforge::detail::format_real(mb.total_ns / 1000) << " us\n";
    t << detail::pad("Repetition rate (MHz)", 32) << detail::pad([&] {
      std::ostringstream r;
      r << std::fixed << std::setprecision(3) << repetition_rate(mf);
      return r.str();
    }(), 12) << repetition_rate(mb) << "\n";
    t << "speedup " << speedup(mb, mf) << " (about three-fold)\n";
    t << "note: " << mb.overlap_note << "\n";
    text += t.str();
  }
  detail::emit(os, text, c);
  return kOk;
}

inline int cmd_dump(const RunConfig& c, std::ostream& os) {
  if (c.ids.size() != 1) throw CatalogError("dump takes exactly one id");
  detail::require_known(c.ids);
  const auto e = c.with_incomplete ? incomplete(c.ids[0]) : build(c.ids[0]);
  detail::emit(os, "# " + e.id + (e.complete ? "" : " (incomplete)") + ": " + e.note + "\n" + to_text(e.circuit), c);
  return kOk;
}

inline int cmd_list(const RunConfig& c, std::ostream& os) {
  const auto rows = list_catalog();
  std::string text;
  auto flags = [](const EntryFlags& f) {
    std::string s;
    for (const auto& n : f.names()) s += (s.empty() ? "" : ";") + n;
    return s;
  };
  if (c.format == "json") {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"id", r.id},
                   {"flags", r.flags.names()},
                   {"expected_two_site_count", r.expected_two_site_count},
                   {"complete", r.complete},
                   {"has_incomplete", has_incomplete(r.id)}});
    text = j.dump(2) + "\n";
  } else if (c.format == "csv") {
    text = "id,flags,expected_two_site_count,complete,has_incomplete\n";
    for (const auto& r : rows)
      text += r.id + "," + flags(r.flags) + "," + std::to_string(r.expected_two_site_count) + "," +
              (r.complete ? "1" : "0") + "," + (has_incomplete(r.id) ? "1" : "0") + "\n";
  } else {
    for (const auto& r : rows)
      text += detail::pad(r.id, 9) + detail::pad(std::to_string(r.expected_two_site_count), 4) +
              (has_incomplete(r.id) ? "incomplete  " : "            ") + flags(r.flags) + "\n";
  }
  detail::emit(os, text, c);
  return kOk;
}

/// Parses `args` (without the program name) and runs the subcommand.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Mixed qubit/qutrit simulator and Toffoli decomposition verifier", "tritforge"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", c.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--out", c.out_path, "output path (qec writes PATH.json and PATH.csv)");
  app.add_option("--tolerance", c.tolerance, "equivalence tolerance");
  app.add_option("--seed", c.seed, "master seed (falls back to TRITFORGE_SEED)");

  auto* verify = app.add_subcommand("verify", "verify catalog entries");
  verify->add_option("ids", c.ids, "decomposition ids");
  verify->add_flag("--all", c.all, "every catalog entry");
  verify->add_flag("--incomplete", c.with_incomplete, "also check incomplete variants");
  verify->add_flag("--uncompensated-iswap", c.uncompensated_iswap, "also check the iSWAP variant without CZ0");

  auto* tau = app.add_subcommand("tau", "|2> occupancy of Q2 per control input");
  tau->add_option("ids", c.ids, "decomposition ids");
  tau->add_flag("--all", c.all, "every qutrit-based entry");

  auto* qec = app.add_subcommand("qec", "run the measurement-free repetition-code protocol");
  qec->add_option("--cycles", c.cycles)->check(CLI::PositiveNumber);
  qec->add_option("--theta", c.theta, "angle on A1, or three comma-separated angles for A1,D,A2");
  qec->add_flag("--rotate-site", c.rotate_site, "move the fixed angles one site per cycle");
  qec->add_option("--mode", c.mode, "fixed_angles, random_single or random_independent");
  qec->add_option("--axis", c.axis, "bit, phase or alternating");
  qec->add_option("--p-error", c.p_error, "error probability (random modes)");
  qec->add_option("--epsilon-reset", c.epsilon_reset, "reset failure probability");
  qec->add_option("--epsilon-cnot", c.epsilon_cnot, "spurious rotation of the central CNOT");
  qec->add_option("--reset-ns", c.reset_ns, "reset duration");
  qec->add_option("--decomposition", c.decomposition, "catalog id with an incomplete variant");
  qec->add_option("--config", c.config_file, "key=value configuration file");
  qec->add_flag("--lift-a1", c.lift_a1, "map the lifted control onto A1");
  qec->add_flag("--channel", c.channel, "exact channel evolution instead of sampled resets");
  qec->add_option("--alpha", c.alpha, "data amplitude of |0>");
  qec->add_option("--beta", c.beta, "data amplitude of |1>");

  auto* timing = app.add_subcommand("timing", "error-correction cycle timing budgets");
  timing->add_option("--single-ns", c.single_ns);
  timing->add_option("--two-qutrit-ns", c.two_qutrit_ns);
  timing->add_option("--cnot-ns", c.cnot_ns);
  timing->add_option("--reset-ns", c.reset_ns);

  auto* dump = app.add_subcommand("dump", "print a circuit in the text format");
  dump->add_option("id", c.ids)->required();
  dump->add_flag("--incomplete", c.with_incomplete, "dump the incomplete variant");

  auto* list = app.add_subcommand("list", "list catalog entries");

  std::vector<std::string> argv_store{"tritforge"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(c, out);
    if (*tau) return cmd_tau(c, out);
    if (*qec) return cmd_qec(c, out);
    if (*timing) return cmd_timing(c, out);
    if (*dump) return cmd_dump(c, out);
    if (*list) return cmd_list(c, out);
  } catch (const CatalogError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotApplicableError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace tritforge::cli

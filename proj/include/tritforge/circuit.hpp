#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tritforge/errors.hpp"
#include "tritforge/gate.hpp"
#include "tritforge/linalg.hpp"
#include "tritforge/register.hpp"
#include "tritforge/state.hpp"

namespace tritforge {

/// One gate application.
struct Op {
  GateDef gate;
  std::vector<std::size_t> sites;
};

/// Which register sites play the control and target roles.
struct RoleMap {
  std::vector<std::size_t> controls;
  std::size_t target = 0;

  std::size_t control(std::size_t k) const { return controls.at(k); }

  /// Controls followed by the target.
  std::vector<std::size_t> all_sites() const {
    auto v = controls;
    v.push_back(target);
    return v;
  }

  friend bool operator==(const RoleMap&, const RoleMap&) = default;
};

/// Returns the total_dim x total_dim unitary acting as `local` on `sites`
/// (listed order, first most significant) and identity elsewhere.
inline Unitary embed_gate(const Unitary& local, std::span<const std::size_t> sites,
                          const QuditRegister& reg) {
  detail::check_sites(reg, sites);
  if (local.dim() != reg.subsystem_dim(sites))
    throw EmbeddingError("local dimension " + std::to_string(local.dim()) +
                         " does not match product of site dimensions " +
                         std::to_string(reg.subsystem_dim(sites)));
  const auto n = static_cast<Eigen::Index>(reg.total_dim());
  Matrix full(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Vector col = Vector::Zero(n);
    col(c) = 1.0;
    apply_local(col, reg, local.matrix(), sites);
    full.col(c) = col;
  }
  return Unitary::trusted(std::move(full));
}

inline Unitary embed_gate(const Unitary& local, std::initializer_list<std::size_t> sites,
                          const QuditRegister& reg) {
  return embed_gate(local, std::span<const std::size_t>(sites.begin(), sites.size()), reg);
}

/// Ordered gate list on a fixed register, with an optional role assignment.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(QuditRegister reg, std::optional<RoleMap> roles = std::nullopt)
      : reg_(std::move(reg)) {
    if (roles) set_roles(*roles);
  }

  const QuditRegister& reg() const noexcept { return reg_; }
  const std::vector<Op>& ops() const noexcept { return ops_; }
  const std::optional<RoleMap>& roles() const noexcept { return roles_; }
  std::size_t size() const noexcept { return ops_.size(); }
  bool empty() const noexcept { return ops_.empty(); }

  void set_roles(RoleMap roles) {
    const auto all = roles.all_sites();
    detail::check_sites(reg_, all);
    roles_ = std::move(roles);
  }

  Circuit& add(GateDef gate, std::vector<std::size_t> sites) {
    if (gate.arity() != sites.size())
      throw InvalidCircuitError("gate " + gate.name + " expects " + std::to_string(gate.arity()) +
                                " sites, got " + std::to_string(sites.size()));
    try {
      detail::check_sites(reg_, sites);
    } catch (const EmbeddingError& e) {
      throw InvalidCircuitError(std::string("gate ") + gate.name + ": " + e.what());
    }
    for (std::size_t k = 0; k < sites.size(); ++k)
      if (reg_.dim(sites[k]) != gate.local_dims[k])
        throw InvalidCircuitError("gate " + gate.name + " local dimension mismatch on site " +
                                  std::to_string(sites[k]));
    ops_.push_back(Op{std::move(gate), std::move(sites)});
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (!(other.reg_ == reg_)) throw InvalidCircuitError("cannot append circuits on different registers");
    for (const auto& op : other.ops_) ops_.push_back(op);
    return *this;
  }

  /// First `n` ops.
  Circuit prefix(std::size_t n) const {
    Circuit c(reg_, roles_);
    c.ops_.assign(ops_.begin(), ops_.begin() + static_cast<std::ptrdiff_t>(std::min(n, ops_.size())));
    return c;
  }

  Circuit with_op_replaced(std::size_t index, GateDef gate) const {
    Circuit c(reg_, roles_);
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      if (k == index)
        c.add(gate, ops_[k].sites);
      else
        c.ops_.push_back(ops_[k]);
    }
    return c;
  }

  /// Moves site s to perm[s]; the register dims and roles follow.
  Circuit relabeled(const std::vector<std::size_t>& perm) const {
    if (perm.size() != reg_.size()) throw InvalidCircuitError("relabeling must cover every site");
    std::vector<int> dims(reg_.size());
    std::vector<bool> seen(reg_.size(), false);
    for (std::size_t s = 0; s < perm.size(); ++s) {
      if (perm[s] >= perm.size() || seen[perm[s]]) throw InvalidCircuitError("relabeling is not a permutation");
      seen[perm[s]] = true;
      dims[perm[s]] = reg_.dim(s);
    }
    std::optional<RoleMap> roles;
    if (roles_) {
      RoleMap r;
      for (auto c : roles_->controls) r.controls.push_back(perm[c]);
      r.target = perm[roles_->target];
      roles = r;
    }
    Circuit c(QuditRegister(dims), roles);
    for (const auto& op : ops_) {
      std::vector<std::size_t> sites;
      for (auto s : op.sites) sites.push_back(perm[s]);
      c.add(op.gate, sites);
    }
    return c;
  }

  std::size_t two_site_count() const {
    return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [](const Op& o) { return o.sites.size() >= 2; }));
  }

  std::size_t single_site_count() const {
    return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [](const Op& o) { return o.sites.size() == 1; }));
  }

  std::size_t count(const std::string& gate_name) const {
    return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [&](const Op& o) { return o.gate.name == gate_name; }));
  }

  /// ASAP layering depth over all gates.
  std::size_t depth() const {
    std::vector<std::size_t> level(reg_.size(), 0);
    std::size_t d = 0;
    for (const auto& op : ops_) {
      std::size_t m = 0;
      for (auto s : op.sites) m = std::max(m, level[s]);
      for (auto s : op.sites) level[s] = m + 1;
      d = std::max(d, m + 1);
    }
    return d;
  }

  friend bool operator==(const Circuit& a, const Circuit& b) {
    if (!(a.reg_ == b.reg_) || a.roles_ != b.roles_ || a.ops_.size() != b.ops_.size()) return false;
    for (std::size_t k = 0; k < a.ops_.size(); ++k)
      if (a.ops_[k].gate.name != b.ops_[k].gate.name || a.ops_[k].sites != b.ops_[k].sites) return false;
    return true;
  }

 private:
  QuditRegister reg_;
  std::vector<Op> ops_;
  std::optional<RoleMap> roles_;
};

inline void apply_op(StateVector& state, const Op& op) {
  apply_local(state.mutable_amplitudes(), state.reg(), op.gate.matrix.matrix(), op.sites);
}

inline StateVector apply_circuit(const Circuit& circuit, StateVector state) {
  if (!(circuit.reg() == state.reg()))
    throw InvalidCircuitError("circuit register " + circuit.reg().to_string() +
                              " does not match state register " + state.reg().to_string());
  for (const auto& op : circuit.ops()) apply_op(state, op);
  return state;
}

/// Ordered product of embedded gate unitaries (last op leftmost).
inline Unitary circuit_unitary(const Circuit& circuit) {
  const auto& reg = circuit.reg();
  const auto n = static_cast<Eigen::Index>(reg.total_dim());
  Matrix u = Matrix::Identity(n, n);
  Vector col(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    col = u.col(c);
    for (const auto& op : circuit.ops()) apply_local(col, reg, op.gate.matrix.matrix(), op.sites);
    u.col(c) = col;
  }
  return Unitary::trusted(std::move(u));
}

// ---------------------------------------------------------------------------
// Text format:
//
//   register 3 3 3
//   roles controls=0,1 target=2
//   CX[1;12] 0,1
//   X12 1
//
// Blank lines and lines starting with '#' are ignored.

inline std::string to_text(const Circuit& c) {
  std::ostringstream os;
  os << "register";
  for (int d : c.reg().dims()) os << ' ' << d;
  os << '\n';
  if (c.roles()) {
    os << "roles controls=";
    for (std::size_t k = 0; k < c.roles()->controls.size(); ++k) os << (k ? "," : "") << c.roles()->controls[k];
    os << " target=" << c.roles()->target << '\n';
  }
  for (const auto& op : c.ops()) {
    os << op.gate.name << ' ';
    for (std::size_t k = 0; k < op.sites.size(); ++k) os << (k ? "," : "") << op.sites[k];
    os << '\n';
  }
  return os.str();
}

namespace detail {

inline std::vector<std::size_t> parse_site_list(const std::string& s, std::size_t line_no) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": bad site list '" + s + "'");
    out.push_back(static_cast<std::size_t>(std::stoul(tok)));
  }
  if (out.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty site list");
  return out;
}

}  // namespace detail

inline Circuit circuit_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<Circuit> c;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "register") {
      if (c) throw ParseError("line " + std::to_string(line_no) + ": duplicate register header");
      std::vector<int> dims;
      int d = 0;
      while (ls >> d) dims.push_back(d);
      try {
        c.emplace(QuditRegister(dims));
      } catch (const RegisterError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
      continue;
    }
    if (!c) throw ParseError("line " + std::to_string(line_no) + ": missing register header");
    if (head == "roles") {
      RoleMap r;
      std::string kv;
      bool have_target = false;
      while (ls >> kv) {
        if (kv.rfind("controls=", 0) == 0)
          r.controls = detail::parse_site_list(kv.substr(9), line_no);
        else if (kv.rfind("target=", 0) == 0) {
          auto t = detail::parse_site_list(kv.substr(7), line_no);
          if (t.size() != 1) throw ParseError("line " + std::to_string(line_no) + ": one target expected");
          r.target = t.front();
          have_target = true;
        } else
          throw ParseError("line " + std::to_string(line_no) + ": unknown role field '" + kv + "'");
      }
      if (!have_target) throw ParseError("line " + std::to_string(line_no) + ": roles without target");
      c->set_roles(r);
      continue;
    }
    std::string sites;
    if (!(ls >> sites)) throw ParseError("line " + std::to_string(line_no) + ": missing sites");
    std::string extra;
    if (ls >> extra) throw ParseError("line " + std::to_string(line_no) + ": trailing tokens");
    try {
      c->add(gate_from_name(head), detail::parse_site_list(sites, line_no));
    } catch (const InvalidCircuitError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!c) throw ParseError("missing register header");
  return *c;
}

}  // namespace tritforge

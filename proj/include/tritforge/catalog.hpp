#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tritforge/circuit.hpp"
#include "tritforge/entry.hpp"
#include "tritforge/errors.hpp"
#include "tritforge/gate.hpp"
#include "tritforge/verifier.hpp"

namespace tritforge {

/// Catalog ids in alphabetical order.
inline const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids = {"A1", "A2", "B1", "B2", "B3", "C1", "C2",
                                               "C3", "D1", "D1S", "D2", "D3", "ISWAP", "REF10CX"};
  return ids;
}

inline bool is_catalog_id(const std::string& id) {
  const auto& ids = catalog_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace detail {

// Site roles for the three-site decompositions.
inline constexpr std::size_t kQ1 = 0, kQ2 = 1, kQ3 = 2;

inline Circuit toffoli_frame(int dim = 3) {
  return Circuit(QuditRegister::uniform(3, dim), RoleMap{{kQ1, kQ2}, kQ3});
}

struct Recipe {
  std::function<Circuit()> circuit;
  std::optional<std::size_t> central;
  EntryFlags flags;
  std::size_t two_site;
  TargetBehavior behavior = TargetBehavior::multi_controlled_x(2);
  /// Two-site count of the incomplete prefix (0: no incomplete variant).
  std::size_t incomplete_two_site = 0;
  JunkTable junk;
  std::string note;
};

inline JunkTable junk(std::vector<int> o00, std::vector<int> o01, std::vector<int> o10, std::vector<int> o11) {
  return {{{0, 0}, std::move(o00)}, {{0, 1}, std::move(o01)}, {{1, 0}, std::move(o10)}, {{1, 1}, std::move(o11)}};
}

inline Circuit iswap_circuit(bool compensated) {
  auto c = toffoli_frame();
  c.add(subspace_x(1, 2), {kQ1})
      .add(iswap(), {kQ1, kQ2})
      .add(cnot(), {kQ2, kQ3})
      .add(iswap(), {kQ1, kQ2})
      .add(subspace_x(1, 2), {kQ1});
  if (compensated) c.add(controlled_z_on_level(0), {kQ1, kQ2});
  return c;
}

inline const std::map<std::string, Recipe>& recipes() {
  using CD = CyclicDirection;
  static const std::map<std::string, Recipe> r = {
      {"A1",
       {[] {
          auto c = toffoli_frame();
          c.add(controlled_subspace_x(0, 1, 2), {kQ1, kQ2})
              .add(cnot(), {kQ2, kQ3})
              .add(controlled_subspace_x(0, 1, 2), {kQ1, kQ2});
          return c;
        },
        1, {EntryFlag::kNeedsExclusiveCnot}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 0}, {0, 2}, {1, 0}, {1, 1}),
        "|0>-controlled X12 moves Q2 out of |1> unless Q1=1; central CNOT must ignore Q2=|2>"}},
      {"A2",
       {[] {
          auto c = toffoli_frame();
          // |0>-controlled X12 = X01(Q1) . [X02 CNOT X02](Q1->Q2) . X01(Q1)
          c.add(subspace_x(0, 1), {kQ1})
              .add(subspace_x(0, 2), {kQ2})
              .add(cnot(), {kQ1, kQ2})
              .add(subspace_x(0, 2), {kQ2})
              .add(subspace_x(0, 1), {kQ1})
              .add(cnot(), {kQ2, kQ3})
              .add(subspace_x(0, 1), {kQ1})
              .add(subspace_x(0, 2), {kQ2})
              .add(cnot(), {kQ1, kQ2})
              .add(subspace_x(0, 2), {kQ2})
              .add(subspace_x(0, 1), {kQ1});
          return c;
        },
        5, {EntryFlag::kNeedsX02TwoPhoton, EntryFlag::kNeedsExclusiveCnot}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 0}, {0, 2}, {1, 0}, {1, 1}), "A1 with both CX gates converted to conventional CNOTs"}},
      {"B1",
       {[] {
          auto c = toffoli_frame();
          c.add(controlled_subspace_x(1, 1, 2), {kQ1, kQ2})
              .add(controlled_subspace_x(2, 0, 1), {kQ2, kQ3})
              .add(controlled_subspace_x(1, 1, 2), {kQ1, kQ2});
          return c;
        },
        1, {}, 3, TargetBehavior::multi_controlled_x(2), 2, junk({0, 0}, {0, 1}, {1, 0}, {1, 2}),
        "|1>-controlled X12 lifts Q2 to |2>; |2>-controlled X01 flips the target"}},
      {"B2",
       {[] {
          auto c = toffoli_frame();
          c.add(subspace_x(0, 2), {kQ2})
              .add(cnot(), {kQ1, kQ2})
              .add(subspace_x(0, 2), {kQ2})
              .add(subspace_x(1, 2), {kQ2})
              .add(cnot(), {kQ2, kQ3})
              .add(subspace_x(1, 2), {kQ2})
              .add(subspace_x(0, 2), {kQ2})
              .add(cnot(), {kQ1, kQ2})
              .add(subspace_x(0, 2), {kQ2});
          return c;
        },
        4, {EntryFlag::kNeedsX02TwoPhoton, EntryFlag::kNeedsExclusiveCnot}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 0}, {0, 2}, {1, 0}, {1, 1}), "B1 with every CX gate converted to a conventional CNOT"}},
      {"B3",
       {[] {
          auto c = toffoli_frame();
          c.add(controlled_subspace_x(1, 1, 2), {kQ1, kQ2})
              .add(subspace_x(1, 2), {kQ2})
              .add(cnot(), {kQ2, kQ3})
              .add(subspace_x(1, 2), {kQ2})
              .add(controlled_subspace_x(1, 1, 2), {kQ1, kQ2});
          return c;
        },
        2, {EntryFlag::kNeedsExclusiveCnot}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 0}, {0, 2}, {1, 0}, {1, 1}),
        "hybrid: native Q1-Q2 CX12, central gate converted to an exclusive CNOT; the "
        "other hybrid (converted Q1-Q2 gates) has the larger tau"}},
      {"C1",
       {[] {
          auto c = toffoli_frame();
          c.add(subspace_x(0, 1), {kQ2})
              .add(controlled_subspace_x(1, 0, 2), {kQ1, kQ2})
              .add(controlled_subspace_x(2, 0, 1), {kQ2, kQ3})
              .add(controlled_subspace_x(1, 0, 2), {kQ1, kQ2})
              .add(subspace_x(0, 1), {kQ2});
          return c;
        },
        2, {EntryFlag::kNeedsX02TwoPhoton}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 1}, {0, 0}, {1, 1}, {1, 2}), "X01 relabels Q2 so a |1>-controlled X02 lifts |11> to |2>"}},
      {"C2",
       {[] {
          auto c = toffoli_frame();
          c.add(subspace_x(0, 1), {kQ2})
              .add(subspace_x(1, 2), {kQ2})
              .add(cnot(), {kQ1, kQ2})
              .add(cnot(), {kQ2, kQ3})
              .add(cnot(), {kQ1, kQ2})
              .add(subspace_x(1, 2), {kQ2})
              .add(subspace_x(0, 1), {kQ2});
          return c;
        },
        3, {EntryFlag::kNeedsExclusiveCnot}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 2}, {0, 0}, {1, 2}, {1, 1}),
        "C1 with every CX converted to CNOT; adjacent X12 pairs cancel, no X02 needed"}},
      {"C3",
       {[] {
          auto c = toffoli_frame();
          c.add(subspace_x(0, 1), {kQ2})
              .add(controlled_subspace_x(1, 0, 2), {kQ1, kQ2})
              .add(subspace_x(0, 1), {kQ2})
              .add(subspace_x(1, 2), {kQ2})
              .add(cnot(), {kQ2, kQ3})
              .add(subspace_x(1, 2), {kQ2})
              .add(subspace_x(0, 1), {kQ2})
              .add(controlled_subspace_x(1, 0, 2), {kQ1, kQ2})
              .add(subspace_x(0, 1), {kQ2});
          return c;
        },
        4, {EntryFlag::kNeedsX02TwoPhoton, EntryFlag::kNeedsExclusiveCnot}, 3, TargetBehavior::multi_controlled_x(2), 2,
        junk({0, 0}, {0, 2}, {1, 0}, {1, 1}),
        "hybrid: native Q1-Q2 CX02, central gate converted to an exclusive CNOT with the "
        "relabeling chosen so |00> never visits |2>"}},
      {"D1",
       {[] {
          auto c = toffoli_frame();
          c.add(controlled_cyclic_x(1, CD::kPlus), {kQ1, kQ2})
              .add(controlled_subspace_x(2, 0, 1), {kQ2, kQ3})
              .add(controlled_cyclic_x(1, CD::kMinus), {kQ1, kQ2});
          return c;
        },
        1, {}, 3, TargetBehavior::multi_controlled_x(2), 2, junk({0, 0}, {0, 1}, {1, 1}, {1, 2}),
        "|2>-controlled X01 sandwiched by |1>-controlled X+ and X-"}},
      {"D1S",
       {[] {
          auto c = toffoli_frame();
          c.add(controlled_cyclic_x(1, CD::kMinus), {kQ1, kQ2})
              .add(controlled_subspace_x(2, 0, 1), {kQ2, kQ3})
              .add(controlled_cyclic_x(1, CD::kPlus), {kQ1, kQ2});
          return c;
        },
        1, {}, 3, TargetBehavior{{1, 0}, std::nullopt}, 0, {},
        "D1 with the rotations swapped: NOT on the target for controls |10>, not a Toffoli"}},
      {"D2",
       {[] {
          auto c = toffoli_frame();
          // X+ = X12 X01 and X- = X01 X12 in circuit order.
          c.add(controlled_subspace_x(1, 1, 2), {kQ1, kQ2})
              .add(controlled_subspace_x(1, 0, 1), {kQ1, kQ2})
              .add(controlled_subspace_x(2, 0, 1), {kQ2, kQ3})
              .add(controlled_subspace_x(1, 0, 1), {kQ1, kQ2})
              .add(controlled_subspace_x(1, 1, 2), {kQ1, kQ2});
          return c;
        },
        2, {EntryFlag::kNeedsExclusiveCnot}, 5, TargetBehavior::multi_controlled_x(2), 3, junk({0, 0}, {0, 1}, {1, 1}, {1, 2}),
        "D1 with each controlled rotation split into two controlled subspace gates"}},
      {"D3",
       {[] {
          auto c = toffoli_frame();
          // CSUM = H3 . CPHI . H3dg and CMIN = H3dg . CPHI . H3 in circuit order.
          c.add(qutrit_hadamard(), {kQ2})
              .add(controlled_phase(), {kQ1, kQ2})
              .add(qutrit_hadamard_dagger(), {kQ2})
              .add(controlled_subspace_x(2, 0, 1), {kQ2, kQ3})
              .add(qutrit_hadamard_dagger(), {kQ2})
              .add(controlled_phase(), {kQ1, kQ2})
              .add(qutrit_hadamard(), {kQ2});
          return c;
        },
        3, {}, 3, TargetBehavior::multi_controlled_x(2), 2, junk({0, 0}, {0, 1}, {1, 1}, {1, 2}),
        "controlled rotations realized as CSUM/CMIN from the qutrit Hadamard and CPHI"}},
      {"ISWAP",
       {[] { return iswap_circuit(true); }, 2, {EntryFlag::kIswapBased}, 4, TargetBehavior::multi_controlled_x(2), 0,
        {}, "X12 on Q1 disables the iSWAPs for Q1=1; CZ0 cancels the pi phase on |01>"}},
      {"REF10CX",
       {[] {
          auto c = toffoli_frame(2);
          const auto h = qubit_h(), t = qubit_t(false), tdg = qubit_t(true), cx = qubit_cnot();
          c.add(h, {2}).add(t, {0}).add(t, {1}).add(t, {2});
          c.add(cx, {0, 1}).add(tdg, {1}).add(cx, {1, 2}).add(t, {2});
          c.add(cx, {0, 1}).add(cx, {1, 2}).add(tdg, {2}).add(cx, {1, 2});
          c.add(cx, {0, 1}).add(cx, {1, 2}).add(cx, {0, 1}).add(cx, {1, 2});
          c.add(tdg, {2}).add(cx, {1, 2}).add(h, {2});
          return c;
        },
        std::nullopt, {}, 10, TargetBehavior::multi_controlled_x(2), 0, {},
        "qubit-only nearest-neighbour reference: 10 CNOTs, 9 single-qubit gates, depth 15"}},
  };
  return r;
}

inline const Recipe& recipe(const std::string& id) {
  const auto& r = recipes();
  auto it = r.find(id);
  if (it == r.end()) throw CatalogError("unknown decomposition id '" + id + "'");
  return it->second;
}

inline void require_integrity(const DecompositionEntry& e) {
  if (e.circuit.two_site_count() != e.expected_two_site_count)
    throw ConstructionIntegrityError(e.id + ": two-site gate count " + std::to_string(e.circuit.two_site_count()) +
                                     " != expected " + std::to_string(e.expected_two_site_count));
  const auto rep = e.complete ? declared_behavior_check(e) : incomplete_check(e);
  if (!rep.equivalent)
    throw ConstructionIntegrityError(e.id + (e.complete ? "" : " (incomplete)") + " fails verification: " +
                                     rep.detail);
}

}  // namespace detail

/// Builds and verifies a catalog entry. Throws CatalogError for unknown ids
/// and ConstructionIntegrityError if the circuit does not do what it declares.
inline DecompositionEntry build(const std::string& id) {
  const auto& r = detail::recipe(id);
  DecompositionEntry e;
  e.id = id;
  e.circuit = r.circuit();
  e.complete = true;
  e.central_index = r.central;
  e.flags = r.flags;
  e.expected_two_site_count = r.two_site;
  e.behavior = r.behavior;
  e.note = r.note;
  detail::require_integrity(e);
  return e;
}

/// Prefix of build(id) ending right after the central gate.
inline DecompositionEntry incomplete(const std::string& id) {
  const auto& r = detail::recipe(id);
  if (r.incomplete_two_site == 0 || !r.central)
    throw CatalogError("decomposition '" + id + "' has no incomplete variant");
  auto e = build(id);
  e.circuit = e.circuit.prefix(*r.central + 1);
  e.complete = false;
  e.expected_two_site_count = r.incomplete_two_site;
  e.junk = r.junk;
  detail::require_integrity(e);
  return e;
}

/// iSWAP decomposition without the CZ0 compensation: Toffoli times a phase
/// of pi on control pattern |01>. Declared behavior, not a catalog id.
inline DecompositionEntry iswap_uncompensated() {
  DecompositionEntry e;
  e.id = "ISWAP-NC";
  e.circuit = detail::iswap_circuit(false);
  e.central_index = 2;
  e.flags = {EntryFlag::kIswapBased};
  e.expected_two_site_count = 3;
  e.behavior = TargetBehavior{{1, 1}, std::make_pair(std::vector<int>{0, 1}, kPi)};
  e.note = "uncompensated iSWAP decomposition";
  detail::require_integrity(e);
  return e;
}

/// Linear ladder generalizing B1 to n controls (sites 0..n-1) and a target
/// (site n): |1>-controlled X12 then |2>-controlled X12 down the chain, a
/// |2>-controlled X01 on the target, and the mirror image.
inline DecompositionEntry n_controlled(int n) {
  if (n < 2 || n > 5) throw CatalogError("n_controlled supports 2 <= n <= 5, got " + std::to_string(n));
  const auto un = static_cast<std::size_t>(n);
  RoleMap roles;
  for (std::size_t k = 0; k < un; ++k) roles.controls.push_back(k);
  roles.target = un;
  Circuit c(QuditRegister::uniform(un + 1, 3), roles);
  std::vector<Op> chain;
  c.add(controlled_subspace_x(1, 1, 2), {0, 1});
  for (std::size_t k = 1; k + 1 < un; ++k) c.add(controlled_subspace_x(2, 1, 2), {k, k + 1});
  const std::size_t central = c.size();
  c.add(controlled_subspace_x(2, 0, 1), {un - 1, un});
  for (std::size_t k = central; k-- > 0;) c.add(c.ops()[k].gate, c.ops()[k].sites);

  DecompositionEntry e;
  e.id = "NC" + std::to_string(n);
  e.circuit = std::move(c);
  e.central_index = central;
  e.expected_two_site_count = 2 * un - 1;
  e.behavior = TargetBehavior::multi_controlled_x(un);
  e.note = "B1 ladder for " + std::to_string(n) + " controls";
  detail::require_integrity(e);
  return e;
}

struct CatalogListing {
  std::string id;
  EntryFlags flags;
  std::size_t expected_two_site_count;
  bool complete;
};

/// Alphabetical metadata listing of every catalog entry.
inline std::vector<CatalogListing> list_catalog() {
  std::vector<CatalogListing> out;
  for (const auto& id : catalog_ids()) {
    const auto& r = detail::recipe(id);
    out.push_back({id, r.flags, r.two_site, true});
  }
  return out;
}

/// Whether incomplete(id) is defined.
inline bool has_incomplete(const std::string& id) {
  return is_catalog_id(id) && detail::recipe(id).incomplete_two_site > 0;
}

}  // namespace tritforge

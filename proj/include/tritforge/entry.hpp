#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tritforge/circuit.hpp"

namespace tritforge {

enum class EntryFlag : std::uint8_t {
  kNeedsX02TwoPhoton = 1u << 0,
  kNeedsExclusiveCnot = 1u << 1,
  kIswapBased = 1u << 2,
};

class EntryFlags {
 public:
  constexpr EntryFlags() = default;
  constexpr EntryFlags(std::initializer_list<EntryFlag> fs) {
    for (auto f : fs) bits_ |= static_cast<std::uint8_t>(f);
  }
  constexpr bool has(EntryFlag f) const { return bits_ & static_cast<std::uint8_t>(f); }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    if (has(EntryFlag::kNeedsX02TwoPhoton)) out.emplace_back("needs_x02_two_photon");
    if (has(EntryFlag::kNeedsExclusiveCnot)) out.emplace_back("needs_exclusive_cnot");
    if (has(EntryFlag::kIswapBased)) out.emplace_back("iswap_based");
    return out;
  }
  friend constexpr bool operator==(EntryFlags, EntryFlags) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// What a circuit does on the qubit subspace: flip the target iff the
/// controls equal `firing_pattern`, times an optional extra phase on one
/// control pattern.
struct TargetBehavior {
  std::vector<int> firing_pattern;
  std::optional<std::pair<std::vector<int>, double>> phase_on_pattern;

  /// n-controlled X (Toffoli for n = 2).
  static TargetBehavior multi_controlled_x(std::size_t n) { return {std::vector<int>(n, 1), std::nullopt}; }

  bool is_multi_controlled_x() const {
    if (phase_on_pattern) return false;
    for (int b : firing_pattern)
      if (b != 1) return false;
    return true;
  }

  std::string describe() const {
    std::string s;
    if (is_multi_controlled_x()) {
      s = firing_pattern.size() == 2 ? "Toffoli" : std::to_string(firing_pattern.size()) + "-controlled X";
    } else {
      s = "|" + basis_label(firing_pattern) + ">-conditioned NOT";
      if (phase_on_pattern)
        s += " with phase " + detail::format_real(phase_on_pattern->second) + " on |" +
             basis_label(phase_on_pattern->first) + ">";
    }
    return s;
  }
};

/// Control levels left behind by an incomplete variant, per control input.
using JunkTable = std::vector<std::pair<std::vector<int>, std::vector<int>>>;

struct DecompositionEntry {
  std::string id;
  Circuit circuit;
  bool complete = true;
  /// Position of the central two-qutrit gate acting on the target.
  std::optional<std::size_t> central_index;
  EntryFlags flags;
  std::size_t expected_two_site_count = 0;
  TargetBehavior behavior;
  /// Declared control junk for incomplete variants (empty for complete ones).
  JunkTable junk;
  std::string note;

  bool is_toffoli_like() const { return behavior.is_multi_controlled_x(); }
  bool is_qutrit_based() const {
    if (flags.has(EntryFlag::kIswapBased)) return false;
    for (int d : circuit.reg().dims())
      if (d != 3) return false;
    return true;
  }
};

}  // namespace tritforge

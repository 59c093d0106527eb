#pragma once

/// @file
/// Second-order reflexive choice model of two subjects in conflict.
///
/// Truth values are graded in [0,1]; conjunction is min, disjunction is max,
/// negation is 1-x and implication is material (max(1-x, y)). Restricted to
/// {0,1} these reproduce the boolean connectives. With these operators the
/// implication form and the disjunctive form of every formula are equal
/// bit-for-bit, not merely up to rounding.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

namespace conflictkb {

/// Truth value in [0,1]. NaN and infinities are rejected on construction.
class Grade {
 public:
  constexpr Grade() noexcept = default;

  /// @throws std::domain_error if @p value is not a finite number in [0,1].
  explicit Grade(double value);

  static constexpr Grade zero() noexcept { return Grade{}; }
  static constexpr Grade one() noexcept {
    Grade g;
    g.value_ = 1.0;
    return g;
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }
  [[nodiscard]] constexpr bool crisp() const noexcept {
    return value_ == 0.0 || value_ == 1.0;
  }

  friend constexpr bool operator==(Grade, Grade) noexcept = default;
  friend constexpr auto operator<=>(Grade lhs, Grade rhs) noexcept {
    return lhs.value_ <=> rhs.value_;
  }

 private:
  friend Grade negate(Grade x) noexcept;

  double value_ = 0.0;
};

[[nodiscard]] Grade negate(Grade x) noexcept;
[[nodiscard]] Grade conjoin(Grade x, Grade y) noexcept;
[[nodiscard]] Grade disjoin(Grade x, Grade y) noexcept;
[[nodiscard]] Grade disjoin(std::initializer_list<Grade> terms) noexcept;
[[nodiscard]] Grade implies(Grade x, Grade y) noexcept;

/// Single subject without a modeled opponent.
struct SoloState {
  Grade a1;  ///< influence of the environment on the subject
  Grade a2;  ///< psychological setting (environment influence the subject expects)
  Grade a3;  ///< the subject's intentions
};

struct SoloOutcome {
  Grade readiness;
  Grade self_esteem;

  friend bool operator==(const SoloOutcome&, const SoloOutcome&) = default;
};

/// readiness = (a3 -> a2) -> a1, self-esteem = a3 -> a2.
[[nodiscard]] SoloOutcome evaluate_solo(const SoloState& s) noexcept;

/// The thirteen reflexive variables of a two-subject conflict.
///
/// Subject A's side is (a2, b2, a3, b3, a4, b4); subject B's side is
/// (c2, d2, c3, d3, c4, d4). The environment influence a1 is shared.
struct ReflexiveState {
  Grade a1;  ///< influence of the environment on both subjects

  Grade a2;  ///< environment influence expected by A
  Grade b2;  ///< environment influence expected by B, from A's point of view
  Grade a3;  ///< intentions of A
  Grade b3;  ///< intentions of B, from A's point of view
  Grade a4;  ///< A's impression of how B imagines A's intentions
  Grade b4;  ///< A's impression of how B imagines its own intentions

  Grade c2;  ///< environment influence expected by B
  Grade d2;  ///< environment influence expected by A, from B's point of view
  Grade c3;  ///< intentions of B
  Grade d3;  ///< intentions of A, from B's point of view
  Grade c4;  ///< B's impression of how A imagines B's intentions
  Grade d4;  ///< B's impression of how A imagines its own intentions

  friend bool operator==(const ReflexiveState&, const ReflexiveState&) = default;
};

struct ReflexiveVariable {
  std::string_view name;
  Grade ReflexiveState::*member;
};

/// All thirteen variables in declaration order: a1, a2, b2, a3, b3, a4, b4,
/// c2, d2, c3, d3, c4, d4.
inline constexpr std::array<ReflexiveVariable, 13> kReflexiveVariables{{
    {"a1", &ReflexiveState::a1}, {"a2", &ReflexiveState::a2},
    {"b2", &ReflexiveState::b2}, {"a3", &ReflexiveState::a3},
    {"b3", &ReflexiveState::b3}, {"a4", &ReflexiveState::a4},
    {"b4", &ReflexiveState::b4}, {"c2", &ReflexiveState::c2},
    {"d2", &ReflexiveState::d2}, {"c3", &ReflexiveState::c3},
    {"d3", &ReflexiveState::d3}, {"c4", &ReflexiveState::c4},
    {"d4", &ReflexiveState::d4},
}};

/// Member pointer for a variable name, or nullopt if the name is unknown.
[[nodiscard]] std::optional<Grade ReflexiveState::*> find_reflexive_variable(
    std::string_view name) noexcept;

/// Exchanges A's side (a2..b4) with B's side (c2..d4); a1 is kept.
[[nodiscard]] ReflexiveState mirrored(const ReflexiveState& s) noexcept;

struct ReflexiveOutcome {
  Grade readiness_a;    ///< A
  Grade self_esteem_a;  ///< A1
  Grade readiness_b;    ///< B
  Grade self_esteem_b;  ///< B1

  friend bool operator==(const ReflexiveOutcome&,
                         const ReflexiveOutcome&) = default;
};

/// Implication form:
///   A1 = (a3 & b3 -> a2) | (a4 & b4 -> b2),  A = A1 -> a1,
///   B1 = (c3 & d3 -> c2) | (c4 & d4 -> d2),  B = B1 -> a1.
[[nodiscard]] ReflexiveOutcome evaluate_conflict_logic(
    const ReflexiveState& s) noexcept;

/// Disjunctive form:
///   A1 = a2 | b2 | !a3 | !b3 | !a4 | !b4,  A = !A1 | a1,
///   B1 = c2 | d2 | !c3 | !d3 | !c4 | !d4,  B = !B1 | a1.
[[nodiscard]] ReflexiveOutcome evaluate_conflict_dnf(
    const ReflexiveState& s) noexcept;

enum class Side { A, B };

/// Names of one side's seven variables, most significant bit first
/// (a1 always leads).
[[nodiscard]] std::array<std::string_view, 7> side_variables(Side side) noexcept;

struct SideOutcome {
  Grade readiness;
  Grade self_esteem;

  friend bool operator==(const SideOutcome&, const SideOutcome&) = default;
};

struct TruthTableRow {
  std::uint8_t bits = 0;  ///< assignment, a1 as bit 6
  std::array<Grade, 7> assignment{};
  SideOutcome logic;
  SideOutcome dnf;
};

/// All 128 crisp assignments of one side's variables, lexicographic with a1
/// as the most significant bit. The other side's variables are held at 0;
/// they do not influence this side's outputs.
[[nodiscard]] std::vector<TruthTableRow> enumerate_truth_table(Side side);

}  // namespace conflictkb

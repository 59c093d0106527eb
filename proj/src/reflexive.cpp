#include "conflictkb/reflexive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conflictkb {

Grade::Grade(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw std::domain_error("grade out of [0,1]: " + std::to_string(value));
  }
}

Grade negate(Grade x) noexcept {
  // 1 - x stays in [0,1] for x in [0,1]; rounding is monotone so
  // negate(min(x,y)) == max(negate(x), negate(y)) holds exactly.
  Grade r;
  r.value_ = 1.0 - x.value_;
  return r;
}

Grade conjoin(Grade x, Grade y) noexcept { return std::min(x, y); }

Grade disjoin(Grade x, Grade y) noexcept { return std::max(x, y); }

Grade disjoin(std::initializer_list<Grade> terms) noexcept {
  return terms.size() == 0 ? Grade::zero() : std::max(terms);
}

Grade implies(Grade x, Grade y) noexcept { return disjoin(negate(x), y); }

SoloOutcome evaluate_solo(const SoloState& s) noexcept {
  const Grade self_esteem = implies(s.a3, s.a2);
  return {implies(self_esteem, s.a1), self_esteem};
}

std::optional<Grade ReflexiveState::*> find_reflexive_variable(
    std::string_view name) noexcept {
  for (const auto& v : kReflexiveVariables) {
    if (v.name == name) return v.member;
  }
  return std::nullopt;
}

ReflexiveState mirrored(const ReflexiveState& s) noexcept {
  ReflexiveState m = s;
  std::swap(m.a2, m.c2);
  std::swap(m.b2, m.d2);
  std::swap(m.a3, m.c3);
  std::swap(m.b3, m.d3);
  std::swap(m.a4, m.c4);
  std::swap(m.b4, m.d4);
  return m;
}

namespace {

// (x3 & y3 -> x2) | (x4 & y4 -> y2)
Grade self_esteem_logic(Grade x2, Grade y2, Grade x3, Grade y3, Grade x4,
                        Grade y4) noexcept {
  return disjoin(implies(conjoin(x3, y3), x2), implies(conjoin(x4, y4), y2));
}

// x2 | y2 | !x3 | !y3 | !x4 | !y4
Grade self_esteem_dnf(Grade x2, Grade y2, Grade x3, Grade y3, Grade x4,
                      Grade y4) noexcept {
  return disjoin({x2, y2, negate(x3), negate(y3), negate(x4), negate(y4)});
}

}  // namespace

ReflexiveOutcome evaluate_conflict_logic(const ReflexiveState& s) noexcept {
  const Grade a1 = self_esteem_logic(s.a2, s.b2, s.a3, s.b3, s.a4, s.b4);
  const Grade b1 = self_esteem_logic(s.c2, s.d2, s.c3, s.d3, s.c4, s.d4);
  return {implies(a1, s.a1), a1, implies(b1, s.a1), b1};
}

ReflexiveOutcome evaluate_conflict_dnf(const ReflexiveState& s) noexcept {
  const Grade a1 = self_esteem_dnf(s.a2, s.b2, s.a3, s.b3, s.a4, s.b4);
  const Grade b1 = self_esteem_dnf(s.c2, s.d2, s.c3, s.d3, s.c4, s.d4);
  return {disjoin(negate(a1), s.a1), a1, disjoin(negate(b1), s.a1), b1};
}

std::array<std::string_view, 7> side_variables(Side side) noexcept {
  if (side == Side::A) return {"a1", "a2", "b2", "a3", "b3", "a4", "b4"};
  return {"a1", "c2", "d2", "c3", "d3", "c4", "d4"};
}

std::vector<TruthTableRow> enumerate_truth_table(Side side) {
  const auto names = side_variables(side);
  std::vector<TruthTableRow> rows;
  rows.reserve(128);
  for (unsigned bits = 0; bits < 128; ++bits) {
    TruthTableRow row;
    row.bits = static_cast<std::uint8_t>(bits);
    ReflexiveState state;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const bool set = (bits >> (names.size() - 1 - i)) & 1U;
      row.assignment[i] = set ? Grade::one() : Grade::zero();
      state.*(*find_reflexive_variable(names[i])) = row.assignment[i];
    }
    const auto logic = evaluate_conflict_logic(state);
    const auto dnf = evaluate_conflict_dnf(state);
    if (side == Side::A) {
      row.logic = {logic.readiness_a, logic.self_esteem_a};
      row.dnf = {dnf.readiness_a, dnf.self_esteem_a};
    } else {
      row.logic = {logic.readiness_b, logic.self_esteem_b};
      row.dnf = {dnf.readiness_b, dnf.self_esteem_b};
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace conflictkb

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "conflictkb/reflexive.hpp"
#include "oracles.hpp"

using namespace conflictkb;

namespace {

Grade g(double x) { return Grade(x); }

ReflexiveState graded_example() {
  ReflexiveState s;
  s.a1 = g(0.3);
  s.a2 = g(0.5);
  s.b2 = g(0.1);
  s.a3 = g(0.8);
  s.b3 = g(0.6);
  s.a4 = g(0.2);
  s.b4 = g(0.9);
  return s;
}

}  // namespace

TEST_CASE("Grade rejects values outside [0,1]") {
  CHECK_THROWS_AS(Grade(-0.01), std::domain_error);
  CHECK_THROWS_AS(Grade(1.0000001), std::domain_error);
  CHECK_THROWS_AS(Grade(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(Grade(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK(Grade(0.0) == Grade::zero());
  CHECK(Grade(1.0) == Grade::one());
  CHECK(Grade(0.5).value() == 0.5);
}

TEST_CASE("implies is material implication") {
  CHECK(implies(g(1), g(0)) == g(0));
  CHECK(implies(g(0), g(0)) == g(1));
  CHECK(implies(g(0), g(1)) == g(1));
  CHECK(implies(g(1), g(1)) == g(1));
  CHECK(implies(g(0.3), g(0.6)).value() == doctest::Approx(0.7));
  CHECK(implies(g(0.3), g(0.6)) == g(std::max(1.0 - 0.3, 0.6)));
}

TEST_CASE("evaluate_solo") {
  auto r = evaluate_solo({g(1), g(0), g(1)});
  CHECK(r.readiness == g(1));

  r = evaluate_solo({g(0), g(1), g(1)});
  CHECK(r.readiness == g(0));
  CHECK(r.self_esteem == g(1));

  // Frozen from a script evaluating max(1-x, y) directly.
  r = evaluate_solo({g(0.4), g(0.2), g(0.7)});
  CHECK(r.self_esteem.value() == 0.30000000000000004);
  CHECK(r.readiness.value() == 0.7);
  CHECK(r.self_esteem.value() == doctest::Approx(0.3));
}

TEST_CASE("evaluate_solo matches the 2^3 boolean table") {
  for (unsigned bits = 0; bits < 8; ++bits) {
    const bool a1 = bits & 4U, a2 = bits & 2U, a3 = bits & 1U;
    const bool self = oracle::imp(a3, a2);
    const bool ready = oracle::imp(self, a1);
    const auto r = evaluate_solo({a1 ? g(1) : g(0), a2 ? g(1) : g(0), a3 ? g(1) : g(0)});
    CHECK(r.self_esteem == (self ? g(1) : g(0)));
    CHECK(r.readiness == (ready ? g(1) : g(0)));
  }
}

TEST_CASE("evaluate_conflict_logic examples") {
  SUBCASE("all ones") {
    ReflexiveState s;
    for (const auto& v : kReflexiveVariables) s.*v.member = Grade::one();
    const auto o = evaluate_conflict_logic(s);
    CHECK(o == ReflexiveOutcome{g(1), g(1), g(1), g(1)});
  }
  SUBCASE("A's self-esteem false, B's true") {
    ReflexiveState s;
    s.a3 = s.b3 = s.a4 = s.b4 = Grade::one();
    const auto o = evaluate_conflict_logic(s);
    CHECK(o.self_esteem_a == g(0));
    CHECK(o.readiness_a == g(1));
    CHECK(o.self_esteem_b == g(1));
    CHECK(o.readiness_b == g(0));
  }
  SUBCASE("graded") {
    const auto o = evaluate_conflict_logic(graded_example());
    CHECK(o.self_esteem_a.value() == 0.8);
    CHECK(o.readiness_a.value() == 0.3);
    CHECK(o.self_esteem_b == g(1));
    CHECK(o.readiness_b.value() == 0.3);
  }
}

TEST_CASE("evaluate_conflict_dnf examples") {
  ReflexiveState s;
  s.a3 = s.b3 = s.a4 = s.b4 = Grade::one();
  auto o = evaluate_conflict_dnf(s);
  CHECK(o.self_esteem_a == g(0));
  CHECK(o.readiness_a == g(1));

  o = evaluate_conflict_dnf(graded_example());
  CHECK(o.self_esteem_a.value() == std::max({0.5, 0.1, 1 - 0.8, 1 - 0.6, 1 - 0.2, 1 - 0.9}));
  CHECK(o.readiness_a.value() == std::max(1 - o.self_esteem_a.value(), 0.3));
  CHECK(o.self_esteem_a.value() == 0.8);
  CHECK(o.readiness_a.value() == 0.3);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto st = oracle::random_state(rng);
    st.a1 = Grade::one();
    const auto r = evaluate_conflict_dnf(st);
    CHECK(r.readiness_a == g(1));
    CHECK(r.readiness_b == g(1));
  }
}

TEST_CASE("both forms match the boolean oracle on all 8192 crisp states") {
  for (std::uint32_t bits = 0; bits < (1U << 13); ++bits) {
    const auto s = oracle::crisp_state(bits);
    const auto want = oracle::conflict_truth(bits);
    const ReflexiveOutcome expected{want.a ? g(1) : g(0), want.a1 ? g(1) : g(0),
                                    want.b ? g(1) : g(0), want.b1 ? g(1) : g(0)};
    REQUIRE(evaluate_conflict_logic(s) == expected);
    REQUIRE(evaluate_conflict_dnf(s) == expected);
  }
}

TEST_CASE("properties on random graded states") {
  std::mt19937_64 rng(20190101);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (int i = 0; i < 2000; ++i) {
    const auto s = oracle::random_state(rng);
    const auto logic = evaluate_conflict_logic(s);

    // Exact agreement of the two forms.
    REQUIRE(logic == evaluate_conflict_dnf(s));

    // Structural symmetry: mirroring the sides swaps the outputs.
    const auto m = evaluate_conflict_logic(mirrored(s));
    REQUIRE(m.readiness_a == logic.readiness_b);
    REQUIRE(m.self_esteem_a == logic.self_esteem_b);
    REQUIRE(m.readiness_b == logic.readiness_a);
    REQUIRE(m.self_esteem_b == logic.self_esteem_a);

    // Monotonicity of A and A1 in each of A's variables.
    const Grade up = g(u(rng));
    auto bumped = [&](Grade ReflexiveState::*field) {
      ReflexiveState t = s;
      t.*field = std::max(s.*field, up);
      return evaluate_conflict_logic(t);
    };
    for (auto field : {&ReflexiveState::a1, &ReflexiveState::a3, &ReflexiveState::b3,
                       &ReflexiveState::a4, &ReflexiveState::b4}) {
      const auto t = bumped(field);
      REQUIRE(t.readiness_a >= logic.readiness_a);
      if (field != &ReflexiveState::a1) REQUIRE(t.self_esteem_a <= logic.self_esteem_a);
    }
    for (auto field : {&ReflexiveState::a2, &ReflexiveState::b2}) {
      const auto t = bumped(field);
      REQUIRE(t.readiness_a <= logic.readiness_a);
      REQUIRE(t.self_esteem_a >= logic.self_esteem_a);
    }
  }
}

TEST_CASE("variable table") {
  CHECK(find_reflexive_variable("d4") == &ReflexiveState::d4);
  CHECK_FALSE(find_reflexive_variable("e4").has_value());
  CHECK(side_variables(Side::B)[0] == "a1");
  CHECK(side_variables(Side::B)[6] == "d4");
}

TEST_CASE("enumerate_truth_table") {
  for (Side side : {Side::A, Side::B}) {
    const auto rows = enumerate_truth_table(side);
    REQUIRE(rows.size() == 128);
    int ready = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].bits == i);
      CHECK(rows[i].logic == rows[i].dnf);
      CHECK(rows[i].assignment[0] == ((i & 64U) ? g(1) : g(0)));
      ready += rows[i].logic.readiness == g(1);
    }
    CHECK(ready == 65);
    CHECK(rows.back().logic.readiness == g(1));
    // With a1=0, readiness is 1 only when self-esteem is 0, which needs
    // every expectation at 0 and everything else at 1.
    CHECK(rows[0b0001111].logic.self_esteem == g(0));
    CHECK(rows[0b0001111].logic.readiness == g(1));
  }
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "conflictkb/conflict_pattern.hpp"
#include "conflictkb/ingest.hpp"

using namespace conflictkb;

namespace {

Date day(const char* text) { return *Date::parse(text); }

std::size_t error_line(std::string_view csv) {
  try {
    (void)parse_topic_series(csv);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TopicSeries counts(std::string id, std::vector<std::uint64_t> values) {
  TopicSeries s{std::move(id), {}};
  auto d = day("2024-01-01");
  for (auto v : values) {
    s.samples.push_back({d, v});
    d = Date(d.days() + std::chrono::days(1));
  }
  return s;
}

}  // namespace

TEST_CASE("parse_topic_series") {
  const auto series = parse_topic_series(
      "date,topic,count\n"
      "2024-01-02,war,20\r\n"
      "2024-01-01,war,10\n"
      "\n"
      "2024-01-01,peace,5\n"
      "2024-01-02,peace,7\n");
  REQUIRE(series.size() == 2);
  CHECK(series[0].topic_id == "war");
  CHECK(series[0].samples == std::vector<TopicSample>{{day("2024-01-01"), 10}, {day("2024-01-02"), 20}});
  CHECK(series[1].topic_id == "peace");
  CHECK(series[1].samples.size() == 2);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("date,count,topic\n") == 1);
  CHECK(error_line("") == 1);
  CHECK(error_line("date,topic,count\n2024-01-01,x\n") == 2);
  CHECK(error_line("date,topic,count\n2024-01-01,x,1\n2024-13-01,x,1\n") == 3);
  CHECK(error_line("date,topic,count\n2024-01-01,,1\n") == 2);
  CHECK(error_line("date,topic,count\n2024-01-01,x,-4\n") == 2);
  CHECK(error_line("date,topic,count\n2024-01-01,x,1.5\n") == 2);
  CHECK(error_line("date,topic,count\n2024-01-01,x,1\n2024-01-01,x,2\n") == 3);
  try {
    (void)parse_topic_series("date,topic,count\n2024-01-01,x,-4\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).starts_with("line 2: "));
  }
}

TEST_CASE("min-max normalization") {
  const auto n = normalize_series(counts("t", {10, 20, 30}));
  CHECK_FALSE(n.degenerate);
  REQUIRE(n.points.size() == 3);
  CHECK(n.points[0].degree == 0.0);
  CHECK(n.points[1].degree == 0.5);
  CHECK(n.points[2].degree == 1.0);
  CHECK(n.points[1].date == day("2024-01-02"));

  const auto flat = normalize_series(counts("t", {7, 7, 7}));
  CHECK(flat.degenerate);
  for (const auto& p : flat.points) CHECK(p.degree == 0.5);

  const auto single = normalize_series(counts("t", {3}));
  CHECK(single.degenerate);
  CHECK(single.points[0].degree == 0.5);

  CHECK_THROWS_AS(normalize_series(TopicSeries{"t", {}}), std::invalid_argument);
}

TEST_CASE("normalization properties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> c(0, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> v(2 + trial % 9);
    for (auto& x : v) x = c(rng);
    const auto n = normalize_series(counts("t", v));
    if (n.degenerate) continue;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      REQUIRE(n.points[i].degree >= 0.0);
      REQUIRE(n.points[i].degree <= 1.0);
      // Order preserving.
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] < v[j]) REQUIRE(n.points[i].degree < n.points[j].degree);
      }
    }
    REQUIRE(n.points[static_cast<std::size_t>(lo - v.begin())].degree == 0.0);
    REQUIRE(n.points[static_cast<std::size_t>(hi - v.begin())].degree == 1.0);
  }
}

TEST_CASE("binding") {
  const auto kb = build_pattern({"A"}, {"B"});
  const std::vector<TopicSeries> series{counts("war", {10, 20, 30}), counts("calm", {1, 9, 5}),
                                        counts("flat", {4, 4, 4})};

  SUBCASE("identity and complement") {
    const std::vector<LeafBinding> b{{"war", "a2", LeafTransform::Identity},
                                     {"calm", "c3", LeafTransform::Complement}};
    const auto out = bind_series_to_leaves(kb, b, series);
    CHECK(out.warnings.empty());
    CHECK(out.leaves.at("a2")[1].degree == 0.5);
    const auto& c3 = out.leaves.at("c3");
    CHECK(c3[0].degree == 1.0);
    CHECK(c3[1].degree == 0.0);
    CHECK(c3[2].degree == doctest::Approx(0.5));
  }

  SUBCASE("complement of 0.8 is 0.2") {
    // 8 of a 0..10 range normalizes to 0.8.
    const std::vector<TopicSeries> s{counts("x", {0, 8, 10})};
    const std::vector<LeafBinding> b{{"x", "a2", LeafTransform::Complement}};
    const auto out = bind_series_to_leaves(kb, b, s);
    CHECK(out.leaves.at("a2")[1].degree == doctest::Approx(0.2).epsilon(1e-15));
  }

  SUBCASE("degenerate topics warn") {
    const std::vector<LeafBinding> b{{"flat", "a2", LeafTransform::Identity}};
    const auto out = bind_series_to_leaves(kb, b, series);
    REQUIRE(out.warnings.size() == 1);
    CHECK(out.warnings[0].find("flat") != std::string::npos);
  }

  SUBCASE("errors") {
    const std::vector<LeafBinding> unknown_leaf{{"war", "zz", LeafTransform::Identity}};
    CHECK_THROWS_AS(bind_series_to_leaves(kb, unknown_leaf, series), BindingError);
    const std::vector<LeafBinding> internal{{"war", "A1", LeafTransform::Identity}};
    CHECK_THROWS_AS(bind_series_to_leaves(kb, internal, series), BindingError);
    const std::vector<LeafBinding> unknown_topic{{"nope", "a2", LeafTransform::Identity}};
    CHECK_THROWS_AS(bind_series_to_leaves(kb, unknown_topic, series), BindingError);
    const std::vector<LeafBinding> twice{{"war", "a2", LeafTransform::Identity},
                                         {"calm", "a2", LeafTransform::Identity}};
    CHECK_THROWS_AS(bind_series_to_leaves(kb, twice, series), BindingError);
    CHECK_THROWS_AS(bind_series(twice, series), BindingError);
  }

  CHECK(parse_leaf_transform("complement") == LeafTransform::Complement);
  CHECK_FALSE(parse_leaf_transform("invert").has_value());
  CHECK(to_string(LeafTransform::Identity) == "identity");
}

TEST_CASE("ingested series drive propagation") {
  GoalGraph kb;
  kb.nodes = {{"x", "x", NodeKind::Leaf, NodeRole::Custom}, {"p", "p", NodeKind::Internal, NodeRole::Custom}};
  kb.edges = {{"x", "p", 1.0}};
  const std::vector<TopicSeries> s{counts("t", {10, 20, 30})};
  const std::vector<LeafBinding> b{{"t", "x", LeafTransform::Identity}};
  const auto bound = bind_series_to_leaves(kb, b, s);
  const auto out = propagate_series(kb, bound.leaves);
  CHECK(out.at("p") == bound.leaves.at("x"));
}

TEST_CASE("expert aggregation") {
  const std::vector<ExpertEstimate> two{{"e1", "a2", "A1", 0.4, 1.0}, {"e2", "a2", "A1", 0.8, 3.0}};
  CHECK(aggregate_expert_estimates(two) == 0.7);

  const std::vector<ExpertEstimate> one{{"e1", "a2", "A1", -0.35, 2.5}};
  CHECK(aggregate_expert_estimates(one) == -0.35);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> est(-1.0, 1.0), comp(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ExpertEstimate> e;
    for (int i = 0; i < 2 + trial % 6; ++i) {
      e.push_back({"e" + std::to_string(i), "x", "p", est(rng), comp(rng)});
    }
    const double base = aggregate_expert_estimates(e);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end(), [](const auto& l, const auto& r) {
      return l.estimate < r.estimate;
    });
    REQUIRE(base >= lo->estimate);
    REQUIRE(base <= hi->estimate);
    auto shuffled = e;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    REQUIRE(aggregate_expert_estimates(shuffled) == base);
    auto scaled = e;
    for (auto& x : scaled) x.competence *= 4.0;
    REQUIRE(std::abs(aggregate_expert_estimates(scaled) - base) <= 1e-15);
  }

  const std::vector<ExpertEstimate> none;
  CHECK_THROWS_AS(aggregate_expert_estimates(none), EstimateError);
  const std::vector<ExpertEstimate> mixed{{"e1", "a2", "A1", 0.4, 1}, {"e2", "b2", "A1", 0.4, 1}};
  CHECK_THROWS_AS(aggregate_expert_estimates(mixed), EstimateError);
  const std::vector<ExpertEstimate> out_of_range{{"e1", "a2", "A1", 1.4, 1}};
  CHECK_THROWS_AS(aggregate_expert_estimates(out_of_range), EstimateError);
  const std::vector<ExpertEstimate> zero_competence{{"e1", "a2", "A1", 0.4, 0}};
  CHECK_THROWS_AS(aggregate_expert_estimates(zero_competence), EstimateError);
}

TEST_CASE("aggregate_by_edge and apply_edge_weights") {
  const std::vector<ExpertEstimate> e{{"e1", "a2", "A1", 0.4, 1},
                                      {"e1", "a3", "A1", -0.5, 1},
                                      {"e2", "a2", "A1", 0.8, 3}};
  const auto agg = aggregate_by_edge(e);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].child == "a2");
  CHECK(agg[0].weight == 0.7);
  CHECK(agg[0].estimate_count == 2);
  CHECK(agg[1].weight == -0.5);

  const auto kb = apply_edge_weights(build_pattern({"A"}, {"B"}), agg);
  const auto it = std::find_if(kb.edges.begin(), kb.edges.end(),
                               [](const auto& x) { return x.child == "a2" && x.parent == "A1"; });
  CHECK(it->weight == 0.7);

  const std::vector<AggregatedEdge> missing{{"a2", "G", 0.5, 1}};
  CHECK_THROWS_AS(apply_edge_weights(kb, missing), EstimateError);
}

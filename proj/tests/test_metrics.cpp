#include <doctest.h>

#include <random>
#include <sstream>

#include "fbpt/fused_bpt.hpp"
#include "fbpt/metrics.hpp"
#include "fbpt/synth.hpp"
#include "helpers.hpp"

using namespace fbpt;

TEST_CASE("single color has full occupancy") {
  const auto gT = assign_weights(testing::random_graph(200, 1000, 1), ConstantWeight{0.5});
  const auto r = fused_traverse(gT, GroupSpec{0, {5}}, 3);
  CHECK(r.metrics.average_occupancy() == 1.0);
  for (double x : r.metrics.per_level_occupancy()) CHECK(x == 1.0);
}

TEST_CASE("two disjoint traversals give one half") {
  const auto gT = assign_weights(testing::from_pairs(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}), ConstantWeight{1.0});
  const auto r = fused_traverse(gT, GroupSpec{0, {0, 3}}, 0);
  for (double x : r.metrics.per_level_occupancy()) CHECK(x == 0.5);
  CHECK(r.metrics.average_occupancy() == 0.5);
}

TEST_CASE("occupancy matches a recount from the event log") {
  const auto g = powerlaw_graph(2000, 8.0, 2.5, 3).graph;
  const auto gT = transpose(assign_weights(g, ConstantWeight{0.2}));
  std::mt19937_64 rng(4);
  for (std::size_t C : {10, 100, 1000, 10000}) {
    CAPTURE(C);
    GroupSpec spec{0, {}};
    for (std::size_t c = 0; c < C; ++c) spec.sources.push_back(static_cast<vertex_id>(rng() % 2000));
    std::vector<OccupancyEvent> log;
    TraversalOptions opt;
    opt.event_log = &log;
    const auto r = fused_traverse(gT, spec, 5, opt);
    // Independent recount: mean of present/active over logged events, grouped by level.
    double total = 0.0;
    std::vector<double> sum;
    std::vector<double> cnt;
    for (const auto& e : log) {
      const double x = static_cast<double>(e.colors_present) / static_cast<double>(e.colors_active);
      total += x;
      if (sum.size() <= e.level) sum.resize(e.level + 1, 0.0), cnt.resize(e.level + 1, 0.0);
      sum[e.level] += x;
      cnt[e.level] += 1.0;
    }
    CHECK(r.metrics.average_occupancy() == doctest::Approx(total / static_cast<double>(log.size())));
    CHECK(r.metrics.occupancy_events() == log.size());
    const auto per_level = r.metrics.per_level_occupancy();
    REQUIRE(per_level.size() == sum.size());
    for (std::size_t l = 0; l < sum.size(); ++l) CHECK(per_level[l] == doctest::Approx(sum[l] / cnt[l]));
    const auto summary = occupancy(log);
    CHECK(summary.average == doctest::Approx(total / static_cast<double>(log.size())));
  }
}

TEST_CASE("empty event stream") {
  const auto s = occupancy(std::vector<OccupancyEvent>{});
  CHECK(s.per_level.empty());
  CHECK(s.average == 0.0);
  CHECK(RunMetrics{}.average_occupancy() == 0.0);
}

TEST_CASE("savings") {
  RunMetrics fused;
  RunMetrics unfused;
  fused.edge_evaluations = 25;
  unfused.edge_evaluations = 100;
  CHECK(work_savings(fused, unfused).value == doctest::Approx(0.75));
  CHECK_FALSE(work_savings(fused, unfused).undefined);
  fused.edge_evaluations = 0;
  unfused.edge_evaluations = 0;
  const auto s = work_savings(fused, unfused);
  CHECK(s.undefined);
  CHECK(s.value == 0.0);
}

TEST_CASE("identical sources at p = 1 save 1 - 1/C") {
  const auto gT = assign_weights(testing::random_graph(100, 500, 2), ConstantWeight{1.0});
  const std::size_t C = 8;
  const auto fused = fused_traverse(gT, GroupSpec{0, std::vector<vertex_id>(C, 3)}, 0);
  RunMetrics unfused;
  for (std::uint32_t c = 0; c < C; ++c) unfused += unfused_traverse(gT, 3, 0, c, 0).metrics;
  CHECK(work_savings(fused.metrics, unfused).value == doctest::Approx(1.0 - 1.0 / C));
}

TEST_CASE("merging metrics") {
  RunMetrics a;
  a.edge_evaluations = 3;
  a.record_event(0, 1, 2);
  RunMetrics b;
  b.edge_evaluations = 4;
  b.record_event(0, 2, 2);
  b.record_event(1, 1, 2);
  a += b;
  CHECK(a.edge_evaluations == 7);
  CHECK(a.occupancy_events() == 3);
  CHECK(a.per_level_occupancy() == std::vector<double>{0.75, 0.5});
  CHECK(a.average_occupancy() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("CSV round trip and blank savings cells") {
  std::stringstream out;
  write_csv_header(out);
  BenchRow a;
  a.graph = "g";
  a.p = 0.1;
  a.colors = 64;
  a.fused_edges = 10;
  a.unfused_edges = 20;
  a.savings = 0.5;
  a.avg_occupancy = 0.25;
  a.wall_ms = 1.5;
  BenchRow b = a;
  b.has_unfused = false;
  b.order = "rcm";
  b.workers = 4;
  write_csv_row(out, a);
  write_csv_row(out, b);
  const std::string text = out.str();
  CHECK(text.rfind("graph,p,C,group,fused_edges,unfused_edges,savings,avg_occupancy,wall_ms,order,workers\n", 0) == 0);
  CHECK(text.find("g,0.1,64,all,10,,,0.25,1.5,rcm,4") != std::string::npos);
  std::istringstream in(text);
  const auto rows = read_csv(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].savings == 0.5);
  CHECK(rows[0].has_unfused);
  CHECK_FALSE(rows[1].has_unfused);
  CHECK(rows[1].order == "rcm");
  CHECK(rows[1].workers == 4);
}

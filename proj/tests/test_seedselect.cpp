#include <doctest.h>

#include <cmath>
#include <random>

#include "fbpt/seedselect.hpp"
#include "helpers.hpp"

using namespace fbpt;

using Sets = std::vector<std::vector<vertex_id>>;

TEST_CASE("single pick takes the most frequent vertex") {
  const Sets sets{{0}, {0}, {1}};
  const auto r = greedy_max_cover(sets, 2, 1);
  CHECK(r.seeds == std::vector<vertex_id>{0});
  CHECK(r.covered == std::vector<std::uint64_t>{2});
  CHECK(r.sigma_hat == doctest::Approx(2.0 * 2 / 3));
}

TEST_CASE("ties go to the smallest id") {
  const Sets sets{{0, 1}, {1, 2}, {2, 3}};
  const auto r = greedy_max_cover(sets, 4, 2);
  CHECK(r.seeds == std::vector<vertex_id>{1, 2});
  CHECK(r.covered.back() == 3);
  CHECK(r.gains == std::vector<std::uint64_t>{2, 1});
  CHECK_FALSE(r.padded());
}

TEST_CASE("padding with smallest unused ids once gains run out") {
  const Sets sets{{3}, {3}, {5}};
  const auto r = greedy_max_cover(sets, 8, 5);
  CHECK(r.seeds == std::vector<vertex_id>{3, 5, 0, 1, 2});
  CHECK(r.first_zero_gain == 2);
  CHECK(r.padded());
  CHECK(r.covered.back() == 3);
}

TEST_CASE("errors") {
  const Sets sets{{0}};
  CHECK_THROWS(greedy_max_cover(sets, 2, 0));
  CHECK_THROWS(greedy_max_cover(sets, 2, -3));
  CHECK_THROWS(greedy_max_cover(sets, 2, 3));
  CHECK_THROWS(greedy_max_cover(Sets{}, 2, 1));
}

TEST_CASE("influence estimate") {
  const Sets sets{{0, 1}, {1}, {2}, {3, 0}};
  CHECK(estimate_influence(sets, 10, std::vector<vertex_id>{0, 1, 2, 3}) == doctest::Approx(10.0));
  CHECK(estimate_influence(sets, 10, std::vector<vertex_id>{}) == 0.0);
  CHECK(estimate_influence(sets, 10, std::vector<vertex_id>{0}) == doctest::Approx(10.0 * 2 / 4));
  CHECK(estimate_influence(sets, 10, std::vector<vertex_id>{1, 0}) == doctest::Approx(10.0 * 3 / 4));
}

TEST_CASE("greedy against exhaustive search and the naive greedy") {
  std::mt19937_64 rng(2024);
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 14;
    const std::size_t theta = 1 + rng() % 12;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, n);
    Sets sets(theta);
    for (auto& s : sets) {
      const std::size_t size = 1 + rng() % 4;
      for (std::size_t i = 0; i < size; ++i) s.push_back(static_cast<vertex_id>(rng() % n));
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    CAPTURE(trial);
    const auto r = greedy_max_cover(sets, n, static_cast<std::int64_t>(k));
    CHECK(r.seeds == testing::naive_greedy(sets, n, k));
    CHECK(r.covered.back() == testing::coverage(sets, r.seeds));
    const auto opt = testing::brute_force_cover(sets, n, k);
    CHECK(static_cast<double>(r.covered.back()) >= bound * static_cast<double>(opt));
    CHECK(r.sigma_hat == doctest::Approx(estimate_influence(sets, n, r.seeds)));
  }
}

TEST_CASE("larger instances match the naive greedy") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 200;
    Sets sets(500);
    for (auto& s : sets) {
      const std::size_t size = 1 + rng() % 15;
      for (std::size_t i = 0; i < size; ++i) s.push_back(static_cast<vertex_id>(rng() % (rng() % 2 ? 20 : n)));
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    CHECK(greedy_max_cover(sets, n, 30).seeds == testing::naive_greedy(sets, n, 30));
  }
}

TEST_CASE("result does not depend on set order") {
  std::mt19937_64 rng(9);
  Sets sets(300);
  for (auto& s : sets) {
    for (int i = 0; i < 5; ++i) s.push_back(static_cast<vertex_id>(rng() % 60));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  const auto a = greedy_max_cover(sets, 60, 10);
  std::shuffle(sets.begin(), sets.end(), rng);
  const auto b = greedy_max_cover(sets, 60, 10);
  CHECK(a.seeds == b.seeds);
  CHECK(a.covered == b.covered);
}

TEST_CASE("collection overload agrees with the span overload") {
  RrrSetCollection rrr;
  rrr.num_vertices = 6;
  rrr.colors_per_group = 2;
  rrr.sets = {{0, 0, 0, {0, 2}}, {1, 0, 1, {1, 2}}, {3, 1, 0, {3}}};
  const Sets plain{{0, 2}, {1, 2}, {3}};
  const auto a = greedy_max_cover(rrr, 2);
  const auto b = greedy_max_cover(plain, 6, 2);
  CHECK(a.seeds == b.seeds);
  CHECK(a.sigma_hat == b.sigma_hat);
  CHECK(estimate_influence(rrr, a.seeds) == estimate_influence(plain, 6, a.seeds));
}

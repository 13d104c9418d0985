#include <algorithm>
#include <cmath>
#include <map>

#include "fbpt/engine.hpp"

namespace fbpt {

namespace {

struct PoolRate {
  double seconds_per_color = 0.0;
  std::size_t colors_per_claim = 0;
};

}  // namespace

// The fastest pool (lowest time per color) keeps its claim size and sets the
// target claim time. Every other pool bisects its claim size, predicting a
// claim of s colors to take s times its measured per-color time, until the
// prediction is within tolerance of the target or the size bottoms out at 1.
BalanceResult balance_workers(std::span<const BatchMeasurement> measured, const BalanceConfig& config) {
  if (measured.empty()) throw std::invalid_argument("balance_workers: no measurements");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("balance_workers: tolerance must be positive");

  std::map<std::size_t, std::pair<double, std::uint64_t>> totals;  // time, colors
  std::map<std::size_t, std::size_t> sizes;
  for (const auto& m : measured) {
    if (m.colors_per_claim == 0) throw std::invalid_argument("balance_workers: zero colors per claim");
    if (!(m.batch_time > 0.0)) throw std::invalid_argument("balance_workers: batch time must be positive");
    auto& [time, colors] = totals[m.pool_id];
    time += m.batch_time;
    colors += m.colors_per_claim;
    sizes.try_emplace(m.pool_id, m.colors_per_claim);
  }

  std::map<std::size_t, PoolRate> rates;
  for (const auto& [pool, tc] : totals) {
    rates[pool] = {tc.first / static_cast<double>(tc.second), sizes[pool]};
  }
  const auto ref = std::min_element(rates.begin(), rates.end(), [](const auto& a, const auto& b) {
    return a.second.seconds_per_color < b.second.seconds_per_color;
  });

  BalanceResult result;
  result.reference_pool = ref->first;
  result.reference_claim_time =
      ref->second.seconds_per_color * static_cast<double>(ref->second.colors_per_claim);
  const double target = result.reference_claim_time;

  for (const auto& [pool, rate] : rates) {
    PoolBalance out;
    out.pool_id = pool;
    out.initial_colors = rate.colors_per_claim;
    auto claim_time = [&](std::size_t s) { return rate.seconds_per_color * static_cast<double>(s); };
    auto within = [&](std::size_t s) { return std::abs(claim_time(s) - target) <= config.tolerance * target; };

    std::size_t best = rate.colors_per_claim;
    if (within(best)) {
      out.converged = true;
    } else {
      std::size_t lo = 1;
      std::size_t hi = best;
      if (claim_time(best) < target) {
        lo = best;
        while (claim_time(hi) < target) hi *= 2;
      }
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        ++out.iterations;
        if (within(mid)) {
          best = mid;
          out.converged = true;
          break;
        }
        if (claim_time(mid) > target) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      if (!out.converged) {
        best = std::abs(claim_time(lo) - target) <= std::abs(claim_time(hi) - target) ? lo : hi;
        out.converged = within(best);
      }
    }
    out.colors_per_claim = best;
    out.predicted_claim_time = claim_time(best);
    if (!out.converged && best == 1 && claim_time(1) > target) {
      out.needs_grouping = true;
      out.cooperative_group = std::max<std::size_t>(config.group_size, 1);
    }
    result.pools.push_back(out);
  }
  return result;
}

void apply_balance(SamplingPlan& plan, const BalanceResult& balance) {
  auto pools = plan.effective_pools();
  for (const auto& b : balance.pools) {
    if (b.pool_id >= pools.size()) throw std::invalid_argument("balance refers to an unknown pool");
    auto& pool = pools[b.pool_id];
    pool.colors_per_claim = b.colors_per_claim;
    if (b.needs_grouping) {
      pool.cooperative_group = std::min(b.cooperative_group, pool.workers);
      // A team splits its claim between members, so give it one color each.
      pool.colors_per_claim = std::max(pool.colors_per_claim, pool.cooperative_group);
    }
  }
  plan.worker_pools = std::move(pools);
}

}  // namespace fbpt

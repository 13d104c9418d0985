#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fbpt/graph.hpp"

namespace fbpt {

// One vertex processed at one level of a fused traversal.
struct OccupancyEvent {
  std::uint32_t level = 0;
  vertex_id vertex = 0;
  std::uint32_t colors_present = 0;
  std::uint32_t colors_active = 0;
};

// Work counters for one traversal or, after merging, for many. Counting happens
// at the single coin-consultation site of each kernel.
struct RunMetrics {
  std::uint64_t edge_evaluations = 0;      // edges consulted for at least one color
  std::uint64_t edge_bit_evaluations = 0;  // (edge, color) coin consultations
  std::uint64_t vertex_pops = 0;
  std::uint64_t levels = 0;  // summed over merged traversals
  std::uint64_t traversals = 0;
  std::vector<double> level_occupancy_sum;  // sum of present/active per level
  std::vector<std::uint64_t> level_events;
  std::chrono::nanoseconds wall_time{0};

  void record_event(std::uint32_t level, std::uint32_t present, std::uint32_t active);

  std::vector<double> per_level_occupancy() const;
  // Mean over all (vertex, level) processing events.
  double average_occupancy() const;
  std::uint64_t occupancy_events() const;

  RunMetrics& operator+=(const RunMetrics& other);
};

struct OccupancySummary {
  std::vector<double> per_level;
  double average = 0.0;
};

// Recomputes occupancy from a logged event stream.
OccupancySummary occupancy(std::span<const OccupancyEvent> events);

struct Savings {
  double value = 0.0;
  bool undefined = false;  // unfused run did no work
};

Savings work_savings(const RunMetrics& fused, const RunMetrics& unfused_sum);

struct BenchRow {
  std::string graph;
  double p = 0.0;
  std::size_t colors = 0;
  std::string group = "all";
  std::uint64_t fused_edges = 0;
  std::uint64_t unfused_edges = 0;
  bool has_unfused = true;
  double savings = 0.0;
  double avg_occupancy = 0.0;
  double wall_ms = 0.0;
  std::string order = "none";
  std::size_t workers = 1;
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BenchRow& row);
std::vector<BenchRow> read_csv(std::istream& in);

}  // namespace fbpt

#include "fbpt/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fbpt {

void RunMetrics::record_event(std::uint32_t level, std::uint32_t present, std::uint32_t active) {
  if (level_events.size() <= level) {
    level_events.resize(level + 1, 0);
    level_occupancy_sum.resize(level + 1, 0.0);
  }
  ++level_events[level];
  level_occupancy_sum[level] += static_cast<double>(present) / static_cast<double>(active);
}

std::vector<double> RunMetrics::per_level_occupancy() const {
  std::vector<double> out;
  out.reserve(level_events.size());
  for (std::size_t l = 0; l < level_events.size(); ++l) {
    if (level_events[l] == 0) break;
    out.push_back(level_occupancy_sum[l] / static_cast<double>(level_events[l]));
  }
  return out;
}

std::uint64_t RunMetrics::occupancy_events() const {
  std::uint64_t total = 0;
  for (auto n : level_events) total += n;
  return total;
}

double RunMetrics::average_occupancy() const {
  const auto events = occupancy_events();
  if (events == 0) return 0.0;
  double sum = 0.0;
  for (double s : level_occupancy_sum) sum += s;
  return sum / static_cast<double>(events);
}

RunMetrics& RunMetrics::operator+=(const RunMetrics& other) {
  edge_evaluations += other.edge_evaluations;
  edge_bit_evaluations += other.edge_bit_evaluations;
  vertex_pops += other.vertex_pops;
  levels += other.levels;
  traversals += other.traversals;
  if (level_events.size() < other.level_events.size()) {
    level_events.resize(other.level_events.size(), 0);
    level_occupancy_sum.resize(other.level_events.size(), 0.0);
  }
  for (std::size_t l = 0; l < other.level_events.size(); ++l) {
    level_events[l] += other.level_events[l];
    level_occupancy_sum[l] += other.level_occupancy_sum[l];
  }
  wall_time += other.wall_time;
  return *this;
}

OccupancySummary occupancy(std::span<const OccupancyEvent> events) {
  OccupancySummary out;
  std::vector<double> sum;
  std::vector<std::uint64_t> count;
  double total = 0.0;
  for (const auto& ev : events) {
    if (sum.size() <= ev.level) {
      sum.resize(ev.level + 1, 0.0);
      count.resize(ev.level + 1, 0);
    }
    const double occ = static_cast<double>(ev.colors_present) / static_cast<double>(ev.colors_active);
    sum[ev.level] += occ;
    ++count[ev.level];
    total += occ;
  }
  for (std::size_t l = 0; l < sum.size(); ++l) {
    out.per_level.push_back(count[l] ? sum[l] / static_cast<double>(count[l]) : 0.0);
  }
  out.average = events.empty() ? 0.0 : total / static_cast<double>(events.size());
  return out;
}

Savings work_savings(const RunMetrics& fused, const RunMetrics& unfused_sum) {
  if (unfused_sum.edge_evaluations == 0) return {0.0, true};
  return {1.0 - static_cast<double>(fused.edge_evaluations) /
                    static_cast<double>(unfused_sum.edge_evaluations),
          false};
}

void write_csv_header(std::ostream& out) {
  out << "graph,p,C,group,fused_edges,unfused_edges,savings,avg_occupancy,wall_ms,order,workers\n";
}

void write_csv_row(std::ostream& out, const BenchRow& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << r.graph << ',' << r.p << ',' << r.colors << ',' << r.group << ',' << r.fused_edges << ',';
  if (r.has_unfused) {
    os << r.unfused_edges << ',' << r.savings;
  } else {
    os << ',';
  }
  os << ',' << r.avg_occupancy << ',' << r.wall_ms << ',' << r.order << ',' << r.workers << '\n';
  out << os.str();
}

std::vector<BenchRow> read_csv(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() < 11) throw std::runtime_error("malformed CSV row: " + line);
    BenchRow r;
    r.graph = cells[0];
    r.p = std::stod(cells[1]);
    r.colors = std::stoull(cells[2]);
    r.group = cells[3];
    r.fused_edges = std::stoull(cells[4]);
    r.has_unfused = !cells[5].empty();
    if (r.has_unfused) {
      r.unfused_edges = std::stoull(cells[5]);
      r.savings = std::stod(cells[6]);
    }
    r.avg_occupancy = std::stod(cells[7]);
    r.wall_ms = std::stod(cells[8]);
    r.order = cells[9];
    r.workers = std::stoull(cells[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace fbpt

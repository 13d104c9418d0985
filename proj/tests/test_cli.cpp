#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fbpt/metrics.hpp"

namespace fs = std::filesystem;

namespace {

struct Output {
  int status = 0;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("fbpt_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Output run(const std::string& args, const std::string& env = "") {
  const auto out = workdir() / "stdout.txt";
  const auto err = workdir() / "stderr.txt";
  const std::string cmd = env + " " + FBPT_CLI_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

std::string gen_graph(std::size_t n, double avg, std::uint64_t seed) {
  const auto path = workdir() / ("g_" + std::to_string(n) + "_" + std::to_string(seed) + ".txt");
  if (!fs::exists(path)) {
    const auto r = run("gen --n " + std::to_string(n) + " --avg " + std::to_string(avg) + " --seed " +
                       std::to_string(seed) + " --out " + path.string());
    REQUIRE(r.status == 0);
  }
  return path.string();
}

}  // namespace

TEST_CASE("info matches the generator report") {
  const auto path = (workdir() / "info.txt").string();
  const auto gen = run("gen --n 3000 --avg 6 --seed 4 --out " + path);
  REQUIRE(gen.status == 0);
  const auto report = nlohmann::json::parse(gen.out);
  const auto info = run("info " + path);
  REQUIRE(info.status == 0);
  const auto j = nlohmann::json::parse(info.out);
  CHECK(j["vertices"] == report["vertices"]);
  CHECK(j["edges"] == report["edges"]);
  CHECK(j["max_out_degree"] == report["max_out_degree"]);
}

TEST_CASE("empty file is an error reported as a JSON line") {
  const auto path = workdir() / "empty.txt";
  std::ofstream(path).close();
  const auto r = run("info " + path.string());
  CHECK(r.status != 0);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "graph");
  CHECK(j.contains("message"));
}

TEST_CASE("malformed file names its line") {
  const auto path = workdir() / "bad.txt";
  std::ofstream(path) << "0 1\n2 three\n";
  const auto r = run("info " + path.string());
  CHECK(r.status != 0);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "parse");
  CHECK(j["message"].get<std::string>().find("line 2") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run("").status != 0);
  CHECK(run("imm").status == 2);
  CHECK(run("frobnicate").status == 2);
  const auto g = gen_graph(500, 4, 1);
  const auto r = run("imm " + g + " --theta 64", "FBPT_THREADS=zero");
  CHECK(r.status == 2);
  CHECK(nlohmann::json::parse(r.err)["error"] == "usage");
}

TEST_CASE("imm is repeatable and independent of worker count") {
  const auto g = gen_graph(5000, 8, 2);
  const std::string args = "imm " + g + " --theta 3000 --colors 64 --k 10 --seed 5 --no-timings";
  const auto a = run(args);
  REQUIRE(a.status == 0);
  CHECK(run(args).out == a.out);
  CHECK(run(args + " --workers 2").out == a.out);
  CHECK(run(args + " --workers 8").out == a.out);
  CHECK(run(args, "FBPT_THREADS=3").out == a.out);
  CHECK(run(args + " --order rcm").out.find(nlohmann::json::parse(a.out)["rrr_hash"].get<std::string>()) !=
        std::string::npos);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["seeds"].size() == 10);
  CHECK(j["meta"]["k"] == 10);
}

TEST_CASE("imm surfaces defaults and timings") {
  const auto g = gen_graph(500, 4, 1);
  const auto r = run("imm " + g + " --theta 100", "FBPT_THREADS=2");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["meta"]["k"] == 50);
  CHECK(j["meta"]["colors"] == 64);
  CHECK(j["meta"]["order"] == "none");
  CHECK(j["meta"]["workers"] == 2);
  CHECK(j["timings"]["total_s"].get<double>() >= 0.0);
}

TEST_CASE("single-cell sweep is one CSV row") {
  const auto g = gen_graph(500, 4, 1);
  const auto r = run("bench savings --graph " + g + " --p 0.1 --colors 8 --theta 64");
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  const auto rows = fbpt::read_csv(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].colors == 8);
  CHECK(rows[0].p == doctest::Approx(0.1));
}

TEST_CASE("savings sweep is non-negative and plotted") {
  const auto svg = workdir() / "savings.svg";
  const auto r = run("bench savings --synth-n 2000 --synth-avg 8 --p 0.01,0.1,0.5 --colors 8,64 --theta 256 --svg " +
                     svg.string());
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  const auto rows = fbpt::read_csv(in);
  CHECK(rows.size() == 6);
  for (const auto& row : rows) {
    CHECK(row.has_unfused);
    CHECK(row.savings >= 0.0);
    CHECK(row.fused_edges <= row.unfused_edges);
  }
  const auto text = slurp(svg);
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("polyline") != std::string::npos);
}

TEST_CASE("occupancy and scaling sweeps") {
  const auto csv = workdir() / "occ.csv";
  auto r = run("bench occupancy --synth-n 1000 --p 0.1 --colors 16 --order none,rcm,cluster --theta 128 --out " +
               csv.string());
  REQUIRE(r.status == 0);
  std::ifstream in(csv);
  const auto rows = fbpt::read_csv(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].order == "rcm");
  CHECK_FALSE(rows[0].has_unfused);
  // Orderings do not change what is sampled.
  CHECK(rows[0].fused_edges == rows[1].fused_edges);
  CHECK(rows[0].fused_edges == rows[2].fused_edges);

  r = run("bench scaling --synth-n 1000 --workers 1,2 --theta 256 --prob-model wc");
  REQUIRE(r.status == 0);
  std::istringstream sin(r.out);
  const auto srows = fbpt::read_csv(sin);
  REQUIRE(srows.size() == 2);
  CHECK(srows[0].workers == 1);
  CHECK(srows[1].workers == 2);
  CHECK(srows[0].fused_edges == srows[1].fused_edges);
}

TEST_CASE("convert and order subcommands") {
  const auto g = gen_graph(500, 4, 1);
  const auto bin = workdir() / "g.bin";
  REQUIRE(run("convert " + g + " " + bin.string()).status == 0);
  const auto a = run("info " + g);
  const auto b = run("info " + bin.string());
  CHECK(a.out == b.out);
  const auto perm = workdir() / "perm.txt";
  const auto r = run("order " + g + " --method rcm --out " + perm.string());
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["bandwidth_after"].get<std::size_t>() <= j["bandwidth_before"].get<std::size_t>());
  const auto imm_a = run("imm " + g + " --theta 200 --k 5 --no-timings");
  const auto imm_b = run("imm " + bin.string() + " --theta 200 --k 5 --no-timings");
  CHECK(imm_a.out == imm_b.out);
}

#include "oracles.hpp"

#include "cli.hpp"
#include "thetanorm/table.hpp"
#include "thetanorm/tensor_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace thetanorm;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "thetanorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

/// Scratch directory removed at scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("thetanorm_cli_" + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

/// CSV text with the time_ms column blanked, the only nondeterministic field.
std::string without_timing(const std::string& csv) {
  Table t = parse_csv(csv);
  const std::size_t c = t.column("time_ms");
  for (auto& row : t.rows) row[c].clear();
  return format_csv(t);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("groebner prints the seven generators of G_inf on (2,2)") {
    Outcome o = invoke({"groebner", "--shape", "2,2", "--p", "inf", "--check-buchberger"});
    CHECK(o.code == cli::kOk);
    const auto lines = lines_of(o.out);
    REQUIRE(lines.size() == 9);
    CHECK(lines.front().find("7 generators") != std::string::npos);
    CHECK(lines.back() == "buchberger: ok");
    CHECK(std::count(lines.begin(), lines.end(), "x[1,1]^2 - 1") == 1);
  }

  TEST_CASE("norm with p = 1 prints the entrywise l1 norm") {
    TempDir dir("norm");
    std::mt19937_64 rng(61);
    for (const Shape& s : {Shape{2, 2}, Shape{2, 3, 2}}) {
      const Tensor t = oracle::random_tensor(rng, s);
      write_tensor_file(dir.file("t.json"), t);
      Outcome o = invoke({"norm", "--p", "1", "--k", "1", "--tensor", dir.file("t.json")});
      REQUIRE(o.code == cli::kOk);
      double l1 = 0;
      for (double v : t.values()) l1 += std::abs(v);
      CHECK(std::abs(std::stod(o.out) - l1) <= 1e-4);
    }
  }

  TEST_CASE("usage errors exit with code 2 and a diagnostic") {
    TempDir dir("usage");
    write_tensor_file(dir.file("t.json"), Tensor::basis(Shape{2, 2}, MultiIndex{1, 1}));

    Outcome odd = invoke({"norm", "--p", "3", "--tensor", dir.file("t.json")});
    CHECK(odd.code == cli::kUsageError);
    CHECK(odd.err.find("odd") != std::string::npos);
    CHECK(odd.out.empty());

    write_text_file(dir.file("bad.json"), "{\"shape\": [2, 2], \"values\": [1, 2]");
    Outcome malformed = invoke({"norm", "--p", "2", "--tensor", dir.file("bad.json")});
    CHECK(malformed.code == cli::kUsageError);
    CHECK(lines_of(malformed.err).size() == 1);

    write_text_file(dir.file("short.json"), "{\"shape\": [2, 2], \"values\": [1, 2, 3]}");
    CHECK(invoke({"norm", "--p", "2", "--tensor", dir.file("short.json")}).code == cli::kUsageError);
    CHECK(invoke({"norm", "--p", "2", "--tensor", dir.file("missing.json")}).code == cli::kUsageError);
    CHECK(invoke({"groebner", "--shape", "2,0", "--p", "2"}).code == cli::kUsageError);
    CHECK(invoke({"experiment", "--shape", "2,2", "--p", "2", "--k", "0"}).code == cli::kUsageError);
    CHECK(invoke({"frobnicate"}).code == cli::kUsageError);
    CHECK(invoke({"--help"}).code == cli::kOk);
  }

  TEST_CASE("certify reports feasibility and writes a witness") {
    TempDir dir("certify");
    Outcome yes = invoke({"certify", "--shape", "2,2", "--p", "inf", "--polynomial", "1 + x[1,1]", "--witness",
                          dir.file("w.json")});
    CHECK(yes.code == cli::kOk);
    CHECK(yes.out.find("feasible") == 0);
    CHECK(std::filesystem::exists(dir.file("w.json")));

    Outcome no = invoke({"certify", "--shape", "2,2", "--p", "inf", "--polynomial", "-1"});
    CHECK(no.code == cli::kOk);
    CHECK(no.out.find("infeasible") == 0);
  }

  TEST_CASE("experiment CSV is deterministic up to timing and round-trips") {
    TempDir dir("experiment");
    const std::vector<std::string> args{"experiment", "--shape", "2,2", "--p", "inf,2", "--m-min", "2", "--m-max",
                                        "4",          "--trials", "2",  "--seed", "7", "--threads"};
    Outcome one = invoke([&] { auto a = args; a.push_back("1"); a.push_back("--output"); a.push_back(dir.file("a.csv")); return a; }());
    Outcome two = invoke([&] { auto a = args; a.push_back("2"); a.push_back("--output"); a.push_back(dir.file("b.csv")); a.push_back("--svg"); a.push_back(dir.file("a.svg")); return a; }());
    REQUIRE(one.code == cli::kOk);
    REQUIRE(two.code == cli::kOk);
    const std::string a = read_text_file(dir.file("a.csv")), b = read_text_file(dir.file("b.csv"));
    CHECK(without_timing(a) == without_timing(b));

    const Table t = parse_csv(a);
    CHECK(t.header.size() == 12);
    CHECK(t.rows.size() == 2 * 2 * 3);
    CHECK(format_csv(t) == a);
    CHECK(read_text_file(dir.file("a.svg")).find("<svg") != std::string::npos);

    Outcome stdout_csv = invoke([&] { auto a2 = args; a2.push_back("1"); return a2; }());
    REQUIRE(stdout_csv.code == cli::kOk);
    CHECK(without_timing(stdout_csv.out) == without_timing(a));
  }

  TEST_CASE("gwidth CSV is byte-identical across thread counts") {
    TempDir dir("gwidth");
    Outcome one = invoke({"gwidth", "--shape", "2,2,2", "--samples", "3", "--seed", "5", "--threads", "1"});
    Outcome two = invoke({"gwidth", "--shape", "2,2,2", "--samples", "3", "--seed", "5", "--threads", "2"});
    REQUIRE(one.code == cli::kOk);
    CHECK(one.out == two.out);
    const Table t = parse_csv(one.out);
    CHECK(t.rows.size() == 5);
    CHECK(format_csv(t) == one.out);
  }

  TEST_CASE("recover from a seeded ensemble and from a measurement file") {
    TempDir dir("recover");
    Outcome o = invoke({"recover", "--shape", "2,2", "--p", "2", "--m", "4", "--seed", "3", "--output",
                        dir.file("r.json")});
    REQUIRE(o.code == cli::kOk);
    CHECK(o.out.find("status optimal") != std::string::npos);
    CHECK(o.out.find("success 1") != std::string::npos);
    const Tensor r = read_tensor_file(dir.file("r.json"));
    CHECK(r.shape() == Shape{2, 2});

    CHECK(invoke({"recover", "--shape", "2,2", "--p", "2"}).code == cli::kUsageError);
    write_text_file(dir.file("m.json"), "not json");
    CHECK(invoke({"recover", "--p", "2", "--measurements", dir.file("m.json")}).code == cli::kUsageError);
  }

  TEST_CASE("config defaults and validation") {
    cli::CliConfig c;
    c.subcommand = "norm";
    c.shapes = {"2,2"};
    CHECK(c.k == 1);
    CHECK(c.seed == 0);
    CHECK(c.trials == 1);
    CHECK_NOTHROW(c.validate());
    CHECK(c.thread_count() >= 1);
    c.eps = 1e-8;
    c.max_iterations = 50;
    const SolverSettings s = c.solver_settings();
    CHECK(s.eps_primal == 1e-8);
    CHECK(s.eps_gap == 1e-8);
    CHECK(s.max_iterations == 50);
    c.norms = {"5"};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.norms = {"inf"};
    c.samples = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

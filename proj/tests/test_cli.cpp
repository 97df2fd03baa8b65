#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "driftbench/fsio.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("DRIFTBENCH_CLI");
  REQUIRE_MESSAGE(env != nullptr, "DRIFTBENCH_CLI must point at the binary");
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("driftbench_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string s(const std::string& name) const { return (path / name).string(); }
};

void write_config(const fs::path& p) {
  driftbench::fsio::atomic_write_file(p, R"({
  "floor_width": 9.0,
  "floor_height": 6.0,
  "n_fixed_aps": 8,
  "shadow_sigma": 1.0,
  "fast_sigma": 1.0,
  "hotspot_rate": 0.3,
  "device_offsets": {"user": 0.0},
  "daily_visits_per_rp": 1
})");
}

std::string slurp(const fs::path& p) { return driftbench::fsio::read_file(p); }

}  // namespace

TEST_CASE("--help exits 0 on every subcommand") {
  for (const std::string args :
       {"--help", "synth --help", "import --help", "stats --help",
        "stats variance --help", "stats anomaly --help", "train --help",
        "train dnn --help", "train gp --help", "eval --help", "eval dnn --help",
        "eval gp --help", "report --help"}) {
    CAPTURE(args);
    CHECK(run(args) == 0);
  }
}

TEST_CASE("usage errors exit 1, data errors exit 2") {
  TempDir dir;
  CHECK(run("definitely-not-a-subcommand") == 1);
  CHECK(run("synth --out x") == 1);           // missing required --config
  CHECK(run("synth --config nope.json --days 3 --out " + dir.s("o") +
            " --no-such-flag") == 1);
  CHECK(run("stats variance --db " + dir.s("missing") + " --ap a --rp 1 --out " +
            dir.s("o")) == 2);
  CHECK(run("eval gp --db " + dir.s("missing") + " --train-days 1:2 --test-days 3:4 "
            "--out " + dir.s("o")) == 2);

  CHECK(run("eval gp --db " + dir.s("db") + " --train-days 2-1 --test-days 3:4 --out " +
            dir.s("o")) == 1);  // malformed range is a usage error

  // well-formed but inverted range is a validation error on real data
  write_config(dir.path / "env.json");
  REQUIRE(run("--quiet synth --config " + dir.s("env.json") + " --days 4 --out " +
              dir.s("db")) == 0);
  CHECK(run("eval gp --db " + dir.s("db") + " --train-days 2:1 --test-days 3:4 --out " +
            dir.s("o")) == 2);
}

TEST_CASE("pipeline stages are idempotent byte for byte") {
  TempDir dir;
  write_config(dir.path / "env.json");
  const std::string base = "--seed 11 --reproducible --quiet ";

  REQUIRE(run(base + "synth --config " + dir.s("env.json") + " --days 10 --out " +
              dir.s("a")) == 0);
  REQUIRE(run(base + "synth --config " + dir.s("env.json") + " --days 10 --out " +
              dir.s("b")) == 0);
  for (const std::string name : {"records.csv", "readings.csv", "rps.csv",
                                 "manifest.json"}) {
    CAPTURE(name);
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
  }

  REQUIRE(run(base + "stats anomaly --db " + dir.s("a") + " --ap ap_0 --rp 0 --out " +
              dir.s("s1")) == 0);
  REQUIRE(run(base + "stats anomaly --db " + dir.s("a") + " --ap ap_0 --rp 0 --out " +
              dir.s("s2")) == 0);
  CHECK(slurp(dir.path / "s1" / "anomaly.csv") == slurp(dir.path / "s2" / "anomaly.csv"));

  REQUIRE(run(base + "train gp --db " + dir.s("a") + " --train-days 1:6 --out " +
              dir.s("m1.gp")) == 0);
  REQUIRE(run(base + "train gp --db " + dir.s("a") + " --train-days 1:6 --out " +
              dir.s("m2.gp")) == 0);
  CHECK(slurp(dir.path / "m1.gp") == slurp(dir.path / "m2.gp"));

  REQUIRE(run(base + "eval gp --db " + dir.s("a") +
              " --train-days 1:6 --test-days 7:10 --group 2 --polyfit 1 --out " +
              dir.s("r1")) == 0);
  REQUIRE(run(base + "eval gp --db " + dir.s("a") +
              " --train-days 1:6 --test-days 7:10 --group 2 --polyfit 1 --out " +
              dir.s("r2")) == 0);
  for (const std::string name : {"report.json", "per_day.csv", "trend.csv",
                                 "drift.svg"}) {
    CAPTURE(name);
    CHECK(slurp(dir.path / "r1" / name) == slurp(dir.path / "r2" / name));
  }
}

TEST_CASE("import re-exports a native database unchanged") {
  TempDir dir;
  write_config(dir.path / "env.json");
  REQUIRE(run("--seed 3 --reproducible --quiet synth --config " + dir.s("env.json") +
              " --days 5 --out " + dir.s("db")) == 0);
  REQUIRE(run("--quiet import --records " + dir.s("db/records.csv") + " --readings " +
              dir.s("db/readings.csv") + " --rps " + dir.s("db/rps.csv") + " --out " +
              dir.s("reimported")) == 0);
  for (const std::string name : {"records.csv", "readings.csv", "rps.csv"}) {
    CAPTURE(name);
    CHECK(slurp(dir.path / "db" / name) == slurp(dir.path / "reimported" / name));
  }
}

TEST_CASE("wide import maps the not-detected code to absences") {
  TempDir dir;
  driftbench::fsio::atomic_write_file(dir.path / "wide.csv",
                                      "WAP001,WAP002,x,y,floor,timestamp\n"
                                      "-67,100,0.0,0.0,1,2023-06-01T08:00:00Z\n"
                                      "100,-80,3.0,0.0,1,2023-06-02T08:00:00Z\n");
  REQUIRE(run("--quiet import --wide " + dir.s("wide.csv") +
              " --not-detected-code 100 --out " + dir.s("db")) == 0);
  const std::string readings = slurp(dir.path / "db" / "readings.csv");
  CHECK(readings == "record_id,ap_id,rssi\n1,WAP001,-67\n2,WAP002,-80\n");
}

TEST_CASE("eval accepts a pre-trained model and report re-renders") {
  TempDir dir;
  write_config(dir.path / "env.json");
  REQUIRE(run("--seed 19 --reproducible --quiet synth --config " + dir.s("env.json") +
              " --days 10 --out " + dir.s("db")) == 0);
  REQUIRE(run("--quiet train gp --db " + dir.s("db") + " --train-days 1:6 --out " +
              dir.s("model.gp")) == 0);
  REQUIRE(run("--quiet eval gp --db " + dir.s("db") +
              " --train-days 1:6 --test-days 7:10 --group 2 --polyfit 1 --model " +
              dir.s("model.gp") + " --out " + dir.s("rep")) == 0);
  CHECK(fs::exists(dir.path / "rep" / "drift.svg"));

  REQUIRE(run("--quiet report --in " + dir.s("rep/report.json") + " --out " +
              dir.s("rep2")) == 0);
  CHECK(slurp(dir.path / "rep" / "per_day.csv") ==
        slurp(dir.path / "rep2" / "per_day.csv"));
  CHECK(slurp(dir.path / "rep" / "drift.svg") == slurp(dir.path / "rep2" / "drift.svg"));
  CHECK(slurp(dir.path / "rep" / "report.json") ==
        slurp(dir.path / "rep2" / "report.json"));
}

TEST_CASE("DRIFTBENCH_SEED env is honored and --seed overrides it") {
  TempDir dir;
  write_config(dir.path / "env.json");
  auto run_env = [&](const std::string& env, const std::string& args) {
    const std::string cmd =
        env + " " + cli_path() + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  REQUIRE(run_env("DRIFTBENCH_SEED=77",
                  "--reproducible --quiet synth --config " + dir.s("env.json") +
                      " --days 4 --out " + dir.s("env77")) == 0);
  REQUIRE(run("--seed 77 --reproducible --quiet synth --config " + dir.s("env.json") +
              " --days 4 --out " + dir.s("flag77")) == 0);
  CHECK(slurp(dir.path / "env77" / "records.csv") ==
        slurp(dir.path / "flag77" / "records.csv"));
  CHECK(slurp(dir.path / "env77" / "readings.csv") ==
        slurp(dir.path / "flag77" / "readings.csv"));

  // --seed wins over the environment
  REQUIRE(run_env("DRIFTBENCH_SEED=123",
                  "--seed 77 --reproducible --quiet synth --config " +
                      dir.s("env.json") + " --days 4 --out " + dir.s("mix")) == 0);
  CHECK(slurp(dir.path / "mix" / "readings.csv") ==
        slurp(dir.path / "flag77" / "readings.csv"));
}

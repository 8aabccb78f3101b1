#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("kms_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = std::string(KMS_CLI_PATH) + " " + args + " 2>" + err.string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string config(const std::string& name) { return std::string(KMS_CONFIG_DIR) + "/" + name; }

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> data_lines(const std::string& out) {
  std::vector<std::string> v;
  std::istringstream is(out);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') v.push_back(line);
  return v;
}

std::string header_value(const std::string& out, const std::string& key) {
  std::istringstream is(out);
  std::string line;
  const std::string tag = "# " + key + ": ";
  while (std::getline(is, line))
    if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
  return {};
}

}  // namespace

TEST_CASE("rate on the two-tier configuration") {
  const auto r = run("rate --config " + config("section6.json"));
  CHECK(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "kappa,mu,m,sigma_l,rate_nats,err_est");
  CHECK(lines[1].rfind("2,2,1,4,", 0) == 0);
  CHECK(r.out.rfind("# kms ", 0) == 0);
  CHECK_FALSE(header_value(r.out, "config").empty());
  CHECK_FALSE(header_value(r.out, "seed").empty());
}

TEST_CASE("golden output") {
  const auto r = run("rate --config " + config("rayleigh.json"));
  CHECK(r.code == 0);
  const std::string golden = slurp(fs::path(KMS_CONFIG_DIR).parent_path() / "tests/golden/rate_rayleigh.csv");
  CHECK(r.out == golden);
}

TEST_CASE("output reproducible from its own header") {
  const auto a = run("outage --config " + config("section6.json"));
  REQUIRE(a.code == 0);
  const auto cfg = write("from_header.json", header_value(a.out, "config"));
  const auto b = run("outage --config " + cfg.string());
  CHECK(b.code == 0);
  CHECK(data_lines(a.out) == data_lines(b.out));
}

TEST_CASE("json-lines output") {
  const auto r = run("outage --format json-lines --config " + config("rayleigh.json"));
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(is, line)) rows.push_back(nlohmann::json::parse(line));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].contains("config"));
  CHECK(rows[2]["T_dB"].get<double>() == 0.0);
  CHECK(std::abs(rows[2]["outage"].get<double>() - 0.4399008465) < 1e-9);
}

TEST_CASE("other analytic subcommands") {
  for (const std::string cmd : {"pdf", "coeffs", "moments", "mgf"}) {
    const auto r = run(cmd + " --config " + config("rayleigh.json"));
    CHECK_MESSAGE(r.code == 0, cmd);
    CHECK(data_lines(r.out).size() >= 2);
  }
}

TEST_CASE("sweep rows follow the grid") {
  const auto r = run("sweep --threads 2 --config " + config("kappa_sweep.json"));
  CHECK(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0].rfind("tiers[*].fading.kappa,rate_nats", 0) == 0);
  for (int i = 0; i <= 10; ++i) CHECK(lines[i + 1].rfind(std::to_string(i) + ",", 0) == 0);
  const auto s = run("sweep --threads 1 --config " + config("kappa_sweep.json"));
  CHECK(data_lines(s.out) == lines);
}

TEST_CASE("simulate and validate") {
  const auto log = scratch() / "drops.csv";
  const auto s = run("simulate --drops 2000 --seed 3 --drop-log " + log.string() + " --config " + config("rayleigh.json"));
  CHECK(s.code == 0);
  CHECK(data_lines(slurp(log)).size() == 2000);
  CHECK(header_value(s.out, "seed") == "3");
  const auto v = run("validate --drops 20000 --config " + config("rayleigh.json"));
  CHECK(v.code == 0);
  CHECK(v.out.find("FAIL") == std::string::npos);
}

TEST_CASE("exit codes") {
  const auto bad = write("bad.json", R"({"alpha": 4, "tiers": [{"density": 1e-3, "power": 1, "fading": {"kapa": 1}}]})");
  const auto r = run("rate --config " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("tiers[0].fading.kapa") != std::string::npos);

  const auto neg = write("neg.json", R"({"alpha": 4, "tiers": [{"density": -1, "power": 1}]})");
  CHECK(run("rate --config " + neg.string()).code == 2);
  CHECK(run("rate --config /nonexistent.json").code == 2);
  CHECK(run("rate --config " + write("syntax.json", "{").string()).code == 2);

  const auto a2 = write("a2.json", R"({"alpha": 2, "regime": "noise_limited", "noise_psd": 1e-3,
      "tiers": [{"density": 1e-3, "power": 1}]})");
  CHECK(run("rate --config " + a2.string()).code == 2);
  CHECK(run("rate --allow-alpha-2 --config " + a2.string()).code == 0);

  const auto hard = write("hard.json", R"({"alpha": 4, "tiers": [{"density": 1e-3, "power": 1,
      "fading": {"kappa": 6, "mu": 3, "m": 0.5}}], "metrics": {"coeff_order": 5}})");
  CHECK(run("coeffs --config " + hard.string()).code == 3);
}

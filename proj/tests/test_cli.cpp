#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "test_util.hpp"

using bizeta::testing::corpus;

namespace {

struct CliRun {
  int status;
  std::string out;
};

CliRun run(const std::string &args, bool with_stderr = false) {
  std::string cmd = std::string(BIZETA_CLI_PATH) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE *pipe = popen(cmd.c_str(), "r");
  CliRun r{-1, ""};
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json run_json(const std::string &args, int expect_status = 0) {
  CliRun r = run(args);
  EXPECT_EQ(r.status, expect_status) << args << "\n" << r.out;
  auto j = nlohmann::json::parse(r.out, nullptr, false);
  EXPECT_FALSE(j.is_discarded()) << r.out;
  if (!j.is_discarded()) EXPECT_EQ(j.value("schema_version", 0), 1);
  return j;
}

std::string lattice(const char *name) { return corpus(std::string(name) + ".json"); }

}  // namespace

TEST(Cli, QuotientZetaBothRoutesAgree) {
  auto j = run_json("quotient-zeta --lattice " + lattice("heisenberg") + " --p 3 --N 1 --kind cc --method both");
  EXPECT_EQ(j["classes"]["brute"], (nlohmann::json{{"1", 3}, {"3", 8}}));
  EXPECT_EQ(j["classes"]["linear"], j["classes"]["brute"]);
  EXPECT_TRUE(j["agree"].get<bool>());
}

TEST(Cli, InadmissiblePrimeExitsTwo) {
  CliRun r = run("quotient-zeta --lattice " + lattice("heisenberg") + " --p 2 --N 1 --kind cc", true);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("InadmissiblePrime"), std::string::npos) << r.out;
}

TEST(Cli, SizeBoundExitsThree) {
  CliRun r = run("quotient-zeta --lattice " + lattice("heisenberg") + " --p 3 --N 2 --kind cc --max-order 100");
  EXPECT_EQ(r.status, 3);
}

TEST(Cli, LatticeCheck) {
  auto ok = run_json("lattice-check --lattice " + lattice("free_class2_3gen"));
  EXPECT_EQ(ok["profile"]["h"], 6);
  auto bad = run_json("lattice-check --lattice " + lattice("jacobi_violation"), 2);
  EXPECT_EQ(bad["error"], "JacobiViolation");
  EXPECT_EQ(bad["triple"], (nlohmann::json{1, 2, 4}));
  EXPECT_EQ(run("lattice-check --lattice /nonexistent.json").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
}

TEST(Cli, DomainWc) {
  auto j = run_json("domain wc --poly " + corpus("poly_wc_example.json") + " --c 1 --delta 1");
  EXPECT_EQ(j["halfplanes"].dump(), R"([{"a1":1,"a2":2,"b":-1},{"a1":2,"a2":1,"b":0}])");
  CliRun text = run("--format text domain wc --poly " + corpus("poly_wc_example.json") + " --delta 1");
  EXPECT_EQ(text.out, "Re(s1 + 2*s2) > -1\nRe(2*s1 + s2) > 0\n");
}

TEST(Cli, DomainCanonicalizeAndRset) {
  auto c = run_json("domain canonicalize --domain " + corpus("domain_redundant.json"));
  EXPECT_EQ(c["halfplanes"].size(), 2u);
  auto r = run_json("domain rset --domain " + corpus("domain_redundant.json"));
  EXPECT_EQ(r["rset"]["indices"], (nlohmann::json{1, 2}));
}

TEST(Cli, ProbeIsLabelledHeuristic) {
  auto j = run_json("domain probe --poly " + corpus("poly_probe.json") + " --point 1,1");
  EXPECT_EQ(j["probe"]["verdict"], "converges");
  EXPECT_TRUE(j["probe"]["heuristic"].get<bool>());
}

TEST(Cli, XiCheckPassesAndPerturbedFails) {
  auto j = run_json("xi check --data " + corpus("xi_separable.json") + " --rays " + corpus("rays_separable_q3.json") +
                    " --q 3 --depth 30");
  EXPECT_TRUE(j["report"]["pass"].get<bool>());
  auto rays = nlohmann::json::parse(std::ifstream(corpus("rays_separable_q3.json")));
  rays["rays"][0]["B"] = 1;
  auto path = std::filesystem::temp_directory_path() / "bizeta_perturbed_rays.json";
  std::ofstream(path) << rays.dump();
  CliRun r = run("xi check --data " + corpus("xi_separable.json") + " --rays " + path.string() + " --q 3 --depth 30");
  EXPECT_EQ(r.status, 4);
  std::filesystem::remove(path);
}

TEST(Cli, OutputIndependentOfThreads) {
  std::string args = "local-factor --lattice " + lattice("heisenberg") + " --p 3 --N-max 2 --kind irr --method both";
  CliRun one = run("--threads 1 " + args);
  EXPECT_EQ(one.status, 0);
  for (int t : {4, 8}) EXPECT_EQ(run("--threads " + std::to_string(t) + " " + args).out, one.out);
}

TEST(Cli, OutFileGetsJsonStdoutGetsText) {
  auto path = std::filesystem::temp_directory_path() / "bizeta_cli_out.json";
  CliRun r = run("--out " + path.string() + " dixon --lattice " + lattice("heisenberg") + " --p 3 --N 1");
  EXPECT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(std::ifstream(path));
  EXPECT_EQ(j["command"], "dixon");
  EXPECT_FALSE(r.out.empty());
  EXPECT_NE(r.out.front(), '{');
  std::filesystem::remove(path);
}

TEST(Cli, EulerBothRoutes) {
  auto j = run_json("euler --lattice " + lattice("heisenberg") + " --primes 3,5 --method both");
  EXPECT_TRUE(j["agree"].get<bool>());
}

TEST(Cli, CompareExtensionsAtNine) {
  auto j = run_json("compare-extensions --lattice " + lattice("heisenberg") + " --p 3 --f 2 --method both");
  EXPECT_TRUE(j["agree"].get<bool>());
  EXPECT_EQ(j["q"], 9);
}

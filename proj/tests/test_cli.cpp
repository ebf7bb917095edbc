#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
  std::string out;
  int code = -1;
};

Run vemctl(const std::string &args) {
  const std::string cmd = std::string(VEMCTL_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string elem(const std::string &name) { return std::string(DATA_DIR) + "/" + name + ".json"; }

std::vector<nlohmann::json> lines(const std::string &out) {
  std::vector<nlohmann::json> v;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) v.push_back(nlohmann::json::parse(line));
  return v;
}

nlohmann::json one(const std::string &args) {
  const Run r = vemctl(args + " --json -");
  CHECK(r.code == 0);
  const auto v = lines(r.out);
  REQUIRE(v.size() == 1);
  return v[0];
}

int fem_dim(const nlohmann::json &j, const std::string &name) {
  for (const auto &row : j["fem"])
    if (row["name"] == name) return row["dim"];
  return -1;
}

} // namespace

TEST_CASE("dims against finite element counterparts") {
  auto j = one("dims " + elem("triangle") + " --family face2d --k 1 --kd 0 --kr 0");
  CHECK(j["N"] == 7);
  CHECK(fem_dim(j, "BDM_1") == 6);
  j = one("dims " + elem("triangle") + " --family face2d --k 1 --kd 1 --kr 0");
  CHECK(j["N"] == 9);
  CHECK(fem_dim(j, "RT_1") == 8);
  j = one("dims " + elem("square") + " --preset rt --k 1");
  CHECK(j["N"] == 11);
  CHECK(fem_dim(j, "RT^q_1") == 12);
  CHECK(fem_dim(j, "BDM^q_1") == 8);
  j = one("dims " + elem("cube") + " --preset rt --k 1");
  CHECK(fem_dim(j, "RT^q_1") == 36);
  j = one("dims " + elem("dart") + " --preset bdm --k 1");
  CHECK(j["fem"].empty());
}

TEST_CASE("reduce reports") {
  auto j = one("reduce " + elem("square") + " --preset bdm --k 2");
  CHECK(j["S"] == 14);
  CHECK(j["saved_dofs"] == 3);
  CHECK(j["status"] == "pass");
  for (const char *key : {"family", "params", "N", "M", "S", "strategy", "eta", "singular_values", "saved_dofs",
                          "kernel_dim_formula", "kernel_dim_numeric"})
    CHECK(j.contains(key));
  j = one("reduce " + elem("triangle") + " --preset bdm --k 2");
  CHECK(j["S"] == 12);
  CHECK(j["kernel_dim_numeric"] == 1);
  CHECK(j["kernel_dim_formula"] == 1);

  j = one("reduce " + elem("tetrahedron") + " --preset n2 --k 3 --strategy convex");
  CHECK(j["eta"] == 4);
  int interior = 0;
  for (const auto &d : j["extra_dofs"]) interior += d["entity"] == "element";
  CHECK(interior == 1);

  j = one("reduce " + elem("lshape") + " --preset bdm --k 3");
  CHECK(j["strategy"] == "systematic");
  CHECK(j["status"] == "pass");
  CHECK(vemctl("reduce " + elem("lshape") + " --preset bdm --k 3 --strategy convex").code == 2);
}

TEST_CASE("verify and zspace") {
  auto j = one("verify " + elem("square") + " --preset bdm --k 2 --seed 3");
  CHECK(j["status"] == "pass");
  j = one("zspace " + elem("cube") + " --preset bdm --k 3");
  CHECK(j["kernel_dim_numeric"] == 3);
  j = one("zspace " + elem("tetrahedron") + " --preset bdm --k 2");
  CHECK(j["kernel_dim_numeric"] == 3);
  CHECK(j["fields"].size() == 3);
  CHECK(j["cups"]["same_span"] == true);
  CHECK(one("zspace " + elem("square") + " --preset bdm --k 3")["kernel_dim_numeric"] == 1);
  CHECK(one("zspace " + elem("triangle") + " --preset bdm --k 4")["kernel_dim_numeric"] == 6);
}

TEST_CASE("exit codes") {
  const std::string bad = "/tmp/vemctl_open_polyhedron.json";
  std::ofstream(bad) << R"({"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],)"
                     << R"("faces":[[0,2,1],[0,1,3],[0,3,2],[1,3,2]]})";
  CHECK(vemctl("verify " + bad + " --k 1").code == 2);
  CHECK(vemctl("reduce " + elem("square") + " --k 1 --strategy nope").code == 2);
  CHECK(vemctl("reduce " + elem("square") + " --family face2d --k 1 --kd -1").code == 2);
  CHECK(vemctl("reduce " + elem("square") + " --family edge3d --k 1").code == 2);
  CHECK(vemctl("reduce").code == 2);
  CHECK(vemctl("dims /nonexistent/file.json --k 1").code == 2);
}

TEST_CASE("output is deterministic") {
  const std::string args = "verify " + std::string(DATA_DIR) + " --preset bdm --k 2 --seed 5 --samples 5";
  const Run a = vemctl(args + " --json -"), b = vemctl(args + " --json - --jobs 1");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 8);
  const Run t1 = vemctl(args), t2 = vemctl(args);
  CHECK(t1.out == t2.out);
}

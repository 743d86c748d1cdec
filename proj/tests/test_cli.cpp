/* Copyright 2026 The walkerlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

// End-to-end checks of the walkerlab command-line tool.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + WALKERLAB_BIN + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("walkerlab_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const std::string kBuiltin = WALKERLAB_CATALOG_FILE;

}  // namespace

TEST(Cli, ValidateBuiltinCatalog) {
  CliRun r = run("validate " + kBuiltin);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("OK: 49 entries"), std::string::npos) << r.out;
}

TEST(Cli, ValidateTruncatedFile) {
  std::string text = read_file(kBuiltin);
  std::string cut = text.substr(0, text.find("[e1,e2]", text.find("[entry thm4.2-item1]")) + 5);
  EXPECT_EQ(run("validate " + temp_file("truncated.catalog", cut)).code, 2);
  EXPECT_EQ(run("validate /nonexistent/walkerlab.catalog").code, 2);
}

TEST(Cli, JacobiFailureSurfacesAtReport) {
  const std::string bad =
      "[entry broken]\ndim_m = 4\ndim_h = 0\nflag: full\n"
      "[e1,e2] = e3\n[e2,e3] = e1\n[e3,e4] = e1\n"
      "g(1,1) = 1\ng(2,2) = 1\ng(3,3) = -1\ng(4,4) = -1\n";
  std::string path = temp_file("jacobi.catalog", bad);
  EXPECT_EQ(run("validate " + path).code, 0);
  EXPECT_EQ(run("report broken --catalog " + path).code, 2);
}

TEST(Cli, ReportItem1) {
  CliRun r = run("report thm4.2-item1 --params c1=1,c2=0,c3=0 --format json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["segre"]["render"], "[(1,12)]");
  EXPECT_EQ(j["walker"]["line"]["verdict"], "exists");
  EXPECT_EQ(j["walker"]["line"]["witnesses"][0]["generator"], nlohmann::json({"0", "1", "1", "0"}));
  EXPECT_EQ(j["conformally_flat"], true);
  EXPECT_EQ(j["tau"], "0");
  EXPECT_TRUE(j.contains("timing_ms"));
}

TEST(Cli, ReportKomrakovByAlias) {
  CliRun r = run("report 1.3^1:2 --params a=1,b=0,c=0,l=1 --format json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["conformally_flat"], true);
  EXPECT_EQ(j["walker"]["plane"]["verdict"], "exists");
  EXPECT_EQ(j["walker"]["plane"]["witnesses"][0], nlohmann::json({{"1", "0", "0", "0"}, {"0", "1", "0", "0"}}));
  EXPECT_EQ(j["walker"]["line"]["verdict"], "none");
}

TEST(Cli, ReportInputErrors) {
  EXPECT_EQ(run("report thm4.2-item1 --params c1=0").code, 2);
  EXPECT_EQ(run("report thm4.2-item1 --params c1=1,zz=2").code, 2);
  EXPECT_EQ(run("report no-such-entry").code, 2);
  EXPECT_EQ(run("report 1.3^1:30").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, ReportTextFormat) {
  CliRun r = run("report 'thm4.1-(1,3)' --params c1=-1/2,c2=1,s=1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Segre type [(1,3)]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("conformally flat: yes"), std::string::npos);
  EXPECT_NE(r.out.find("invariant null line field: none"), std::string::npos);
  EXPECT_NE(r.out.find("invariant null plane field: none"), std::string::npos);
}

TEST(Cli, VerifyPaperIsDeterministic) {
  CliRun a = run("verify-paper --format json --seed 7");
  CliRun b = run("verify-paper --format json --seed 7");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out)["summary"];
  EXPECT_EQ(j["result"], "PASS");
  EXPECT_GE(j["verified"].get<int>(), 10);
  EXPECT_EQ(j["failed"], 0);
  EXPECT_GE(j["skipped_stubs"].get<int>(), 30);
}

TEST(Cli, VerifySingleCases) {
  CliRun r = run("verify-paper --case thm3.2-i");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos) << r.out;
  CliRun s = run("verify-paper --case 1.3^1:30-stub");
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("SKIPPED-STUB"), std::string::npos) << s.out;
  EXPECT_EQ(run("verify-paper --case nothing-like-this").code, 2);
}

TEST(Cli, VerifyReportsMismatch) {
  std::string text = read_file(kBuiltin);
  // Flip the expected Segre label of item 3 in a private copy.
  auto at = text.find("[entry thm4.2-item3]");
  ASSERT_NE(at, std::string::npos);
  auto seg = text.find("[(11,2)]", at);
  ASSERT_NE(seg, std::string::npos);
  text.replace(seg, 8, "[(11,11)]");
  std::string path = temp_file("mismatch.catalog", text);
  CliRun r = run("verify-paper --case thm4.2-item3", "WALKERLAB_CATALOG=" + path);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos) << r.out;
}

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

// walkerlab command-line front end.
//
// Exit codes: 0 success, 1 verification mismatch, 2 input or usage error,
// 3 a Walker search ended undecided.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "walkerlab/builtin.hpp"
#include "walkerlab/verify.hpp"

namespace {

using namespace walkerlab;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kIndeterminate = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Built-in entries, overlaid by $WALKERLAB_CATALOG and then by --catalog.
Catalog load_catalog(const std::string& extra) {
  Catalog cat = builtin_catalog();
  if (const char* env = std::getenv("WALKERLAB_CATALOG"); env && *env)
    cat = merge_catalogs(std::move(cat), parse_catalog(read_file(env)));
  if (!extra.empty()) cat = merge_catalogs(std::move(cat), parse_catalog(read_file(extra)));
  return cat;
}

/// "a=1,b=-1/2" into rational bindings. Values may be rational expressions.
ParamValues parse_params(const std::string& text) {
  ParamValues out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "expected k=v, got '" + item + "'");
    std::string key = item.substr(0, eq);
    key.erase(0, key.find_first_not_of(' '));
    key.erase(key.find_last_not_of(' ') + 1);
    Scalar v = eval(parse_expr(item.substr(eq + 1)), {});
    if (!v.is_rational()) throw Error(ErrorKind::InvalidArgument, "parameter '" + key + "' must be rational");
    if (out.count(key)) throw Error(ErrorKind::InvalidArgument, "parameter '" + key + "' given twice");
    out[key] = v.rational_part();
  }
  return out;
}

int cmd_validate(const std::string& path) {
  Catalog cat = parse_catalog(read_file(path));
  std::size_t full = 0;
  for (const auto& e : cat) full += e.is_full();
  std::cout << "OK: " << cat.size() << " entries (" << full << " full, " << cat.size() - full << " stubs)\n";
  return kOk;
}

int cmd_report(const std::string& id, const std::string& catalog, const std::string& params,
               const std::string& format) {
  Catalog cat = load_catalog(catalog);
  const CatalogEntry& entry = find_entry(cat, id);
  HomogeneousModel m = instantiate(entry, parse_params(params));
  Report r = make_report(m);
  if (format == "json") std::cout << to_json(r).dump(2) << "\n";
  else std::cout << to_text(r, m.m_names());
  return is_indeterminate(r) ? kIndeterminate : kOk;
}

int cmd_verify(const std::optional<std::string>& case_id, std::uint64_t seed, std::size_t trials,
               const std::string& catalog, const std::string& format) {
  Catalog cat = load_catalog(catalog);
  VerifyOptions opt;
  opt.case_id = case_id;
  opt.seed = seed;
  opt.trials = trials;
  VerifySummary s = verify_catalog(cat, opt);
  if (format == "json") std::cout << to_json(s).dump(2) << "\n";
  else std::cout << to_text(s);
  return s.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariant geometry and Walker structures of homogeneous four-spaces"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and check a catalog file");
  validate->add_option("file", validate_path, "catalog file")->required();

  std::string report_id, report_params, report_catalog, report_format = "text";
  auto* report = app.add_subcommand("report", "Geometry and Walker report for one catalog entry");
  report->add_option("id", report_id, "entry id or alias")->required();
  report->add_option("--params", report_params, "parameter bindings k=v[,k=v...]");
  report->add_option("--catalog", report_catalog, "extra catalog overlaid on the built-in one");
  report->add_option("--format", report_format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string verify_case, verify_catalog_path, verify_format = "text";
  std::uint64_t seed = 1;
  std::size_t trials = 3;
  auto* verify = app.add_subcommand("verify-paper", "Check every full catalog entry against its expectations");
  auto* case_opt = verify->add_option("--case", verify_case, "entry id or id prefix");
  verify->add_option("--seed", seed, "seed for parameter sampling");
  verify->add_option("--trials", trials, "parameter assignments per entry")->check(CLI::PositiveNumber);
  verify->add_option("--catalog", verify_catalog_path, "extra catalog overlaid on the built-in one");
  verify->add_option("--format", verify_format, "output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path);
    if (*report) return cmd_report(report_id, report_catalog, report_params, report_format);
    if (*verify) {
      std::optional<std::string> c;
      if (*case_opt) c = verify_case;
      return cmd_verify(c, seed, trials, verify_catalog_path, verify_format);
    }
  } catch (const walkerlab::Error& e) {
    std::cerr << "walkerlab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "walkerlab: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

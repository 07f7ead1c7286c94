// Copyright 2026 The wiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: distances, transforms, verification campaigns and
// packaged examples.
//
// Exit codes: 0 pass, 1 invariant failure, 2 usage or parse error,
// 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wiso/wiso.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::optional<std::string> mode;
  std::optional<std::string> space;
  std::optional<std::string> p;
  std::optional<std::size_t> max_atoms;
  std::optional<std::int64_t> window;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "campaign seed");
  cmd->add_option("--trials", f.trials, "number of trials");
  cmd->add_option("--tol", f.tol, "residual tolerance");
  cmd->add_option("--mode", f.mode, "scalar mode")->check(CLI::IsMember({"float", "rational"}));
  cmd->add_option("--space", f.space, "space spec, e.g. product:1/2:2:euclidean:1");
  cmd->add_option("--p", f.p, "Wasserstein exponent (decimal or p/q)");
  cmd->add_option("--max-atoms", f.max_atoms, "largest sampled support size");
  cmd->add_option("--window", f.window, "Euclidean sampling radius");
}

wiso::RunConfig resolve(const Flags& f) {
  wiso::RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    try {
      cfg.load(in);
    } catch (const wiso::ParseError& e) {
      throw wiso::ParseError(f.config + ":" + e.what(), 0, 0);
    }
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.tol) cfg.tol = *f.tol;
  if (f.mode) cfg.mode = wiso::parse_mode(*f.mode);
  if (f.space) cfg.space = *f.space;
  if (f.p) cfg.set("p", *f.p);
  if (f.max_atoms) cfg.max_atoms = *f.max_atoms;
  if (f.window) cfg.window = *f.window;
  cfg.validate();
  return cfg;
}

template <wiso::Scalar T>
int dist(const wiso::RunConfig& cfg, const std::string& mu_file, const std::string& nu_file,
         bool json) {
  auto mu = wiso::read_measure_file<T>(mu_file, cfg.tol);
  auto nu = wiso::read_measure_file<T>(nu_file, cfg.tol);
  if (!wiso::same_space(mu.measure.space(), nu.measure.space())) {
    throw wiso::KindMismatchError("measures live on different spaces (" + mu.space_spec +
                                  " vs " + nu.space_spec + ")");
  }
  wiso::SolverOptions opts;
  opts.tol = cfg.tol;
  auto r = wiso::solve_wasserstein(mu.measure, nu.measure, cfg.p, opts);
  if (json) {
    std::cout << wiso::transport_result_json(r).dump(2) << '\n';
  } else {
    wiso::write_transport_result(std::cout, r);
  }
  if (!r.certified) {
    std::cerr << "error: solution failed its optimality certificate\n";
    return kExitNumerical;
  }
  return kExitPass;
}

template <wiso::Scalar T>
int transform(const wiso::RunConfig& cfg, const std::string& name, const std::string& mu_file) {
  auto in = wiso::read_measure_file<T>(mu_file, cfg.tol);
  wiso::DiscreteMeasure<T> out = in.measure;
  if (name == "fiber-flip") {
    out = wiso::fiberwise(wiso::IntervalIsometry::Flip, in.measure);
  } else {
    out = wiso::apply_interval_isometry(wiso::parse_isometry(name), in.measure);
  }
  wiso::write_measure(std::cout, out, in.space_spec);
  return kExitPass;
}

int emit(const std::vector<wiso::CampaignReport>& reports, const std::string& csv,
         const std::string& report_path, bool with_time) {
  bool pass = true;
  std::ofstream report_file;
  if (!report_path.empty()) {
    report_file.open(report_path);
    if (!report_file) throw wiso::DomainError("cannot write '" + report_path + "'");
  }
  std::ostream& out = report_path.empty() ? std::cout : report_file;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out << '\n';
    reports[i].write_text(out, with_time);
    pass = pass && reports[i].pass;
    if (!csv.empty()) {
      std::string path = reports.size() == 1 ? csv : csv + "." + reports[i].suite + ".csv";
      std::ofstream f(path);
      if (!f) throw wiso::DomainError("cannot write '" + path + "'");
      reports[i].write_csv(f);
    }
  }
  if (!report_path.empty()) {
    for (const auto& r : reports) {
      std::cout << r.suite << ": " << (r.pass ? "pass" : "FAIL") << " (max residual "
                << wiso::format_double(r.max_residual) << ")\n";
    }
  }
  return pass ? kExitPass : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein isometry laboratory"};
  app.require_subcommand(1);
  Flags flags;

  auto* dist_cmd = app.add_subcommand("dist", "Wasserstein distance between two measure files");
  std::string mu_file, nu_file;
  bool json = false;
  add_common(dist_cmd, flags);
  dist_cmd->add_option("mu", mu_file, "first measure file")->required()->check(CLI::ExistingFile);
  dist_cmd->add_option("nu", nu_file, "second measure file")->required()->check(CLI::ExistingFile);
  dist_cmd->add_flag("--json", json, "print the result as JSON");

  auto* tr_cmd = app.add_subcommand("transform", "apply an isometry to a measure file");
  std::string tr_name, tr_file;
  add_common(tr_cmd, flags);
  tr_cmd->add_option("name", tr_name, "id, reflect, flip, flip-reflect or fiber-flip")
      ->required()
      ->check(CLI::IsMember({"id", "reflect", "flip", "flip-reflect", "fiber-flip"}));
  tr_cmd->add_option("mu", tr_file, "measure file")->required()->check(CLI::ExistingFile);

  std::string csv, report_path;
  bool no_time = false;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification campaign");
  std::string suite;
  add_common(verify_cmd, flags);
  verify_cmd->add_option("suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(wiso::suite_names()));

  auto* scenario_cmd = app.add_subcommand("scenario", "run the flexibility suites on an example");
  std::string scenario;
  add_common(scenario_cmd, flags);
  scenario_cmd->add_option("name", scenario, "example name")
      ->required()
      ->check(CLI::IsMember(wiso::scenario_names()));

  for (auto* cmd : {verify_cmd, scenario_cmd}) {
    cmd->add_option("--csv", csv, "write per-trial residuals as CSV");
    cmd->add_option("--report", report_path, "write the report to a file");
    cmd->add_flag("--no-time", no_time, "omit the wall time from the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitPass : kExitUsage;
  }

  try {
    const wiso::RunConfig cfg = resolve(flags);
    const bool exact = cfg.mode == wiso::Mode::Rational;
    if (*dist_cmd) {
      return exact ? dist<wiso::Rational>(cfg, mu_file, nu_file, json)
                   : dist<double>(cfg, mu_file, nu_file, json);
    }
    if (*tr_cmd) {
      return exact ? transform<wiso::Rational>(cfg, tr_name, tr_file)
                   : transform<double>(cfg, tr_name, tr_file);
    }
    if (*verify_cmd) return emit({wiso::run_suite(suite, cfg)}, csv, report_path, !no_time);
    return emit(wiso::run_scenario(scenario, cfg), csv, report_path, !no_time);
  } catch (const wiso::InexactError& e) {
    std::cerr << "error: " << e.what() << " (use --mode float)\n";
    return kExitUsage;
  } catch (const wiso::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const wiso::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const wiso::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

// Copyright 2026 The ldptest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ldptest: privacy audits, one-shot tests, Monte-Carlo error rates,
// sample-complexity curves, calibration sweeps and the appendix checks.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using ldptest::cli::Flags;

void AddModelFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--k", f.k, "Alphabet size(s)")->delimiter(',');
  cmd->add_option("--epsilon", f.epsilon, "Privacy parameter(s)")
      ->delimiter(',');
  cmd->add_option("--gamma", f.gamma, "Distance parameter");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--out", f.out, "Output file (default stdout)");
}

void AddExperimentFlags(CLI::App* cmd, Flags& f) {
  AddModelFlags(cmd, f);
  cmd->add_option("--test", f.test,
                  "rappor-uniformity | hr-uniformity | raptor-uniformity | "
                  "hr-independence | raptor-independence");
  cmd->add_option("--n", f.n, "Sample-size grid, strictly increasing")
      ->delimiter(',');
  cmd->add_option("--trials", f.trials, "Trials per grid point");
  cmd->add_option("--target", f.target, "Target error rate");
  cmd->add_option("--config", f.config, "ExperimentConfig JSON file");
  cmd->add_option("--format", f.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--alternative", f.alternative,
                  "paninski | balanced_paninski_joint");
  cmd->add_option("--input", f.input,
                  "Sample file used as the alternative instance");
  cmd->add_flag("--per-user", f.per_user,
                "Encode every user instead of sampling sufficient statistics");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally private distribution testing toolkit", "ldptest"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* audit = app.add_subcommand("audit", "Exact epsilon-LDP audit");
  AddModelFlags(audit, f);
  audit->add_option("--mechanism", f.mechanism,
                    "rr | rappor | hr | hr-pair | raptor | raptor2 | all");

  CLI::App* test = app.add_subcommand(
      "test", "Run one test on a batch JSON or a raw sample file");
  AddModelFlags(test, f);
  test->add_option("--input", f.input, "Batch JSON or sample file")
      ->required();
  test->add_option("--test", f.test, "Test for raw samples");
  test->add_option("--config", f.config, "Config supplying calibration");
  test->add_option("--n1", f.n1, "Users per learned marginal (HR pairs)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte-Carlo error rates on an n grid");
  AddExperimentFlags(simulate, f);

  CLI::App* curve = app.add_subcommand(
      "curve", "Binary search for the minimal n meeting the target error");
  AddExperimentFlags(curve, f);

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Regenerate a shipped constant");
  AddExperimentFlags(calibrate, f);
  calibrate
      ->add_option("--constant", f.constant,
                   "c_rappor | c_hr | c_raptor | c_hr_ind | c_raptor_ind | "
                   "c_learn | c_thr")
      ->required();
  calibrate->add_option("--lo", f.lo, "Smallest swept constant");
  calibrate->add_option("--hi", f.hi, "Largest swept constant");
  calibrate->add_option("--steps", f.steps, "Grid points per doubling");
  calibrate->add_option("--quantile", f.quantile, "Quantile for c_thr");

  CLI::App* verify = app.add_subcommand(
      "verify-appendix", "Exact identity, moment and matrix checks");
  verify->add_option("--seed", f.seed, "Seed for the randomized cases");
  verify->add_option("--out", f.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ldptest::cli::kExitBadInput;
  }

  namespace cli = ldptest::cli;
  if (*audit) return cli::RunAudit(f, std::cout, std::cerr);
  if (*test) return cli::RunTest(f, std::cout, std::cerr);
  if (*simulate) return cli::RunSimulate(f, std::cout, std::cerr);
  if (*curve) return cli::RunCurve(f, std::cout, std::cerr);
  if (*calibrate) return cli::RunCalibrate(f, std::cout, std::cerr);
  if (*verify) return cli::RunVerifyAppendix(f, std::cout, std::cerr);
  return cli::kExitBadInput;
}

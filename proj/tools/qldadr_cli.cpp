// Copyright 2026 The QLDADR Authors
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


#include <CLI11.hpp>

#include <optional>
#include <string>

#include "qldadr/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum LDA dimensionality reduction simulator"};
  qldadr::cli::RunSpec spec;
  std::string mode = "full";
  std::optional<double> c1;
  std::optional<double> alpha;
  std::string clamp = "discard";
  app.add_option("--input", spec.input_path, "CSV with a header row")->required();
  app.add_option("--labels", spec.label_column,
                 "label column, by header name or 0-based index (default: last)");
  app.add_option("--output", spec.output_path, "JSON report path (default: stdout)");
  app.add_option("--mode", mode, "full | classical-only | circuits-only")
      ->check(CLI::IsMember({"full", "classical-only", "circuits-only"}));
  app.add_option("--dims-threshold", spec.config.threshold,
                 "cumulative eigenvalue mass for choosing d");
  app.add_option("--pe-bits", spec.config.pe_bits, "eigenvalue register bits L");
  app.add_option("--sigma-bits", spec.config.sigma_bits, "sigma register bits");
  app.add_option("--kappa-lambda", spec.config.kappa_lambda,
                 "drop kept eigenvalues below lambda_1 / kappa");
  app.add_option("--kappa-sigma", spec.config.kappa_sigma,
                 "condition clamp on the square root of the within-class scatter");
  app.add_option("--clamp-mode", clamp, "discard | floor")
      ->check(CLI::IsMember({"discard", "floor"}));
  app.add_option("--alpha", alpha, "regularization (default 1e-6 * mean |x|)");
  app.add_option("--c1", c1, "rotation constant (default 1 / max sigma)");
  app.add_option("--seed", spec.seed, "seed for random direction sampling");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  spec.mode = qldadr::cli::parse_mode(mode);
  spec.config.c1 = c1;
  spec.config.alpha = alpha;
  spec.config.clamp_mode =
      clamp == "floor" ? qldadr::ClampMode::floor : qldadr::ClampMode::discard;
  return qldadr::cli::run(spec);
}

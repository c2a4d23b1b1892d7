// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elgrat/hexmesh.hpp"
#include "elgrat/modes.hpp"
#include "elgrat/pml.hpp"

namespace elgrat {

/// Flat key = value run description with dotted section keys.
struct RunConfig {
  double lambda = 1.0;
  double mu = 2.0;
  double omega = 2.0 * 3.14159265358979323846;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double period1 = 1.0;
  double period2 = 1.0;
  double h = 0.3;
  double pml_delta = 0.3;
  double sigma_re = 25.39;
  double sigma_im = 25.39;
  int pml_degree = 2;
  int mode_window = 10;
  int dtn_truncation = 5;
  std::string variant = "pml"; // "pml" | "dtn"
  std::vector<std::array<int, 3>> resolutions = {{8, 8, 12}};
  std::vector<double> sigma_scalings = {0.25, 0.5, 1.0, 2.0};
  int elements_1d = 512;
  double solver_tol = 1e-8;
  int solver_max_iter = 400;
  double assumed_gamma1 = 1.0;
  std::vector<BumpBox> bumps;

  Medium medium() const;
  Incidence incidence() const;
  Lattice lattice() const;
  PmlProfile profile() const;
  Geometry geometry() const;
  Variant variant_kind() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

} // namespace elgrat

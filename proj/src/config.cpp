// SPDX-License-Identifier: Apache-2.0
#include "elgrat/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace elgrat {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& value) {
  std::vector<double> out;
  std::istringstream is(value);
  double v;
  while (is >> v) out.push_back(v);
  if (!is.eof())
    throw ParameterError("config: malformed numeric list '" + value + "'");
  return out;
}

} // namespace

Medium RunConfig::medium() const { return medium_of(lambda, mu, omega); }

Incidence RunConfig::incidence() const {
  return incidence_of(medium(), theta1, theta2);
}

Lattice RunConfig::lattice() const {
  return lattice_of(period1, period2, incidence());
}

PmlProfile RunConfig::profile() const {
  return make_profile(h, pml_delta, Complex(sigma_re, sigma_im), pml_degree);
}

Geometry RunConfig::geometry() const { return Geometry{bumps}; }

Variant RunConfig::variant_kind() const {
  if (variant == "pml") return Variant::Pml;
  if (variant == "dtn") return Variant::Dtn;
  throw ParameterError("config: solver.variant must be 'pml' or 'dtn'");
}

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config: line " + std::to_string(line_no) +
                           " is not 'key = value'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  RunConfig cfg;
  const auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const auto number = [&](const std::string& key, double& slot) {
    if (const auto v = take(key)) {
      try {
        slot = std::stod(*v);
      } catch (const std::exception&) {
        throw ParameterError("config: key '" + key + "' is not a number");
      }
    }
  };
  const auto integer = [&](const std::string& key, int& slot) {
    double d = slot;
    number(key, d);
    slot = int(d);
    if (slot != d) throw ParameterError("config: key '" + key + "' must be an integer");
  };

  number("medium.lambda", cfg.lambda);
  number("medium.mu", cfg.mu);
  number("medium.omega", cfg.omega);
  number("incidence.theta1", cfg.theta1);
  number("incidence.theta2", cfg.theta2);
  number("lattice.period1", cfg.period1);
  number("lattice.period2", cfg.period2);
  number("surface.h", cfg.h);
  number("pml.delta", cfg.pml_delta);
  number("pml.sigma_re", cfg.sigma_re);
  number("pml.sigma_im", cfg.sigma_im);
  integer("pml.degree", cfg.pml_degree);
  integer("modes.window", cfg.mode_window);
  integer("solver.truncation", cfg.dtn_truncation);
  if (const auto v = take("solver.variant")) cfg.variant = *v;
  number("solver.tolerance", cfg.solver_tol);
  integer("solver.max_iterations", cfg.solver_max_iter);
  integer("solver.elements_1d", cfg.elements_1d);
  number("bounds.gamma1", cfg.assumed_gamma1);

  if (const auto v = take("mesh.resolutions")) {
    const std::vector<double> nums = parse_numbers(*v);
    if (nums.empty() || nums.size() % 3 != 0)
      throw ParameterError("config: mesh.resolutions must hold triples");
    cfg.resolutions.clear();
    for (size_t i = 0; i < nums.size(); i += 3)
      cfg.resolutions.push_back(
          {int(nums[i]), int(nums[i + 1]), int(nums[i + 2])});
  }
  if (const auto v = take("sweep.scalings")) {
    cfg.sigma_scalings = parse_numbers(*v);
    if (cfg.sigma_scalings.empty())
      throw ParameterError("config: sweep.scalings must not be empty");
  }
  if (const auto v = take("surface.bumps")) {
    cfg.bumps.clear();
    std::istringstream boxes(*v);
    std::string box;
    while (std::getline(boxes, box, ';')) {
      box = trim(box);
      if (box.empty()) continue;
      const std::vector<double> nums = parse_numbers(box);
      if (nums.size() != 5)
        throw ParameterError(
            "config: each bump needs 'x1_lo x1_hi x2_lo x2_hi height'");
      cfg.bumps.push_back({nums[0], nums[1], nums[2], nums[3], nums[4]});
    }
  }

  if (!kv.empty())
    throw ParameterError("config: unknown key '" + kv.begin()->first + "'");

  // touch every derived object so invalid values fail here, not mid-run
  (void)cfg.medium();
  (void)cfg.incidence();
  (void)cfg.lattice();
  (void)cfg.profile();
  (void)cfg.variant_kind();
  if (cfg.mode_window < 0 || cfg.dtn_truncation < 0 || cfg.elements_1d < 2)
    throw ParameterError("config: window/truncation/elements out of range");
  if (!(cfg.solver_tol > 0.0) || cfg.solver_max_iter < 1)
    throw ParameterError("config: solver tolerance/iterations out of range");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

} // namespace elgrat

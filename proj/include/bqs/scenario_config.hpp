#pragma once

#include <string>
#include <vector>

#include "bqs/types.hpp"

namespace bqs {

// A scenario file is flat `key = value` text ('#' starts a comment).
// Unknown keys, malformed values and inconsistent combinations are
// ConfigError with the key (and line, for parse errors) attached.

struct InitialDataConfig {
  std::string kind = "zero";  // zero | gaussian | mode | file
  Real amplitude = 1.0;
  Real width = 1.0;
  std::vector<Real> center;  // empty = origin
  std::vector<int> mode;     // empty = all zero
  std::string path;          // snapshot file for kind = file
};

struct ScenarioConfig {
  // grid
  int n_dims = 1;
  std::vector<int> points = {256};
  std::vector<Real> half_widths = {3.141592653589793};

  // elliptic form (row-major coefficients; empty = identity)
  std::vector<Real> elliptic_coeffs;

  // operator
  std::string operator_kind = "scalar_symbol";  // scalar_symbol | matrix
  std::string operator_symbol = "minus_laplacian";  // minus_laplacian | constant
  Real operator_constant = 1.0;
  int operator_size = 2;
  std::vector<Real> operator_g;       // empty = all ones
  Real operator_s_weight = 1.0;
  std::vector<Real> operator_matrix;  // row-major; overrides the weighted build

  // nonlinearity
  std::string nonlinearity = "zero";  // zero | quadratic | cubic | quadratic_cubic | coupled_poly
  Real nl_sign = 1.0;
  Real nl_c2 = 1.0;
  Real nl_c3 = 1.0;
  std::string nl_coupling;  // "m:j:k:c;..." with 1-based component indices

  // initial data
  InitialDataConfig phi, psi;

  // exponents
  Real p = 2.0;
  Real q_inner = 2.0;
  Real s_norm = 2.0;

  // solver controls
  Real horizon = 1.0;
  Real dt = 0.0;  // <= 0: automatic per window
  int steps_per_window = 64;
  Real tol = 1e-10;
  int max_iters = 50;
  Real blowup_threshold = 0.0;  // <= 0: automatic
  Real c0 = 1.0;
  Real c1 = 1.0;

  // checks
  Real check_c0 = 1.0;
  Real check_omega = 0.0;
  int check_samples = 49;

  // outputs
  std::string csv_path;
  std::string report_path;
  std::string snapshot_prefix;
  int snapshot_stride = 0;  // 0 = no snapshots

  std::vector<std::string> warnings;  // filled during validation
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

}  // namespace bqs

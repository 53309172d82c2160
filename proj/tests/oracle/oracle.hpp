#pragma once

// Brute-force reference values for tests. Shares no code with the library's
// estimators: eigenvalues come from Eigen's general real eigensolver (Hessenberg
// reduction + shifted QR) and words are materialised without rescaling.

#include <string>

#include "jsr/matrix.hpp"
#include "jsr/matrix_set.hpp"

namespace oracle {

struct OracleResult {
  double value = 0.0;
  std::string method;
  double residual = 0.0;
};

/// Max eigenvalue modulus; residual is ||Av - lambda v|| for the unit
/// eigenvector of the selected eigenvalue.
OracleResult spectral_radius(const jsr::NonnegMatrix& a);
OracleResult spectral_radius(const Eigen::MatrixXd& a);

/// max over m <= depth, w in S^m of rho(w)^(1/m). Requires |S|^depth <= 1e6.
OracleResult gen_radius(const jsr::MatrixSet& s, int depth);

}  // namespace oracle

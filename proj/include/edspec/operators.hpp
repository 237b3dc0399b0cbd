#pragma once

#include <Eigen/Dense>
#include <string>

namespace edspec {

/// Dense real symmetric matrix with a provenance label.
///
/// Builders fill symmetric pairs with identical values, so
/// mat(i, j) == mat(j, i) holds exactly, not merely to rounding.
struct SymmetricOperator {
  Eigen::MatrixXd mat;
  std::string label;

  Eigen::Index dim() const { return mat.rows(); }
};

}  // namespace edspec

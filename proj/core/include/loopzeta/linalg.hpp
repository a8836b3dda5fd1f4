#pragma once

#include <Eigen/Dense>

namespace loopzeta {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// log|det A| and the sign of det A from an LU factorisation with partial
/// pivoting. sign == 0 marks an exactly singular pivot (log_abs = -inf).
struct LogDeterminant {
  double log_abs = 0.0;
  int sign = 1;

  double value() const;
};

LogDeterminant log_determinant(const Matrix& a);

/// Plain determinant, evaluated through log_determinant.
double determinant(const Matrix& a);

}  // namespace loopzeta

#include "loopzeta/linalg.hpp"

#include <cmath>
#include <limits>

#include "loopzeta/error.hpp"

namespace loopzeta {

double LogDeterminant::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

LogDeterminant log_determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("log_determinant: matrix is not square");
  if (a.rows() == 0) return {0.0, 1};
  const Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& packed = lu.matrixLU();
  LogDeterminant result;
  result.sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double pivot = packed(i, i);
    if (pivot == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (pivot < 0.0) result.sign = -result.sign;
    result.log_abs += std::log(std::abs(pivot));
  }
  return result;
}

double determinant(const Matrix& a) { return log_determinant(a).value(); }

}  // namespace loopzeta

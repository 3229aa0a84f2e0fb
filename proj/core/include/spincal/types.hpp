#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spincal {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Thrown on bad user input (unknown scenario, malformed config, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical routine cannot fulfil its contract
/// (degenerate metric, eigensolver breakdown, step-size underflow, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const CVec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}
inline double max_abs(const RMat& m) { return m.cwiseAbs().maxCoeff(); }

inline Complex ipow(int k) {
  // i^k for possibly negative k
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace spincal

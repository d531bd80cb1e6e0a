#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace klsnmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Malformed or out-of-contract input data (bad file, asymmetric kernel,
/// negative entries where nonnegativity is required, shape mismatch).
class input_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid configuration value (nonpositive radius, k out of range, ...).
class parameter_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace klsnmf

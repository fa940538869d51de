#ifndef MSIMAP_COMMON_HPP
#define MSIMAP_COMMON_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace msimap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Error hierarchy mapped to CLI exit codes: parse 2, numeric 3, parameter 4.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// All-identical points, all-identical centrality values, and similar
// inputs that leave no usable scale.
struct DegenerateInputError : ParameterError {
    using ParameterError::ParameterError;
};

// Requested spectral support exceeds the fitted polynomial domain.
struct SpectralDomainError : NumericError {
    using NumericError::NumericError;
};

// Exact (dense) routines refuse inputs beyond their size limit.
struct OracleSizeError : ParameterError {
    using ParameterError::ParameterError;
};

}  // namespace msimap

#endif

#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace ceig {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using RealSparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr Complex kImagUnit{0.0, 1.0};

/// Dimension cap for dense materialization and dense eigendecompositions.
inline constexpr Index kDenseCap = 4096;

}  // namespace ceig

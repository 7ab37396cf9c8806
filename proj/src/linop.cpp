#include "ceig/linop.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ceig {

struct HermitianOperator::Storage {
  RealVector diag;
  Matrix dense;
  SparseMatrix sparse;
  ApplyFn fn;
};

namespace {

double sparseInfNorm(const SparseMatrix& m) {
  RealVector rowSums = RealVector::Zero(m.rows());
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      rowSums[it.row()] += std::abs(it.value());
    }
  }
  return rowSums.size() > 0 ? rowSums.maxCoeff() : 0.0;
}

double sparseMaxImag(const SparseMatrix& m) {
  double v = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      v = std::max(v, std::abs(it.value().imag()));
    }
  }
  return v;
}

void requireHermitian(const Matrix& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }
}

void requireHermitian(const SparseMatrix& a) {
  SparseMatrix diff = SparseMatrix(a.adjoint()) - a;
  double scale = std::max(1.0, sparseInfNorm(a));
  double worst = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  if (worst > 1e-12 * scale) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }
}

}  // namespace

HermitianOperator HermitianOperator::diagonal(RealVector entries) {
  if (entries.size() == 0) {
    throw std::invalid_argument("HermitianOperator: empty diagonal");
  }
  auto store = std::make_shared<Storage>();
  const double norm =
      entries.size() > 0 ? entries.cwiseAbs().maxCoeff() : 0.0;
  const Index n = entries.size();
  store->diag = std::move(entries);
  return HermitianOperator(n, Structure::Diagonal, true, norm, store);
}

HermitianOperator HermitianOperator::dense(Matrix matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  }
  requireHermitian(matrix);
  const bool real = matrix.imag().cwiseAbs().maxCoeff() <=
                    1e-14 * std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double norm = matrix.cwiseAbs().rowwise().sum().maxCoeff();
  auto store = std::make_shared<Storage>();
  const Index n = matrix.rows();
  store->dense = std::move(matrix);
  return HermitianOperator(n, Structure::Dense, real, norm, store);
}

HermitianOperator HermitianOperator::dense(const RealMatrix& matrix) {
  return dense(Matrix(matrix.cast<Complex>()));
}

HermitianOperator HermitianOperator::sparse(SparseMatrix matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  }
  matrix.makeCompressed();
  requireHermitian(matrix);
  const bool real =
      sparseMaxImag(matrix) <= 1e-14 * std::max(1.0, sparseInfNorm(matrix));
  const double norm = sparseInfNorm(matrix);
  auto store = std::make_shared<Storage>();
  const Index n = matrix.rows();
  store->sparse = std::move(matrix);
  return HermitianOperator(n, Structure::Sparse, real, norm, store);
}

HermitianOperator HermitianOperator::sparse(const RealSparseMatrix& matrix) {
  return sparse(SparseMatrix(matrix.cast<Complex>()));
}

HermitianOperator HermitianOperator::matrixFree(Index dim, ApplyFn apply,
                                                bool isReal,
                                                double normEstimate) {
  if (dim <= 0 || !apply) {
    throw std::invalid_argument("HermitianOperator: invalid matrix-free spec");
  }
  double norm = normEstimate;
  if (norm <= 0.0) {
    // deterministic power-iteration estimate
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = Complex(dist(rng), dist(rng));
    v /= v.norm();
    for (int it = 0; it < 10; ++it) {
      Vector w = apply(v);
      norm = w.norm();
      if (norm == 0.0) break;
      v = w / norm;
    }
    norm = std::max(norm, 1e-300);
  }
  auto store = std::make_shared<Storage>();
  store->fn = std::move(apply);
  return HermitianOperator(dim, Structure::MatrixFree, isReal, norm, store);
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return diagonal(RealVector::Ones(dim));
}

Vector HermitianOperator::apply(const Vector& v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("HermitianOperator::apply: dimension mismatch");
  }
  switch (structure_) {
    case Structure::Diagonal:
      return store_->diag.cast<Complex>().cwiseProduct(v);
    case Structure::Dense:
      return store_->dense * v;
    case Structure::Sparse:
      return store_->sparse * v;
    case Structure::MatrixFree: {
      Vector out = store_->fn(v);
      if (out.size() != dim_) {
        throw std::runtime_error(
            "HermitianOperator: matrix-free apply returned wrong dimension");
      }
      return out;
    }
  }
  throw std::logic_error("HermitianOperator: unknown structure");
}

const RealVector& HermitianOperator::diagonalEntries() const {
  if (structure_ != Structure::Diagonal) {
    throw std::logic_error("HermitianOperator: not diagonal");
  }
  return store_->diag;
}

const Matrix& HermitianOperator::denseMatrix() const {
  if (structure_ != Structure::Dense) {
    throw std::logic_error("HermitianOperator: not dense");
  }
  return store_->dense;
}

const SparseMatrix& HermitianOperator::sparseMatrix() const {
  if (structure_ != Structure::Sparse) {
    throw std::logic_error("HermitianOperator: not sparse");
  }
  return store_->sparse;
}

Matrix denseMaterialize(const HermitianOperator& op, Index cap) {
  const Index n = op.dim();
  if (n > cap) {
    throw std::invalid_argument("denseMaterialize: dimension exceeds cap");
  }
  switch (op.structure()) {
    case HermitianOperator::Structure::Diagonal:
      return op.diagonalEntries().cast<Complex>().asDiagonal();
    case HermitianOperator::Structure::Dense:
      return op.denseMatrix();
    case HermitianOperator::Structure::Sparse:
      return Matrix(op.sparseMatrix());
    case HermitianOperator::Structure::MatrixFree: {
      Matrix out(n, n);
      Vector e = Vector::Zero(n);
      for (Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        out.col(j) = op.apply(e);
        e[j] = 0.0;
      }
      return out;
    }
  }
  throw std::logic_error("denseMaterialize: unknown structure");
}

DenseSpectrum denseEig(const Matrix& matrix, bool hermitian) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw std::invalid_argument("denseEig: matrix must be square and nonempty");
  }
  if (matrix.rows() > kDenseCap) {
    throw std::invalid_argument("denseEig: dimension exceeds cap");
  }
  if (!matrix.allFinite()) {
    throw std::invalid_argument("denseEig: matrix has non-finite entries");
  }
  const Index n = matrix.rows();
  DenseSpectrum out;
  out.hermitianInput = hermitian;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("denseEig: Hermitian eigensolver failed");
    }
    out.eigenvalues = solver.eigenvalues().cast<Complex>();
    out.eigenvectors = solver.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver(matrix, true);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("denseEig: eigensolver did not converge");
    }
    Vector vals = solver.eigenvalues();
    Matrix vecs = solver.eigenvectors();
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (vals[a].real() != vals[b].real())
        return vals[a].real() < vals[b].real();
      return vals[a].imag() < vals[b].imag();
    });
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index j = 0; j < n; ++j) {
      out.eigenvalues[j] = vals[order[static_cast<size_t>(j)]];
      out.eigenvectors.col(j) = vecs.col(order[static_cast<size_t>(j)]);
      const double nrm = out.eigenvectors.col(j).norm();
      if (nrm > 0) out.eigenvectors.col(j) /= nrm;
    }
  }
  Matrix resid = matrix * out.eigenvectors -
                 out.eigenvectors * out.eigenvalues.asDiagonal();
  out.residualBound = resid.colwise().norm().maxCoeff();
  return out;
}

OrthonormalBasis orthonormalize(const Matrix& vectors, double dropTol) {
  if (vectors.cols() == 0 || vectors.rows() == 0) {
    throw std::invalid_argument("orthonormalize: empty input");
  }
  const Index n = vectors.rows();
  const Index k = vectors.cols();
  const double maxNorm = vectors.colwise().norm().maxCoeff();
  if (maxNorm == 0.0) {
    throw std::invalid_argument("orthonormalize: all input vectors are zero");
  }
  Matrix basis(n, k);
  Index rank = 0;
  for (Index j = 0; j < k; ++j) {
    Vector w = vectors.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      if (rank > 0) {
        w.noalias() -= basis.leftCols(rank) * (basis.leftCols(rank).adjoint() * w);
      }
    }
    const double nrm = w.norm();
    if (nrm <= dropTol * maxNorm) continue;
    basis.col(rank) = w / nrm;
    ++rank;
  }
  OrthonormalBasis out;
  out.basis = basis.leftCols(rank);
  out.rank = rank;
  return out;
}

}  // namespace ceig

#pragma once

#include <functional>
#include <memory>
#include <stdexcept>

#include "ceig/types.hpp"

namespace ceig {

/// Self-adjoint linear operator on C^n. Cheap to copy: instances share
/// immutable storage and are safe to use from several threads at once.
///
/// Dense and sparse constructors verify Hermitian symmetry and detect
/// whether the operator is real (maps real vectors to real vectors).
class HermitianOperator {
 public:
  enum class Structure { Diagonal, Dense, Sparse, MatrixFree };
  using ApplyFn = std::function<Vector(const Vector&)>;

  static HermitianOperator diagonal(RealVector entries);
  static HermitianOperator dense(Matrix matrix);
  static HermitianOperator dense(const RealMatrix& matrix);
  static HermitianOperator sparse(SparseMatrix matrix);
  static HermitianOperator sparse(const RealSparseMatrix& matrix);
  /// `normEstimate` <= 0 requests an internal power-iteration estimate.
  static HermitianOperator matrixFree(Index dim, ApplyFn apply, bool isReal,
                                      double normEstimate = 0.0);

  static HermitianOperator identity(Index dim);

  Index dim() const { return dim_; }
  Structure structure() const { return structure_; }
  bool isReal() const { return is_real_; }
  /// True when a direct factorization of shifted copies is available.
  bool hasShiftedSolve() const { return structure_ != Structure::MatrixFree; }
  /// Scale estimate (infinity norm for materialized structures).
  double normEstimate() const { return norm_estimate_; }

  Vector apply(const Vector& v) const;

  const RealVector& diagonalEntries() const;
  const Matrix& denseMatrix() const;
  const SparseMatrix& sparseMatrix() const;

 private:
  struct Storage;
  HermitianOperator(Index dim, Structure structure, bool isReal,
                    double normEstimate, std::shared_ptr<const Storage> store)
      : dim_(dim),
        structure_(structure),
        is_real_(isReal),
        norm_estimate_(normEstimate),
        store_(std::move(store)) {}

  Index dim_ = 0;
  Structure structure_ = Structure::Diagonal;
  bool is_real_ = true;
  double norm_estimate_ = 0.0;
  std::shared_ptr<const Storage> store_;
};

inline Vector apply(const HermitianOperator& op, const Vector& v) {
  return op.apply(v);
}

/// Full eigendecomposition of a dense matrix, eigenvalues sorted ascending
/// by (Re, Im). For Hermitian input the eigenvectors are orthonormal; for
/// general input they are unit-norm with the achieved residual recorded.
struct DenseSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;  // column j pairs with eigenvalues[j]
  double residualBound = 0.0;
  bool hermitianInput = false;
};

DenseSpectrum denseEig(const Matrix& matrix, bool hermitian);

/// Column j of the result equals op(e_j). Throws when dim exceeds `cap`.
Matrix denseMaterialize(const HermitianOperator& op, Index cap = kDenseCap);

struct OrthonormalBasis {
  Matrix basis;  // dim x rank, orthonormal columns
  Index rank = 0;
};

/// Modified Gram-Schmidt with reorthogonalization. Columns whose remaining
/// norm falls below dropTol times the largest input column norm are removed.
OrthonormalBasis orthonormalize(const Matrix& vectors, double dropTol = 1e-10);

}  // namespace ceig

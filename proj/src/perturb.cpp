#include "ceig/perturb.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace ceig {

namespace {

constexpr double kSolveTol = 1e-9;
constexpr double kCapacitanceCondLimit = 1e14;

// Restarted GMRES for the matrix-free fallback. `op` applies the full
// shifted operator.
Vector gmresSolve(const std::function<Vector(const Vector&)>& op,
                  const Vector& b, double tol, int restart, int maxOuter) {
  const Index n = b.size();
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(n);
  Vector x = Vector::Zero(n);
  for (int outer = 0; outer < maxOuter; ++outer) {
    Vector r = b - op(x);
    const double beta = r.norm();
    if (beta <= tol * bnorm) return x;
    const int m = static_cast<int>(std::min<Index>(restart, n));
    Matrix V(n, m + 1);
    Matrix R = Matrix::Zero(m + 1, m);  // rotated Hessenberg (upper triangular)
    V.col(0) = r / beta;
    Vector g = Vector::Zero(m + 1);
    g[0] = beta;
    std::vector<Eigen::JacobiRotation<Complex>> rots;
    int k = 0;
    bool breakdown = false;
    for (; k < m; ++k) {
      Vector w = op(V.col(k));
      Vector hcol = Vector::Zero(k + 2);
      for (int pass = 0; pass < 2; ++pass) {
        Vector h = V.leftCols(k + 1).adjoint() * w;
        w.noalias() -= V.leftCols(k + 1) * h;
        hcol.head(k + 1) += h;
      }
      const double hlast = w.norm();
      hcol[k + 1] = hlast;
      for (int i = 0; i < k; ++i) {
        hcol.applyOnTheLeft(i, i + 1, rots[static_cast<size_t>(i)].adjoint());
      }
      Eigen::JacobiRotation<Complex> rot;
      rot.makeGivens(hcol[k], hcol[k + 1]);
      hcol.applyOnTheLeft(k, k + 1, rot.adjoint());
      g.applyOnTheLeft(k, k + 1, rot.adjoint());
      rots.push_back(rot);
      R.block(0, k, k + 2, 1) = hcol;
      if (hlast <= 1e-14 * bnorm) {
        breakdown = true;  // exact solution in the current space
        ++k;
        break;
      }
      V.col(k + 1) = w / hlast;
      if (std::abs(g[k + 1]) <= tol * bnorm) {
        ++k;
        break;
      }
    }
    Vector y = R.topLeftCorner(k, k)
                   .triangularView<Eigen::Upper>()
                   .solve(g.head(k));
    x.noalias() += V.leftCols(k) * y;
    if (breakdown) break;
  }
  Vector check = b - op(x);
  if (check.norm() > tol * bnorm) {
    throw std::runtime_error(
        "shifted solve: iterative fallback did not reach the residual "
        "contract (shift may be singular)");
  }
  return x;
}

}  // namespace

struct ShiftedSolveWorkspace::Factor {
  enum class Mode { Diagonal, Dense, Sparse, Iterative };
  Mode mode = Mode::Diagonal;

  Vector diag;                                   // Diagonal
  std::unique_ptr<Eigen::PartialPivLU<Matrix>> denseLU;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> sparseLU;
  std::function<Vector(const Vector&)> applyShifted;  // Iterative

  // low-rank correction data: (A + i s coeff U U^*) x = b
  Matrix basis;  // U
  Matrix capacitanceSolveY;  // Y = A^{-1} U
  Eigen::PartialPivLU<Matrix> capacitanceLU;
  Complex lowRankScale;  // i s coeff
  bool hasLowRank = false;

  double scale = 1.0;

  Vector solveSparsePart(const Vector& b) const {
    switch (mode) {
      case Mode::Diagonal:
        return b.cwiseQuotient(diag);
      case Mode::Dense:
        return denseLU->solve(b);
      case Mode::Sparse:
        return sparseLU->solve(b);
      case Mode::Iterative:
        return gmresSolve(applyShifted, b, 1e-10, 60, 50);
    }
    throw std::logic_error("shifted solve: unknown mode");
  }
};

PerturbedOperator::PerturbedOperator(HermitianOperator base,
                                     OrthoProjector projector, double s)
    : base_(std::move(base)), projector_(std::move(projector)), s_(s) {
  if (base_.dim() != projector_.dim()) {
    throw std::invalid_argument("PerturbedOperator: dimension mismatch");
  }
  if (s_ < 0.0) {
    throw std::invalid_argument("PerturbedOperator: s must be nonnegative");
  }
}

Vector PerturbedOperator::apply(const Vector& v) const {
  Vector out = base_.apply(v);
  if (s_ != 0.0) out += (kImagUnit * s_) * projector_.apply(v);
  return out;
}

ShiftedSolveWorkspace PerturbedOperator::makeShiftedSolve(Complex sigma) const {
  const Index n = dim();
  const RankStructure& rs = projector_.rankStructure();
  auto factor = std::make_shared<ShiftedSolveWorkspace::Factor>();
  using Mode = ShiftedSolveWorkspace::Factor::Mode;
  factor->scale = std::max(1.0, normEstimate());

  const Complex maskScale = kImagUnit * s_;
  switch (base_.structure()) {
    case HermitianOperator::Structure::Diagonal: {
      factor->mode = Mode::Diagonal;
      factor->diag.resize(n);
      for (Index i = 0; i < n; ++i) {
        const double m = rs.mask.size() ? rs.mask[i] : 0.0;
        factor->diag[i] = base_.diagonalEntries()[i] + maskScale * m - sigma;
        if (std::abs(factor->diag[i]) < 1e-14 * factor->scale) {
          throw SingularShiftError(
              "shifted solve: shift coincides with an eigenvalue of the "
              "sparse part");
        }
      }
      break;
    }
    case HermitianOperator::Structure::Dense: {
      Matrix a = base_.denseMatrix();
      a.diagonal().array() -= sigma;
      if (rs.mask.size()) a.diagonal() += maskScale * rs.mask.cast<Complex>();
      factor->mode = Mode::Dense;
      factor->denseLU = std::make_unique<Eigen::PartialPivLU<Matrix>>(a);
      if (factor->denseLU->rcond() < 1e-14) {
        throw SingularShiftError("shifted solve: factorization is singular");
      }
      break;
    }
    case HermitianOperator::Structure::Sparse: {
      SparseMatrix a = base_.sparseMatrix();
      SparseMatrix shiftPart(n, n);
      std::vector<Eigen::Triplet<Complex>> trips;
      trips.reserve(static_cast<size_t>(n));
      for (Index i = 0; i < n; ++i) {
        const double m = rs.mask.size() ? rs.mask[i] : 0.0;
        trips.emplace_back(i, i, maskScale * m - sigma);
      }
      shiftPart.setFromTriplets(trips.begin(), trips.end());
      a += shiftPart;
      factor->mode = Mode::Sparse;
      factor->sparseLU = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
      factor->sparseLU->compute(a);
      if (factor->sparseLU->info() != Eigen::Success) {
        throw SingularShiftError("shifted solve: sparse factorization failed");
      }
      break;
    }
    case HermitianOperator::Structure::MatrixFree: {
      // No factorizable form: fall back to an iterative solve on the full
      // operator; the low-rank part needs no special treatment here.
      factor->mode = Mode::Iterative;
      const PerturbedOperator self = *this;
      factor->applyShifted = [self, sigma](const Vector& v) {
        return self.apply(v) - sigma * v;
      };
      ShiftedSolveWorkspace ws(factor, sigma, 0);
      return ws;
    }
  }

  if (rs.rank > 0) {
    factor->hasLowRank = true;
    factor->basis = rs.basis;
    factor->lowRankScale = maskScale * rs.coeff;
    Matrix y(n, rs.rank);
    for (Index j = 0; j < rs.rank; ++j) {
      y.col(j) = factor->solveSparsePart(rs.basis.col(j));
    }
    factor->capacitanceSolveY = y;
    Matrix cap = Matrix::Identity(rs.rank, rs.rank) +
                 factor->lowRankScale * (rs.basis.adjoint() * y);
    Eigen::JacobiSVD<Matrix> svd(cap);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > kCapacitanceCondLimit) {
      throw SingularShiftError(
          "shifted solve: capacitance system is singular (shift too close to "
          "an eigenvalue)");
    }
    factor->capacitanceLU = Eigen::PartialPivLU<Matrix>(cap);
  }
  return ShiftedSolveWorkspace(factor, sigma, rs.rank);
}

DenseSpectrum PerturbedOperator::spectrumDense(Index cap) const {
  Matrix m = denseMaterialize(base_, cap);
  if (s_ != 0.0) {
    const RankStructure& rs = projector_.rankStructure();
    const Complex scale = kImagUnit * s_;
    if (rs.mask.size()) m.diagonal() += scale * rs.mask.cast<Complex>();
    if (rs.rank > 0) {
      m.noalias() += (scale * rs.coeff) * (rs.basis * rs.basis.adjoint());
    }
    return denseEig(m, false);
  }
  return denseEig(m, true);
}

Vector ShiftedSolveWorkspace::solve(const Vector& b) const {
  Vector x = factor_->solveSparsePart(b);
  if (factor_->hasLowRank) {
    // Woodbury: x <- x - scale * Y (I + scale U^* Y)^{-1} U^* x
    Vector w = factor_->capacitanceLU.solve(factor_->basis.adjoint() * x);
    x.noalias() -= factor_->lowRankScale * (factor_->capacitanceSolveY * w);
  }
  return x;
}

ShiftedSolveWorkspace makeShiftedSolve(const HermitianOperator& op,
                                       Complex sigma) {
  PerturbedOperator plain(op, OrthoProjector::zero(op.dim()), 0.0);
  return plain.makeShiftedSolve(sigma);
}

}  // namespace ceig

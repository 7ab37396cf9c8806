#pragma once

#include <memory>

#include "ceig/linop.hpp"
#include "ceig/projectors.hpp"

namespace ceig {

/// Thrown when a requested shift coincides with an eigenvalue of the
/// operator (factorization breakdown or near-singular capacitance system).
class SingularShiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShiftedSolveWorkspace;

/// The non-Hermitian perturbation L(s) = L + i s Q of a self-adjoint
/// operator L along the range of an orthogonal projector Q.
class PerturbedOperator {
 public:
  PerturbedOperator(HermitianOperator base, OrthoProjector projector, double s);

  Index dim() const { return base_.dim(); }
  const HermitianOperator& base() const { return base_; }
  const OrthoProjector& projector() const { return projector_; }
  double strength() const { return s_; }
  double normEstimate() const { return base_.normEstimate() + s_; }

  /// L v + i s Q v.
  Vector apply(const Vector& v) const;

  /// Factorize (L(s) - sigma). Splits i s Q into a diagonal part absorbed
  /// into the factored matrix and a low-rank correction handled through a
  /// dense capacitance system.
  ShiftedSolveWorkspace makeShiftedSolve(Complex sigma) const;

  /// Full spectrum of the dense materialization of L(s).
  DenseSpectrum spectrumDense(Index cap = kDenseCap) const;

 private:
  HermitianOperator base_;
  OrthoProjector projector_;
  double s_;
};

inline Vector apply(const PerturbedOperator& op, const Vector& v) {
  return op.apply(v);
}

/// Bound to one shift; solves (L(s) - sigma) x = b with relative residual
/// at most 1e-9. Safe for concurrent solves once constructed.
class ShiftedSolveWorkspace {
 public:
  Vector solve(const Vector& b) const;

  Complex shift() const { return sigma_; }
  Index lowRankDim() const { return rank_; }

 private:
  friend class PerturbedOperator;
  struct Factor;
  ShiftedSolveWorkspace(std::shared_ptr<const Factor> factor, Complex sigma,
                        Index rank)
      : factor_(std::move(factor)), sigma_(sigma), rank_(rank) {}

  std::shared_ptr<const Factor> factor_;
  Complex sigma_;
  Index rank_ = 0;
};

/// Factorization of (L - sigma) alone, for inverse iteration on the
/// unperturbed operator.
ShiftedSolveWorkspace makeShiftedSolve(const HermitianOperator& op,
                                       Complex sigma);

}  // namespace ceig

#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ceig/linop.hpp"
#include "ceig/types.hpp"

namespace ceig {

/// One element of a finite unitary group acting by index permutation with
/// optional unit phases: (g v)[i] = phases[i] * v[perm[i]].
struct GroupAction {
  IntVector perm;
  Vector phases;  // empty means all ones
};

/// Diagonal-plus-low-rank split of a projector, as consumed by the shifted
/// solver: Q v = mask .* v + coeff * U (U^* v). `coeff` is -1 for
/// complement kinds and +1 otherwise.
struct RankStructure {
  RealVector mask;  // empty means zero mask
  Matrix basis;     // dim x rank, orthonormal columns (may be 0 columns)
  double coeff = 1.0;
  Index rank = 0;
};

/// Orthogonal projector onto a closed subspace W. Immutable and cheap to
/// copy; application is pure.
class OrthoProjector {
 public:
  enum class Kind { Indicator, Span, IndicatorPlusSpan, GroupAverage, Complement };

  /// (Qv)_j = mask_j v_j with mask entries in {0,1}.
  static OrthoProjector indicator(RealVector mask);
  /// Q = U U^* with U an orthonormalization of the given columns.
  static OrthoProjector span(const Matrix& vectors);
  /// Free inside the masked region K, spanned by the exterior restriction
  /// of the reference columns outside it:
  ///   Qv = mask .* v + sum_j u_j <u_j, v>,  u_j = orthonormalized
  ///   exterior-restricted references (zeroed inside K).
  static OrthoProjector localizedPerturbation(RealVector maskK,
                                              const Matrix& exteriorRefs);
  /// Mean over a finite unitary group; projects onto exactly-invariant
  /// vectors. The action list must be closed under composition.
  static OrthoProjector groupAverage(std::vector<GroupAction> actions, Index dim);
  /// I - inner. Applying complement twice returns the original projector.
  static OrthoProjector complement(const OrthoProjector& inner);

  static OrthoProjector zero(Index dim);
  static OrthoProjector identity(Index dim);

  Index dim() const { return dim_; }
  Kind kind() const { return kind_; }
  /// True when built from real data (then Q maps real vectors to real ones).
  bool isReal() const { return is_real_; }

  Vector apply(const Vector& v) const;

  /// The mask/low-rank split used by the shifted-solve machinery.
  const RankStructure& rankStructure() const;

  const OrthoProjector& inner() const;  // Complement kind only

 private:
  struct Storage;
  OrthoProjector(Index dim, Kind kind, bool isReal,
                 std::shared_ptr<const Storage> store)
      : dim_(dim), kind_(kind), is_real_(isReal), store_(std::move(store)) {}

  Index dim_ = 0;
  Kind kind_ = Kind::Indicator;
  bool is_real_ = true;
  std::shared_ptr<const Storage> store_;
};

inline Vector apply(const OrthoProjector& q, const Vector& v) {
  return q.apply(v);
}

/// Complementary closeness measures of v to W = Range(Q):
/// tau = |Qv|/|v|, delta = |(I-Q)v|/|v|; tau^2 + delta^2 = 1.
std::pair<double, double> tauDelta(const OrthoProjector& q, const Vector& v);

}  // namespace ceig

#pragma once

#include <cstdint>

#include "ceig/linop.hpp"
#include "ceig/projectors.hpp"

namespace ceig {

/// Seeded generators for validation sweeps and the `random_hermitian`
/// builtin problem. All output is deterministic in the seed.

Vector randomVector(Index dim, std::uint64_t seed);
RealVector randomRealVector(Index dim, std::uint64_t seed);

HermitianOperator randomDenseHermitian(Index dim, std::uint64_t seed,
                                       bool complexEntries = false);
/// Symmetric sparse matrix with roughly `density` fill off the diagonal.
HermitianOperator randomSparseHermitian(Index dim, std::uint64_t seed,
                                        double density = 0.05,
                                        bool complexEntries = false);

/// Mask with at least one zero and one one entry.
RealVector randomMask(Index dim, std::uint64_t seed, double fillRatio = 0.5);

/// Signed involution (index pair swaps with optional sign flips); together
/// with the identity it forms a two-element group.
GroupAction randomSignedInvolution(Index dim, std::uint64_t seed);

enum class ProjectorFamily {
  Indicator,
  Span,
  IndicatorPlusSpan,
  GroupAverage,
  ComplementSpan,
};

OrthoProjector randomProjector(ProjectorFamily family, Index dim,
                               std::uint64_t seed, Index rank = 3,
                               bool complexEntries = false);

}  // namespace ceig

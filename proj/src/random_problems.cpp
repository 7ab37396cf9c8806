#include "ceig/random_problems.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace ceig {

namespace {

std::mt19937_64 makeRng(std::uint64_t seed) {
  return std::mt19937_64(seed ^ 0x243f6a8885a308d3ull);
}

}  // namespace

Vector randomVector(Index dim, std::uint64_t seed) {
  auto rng = makeRng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = Complex(dist(rng), dist(rng));
  return v;
}

RealVector randomRealVector(Index dim, std::uint64_t seed) {
  auto rng = makeRng(seed * 3 + 1);
  std::normal_distribution<double> dist(0.0, 1.0);
  RealVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

HermitianOperator randomDenseHermitian(Index dim, std::uint64_t seed,
                                       bool complexEntries) {
  auto rng = makeRng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix a(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    a(j, j) = Complex(2.0 * dist(rng), 0.0);
    for (Index i = j + 1; i < dim; ++i) {
      const Complex v(dist(rng), complexEntries ? dist(rng) : 0.0);
      a(i, j) = v / std::sqrt(static_cast<double>(dim));
      a(j, i) = std::conj(a(i, j));
    }
  }
  return HermitianOperator::dense(std::move(a));
}

HermitianOperator randomSparseHermitian(Index dim, std::uint64_t seed,
                                        double density, bool complexEntries) {
  auto rng = makeRng(seed + 17);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Index j = 0; j < dim; ++j) {
    trips.emplace_back(j, j, Complex(2.0 * dist(rng), 0.0));
    for (Index i = j + 1; i < dim; ++i) {
      if (coin(rng) >= density) continue;
      const Complex v(dist(rng), complexEntries ? dist(rng) : 0.0);
      trips.emplace_back(i, j, v);
      trips.emplace_back(j, i, std::conj(v));
    }
  }
  SparseMatrix a(dim, dim);
  a.setFromTriplets(trips.begin(), trips.end());
  return HermitianOperator::sparse(std::move(a));
}

RealVector randomMask(Index dim, std::uint64_t seed, double fillRatio) {
  auto rng = makeRng(seed + 71);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  RealVector mask(dim);
  for (Index i = 0; i < dim; ++i) mask[i] = coin(rng) < fillRatio ? 1.0 : 0.0;
  if (dim >= 2) {
    mask[0] = 1.0;
    mask[dim - 1] = 0.0;
  }
  return mask;
}

GroupAction randomSignedInvolution(Index dim, std::uint64_t seed) {
  auto rng = makeRng(seed + 401);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  GroupAction g;
  g.perm.resize(dim);
  g.phases = Vector::Ones(dim);
  std::vector<Index> pool(static_cast<size_t>(dim));
  for (Index i = 0; i < dim; ++i) pool[static_cast<size_t>(i)] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (Index i = 0; i < dim; ++i) g.perm[i] = i;
  for (size_t p = 0; p + 1 < pool.size(); p += 2) {
    if (coin(rng) < 0.5) continue;  // leave some points fixed
    const Index a = pool[p], b = pool[p + 1];
    g.perm[a] = static_cast<int>(b);
    g.perm[b] = static_cast<int>(a);
    if (coin(rng) < 0.3) {
      g.phases[a] = -1.0;
      g.phases[b] = -1.0;
    }
  }
  return g;
}

OrthoProjector randomProjector(ProjectorFamily family, Index dim,
                               std::uint64_t seed, Index rank,
                               bool complexEntries) {
  rank = std::min(rank, dim);
  auto columns = [&](std::uint64_t s) {
    Matrix cols(dim, rank);
    for (Index j = 0; j < rank; ++j) {
      Vector c = randomVector(dim, s + 1000 * static_cast<std::uint64_t>(j));
      if (!complexEntries) c.imag().setZero();
      cols.col(j) = c;
    }
    return cols;
  };
  switch (family) {
    case ProjectorFamily::Indicator:
      return OrthoProjector::indicator(randomMask(dim, seed));
    case ProjectorFamily::Span:
      return OrthoProjector::span(columns(seed));
    case ProjectorFamily::IndicatorPlusSpan: {
      RealVector mask = randomMask(dim, seed, 0.4);
      return OrthoProjector::localizedPerturbation(mask, columns(seed + 5));
    }
    case ProjectorFamily::GroupAverage: {
      GroupAction g = randomSignedInvolution(dim, seed);
      GroupAction id;
      id.perm.resize(dim);
      for (Index i = 0; i < dim; ++i) id.perm[i] = static_cast<int>(i);
      return OrthoProjector::groupAverage({id, g}, dim);
    }
    case ProjectorFamily::ComplementSpan:
      return OrthoProjector::complement(OrthoProjector::span(columns(seed + 9)));
  }
  throw std::logic_error("randomProjector: unknown family");
}

}  // namespace ceig

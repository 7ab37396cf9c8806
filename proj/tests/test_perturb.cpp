#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "ceig/perturb.hpp"
#include "ceig/random_problems.hpp"

using namespace ceig;

namespace {

Matrix materializePerturbed(const PerturbedOperator& p) {
  const Index n = p.dim();
  Matrix out(n, n);
  Vector e = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    out.col(j) = p.apply(e);
    e[j] = 0.0;
  }
  return out;
}

}  // namespace

TEST_CASE("apply: identity projector adds i s v") {
  auto L = randomDenseHermitian(10, 1);
  PerturbedOperator p(L, OrthoProjector::identity(10), 0.3);
  Vector v = randomVector(10, 2);
  Vector want = L.apply(v) + Complex(0.0, 0.3) * v;
  CHECK((p.apply(v) - want).norm() <= 1e-14 * want.norm());
}

TEST_CASE("apply: s = 0 reduces to the base operator") {
  auto L = randomDenseHermitian(10, 3);
  PerturbedOperator p(L, randomProjector(ProjectorFamily::Span, 10, 4), 0.0);
  Vector v = randomVector(10, 5);
  CHECK((p.apply(v) - L.apply(v)).norm() == doctest::Approx(0.0));
}

TEST_CASE("apply: diagonal case") {
  RealVector d(2), mask(2);
  d << 1, 2;
  mask << 1, 0;
  PerturbedOperator p(HermitianOperator::diagonal(d),
                      OrthoProjector::indicator(mask), 0.1);
  Vector e1 = Vector::Zero(2);
  e1[0] = 1.0;
  Vector got = p.apply(e1);
  CHECK(std::abs(got[0] - Complex(1.0, 0.1)) < 1e-15);
  CHECK(std::abs(got[1]) < 1e-15);
}

TEST_CASE("numerical range: Im <L(s)v, v> lies in [0, s]") {
  auto L = randomDenseHermitian(20, 7);
  const double s = 0.25;
  PerturbedOperator p(L, randomProjector(ProjectorFamily::Span, 20, 8, 4, true), s);
  for (int t = 0; t < 50; ++t) {
    Vector v = randomVector(20, 100 + t);
    v /= v.norm();
    const double im = v.dot(p.apply(v)).imag();  // <v, L(s)v>
    CHECK(im >= -1e-10);
    CHECK(im <= s + 1e-10);
  }
}

TEST_CASE("shifted solve: diagonal operator and projector") {
  RealVector d(4), mask(4);
  d << 1, 2, 3, 4;
  mask << 1, 0, 1, 0;
  const double s = 0.1;
  PerturbedOperator p(HermitianOperator::diagonal(d),
                      OrthoProjector::indicator(mask), s);
  const Complex sigma(1.7, 0.05);
  auto ws = p.makeShiftedSolve(sigma);
  Vector b = randomVector(4, 9);
  Vector x = ws.solve(b);
  for (Index i = 0; i < 4; ++i) {
    const Complex want = b[i] / (d[i] + Complex(0.0, s) * mask[i] - sigma);
    CHECK(std::abs(x[i] - want) <= 1e-12 * std::abs(want));
  }
  CHECK(ws.lowRankDim() == 0);
}

TEST_CASE("shifted solve: pure indicator equals the sparse-part solve") {
  auto L = randomSparseHermitian(50, 10, 0.1);
  RealVector mask = randomMask(50, 11);
  PerturbedOperator p(L, OrthoProjector::indicator(mask), 0.1);
  auto ws = p.makeShiftedSolve(Complex(0.4, 0.1));
  CHECK(ws.lowRankDim() == 0);
  Vector b = randomVector(50, 12);
  Vector x = ws.solve(b);
  Vector resid = p.apply(x) - Complex(0.4, 0.1) * x - b;
  CHECK(resid.norm() <= 1e-9 * b.norm());
}

TEST_CASE("shifted solve: sparse plus low rank matches the dense solve") {
  const Index n = 200;
  auto L = randomSparseHermitian(n, 13, 0.03);
  auto Q = randomProjector(ProjectorFamily::IndicatorPlusSpan, n, 14, 3, true);
  const double s = 0.1;
  PerturbedOperator p(L, Q, s);
  const Complex sigma(0.7, s);
  auto ws = p.makeShiftedSolve(sigma);
  CHECK(ws.lowRankDim() == 3);

  Matrix dense = materializePerturbed(p);
  dense.diagonal().array() -= sigma;
  for (int t = 0; t < 5; ++t) {
    Vector b = randomVector(n, 200 + t);
    Vector x = ws.solve(b);
    Vector xd = dense.partialPivLu().solve(b);
    CHECK((x - xd).norm() <= 1e-9 * xd.norm());
  }
}

TEST_CASE("shifted solve: complement projector (negative low-rank coefficient)") {
  const Index n = 80;
  auto L = randomSparseHermitian(n, 23, 0.05);
  auto Q = randomProjector(ProjectorFamily::ComplementSpan, n, 24, 4, true);
  PerturbedOperator p(L, Q, 0.2);
  const Complex sigma(-0.3, 0.15);
  auto ws = p.makeShiftedSolve(sigma);
  Matrix dense = materializePerturbed(p);
  dense.diagonal().array() -= sigma;
  Vector b = randomVector(n, 25);
  Vector x = ws.solve(b);
  Vector xd = dense.partialPivLu().solve(b);
  CHECK((x - xd).norm() <= 1e-9 * xd.norm());
}

TEST_CASE("shifted solve: dense and matrix-free paths agree") {
  const Index n = 60;
  auto Ld = randomDenseHermitian(n, 33);
  auto Q = randomProjector(ProjectorFamily::Span, n, 34, 2, true);
  const double s = 0.1;
  PerturbedOperator pd(Ld, Q, s);
  const HermitianOperator& denseRef = Ld;
  auto Lf = HermitianOperator::matrixFree(
      n, [denseRef](const Vector& v) { return denseRef.apply(v); }, Ld.isReal(),
      Ld.normEstimate());
  PerturbedOperator pf(Lf, Q, s);
  const Complex sigma(0.2, 0.05);
  Vector b = randomVector(n, 35);
  Vector xd = pd.makeShiftedSolve(sigma).solve(b);
  Vector xf = pf.makeShiftedSolve(sigma).solve(b);
  CHECK((xd - xf).norm() <= 1e-8 * xd.norm());
  Vector resid = pf.apply(xf) - sigma * xf - b;
  CHECK(resid.norm() <= 1e-9 * b.norm());
}

TEST_CASE("shifted solve rejects singular shifts") {
  RealVector d(3), mask(3);
  d << 1, 2, 3;
  mask << 0, 1, 0;
  PerturbedOperator p(HermitianOperator::diagonal(d),
                      OrthoProjector::indicator(mask), 0.1);
  CHECK_THROWS_AS(p.makeShiftedSolve(Complex(1.0, 0.0)), SingularShiftError);
  CHECK_THROWS_AS(p.makeShiftedSolve(Complex(2.0, 0.1)), SingularShiftError);

  // capacitance singularity: shift at an eigenvalue reachable only through
  // the low-rank correction
  Matrix e1(2, 1);
  e1 << 1.0, 0.0;
  RealVector diag2(2);
  diag2 << 1.0, 2.0;
  PerturbedOperator p2(HermitianOperator::diagonal(diag2),
                       OrthoProjector::span(e1), 0.1);
  CHECK_THROWS_AS(p2.makeShiftedSolve(Complex(1.0, 0.1)), SingularShiftError);
}

TEST_CASE("dense spectrum: trivial cases") {
  RealVector d(2), mask(2);
  d << 1, 2;
  mask << 1, 0;
  PerturbedOperator p(HermitianOperator::diagonal(d),
                      OrthoProjector::indicator(mask), 0.1);
  auto spec = p.spectrumDense();
  CHECK(std::abs(spec.eigenvalues[0] - Complex(1.0, 0.1)) <= 1e-12);
  CHECK(std::abs(spec.eigenvalues[1] - Complex(2.0, 0.0)) <= 1e-12);

  auto L = randomDenseHermitian(12, 41);
  PerturbedOperator p0(L, OrthoProjector::zero(12), 0.0);
  auto spec0 = p0.spectrumDense();
  CHECK(spec0.hermitianInput);
  CHECK(spec0.eigenvalues.imag().cwiseAbs().maxCoeff() <= 1e-12);

  PerturbedOperator pid(L, OrthoProjector::identity(12), 0.3);
  auto specid = pid.spectrumDense();
  auto specbase = p0.spectrumDense();
  for (Index j = 0; j < 12; ++j) {
    CHECK(std::abs(specid.eigenvalues[j] -
                   (specbase.eigenvalues[j] + Complex(0.0, 0.3))) <= 1e-10);
  }
}

TEST_CASE("every eigenvalue of L(s) has imaginary part in [0, s]") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const Index n = 40;
    auto L = randomDenseHermitian(n, seed);
    auto Q = randomProjector(static_cast<ProjectorFamily>(seed % 5), n,
                             seed + 50, 3, true);
    const double s = 0.1;
    PerturbedOperator p(L, Q, s);
    auto spec = p.spectrumDense();
    const double scale = std::max(1.0, L.normEstimate());
    for (Index j = 0; j < n; ++j) {
      CHECK(spec.eigenvalues[j].imag() >= -1e-9 * scale);
      CHECK(spec.eigenvalues[j].imag() <= s + 1e-9 * scale);
    }
  }
}

TEST_CASE("eigenvalues converge to the base spectrum as s -> 0") {
  const Index n = 30;
  auto L = randomDenseHermitian(n, 55);
  auto Q = randomProjector(ProjectorFamily::Span, n, 56, 4, true);
  auto base = PerturbedOperator(L, Q, 0.0).spectrumDense();
  for (double s : {1e-2, 1e-3}) {
    auto spec = PerturbedOperator(L, Q, s).spectrumDense();
    for (Index j = 0; j < n; ++j) {
      double best = 1e100;
      for (Index i = 0; i < n; ++i) {
        best = std::min(best, std::abs(spec.eigenvalues[j] - base.eigenvalues[i]));
      }
      CHECK(best <= 2.0 * s);
    }
  }
}

#include "ceig/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace ceig {

struct OrthoProjector::Storage {
  RankStructure rs;
  std::vector<GroupAction> actions;         // GroupAverage only
  std::shared_ptr<const OrthoProjector> inner;  // Complement only
};

namespace {

void requireBinaryMask(const RealVector& mask) {
  for (Index i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0.0 && mask[i] != 1.0) {
      throw std::invalid_argument("projector mask entries must be 0 or 1");
    }
  }
}

bool actionIsReal(const GroupAction& a) {
  if (a.phases.size() == 0) return true;
  for (Index i = 0; i < a.phases.size(); ++i) {
    if (std::abs(a.phases[i].imag()) > 1e-14) return false;
  }
  return true;
}

void requireUnitary(const GroupAction& a, Index dim) {
  if (a.perm.size() != dim) {
    throw std::invalid_argument("group action: permutation has wrong length");
  }
  std::vector<char> seen(static_cast<size_t>(dim), 0);
  for (Index i = 0; i < dim; ++i) {
    const Index p = a.perm[i];
    if (p < 0 || p >= dim || seen[static_cast<size_t>(p)]) {
      throw std::invalid_argument("group action: index map is not a permutation");
    }
    seen[static_cast<size_t>(p)] = 1;
  }
  if (a.phases.size() != 0) {
    if (a.phases.size() != dim) {
      throw std::invalid_argument("group action: phase list has wrong length");
    }
    for (Index i = 0; i < dim; ++i) {
      if (std::abs(std::abs(a.phases[i]) - 1.0) > 1e-12) {
        throw std::invalid_argument("group action is not unitary");
      }
    }
  }
}

Complex actionPhase(const GroupAction& a, Index i) {
  return a.phases.size() == 0 ? Complex(1.0, 0.0) : a.phases[i];
}

// (g1 g2 v)[i] = f1[i] (g2 v)[p1[i]] = f1[i] f2[p1[i]] v[p2[p1[i]]]
GroupAction compose(const GroupAction& g1, const GroupAction& g2) {
  const Index n = g1.perm.size();
  GroupAction out;
  out.perm.resize(n);
  out.phases.resize(n);
  for (Index i = 0; i < n; ++i) {
    out.perm[i] = g2.perm[g1.perm[i]];
    out.phases[i] = actionPhase(g1, i) * actionPhase(g2, g1.perm[i]);
  }
  return out;
}

bool sameAction(const GroupAction& a, const GroupAction& b) {
  const Index n = a.perm.size();
  if (b.perm.size() != n) return false;
  for (Index i = 0; i < n; ++i) {
    if (a.perm[i] != b.perm[i]) return false;
    if (std::abs(actionPhase(a, i) - actionPhase(b, i)) > 1e-12) return false;
  }
  return true;
}

Vector applyAction(const GroupAction& a, const Vector& v) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    out[i] = actionPhase(a, i) * v[a.perm[i]];
  }
  return out;
}

// Orthonormal basis of the subspace fixed by every action. On each orbit of
// the permutation group the fixed subspace is at most one-dimensional: a
// phase pattern propagated from a representative, kept only if consistent.
Matrix invariantBasis(const std::vector<GroupAction>& actions, Index dim) {
  // undirected constraint edges: u[i] = f * u[j]
  struct Edge {
    Index to;
    Complex factor;
  };
  std::vector<std::vector<Edge>> adj(static_cast<size_t>(dim));
  for (const auto& g : actions) {
    for (Index i = 0; i < dim; ++i) {
      const Index j = g.perm[i];
      const Complex f = actionPhase(g, i);
      adj[static_cast<size_t>(i)].push_back({j, f});
      adj[static_cast<size_t>(j)].push_back({i, Complex(1.0, 0.0) / f});
    }
  }
  std::vector<int> orbit(static_cast<size_t>(dim), -1);
  std::vector<Complex> value(static_cast<size_t>(dim));
  std::vector<Vector> columns;
  int orbitId = 0;
  for (Index root = 0; root < dim; ++root) {
    if (orbit[static_cast<size_t>(root)] >= 0) continue;
    bool consistent = true;
    std::vector<Index> members;
    std::deque<Index> queue;
    orbit[static_cast<size_t>(root)] = orbitId;
    value[static_cast<size_t>(root)] = 1.0;
    queue.push_back(root);
    while (!queue.empty()) {
      const Index i = queue.front();
      queue.pop_front();
      members.push_back(i);
      for (const Edge& e : adj[static_cast<size_t>(i)]) {
        // u[i] = factor * u[e.to]  =>  u[e.to] = u[i] / factor
        const Complex want = value[static_cast<size_t>(i)] / e.factor;
        if (orbit[static_cast<size_t>(e.to)] < 0) {
          orbit[static_cast<size_t>(e.to)] = orbitId;
          value[static_cast<size_t>(e.to)] = want;
          queue.push_back(e.to);
        } else if (std::abs(value[static_cast<size_t>(e.to)] - want) > 1e-10) {
          consistent = false;
        }
      }
    }
    if (consistent) {
      Vector col = Vector::Zero(dim);
      for (Index i : members) col[i] = value[static_cast<size_t>(i)];
      columns.push_back(col / col.norm());
    }
    ++orbitId;
  }
  Matrix basis(dim, static_cast<Index>(columns.size()));
  for (Index j = 0; j < basis.cols(); ++j) basis.col(j) = columns[static_cast<size_t>(j)];
  return basis;
}

bool basisIsReal(const Matrix& basis) {
  return basis.size() == 0 ||
         basis.imag().cwiseAbs().maxCoeff() <= 1e-14;
}

}  // namespace

OrthoProjector OrthoProjector::indicator(RealVector mask) {
  if (mask.size() == 0) {
    throw std::invalid_argument("indicator projector: empty mask");
  }
  requireBinaryMask(mask);
  auto store = std::make_shared<Storage>();
  const Index n = mask.size();
  store->rs.mask = std::move(mask);
  store->rs.rank = 0;
  return OrthoProjector(n, Kind::Indicator, true, store);
}

OrthoProjector OrthoProjector::span(const Matrix& vectors) {
  OrthonormalBasis onb = orthonormalize(vectors);
  auto store = std::make_shared<Storage>();
  const bool real = basisIsReal(onb.basis);
  store->rs.basis = std::move(onb.basis);
  store->rs.rank = onb.rank;
  return OrthoProjector(vectors.rows(), Kind::Span, real, store);
}

OrthoProjector OrthoProjector::localizedPerturbation(RealVector maskK,
                                                     const Matrix& exteriorRefs) {
  requireBinaryMask(maskK);
  const Index n = maskK.size();
  if (exteriorRefs.rows() != n || exteriorRefs.cols() == 0) {
    throw std::invalid_argument(
        "localized perturbation projector: bad reference block");
  }
  Matrix restricted = exteriorRefs;
  for (Index j = 0; j < restricted.cols(); ++j) {
    const double total = restricted.col(j).norm();
    for (Index i = 0; i < n; ++i) {
      if (maskK[i] != 0.0) restricted(i, j) = 0.0;
    }
    if (restricted.col(j).norm() < 1e-12 * total || total == 0.0) {
      throw std::invalid_argument(
          "localized perturbation projector: reference has no support outside K");
    }
  }
  OrthonormalBasis onb = orthonormalize(restricted);
  auto store = std::make_shared<Storage>();
  const bool real = basisIsReal(onb.basis);
  store->rs.mask = std::move(maskK);
  store->rs.basis = std::move(onb.basis);
  store->rs.rank = onb.rank;
  return OrthoProjector(n, Kind::IndicatorPlusSpan, real, store);
}

OrthoProjector OrthoProjector::groupAverage(std::vector<GroupAction> actions,
                                            Index dim) {
  if (actions.empty()) {
    throw std::invalid_argument("group average projector: empty action list");
  }
  for (const auto& a : actions) requireUnitary(a, dim);
  for (const auto& a : actions) {
    for (const auto& b : actions) {
      const GroupAction ab = compose(a, b);
      const bool found = std::any_of(actions.begin(), actions.end(),
                                     [&](const GroupAction& g) { return sameAction(g, ab); });
      if (!found) {
        throw std::invalid_argument(
            "group average projector: action list is not closed under composition");
      }
    }
  }
  const bool real = std::all_of(actions.begin(), actions.end(), actionIsReal);
  auto store = std::make_shared<Storage>();
  store->rs.basis = invariantBasis(actions, dim);
  store->rs.rank = store->rs.basis.cols();
  store->actions = std::move(actions);
  return OrthoProjector(dim, Kind::GroupAverage, real, store);
}

OrthoProjector OrthoProjector::complement(const OrthoProjector& inner) {
  if (inner.kind_ == Kind::Complement) {
    return *inner.store_->inner;  // complement is an involution
  }
  auto store = std::make_shared<Storage>();
  store->inner = std::make_shared<const OrthoProjector>(inner);
  const RankStructure& rs = inner.rankStructure();
  store->rs.mask = rs.mask.size() == 0
                       ? RealVector(RealVector::Ones(inner.dim()))
                       : RealVector(RealVector::Ones(inner.dim()) - rs.mask);
  store->rs.basis = rs.basis;
  store->rs.coeff = -rs.coeff;
  store->rs.rank = rs.rank;
  return OrthoProjector(inner.dim(), Kind::Complement, inner.is_real_, store);
}

OrthoProjector OrthoProjector::zero(Index dim) {
  return indicator(RealVector::Zero(dim));
}

OrthoProjector OrthoProjector::identity(Index dim) {
  return indicator(RealVector::Ones(dim));
}

Vector OrthoProjector::apply(const Vector& v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("OrthoProjector::apply: dimension mismatch");
  }
  switch (kind_) {
    case Kind::Indicator:
      return store_->rs.mask.cast<Complex>().cwiseProduct(v);
    case Kind::Span:
      return store_->rs.basis * (store_->rs.basis.adjoint() * v);
    case Kind::IndicatorPlusSpan: {
      Vector out = store_->rs.mask.cast<Complex>().cwiseProduct(v);
      out.noalias() += store_->rs.basis * (store_->rs.basis.adjoint() * v);
      return out;
    }
    case Kind::GroupAverage: {
      Vector out = Vector::Zero(dim_);
      for (const auto& g : store_->actions) out += applyAction(g, v);
      return out / static_cast<double>(store_->actions.size());
    }
    case Kind::Complement:
      return v - store_->inner->apply(v);
  }
  throw std::logic_error("OrthoProjector: unknown kind");
}

const RankStructure& OrthoProjector::rankStructure() const {
  return store_->rs;
}

const OrthoProjector& OrthoProjector::inner() const {
  if (kind_ != Kind::Complement) {
    throw std::logic_error("OrthoProjector::inner: not a complement projector");
  }
  return *store_->inner;
}

std::pair<double, double> tauDelta(const OrthoProjector& q, const Vector& v) {
  const double nrm = v.norm();
  if (nrm == 0.0) {
    throw std::invalid_argument("tauDelta: zero vector");
  }
  const Vector qv = q.apply(v);
  const double tau = qv.norm() / nrm;
  const double delta = (v - qv).norm() / nrm;
  return {std::min(tau, 1.0), std::min(delta, 1.0)};
}

}  // namespace ceig

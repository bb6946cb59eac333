#include "qsp/uqrep.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qsp/errors.hpp"

namespace qsp {

QParams::QParams(double qv) : q(qv) {
  if (!(qv > 0.0 && qv < 1.0)) throw InputError("q must lie in (0,1)");
}

cplx QParams::hbar() const { return cplx(0.0, -std::log(q) / M_PI); }

CVec WeightModule::k_diag(const Weight& w) const {
  CVec d(dim());
  std::map<IWeight, double> cache;
  for (int i = 0; i < dim(); ++i) {
    auto it = cache.find(weights[i]);
    if (it == cache.end()) it = cache.emplace(weights[i], qp.pow(pairing(D(), w, to_weight(weights[i])))).first;
    d[i] = it->second;
  }
  return d;
}

CMat WeightModule::K(const Weight& w) const { return k_diag(w).asDiagonal(); }

CMat WeightModule::Kr(int r, int power) const { return K(scale(Rat(power), simple_root(D(), r))); }

namespace {

IWeight alpha_i(const RootDatum& D, int s) {
  IWeight a(D.rank());
  for (int t = 0; t < D.rank(); ++t) a[t] = D.a(t, s);
  return a;
}

IWeight isub(IWeight a, const IWeight& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

int height_below(const RootDatum& D, const IWeight& top, const IWeight& w) {
  auto c = root_coords(D, to_weight(isub(top, w)));
  Rat h = 0;
  for (auto& x : c) h += x;
  if (h.denominator() != 1) throw InternalError("weight not in the root lattice coset");
  return int(h.numerator());
}

}  // namespace

WeightModule build_irrep(std::shared_ptr<const RootDatum> Dp, const IWeight& lambda, const QParams& qp,
                         int dim_cap) {
  const RootDatum& D = *Dp;
  const int n = D.rank();
  if (int(lambda.size()) != n) throw InputError("highest weight has wrong length");
  for (int x : lambda)
    if (x < 0) throw InputError("highest weight is not dominant");
  const long long expected = weyl_dimension(D, to_weight(lambda));
  if (expected > dim_cap)
    throw ResourceError("irrep dimension " + std::to_string(expected) + " exceeds cap " + std::to_string(dim_cap));

  std::vector<IWeight> wts{lambda};
  std::vector<std::vector<int>> levels{{0}};
  // per level L: Fl[L][s] maps level L -> L+1, El[L][s] maps level L+1 -> L
  std::vector<std::vector<RMat>> Fl, El;
  std::vector<double> qr(n);
  for (int r = 0; r < n; ++r) qr[r] = qp.qr(D, r);

  for (int L = 0;; ++L) {
    const auto& cur = levels[L];
    const int dl = int(cur.size());
    std::vector<std::pair<int, int>> cand;
    for (int j = 0; j < dl; ++j)
      for (int s = 0; s < n; ++s) cand.emplace_back(s, j);
    const int nc = int(cand.size());
    // E_r F_s restricted to level L
    std::vector<RMat> EF(n * n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        RMat m = RMat::Zero(dl, dl);
        if (L > 0) m = Fl[L - 1][s] * El[L - 1][r];
        if (r == s)
          for (int j = 0; j < dl; ++j) m(j, j) += qint(wts[cur[j]][r], qr[r]);
        EF[r * n + s] = m;
      }
    // magnitude of the summands, to tell cancellation from a genuine small entry
    double ref = 0;
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < dl; ++j) {
        const double kinv = std::pow(qr[r], -wts[cur[j]][r]);
        ref = std::max(ref, kinv * std::abs(qint(wts[cur[j]][r], qr[r])));
        for (int s = 0; s < n; ++s)
          if (L > 0) ref = std::max(ref, kinv * EF[r * n + s].row(j).cwiseAbs().maxCoeff());
      }
    RMat G(nc, nc);
    for (int a = 0; a < nc; ++a) {
      auto [r, i] = cand[a];
      const double kinv = std::pow(qr[r], -wts[cur[i]][r]);
      for (int b = 0; b < nc; ++b) {
        auto [s, j] = cand[b];
        G(a, b) = kinv * EF[r * n + s](i, j);
      }
    }
    G = (G + G.transpose()).eval() * 0.5;
    const double gmax = G.cwiseAbs().maxCoeff();
    if (gmax < 1e-10 * ref) break;
    const double lmax = ref;

    std::map<IWeight, std::vector<int>, std::greater<IWeight>> groups;
    for (int a = 0; a < nc; ++a) {
      auto [s, j] = cand[a];
      groups[isub(wts[cur[j]], alpha_i(D, s))].push_back(a);
    }
    std::vector<Eigen::VectorXd> newvecs;
    std::vector<IWeight> newwts;
    for (auto& [w, idx] : groups) {
      std::vector<Eigen::VectorXd> vecs;
      for (int a : idx) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(nc);
        e[a] = 1;
        for (int pass = 0; pass < 2; ++pass)
          for (auto& u : vecs) e -= (u.dot(G * e)) * u;
        const double nn = e.dot(G * e);
        if (nn > 1e-8 * lmax) vecs.push_back(e / std::sqrt(nn));
      }
      for (auto& u : vecs) {
        newvecs.push_back(u);
        newwts.push_back(w);
      }
    }
    if (newvecs.empty()) break;
    const int nd = int(newvecs.size());
    if (int(wts.size()) + nd > dim_cap) throw ResourceError("irrep construction exceeded dimension cap");
    RMat U(nc, nd);
    for (int k = 0; k < nd; ++k) U.col(k) = newvecs[k];
    RMat UG = U.transpose() * G;
    std::vector<RMat> Fs(n), Es(n);
    for (int s = 0; s < n; ++s) {
      RMat M(nd, dl);
      for (int j = 0; j < dl; ++j) M.col(j) = UG.col(j * n + s);
      Eigen::VectorXd ks(dl);
      for (int j = 0; j < dl; ++j) ks[j] = std::pow(qr[s], wts[cur[j]][s]);
      Fs[s] = M;
      Es[s] = ks.asDiagonal() * M.transpose();
    }
    Fl.push_back(Fs);
    El.push_back(Es);
    std::vector<int> nxt(nd);
    std::iota(nxt.begin(), nxt.end(), int(wts.size()));
    wts.insert(wts.end(), newwts.begin(), newwts.end());
    levels.push_back(nxt);
  }

  const int N = int(wts.size());
  if (N != expected)
    throw NumericalError("irrep rank detection gave dimension " + std::to_string(N) + ", expected " +
                         std::to_string(expected));
  WeightModule M;
  M.datum = Dp;
  M.qp = qp;
  M.weights = wts;
  M.E.assign(n, CMat::Zero(N, N));
  M.F.assign(n, CMat::Zero(N, N));
  for (size_t L = 0; L < Fl.size(); ++L) {
    const auto& a = levels[L];
    const auto& b = levels[L + 1];
    for (int s = 0; s < n; ++s) {
      M.F[s].block(b.front(), a.front(), b.size(), a.size()) = Fl[L][s].cast<cplx>();
      M.E[s].block(a.front(), b.front(), a.size(), b.size()) = El[L][s].cast<cplx>();
    }
  }
  return M;
}

WeightModule trivial_module(std::shared_ptr<const RootDatum> D, const QParams& qp) {
  return build_irrep(D, IWeight(D->rank(), 0), qp);
}

WeightModule tensor(const WeightModule& M, const WeightModule& N) {
  if (!(M.D() == N.D())) throw InputError("tensor factors over different root data");
  WeightModule T;
  T.datum = M.datum;
  T.qp = M.qp;
  for (auto& a : M.weights)
    for (auto& b : N.weights) {
      IWeight w(a);
      for (size_t i = 0; i < w.size(); ++i) w[i] += b[i];
      T.weights.push_back(w);
    }
  const CMat I1 = CMat::Identity(M.dim(), M.dim());
  const CMat I2 = CMat::Identity(N.dim(), N.dim());
  for (int r = 0; r < M.D().rank(); ++r) {
    T.E.push_back(Eigen::kroneckerProduct(M.E[r], I2).eval() + Eigen::kroneckerProduct(M.Kr(r), N.E[r]).eval());
    T.F.push_back(Eigen::kroneckerProduct(M.F[r], N.Kr(r, -1)).eval() + Eigen::kroneckerProduct(I1, N.F[r]).eval());
  }
  return T;
}

WeightModule direct_sum(const std::vector<WeightModule>& parts) {
  if (parts.empty()) throw InputError("empty direct sum");
  WeightModule S;
  S.datum = parts[0].datum;
  S.qp = parts[0].qp;
  int N = 0;
  for (auto& p : parts) N += p.dim();
  const int n = S.D().rank();
  S.E.assign(n, CMat::Zero(N, N));
  S.F.assign(n, CMat::Zero(N, N));
  int off = 0;
  for (auto& p : parts) {
    for (int r = 0; r < n; ++r) {
      S.E[r].block(off, off, p.dim(), p.dim()) = p.E[r];
      S.F[r].block(off, off, p.dim(), p.dim()) = p.F[r];
    }
    S.weights.insert(S.weights.end(), p.weights.begin(), p.weights.end());
    off += p.dim();
  }
  return S;
}

WeightModule twist_module(const WeightModule& M, const std::vector<int>& tau) {
  WeightModule T = M;
  for (size_t r = 0; r < tau.size(); ++r) {
    T.E[r] = M.E[tau[r]];
    T.F[r] = M.F[tau[r]];
  }
  for (auto& w : T.weights) {
    IWeight v(w.size());
    for (size_t r = 0; r < w.size(); ++r) v[r] = w[tau[r]];
    w = v;
  }
  return T;
}

CMat embed_irrep(const WeightModule& V, const WeightModule& M, const CVec& v) {
  const int n = V.D().rank();
  std::map<int, std::vector<int>> lev;
  for (int i = 0; i < V.dim(); ++i) lev[height_below(V.D(), V.weights[0], V.weights[i])].push_back(i);
  CMat iota = CMat::Zero(M.dim(), V.dim());
  iota.col(0) = v;
  for (auto it = std::next(lev.begin()); it != lev.end(); ++it) {
    const auto& b = it->second;
    const auto& a = std::prev(it)->second;
    CMat A(b.size(), n * a.size());
    CMat Y(M.dim(), n * a.size());
    for (int s = 0; s < n; ++s)
      for (size_t j = 0; j < a.size(); ++j) {
        for (size_t k = 0; k < b.size(); ++k) A(k, s * a.size() + j) = V.F[s](b[k], a[j]);
        Y.col(s * a.size() + j) = M.F[s] * iota.col(a[j]);
      }
    CMat X = A.transpose().colPivHouseholderQr().solve(Y.transpose()).transpose();
    for (size_t k = 0; k < b.size(); ++k) iota.col(b[k]) = X.col(k);
  }
  return iota;
}

std::vector<Isotypic> decompose(const WeightModule& M) {
  const int n = M.D().rank();
  double scale = 1e-300;
  for (int r = 0; r < n; ++r) scale = std::max(scale, M.E[r].norm());
  std::map<IWeight, std::vector<int>, std::greater<IWeight>> byw;
  for (int i = 0; i < M.dim(); ++i) byw[M.weights[i]].push_back(i);
  std::vector<Isotypic> out;
  int covered = 0;
  for (auto& [w, idx] : byw) {
    if (std::any_of(w.begin(), w.end(), [](int x) { return x < 0; })) continue;
    CMat S(n * M.dim(), idx.size());
    for (size_t j = 0; j < idx.size(); ++j)
      for (int r = 0; r < n; ++r) S.block(r * M.dim(), j, M.dim(), 1) = M.E[r].col(idx[j]);
    Eigen::JacobiSVD<CMat> svd(S, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::vector<int> ker;
    for (int k = 0; k < int(idx.size()); ++k) {
      const double s = k < sv.size() ? sv[k] : 0.0;
      if (s < 1e-9 * scale)
        ker.push_back(k);
      else if (s < 1e-5 * scale)
        throw NumericalError("highest-weight kernel rank is ambiguous (singular value " + std::to_string(s / scale) +
                             ")");
    }
    if (ker.empty()) continue;
    WeightModule V = build_irrep(M.datum, w, M.qp, std::max(kDefaultDimCap, M.dim()));
    Isotypic iso;
    iso.highest = w;
    iso.multiplicity = int(ker.size());
    iso.irrep_dim = V.dim();
    iso.embedding = CMat::Zero(M.dim(), iso.multiplicity * V.dim());
    for (int c = 0; c < iso.multiplicity; ++c) {
      CVec v = CVec::Zero(M.dim());
      for (size_t j = 0; j < idx.size(); ++j) v[idx[j]] = svd.matrixV()(j, ker[c]);
      iso.embedding.block(0, c * V.dim(), M.dim(), V.dim()) = embed_irrep(V, M, v);
    }
    covered += iso.multiplicity * V.dim();
    out.push_back(std::move(iso));
  }
  if (covered != M.dim())
    throw NumericalError("decomposition covers " + std::to_string(covered) + " of " + std::to_string(M.dim()) +
                         " dimensions");
  return out;
}

CMat act(const WeightModule& M, const AlgebraElement& x) {
  if (!(x.datum() == M.D())) throw InputError("algebra element and module over different root data");
  CMat out = CMat::Zero(M.dim(), M.dim());
  for (auto& [m, c] : x.terms()) {
    CMat t = M.K(m.k) * c;
    for (auto it = m.word.rbegin(); it != m.word.rend(); ++it) {
      const int r = letter_vertex(*it);
      t = (*it > 0 ? M.E[r] : M.F[r]) * t;
    }
    out += t;
  }
  return out;
}

CMat act(const WeightModule& M, const WeightModule& N, const TensorElement& t) {
  std::map<Monomial, CMat> c1, c2;
  auto ev = [](std::map<Monomial, CMat>& cache, const WeightModule& W, const Monomial& m) -> const CMat& {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    AlgebraElement x(W.datum, W.qp.q);
    x.add_term(m, 1.0);
    return cache.emplace(m, act(W, x)).first->second;
  };
  CMat out = CMat::Zero(M.dim() * N.dim(), M.dim() * N.dim());
  for (auto& [k, c] : t.terms()) out += c * Eigen::kroneckerProduct(ev(c1, M, k.first), ev(c2, N, k.second)).eval();
  return out;
}

CMat mpow(const CMat& a, int n) {
  CMat r = CMat::Identity(a.rows(), a.cols());
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

double rel_norm(const CMat& a, const CMat& b) {
  const double s = std::max(b.norm(), 1e-300);
  return (a - b).norm() / s;
}

RelationResiduals relation_residuals(const WeightModule& M) {
  RelationResiduals R;
  const RootDatum& D = M.D();
  const int n = D.rank();
  for (int r = 0; r < n; ++r) {
    const double nE = M.E[r].norm();
    if (nE == 0) continue;
    const double qr = M.qp.qr(D, r);
    for (int t = 0; t < n; ++t) {
      Weight w = fundamental(D, t);
      CMat lhs = M.K(w) * M.E[r] * M.K(neg(w));
      const double f = M.qp.pow(pairing(D, w, simple_root(D, r)));
      R.cartan = std::max(R.cartan, (lhs - f * M.E[r]).norm() / nE);
      CMat lf = M.K(w) * M.F[r] * M.K(neg(w));
      R.cartan = std::max(R.cartan, (lf - M.F[r] / f).norm() / std::max(M.F[r].norm(), 1e-300));
    }
    for (int s = 0; s < n; ++s) {
      CMat c = M.E[r] * M.F[s] - M.F[s] * M.E[r];
      CMat rhs = CMat::Zero(M.dim(), M.dim());
      if (r == s) rhs = (M.Kr(r) - M.Kr(r, -1)) / (qr - 1.0 / qr);
      R.ef = std::max(R.ef, (c - rhs).norm() / std::max({nE * M.F[s].norm(), rhs.norm(), 1e-300}));
      if (s == r) continue;
      const int m = 1 - D.a(r, s);
      CMat se = CMat::Zero(M.dim(), M.dim()), sf = se;
      double scale_e = std::pow(nE, m) * M.E[s].norm(), scale_f = std::pow(M.F[r].norm(), m) * M.F[s].norm();
      for (int k = 0; k <= m; ++k) {
        const double cf = (k % 2 ? -1.0 : 1.0) * qbinom(m, k, qr);
        se += cf * mpow(M.E[r], m - k) * M.E[s] * mpow(M.E[r], k);
        sf += cf * mpow(M.F[r], m - k) * M.F[s] * mpow(M.F[r], k);
      }
      if (scale_e > 0) R.serre = std::max(R.serre, se.norm() / scale_e);
      if (scale_f > 0) R.serre = std::max(R.serre, sf.norm() / scale_f);
    }
    R.star = std::max(R.star, (M.E[r].adjoint() - M.F[r] * M.Kr(r)).norm() / nE);
  }
  return R;
}

CMat flip(int dm, int dn) {
  CMat P = CMat::Zero(dm * dn, dm * dn);
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dn; ++j) P(j * dm + i, i * dn + j) = 1.0;
  return P;
}

CMat ribbon_element(const WeightModule& M) {
  CMat v = CMat::Zero(M.dim(), M.dim());
  for (auto& iso : decompose(M)) {
    const double s = M.qp.pow(casimir_scalar(M.D(), to_weight(iso.highest)));
    v += s * iso.embedding * iso.embedding.adjoint();
  }
  return v;
}

}  // namespace qsp

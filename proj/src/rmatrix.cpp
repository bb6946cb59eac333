#include "qsp/rmatrix.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "qsp/errors.hpp"
#include "qsp/lusztig.hpp"

namespace qsp {

namespace {

constexpr double kIntertwineTol = 1e-9;

CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

// index of a vector killed by all F_r at the lowest weight, or -1
int lowest_index(const WeightModule& N) {
  const Weight target = weyl_act(N.D(), longest_element(N.D(), all_vertices(N.D())), to_weight(N.weights[0]));
  int found = -1;
  for (int j = 0; j < N.dim(); ++j) {
    if (to_weight(N.weights[j]) != target) continue;
    if (found >= 0) return -1;
    found = j;
  }
  return found;
}

bool is_highest_first(const WeightModule& M) {
  for (int r = 0; r < M.D().rank(); ++r)
    if (M.E[r].col(0).norm() > 1e-12 * std::max(1.0, M.E[r].norm())) return false;
  return true;
}

double normalization_residual(const CMat& R, const WeightModule& M, const WeightModule& N) {
  const int j = lowest_index(N);
  if (M.dim() == 0 || j < 0 || !is_highest_first(M)) return -1;
  CVec v = CVec::Zero(M.dim() * N.dim());
  v[j] = 1.0;  // e_0 (x) f_j
  const double ev = M.qp.pow(-pairing(M.D(), to_weight(M.weights[0]), to_weight(N.weights[j])));
  return (R * v - ev * v).norm();
}

}  // namespace

CMat cartan_factor(const WeightModule& M, const WeightModule& N) {
  CVec d(M.dim() * N.dim());
  for (int i = 0; i < M.dim(); ++i)
    for (int j = 0; j < N.dim(); ++j) d[i * N.dim() + j] = std::pow(M.qp.q, -pairing(M.D(), M.weights[i], N.weights[j]));
  return d.asDiagonal();
}

CMat quasi_r(const WeightModule& M, const WeightModule& N) {
  const RootDatum& D = M.D();
  const WeylWord w0 = longest_element(D, all_vertices(D));
  const int dim = M.dim() * N.dim();
  CMat theta = CMat::Identity(dim, dim);
  CMat PM = CMat::Identity(M.dim(), M.dim()), PN = CMat::Identity(N.dim(), N.dim());
  for (size_t k = 0; k < w0.size(); ++k) {
    const int r = w0[k];
    const double qb = M.qp.qr(D, r);
    const CMat Eb = PM * M.E[r] * PM.partialPivLu().inverse();
    const CMat Fb = PN * N.F[r] * PN.partialPivLu().inverse();
    CMat term = CMat::Identity(dim, dim), En = CMat::Identity(M.dim(), M.dim()), Fn = CMat::Identity(N.dim(), N.dim());
    for (int n = 1;; ++n) {
      En = En * Eb;
      Fn = Fn * Fb;
      if (En.norm() < 1e-14 || Fn.norm() < 1e-14 || n > M.dim() + N.dim()) break;
      const double c = std::pow(qb, -0.5 * n * (n - 1)) * std::pow(1.0 / qb - qb, n) / qfact(n, qb);
      term += c * kron(En, Fn);
    }
    // Theta = Theta_{beta_M} ... Theta_{beta_1}
    theta = term * theta;
    PM = PM * braid_on_module(M, r);
    PN = PN * braid_on_module(N, r);
  }
  return theta;
}

TensorGenerators tensor_generators(const WeightModule& M, const WeightModule& N) {
  TensorGenerators g;
  const CMat I1 = CMat::Identity(M.dim(), M.dim()), I2 = CMat::Identity(N.dim(), N.dim());
  for (int r = 0; r < M.D().rank(); ++r) {
    g.E.push_back(kron(M.E[r], I2) + kron(M.Kr(r), N.E[r]));
    g.F.push_back(kron(M.F[r], N.Kr(r, -1)) + kron(I1, N.F[r]));
    g.Eop.push_back(kron(I1, N.E[r]) + kron(M.E[r], N.Kr(r)));
    g.Fop.push_back(kron(M.Kr(r, -1), N.F[r]) + kron(M.F[r], I2));
    g.K.push_back(kron(M.Kr(r), N.Kr(r)));
  }
  return g;
}

double intertwining_residual(const CMat& R, const TensorGenerators& g) {
  double res = 0;
  const double s = std::max(R.norm(), 1e-300);
  for (size_t r = 0; r < g.E.size(); ++r) {
    res = std::max(res, (R * g.E[r] - g.Eop[r] * R).norm() / (s * std::max(g.E[r].norm(), 1e-300)));
    res = std::max(res, (R * g.F[r] - g.Fop[r] * R).norm() / (s * std::max(g.F[r].norm(), 1e-300)));
    res = std::max(res, (R * g.K[r] - g.K[r] * R).norm() / (s * g.K[r].norm()));
  }
  return res;
}

RMatrix rmat(const WeightModule& M, const WeightModule& N) {
  if (!(M.D() == N.D()) || M.qp.q != N.qp.q) throw InputError("R-matrix factors over different data");
  const CMat Rmn = quasi_r(M, N) * cartan_factor(M, N);
  const CMat Rnm = quasi_r(N, M) * cartan_factor(N, M);
  const CMat S = flip(M.dim(), N.dim());
  const CMat R21 = S.transpose() * Rnm * S;
  struct Cand {
    const char* tag;
    CMat m;
  };
  std::vector<Cand> cands{{"R", Rmn}, {"R21", R21}, {"R^-1", Rmn.inverse()}, {"R21^-1", R21.inverse()}};
  const auto g = tensor_generators(M, N);
  for (auto& c : cands) {
    if (intertwining_residual(c.m, g) > kIntertwineTol) continue;
    double nr = normalization_residual(c.m, M, N);
    if (nr < 0) {
      // no highest/lowest pair available on these modules: use the vector representation as reference
      IWeight w(M.D().rank(), 0);
      w[0] = 1;
      auto V = build_irrep(M.datum, w, M.qp);
      RMatrix ref = rmat(V, V);
      if (ref.convention != c.tag) continue;
      nr = 0;
    }
    if (nr < 1e-9) return {c.m, M.dim(), N.dim(), c.tag};
  }
  throw InternalError("no R-matrix convention matches the highest-lowest normalization");
}

RMatrix rmat_oracle(const WeightModule& M, const WeightModule& N) {
  if (!(M.D() == N.D())) throw InputError("R-matrix factors over different data");
  const RootDatum& D = M.D();
  const int dm = M.dim(), dn = N.dim(), dim = dm * dn;
  const CMat Dg = cartan_factor(M, N);
  auto positive_shift = [&](const IWeight& from, const IWeight& to) {
    IWeight diff(from.size());
    for (size_t k = 0; k < diff.size(); ++k) diff[k] = to[k] - from[k];
    auto c = root_coords(D, to_weight(diff));
    bool nonzero = false;
    for (auto& x : c) {
      if (x.denominator() != 1 || x < Rat(0)) return false;
      nonzero = nonzero || x != Rat(0);
    }
    return nonzero;
  };
  // unknown (a, b): a = (i', j'), b = (i, j), wt_i' = wt_i + beta, wt_j' = wt_j - beta
  std::vector<std::pair<int, int>> unk;
  for (int i = 0; i < dm; ++i)
    for (int ip = 0; ip < dm; ++ip) {
      if (!positive_shift(M.weights[i], M.weights[ip])) continue;
      IWeight beta(M.weights[i].size());
      for (size_t k = 0; k < beta.size(); ++k) beta[k] = M.weights[ip][k] - M.weights[i][k];
      for (int j = 0; j < dn; ++j)
        for (int jp = 0; jp < dn; ++jp) {
          bool ok = true;
          for (size_t k = 0; k < beta.size(); ++k) ok = ok && N.weights[jp][k] == N.weights[j][k] - beta[k];
          if (ok) unk.emplace_back(ip * dn + jp, i * dn + j);
        }
    }
  const auto g = tensor_generators(M, N);
  std::vector<std::pair<CMat, CMat>> gens;
  for (int r = 0; r < D.rank(); ++r) {
    gens.emplace_back(g.E[r], g.Eop[r]);
    gens.emplace_back(g.F[r], g.Fop[r]);
  }
  const int nu = int(unk.size());
  CMat R = Dg;
  if (nu > 0) {
    using Trip = Eigen::Triplet<cplx>;
    std::vector<Trip> trips;
    CVec rhs = CVec::Zero(long(gens.size()) * dim * dim);
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      const auto& [X, Xop] = gens[gi];
      const long off = long(gi) * dim * dim;
      const CMat c = Xop * Dg - Dg * X;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) rhs[off + long(a) * dim + b] = c(a, b);
      for (int u = 0; u < nu; ++u) {
        auto [a, b] = unk[u];
        for (int cc = 0; cc < dim; ++cc)
          if (X(b, cc) != cplx(0)) trips.emplace_back(off + long(a) * dim + cc, u, X(b, cc));
        for (int d = 0; d < dim; ++d)
          if (Xop(d, a) != cplx(0)) trips.emplace_back(off + long(d) * dim + b, u, -Xop(d, a));
      }
    }
    Eigen::SparseMatrix<cplx> A(rhs.size(), nu);
    A.setFromTriplets(trips.begin(), trips.end());
    const CMat AtA = CMat(A.adjoint() * A);
    const CVec Atb = A.adjoint() * rhs;
    Eigen::SelfAdjointEigenSolver<CMat> es(AtA);
    const auto& ev = es.eigenvalues();
    if (ev[0] < 1e-20 * ev[nu - 1]) throw NumericalError("oracle linear system does not determine the R-matrix");
    const CVec x = es.eigenvectors() * (ev.cwiseInverse().asDiagonal() * (es.eigenvectors().adjoint() * Atb));
    for (int u = 0; u < nu; ++u) R(unk[u].first, unk[u].second) = x[u];
  }
  if (intertwining_residual(R, g) > 1e-8) throw NumericalError("oracle system is inconsistent");
  return {R, dm, dn, "oracle"};
}

CMat braiding(const WeightModule& M, const WeightModule& N) { return flip(M.dim(), N.dim()) * rmat(M, N).matrix; }

CMat r21(const WeightModule& M, const WeightModule& N) {
  const CMat S = flip(M.dim(), N.dim());
  return S.transpose() * rmat(N, M).matrix * S;
}

CMat on_legs(const CMat& A, const std::vector<int>& dims, int i, int j) {
  const int n = int(dims.size());
  long total = 1;
  for (int d : dims) total *= d;
  std::vector<long> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];
  CMat out = CMat::Zero(total, total);
  for (long col = 0; col < total; ++col) {
    const int ci = int((col / stride[i]) % dims[i]), cj = int((col / stride[j]) % dims[j]);
    const long base = col - ci * stride[i] - cj * stride[j];
    for (int ri = 0; ri < dims[i]; ++ri)
      for (int rj = 0; rj < dims[j]; ++rj) {
        const cplx v = A(ri * dims[j] + rj, ci * dims[j] + cj);
        if (v != cplx(0)) out(base + ri * stride[i] + rj * stride[j], col) += v;
      }
  }
  return out;
}

CMat on_leg(const CMat& A, const std::vector<int>& dims, int i) {
  CMat out = CMat::Identity(1, 1);
  for (int k = 0; k < int(dims.size()); ++k) out = kron(out, k == i ? A : CMat::Identity(dims[k], dims[k]));
  return out;
}

CMat leg_permutation(const std::vector<int>& dims, const std::vector<int>& perm) {
  const int n = int(dims.size());
  std::vector<int> tdims(n);
  for (int k = 0; k < n; ++k) tdims[perm[k]] = dims[k];
  long total = 1;
  for (int d : dims) total *= d;
  CMat P = CMat::Zero(total, total);
  std::vector<int> idx(n, 0), tidx(n);
  for (long col = 0; col < total; ++col) {
    long rem = col;
    for (int k = n - 1; k >= 0; --k) {
      idx[k] = int(rem % dims[k]);
      rem /= dims[k];
    }
    for (int k = 0; k < n; ++k) tidx[perm[k]] = idx[k];
    long row = 0;
    for (int k = 0; k < n; ++k) row = row * tdims[k] + tidx[k];
    P(row, col) = 1.0;
  }
  return P;
}

double ybe_residual(const WeightModule& M) {
  const CMat R = rmat(M, M).matrix;
  const std::vector<int> dims{M.dim(), M.dim(), M.dim()};
  const CMat R12 = on_legs(R, dims, 0, 1), R13 = on_legs(R, dims, 0, 2), R23 = on_legs(R, dims, 1, 2);
  const CMat lhs = R12 * R13 * R23;
  return (lhs - R23 * R13 * R12).norm() / lhs.norm();
}

HexagonResiduals hexagon_residuals(const WeightModule& M, const WeightModule& N, const WeightModule& P) {
  const std::vector<int> dims{M.dim(), N.dim(), P.dim()};
  HexagonResiduals h;
  const CMat first = rmat(tensor(M, N), P).matrix;
  const CMat r13a = on_legs(rmat(M, P).matrix, dims, 0, 2), r23 = on_legs(rmat(N, P).matrix, dims, 1, 2);
  h.first = (first - r13a * r23).norm() / first.norm();
  const CMat second = rmat(M, tensor(N, P)).matrix;
  const CMat r12 = on_legs(rmat(M, N).matrix, dims, 0, 1);
  h.second = (second - r13a * r12).norm() / second.norm();
  return h;
}

double ribbon_residual(const WeightModule& M, const WeightModule& N) {
  const CMat R = rmat(M, N).matrix;
  const CMat lhs = r21(M, N) * R * ribbon_element(tensor(M, N));
  const CMat rhs = kron(ribbon_element(M), ribbon_element(N));
  return (lhs - rhs).norm() / rhs.norm();
}

}  // namespace qsp

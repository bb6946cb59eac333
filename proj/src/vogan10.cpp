#include "qsp/vogan10.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "qsp/errors.hpp"

namespace qsp {

namespace {

CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

void require_a1(const WeightModule& V) {
  if (V.D().rank() != 1) throw InputError("the rank-one double needs a U_q(su2) module");
}

// H weights of V (weight m in fundamental coordinates is h = m)
std::vector<double> h_weights(const WeightModule& V) {
  std::vector<double> h;
  for (auto& w : V.weights) h.push_back(double(w[0]));
  return h;
}

CMat diag_of(const std::vector<double>& v, const std::function<cplx(double)>& f) {
  CMat d = CMat::Zero(v.size(), v.size());
  for (size_t i = 0; i < v.size(); ++i) d(i, i) = f(v[i]);
  return d;
}

CMat interior_projector(const TruncatedModule& T) {
  CMat P = CMat::Zero(T.dim(), T.dim());
  for (int i : T.interior()) P(i, i) = 1;
  return P;
}

}  // namespace

std::vector<int> TruncatedModule::interior() const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (level[i] <= N - 2) out.push_back(i);
  return out;
}

double VoganRelations::max() const { return std::max({KF, KFs, FsF}); }

TruncatedModule build_Mr(double r, const QParams& qp, int N) {
  if (N < 2) throw InputError("truncation level must be at least 2");
  const double q = qp.q;
  TruncatedModule M;
  M.r = r;
  M.N = N;
  M.qp = qp;
  const int d = N + 1;
  M.K = CMat::Zero(d, d);
  M.F = CMat::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    M.H.push_back(-r + 2.0 * n);
    M.level.push_back(n);
    M.K(n, n) = std::pow(q, -r + 2.0 * n);
    if (n == 0) continue;
    const double rad = (1 - std::pow(q, 2.0 * n)) * (1 + std::pow(q, 2 * r + 2 - 2.0 * n));
    if (rad < 0) throw InputError("negative radicand at level " + std::to_string(n));
    M.F(n - 1, n) = std::pow(q, -double(n)) * std::sqrt(rad) / (std::sqrt(q) * (1 / q - q));
  }
  M.Fs = M.F.adjoint();
  return M;
}

TruncatedModule as_truncated(const WeightModule& V) {
  require_a1(V);
  TruncatedModule M;
  M.qp = V.qp;
  M.H = h_weights(V);
  M.N = V.dim() + 1;
  M.level.assign(V.dim(), 0);
  M.K = V.Kr(0);
  M.F = V.F[0];
  M.Fs = V.F[0].adjoint();
  return M;
}

VoganRelations vogan_relations(const TruncatedModule& M, double eps) {
  const double q = M.qp.q;
  const CMat P = interior_projector(M);
  const CMat Kinv = M.K.inverse();
  const CMat I = CMat::Identity(M.dim(), M.dim());
  VoganRelations v;
  auto rel = [&](const CMat& a, const CMat& b) { return (a - b).norm() / std::max(b.norm(), 1.0); };
  v.KF = rel(M.K * M.F * P, M.F * M.K * P / (q * q));
  v.KFs = rel(M.K * M.Fs * P, q * q * M.Fs * M.K * P);
  // eps = -1 gives the twisted double, eps = +1 the relation F^*F - q^2FF^* = (1 - K^{-2})/(q - q^{-1})
  v.FsF = rel((M.Fs * M.F - q * q * M.F * M.Fs) * P, (I - eps * Kinv * Kinv) * P / (q - 1 / q));
  return v;
}

TruncatedModule coaction_tensor(const TruncatedModule& M, const WeightModule& V) {
  require_a1(V);
  const int dv = V.dim();
  const CMat Im = CMat::Identity(M.dim(), M.dim());
  const CMat Kv = V.Kr(0), Kvi = V.Kr(0, -1);
  TruncatedModule T;
  T.r = M.r;
  T.N = M.N;
  T.qp = M.qp;
  T.K = kron(M.K, Kv);
  T.F = kron(M.F, Kvi) + kron(Im, V.F[0]);
  T.Fs = kron(M.Fs, Kvi) + kron(Im, CMat(V.F[0].adjoint()));
  const auto hv = h_weights(V);
  for (int i = 0; i < M.dim(); ++i)
    for (int j = 0; j < dv; ++j) {
      T.H.push_back(M.H[i] + hv[j]);
      T.level.push_back(M.level[i]);
    }
  return T;
}

CMat e_matrix(const TruncatedModule& M, const WeightModule& V, double eps) {
  require_a1(V);
  const double q = M.qp.q;
  const int dv = V.dim();
  const auto hv = h_weights(V);
  CMat D = CMat::Zero(M.dim() * dv, M.dim() * dv);
  for (int i = 0; i < M.dim(); ++i)
    for (int j = 0; j < dv; ++j) D(i * dv + j, i * dv + j) = std::pow(q, -M.H[i] * hv[j] / 2);
  // first legs of R: E -> K F^*, of R_21: F
  const CMat Eop = M.K * M.Fs;
  CMat th = CMat::Zero(D.rows(), D.cols()), th21 = th;
  CMat a = CMat::Identity(M.dim(), M.dim()), b = a;
  CMat fv = CMat::Identity(dv, dv), ev = fv;
  for (int n = 0; n < dv; ++n) {
    const double c = std::pow(q, -n * (n - 1) / 2.0) * std::pow(1 / q - q, n) / qfact(n, q);
    th += c * kron(a, std::pow(eps, n) * fv);
    th21 += c * kron(b, ev);
    a = Eop * a;
    b = M.F * b;
    fv = V.F[0] * fv;
    ev = V.E[0] * ev;
  }
  const CMat vinv = ribbon_element(V).inverse();
  return th21 * D * th * D * kron(CMat::Identity(M.dim(), M.dim()), vinv);
}

CMat twist_to_plain(const CMat& E, const TruncatedModule& M, const WeightModule& V) {
  const auto hv = h_weights(V);
  const CMat Kchi_inv = diag_of(hv, [](double h) { return std::pow(cplx(0, 1), -int(std::lround(h))); });
  return E * kron(CMat::Identity(M.dim(), M.dim()), Kchi_inv);
}

double twisted_intertwining_residual(const CMat& E, const TruncatedModule& M, const WeightModule& V, double eps) {
  const TruncatedModule T = coaction_tensor(M, V);
  WeightModule Vn = V;
  Vn.E[0] *= eps;
  Vn.F[0] *= eps;
  const TruncatedModule Tn = coaction_tensor(M, Vn);
  const CMat P = interior_projector(T);
  double r = 0;
  for (auto [x, y] : {std::pair{&T.F, &Tn.F}, std::pair{&T.Fs, &Tn.Fs}, std::pair{&T.K, &Tn.K}})
    r = std::max(r, (E * *y * P - *x * E * P).norm() / (E.norm() * x->norm()));
  return r;
}

double plain_intertwining_residual(const CMat& A, const TruncatedModule& M, const WeightModule& V) {
  return twisted_intertwining_residual(A, M, V, 1.0);
}

std::vector<WeightSpace> weight_spaces(const CMat& A, const TruncatedModule& M, const WeightModule& V) {
  const TruncatedModule T = coaction_tensor(M, V);
  std::map<long long, WeightSpace> by;
  std::map<long long, bool> clean;
  for (int i = 0; i < T.dim(); ++i) {
    const long long key = std::llround((T.H[i] - (-M.r)) * 2);
    auto& w = by[key];
    w.weight = T.H[i];
    w.indices.push_back(i);
    if (!clean.count(key)) clean[key] = true;
    if (T.level[i] > M.N - 2) clean[key] = false;
  }
  std::vector<WeightSpace> out;
  for (auto& [k, w] : by) {
    if (!clean[k]) continue;
    const int n = int(w.indices.size());
    CMat B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = A(w.indices[i], w.indices[j]);
    Eigen::ComplexEigenSolver<CMat> es(B);
    for (int i = 0; i < n; ++i) w.eigenvalues.push_back(es.eigenvalues()[i]);
    std::sort(w.eigenvalues.begin(), w.eigenvalues.end(),
              [](cplx a, cplx b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : std::arg(a) < std::arg(b); });
    Eigen::JacobiSVD<CMat> svd(B);
    for (int i = n - 1; i >= 0; --i) w.singular_values.push_back(svd.singularValues()[i]);
    out.push_back(w);
  }
  return out;
}

FusionRecord fusion_check(const TruncatedModule& M, const WeightModule& V) {
  if (M.N < 3) throw InputError("truncation too small for the fusion check (need N >= 3)");
  const TruncatedModule T = coaction_tensor(M, V);
  std::map<long long, std::vector<int>> spaces;
  for (int i = 0; i < T.dim(); ++i)
    if (T.level[i] <= M.N - 2) spaces[std::llround(T.H[i] * 1e6)].push_back(i);
  FusionRecord rec;
  for (auto& [key, idx] : spaces) {
    // lowest weight vectors: kernel of F restricted to the weight space
    CMat Fr(T.dim(), idx.size());
    for (size_t j = 0; j < idx.size(); ++j) Fr.col(j) = T.F.col(idx[j]);
    Eigen::JacobiSVD<CMat> svd(Fr);
    const auto& sv = svd.singularValues();
    const double top = std::max(T.F.norm(), 1e-300);
    int kernel = int(idx.size()) - int(sv.size());
    for (int k = 0; k < sv.size(); ++k)
      if (sv[k] < 1e-10 * top) ++kernel;
    if (kernel > 0) rec.lowest.emplace_back(T.H[idx[0]], kernel);
  }
  std::sort(rec.lowest.begin(), rec.lowest.end());
  rec.matches = rec.lowest.size() == 2 && rec.lowest[0].second == 1 && rec.lowest[1].second == 1 &&
                std::abs(rec.lowest[0].first + M.r + 1) < 1e-9 && std::abs(rec.lowest[1].first + M.r - 1) < 1e-9;
  return rec;
}

}  // namespace qsp

#include "qsp/kzmono.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "qsp/errors.hpp"
#include "qsp/rmatrix.hpp"

namespace qsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gram(int i) { return i == 2 ? 2.0 : 1.0; }

// <x, y> = (x, y^*), linear in x
cplx inner(const CVec& x, const CVec& y) {
  cplx s = 0;
  for (int i = 0; i < 3; ++i) s += gram(i) * x[i] * std::conj(y[i]);
  return s;
}

CVec star(const CVec& x) {
  CVec y(3);
  y << std::conj(x[1]), std::conj(x[0]), std::conj(x[2]);
  return y;
}

std::vector<CVec> orthonormal_eigenspace(const CMat& sigma, double eig) {
  std::vector<CVec> out;
  for (int k = 0; k < 3; ++k) {
    CVec v = (sigma.col(k) + eig * CVec::Unit(3, k)) / 2.0;
    for (auto& b : out) v -= inner(v, b) * b;
    const double n = std::sqrt(std::abs(inner(v, v)));
    if (n > 1e-10) out.push_back(v / n);
  }
  return out;
}

std::vector<CMat> images(const ClassicalRep& V, const std::vector<CVec>& basis) {
  std::vector<CMat> out;
  for (auto& x : basis) out.push_back(V.of(x));
  return out;
}

CMat comm(const CMat& a, const CMat& b) { return a * b - b * a; }

// Frobenius coefficients c_k of c(u) u^{A0} for u F' = (A0 + sum_{j>=1} S_j u^j) F
struct Series {
  std::vector<CMat> c;
  double cond = 0;
};

template <class Coeff>
Series frobenius(const CMat& A0, Coeff S, int N) {
  const int n = int(A0.rows());
  Eigen::ComplexEigenSolver<CMat> es(A0);
  const CMat U = es.eigenvectors();
  const CMat Ui = U.inverse();
  const auto lam = es.eigenvalues();
  Series out;
  out.cond = U.norm() * Ui.norm();
  if (!std::isfinite(out.cond) || out.cond > 1e12)
    throw NumericalError("resonance-adjacent: eigenvector basis of the leading coefficient is ill-conditioned");
  out.c.push_back(CMat::Identity(n, n));
  std::vector<CMat> Sj(N + 1);
  for (int j = 1; j <= N; ++j) Sj[j] = S(j);
  for (int k = 1; k <= N; ++k) {
    CMat R = CMat::Zero(n, n);
    for (int j = 1; j <= k; ++j) R += Sj[j] * out.c[k - j];
    // (A0 - k) c - c A0 = -R
    const CMat Rt = Ui * R * U;
    CMat ct(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx den = lam[i] - double(k) - lam[j];
        if (std::abs(den) < 1e-8) throw NumericalError("resonance-adjacent: Sylvester equation is singular");
        ct(i, j) = -Rt(i, j) / den;
      }
    out.c.push_back(U * ct * Ui);
  }
  return out;
}

CMat sum_series(const Series& s, double u) {
  CMat P = CMat::Zero(s.c[0].rows(), s.c[0].cols());
  double p = 1;
  for (auto& c : s.c) {
    P += p * c;
    p *= u;
  }
  return P;
}

double tail_bound(const Series& s, double u) {
  const int N = int(s.c.size()) - 1;
  return s.c[N].norm() * std::pow(u, N) / (1 - u);
}

using State = std::vector<cplx>;

CMat integrate(const MonodromyProblem& P, CMat H, double w0, double w1) {
  const long n = H.rows();
  State x(H.data(), H.data() + H.size());
  auto rhs = [&](const State& s, State& dsdt, double w) {
    Eigen::Map<const CMat> Hm(s.data(), n, n);
    const CMat M = P.b_minus / (w + 1) + P.a / w + P.b_plus / (w - 1);
    CMat D = M * Hm;
    dsdt.assign(D.data(), D.data() + D.size());
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(P.abs_tol, P.rel_tol, ode::runge_kutta_dopri5<State>());
  const double dt = (w1 > w0 ? 1.0 : -1.0) * 1e-3;
  ode::integrate_adaptive(stepper, rhs, x, w0, w1, dt);
  return Eigen::Map<const CMat>(x.data(), n, n);
}

}  // namespace

ClassicalRep classical_irrep(int m) {
  if (m < 0) throw InputError("highest weight must be nonnegative");
  ClassicalRep V;
  V.m = m;
  const int d = m + 1;
  V.e = CMat::Zero(d, d);
  V.h = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    V.h(k, k) = double(m - 2 * k);
    if (k > 0) V.e(k - 1, k) = std::sqrt(double(k) * double(m - k + 1));
  }
  V.f = V.e.transpose();
  return V;
}

CMat su2_theta() {
  CMat s = CMat::Zero(3, 3);
  s(1, 0) = -1;
  s(0, 1) = -1;
  s(2, 2) = -1;
  return s;
}

SymPairTensors split_tensors(const CMat& sigma) {
  if (sigma.rows() != 3 || sigma.cols() != 3) throw InputError("sigma must be a 3x3 matrix on (e, f, h)");
  const CMat I = CMat::Identity(3, 3);
  if ((sigma * sigma - I).norm() > 1e-10) throw InputError("sigma is not involutive");
  CMat G = CMat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) G(i, i) = gram(i);
  if ((sigma.adjoint() * G * sigma - G).norm() > 1e-10) throw InputError("sigma is not unitary");
  const auto V = classical_irrep(1);
  auto rho = [&](const CVec& x) { return V.of(x); };
  const CVec e = CVec::Unit(3, 0), f = CVec::Unit(3, 1), h = CVec::Unit(3, 2);
  const CVec se = sigma.col(0), sf = sigma.col(1), sh = sigma.col(2);
  double lie = (comm(rho(se), rho(sf)) - rho(sh)).norm();
  lie = std::max(lie, (comm(rho(sh), rho(se)) - 2.0 * rho(se)).norm());
  lie = std::max(lie, (comm(rho(sh), rho(sf)) + 2.0 * rho(sf)).norm());
  if (lie > 1e-10) throw InputError("sigma is not a Lie algebra automorphism");
  for (const CVec& x : {e, f, h})
    if ((sigma * star(x) - star(CVec(sigma * x))).norm() > 1e-10) throw InputError("sigma does not commute with *");
  SymPairTensors T;
  T.sigma = sigma;
  T.kbasis = orthonormal_eigenspace(sigma, 1.0);
  T.mbasis = orthonormal_eigenspace(sigma, -1.0);
  return T;
}

CMat SymPairTensors::sigma_on(const ClassicalRep& V) const {
  const int d = V.dim();
  const CMat I = CMat::Identity(d, d);
  CMat L(3L * d * d, long(d) * d);
  for (int k = 0; k < 3; ++k) {
    const CVec x = CVec::Unit(3, k);
    L.block(long(k) * d * d, 0, long(d) * d, long(d) * d) =
        Eigen::kroneckerProduct(V.of(x).transpose(), I).eval() - Eigen::kroneckerProduct(I, V.of(sigma * x)).eval();
  }
  Eigen::BDCSVD<CMat> svd(L, Eigen::ComputeFullV);
  const CVec v = svd.matrixV().col(d * d - 1);
  CMat S = Eigen::Map<const CMat>(v.data(), d, d);
  S /= std::sqrt((S.adjoint() * S).trace().real() / d);
  return S;
}

KRep SymPairTensors::restrict(const ClassicalRep& V) const { return {images(V, kbasis)}; }
std::vector<CMat> SymPairTensors::m_images(const ClassicalRep& V) const { return images(V, mbasis); }
std::vector<CMat> SymPairTensors::g_images(const ClassicalRep& V) const {
  auto out = images(V, kbasis);
  for (auto& m : images(V, mbasis)) out.push_back(m);
  return out;
}

KRep SymPairTensors::character(double lambda) const {
  // chi(e - f) = -i lambda, chi vanishes on nothing else since k^C is spanned by e - f
  KRep X;
  for (auto& x : kbasis) {
    if (std::abs(x[0] + x[1]) > 1e-10 || std::abs(x[2]) > 1e-10)
      throw InputError("characters are defined for the involution with k^C = C(e - f)");
    X.X.push_back(CMat::Constant(1, 1, cplx(0, -lambda) * x[0]));
  }
  return X;
}

CMat pair_tensor(const std::vector<CMat>& A, const std::vector<CMat>& B) {
  CMat out = CMat::Zero(A.at(0).rows() * B.at(0).rows(), A.at(0).cols() * B.at(0).cols());
  for (size_t i = 0; i < A.size(); ++i) out += Eigen::kroneckerProduct(CMat(A[i].adjoint()), B[i]).eval();
  return out;
}

CMat casimir(const std::vector<CMat>& A) {
  CMat out = CMat::Zero(A.at(0).rows(), A.at(0).cols());
  for (auto& x : A) out += x.adjoint() * x;
  return out;
}

KZCoeffs kz_coeffs(const SymPairTensors& T, const KRep& X0, const ClassicalRep& V1, const ClassicalRep& V2, cplx hbar) {
  KZCoeffs k;
  k.dims = {X0.dim(), V1.dim(), V2.dim()};
  const auto k1 = T.restrict(V1).X, k2 = T.restrict(V2).X;
  const auto m1 = T.m_images(V1), m2 = T.m_images(V2);
  const CMat tk01 = on_legs(pair_tensor(X0.X, k1), k.dims, 0, 1);
  const CMat tk02 = on_legs(pair_tensor(X0.X, k2), k.dims, 0, 2);
  const CMat tk12 = on_legs(pair_tensor(k1, k2), k.dims, 1, 2);
  const CMat tm12 = on_legs(pair_tensor(m1, m2), k.dims, 1, 2);
  const CMat C1 = on_leg(casimir(k1), k.dims, 1), C2 = on_leg(casimir(k2), k.dims, 2);
  k.a = hbar * (2.0 * tk01 + C1);
  k.b_plus = hbar * (tk12 + tm12);
  k.b_minus = hbar * (tk12 - tm12);
  k.d = hbar * (2.0 * tk01 + 2.0 * tk02 + 2.0 * tk12 + C1 + C2);
  return k;
}

ResonanceFlags resonance_check(const CMat& m) {
  Eigen::ComplexEigenSolver<CMat> es(m, false);
  const auto lam = es.eigenvalues();
  ResonanceFlags r;
  r.min_gap = 1e300;
  for (int i = 0; i < lam.size(); ++i)
    for (int j = 0; j < lam.size(); ++j) {
      const cplx diff = lam[i] - lam[j];
      double nearest = std::round(diff.real());
      if (nearest == 0) nearest = diff.real() >= 0 ? 1 : -1;
      r.min_gap = std::min(r.min_gap, std::abs(diff - nearest));
    }
  r.resonant = r.min_gap < 1e-6;
  return r;
}

CMat expm(const CMat& A) { return A.exp(); }

CMat psi_at(const MonodromyProblem& P, double match_point, double* tail, double* cond) {
  const long n = P.a.rows();
  if (P.b_plus.rows() != n || P.b_minus.rows() != n || P.a.cols() != n)
    throw InputError("a, b_+ and b_- must be square of the same size");
  if (resonance_check(P.a).resonant) throw NumericalError("resonant: eigenvalues of a differ by a nonzero integer");
  if (resonance_check(P.b_plus).resonant)
    throw NumericalError("resonant: eigenvalues of b_+ differ by a nonzero integer");
  if (!(match_point > 0 && match_point < 1)) throw InputError("match point must lie in (0, 1)");
  const Series s0 = frobenius(
      P.a, [&](int j) { return CMat(-P.b_plus + ((j % 2) ? 1.0 : -1.0) * P.b_minus); }, P.series_order);
  const Series s1 = frobenius(
      P.b_plus, [&](int j) { return CMat(-(P.a + P.b_minus / std::pow(2.0, j))); }, P.series_order);
  double delta = std::min(P.delta, 0.5 * std::min(match_point, 1 - match_point));
  while (std::max(tail_bound(s0, delta), tail_bound(s1, delta)) > 1e-12 && delta > 1e-4) delta /= 2;
  if (tail) *tail = std::max(tail_bound(s0, delta), tail_bound(s1, delta));
  if (cond) *cond = std::max(s0.cond, s1.cond);
  const CMat H0 = sum_series(s0, delta) * expm(P.a * std::log(delta));
  const CMat H1 = sum_series(s1, delta) * expm(P.b_plus * std::log(delta));
  const CMat A = integrate(P, H0, delta, match_point);
  const CMat B = integrate(P, H1, 1 - delta, match_point);
  return B.partialPivLu().solve(A);
}

MonodromyResult psi(const MonodromyProblem& P) {
  MonodromyResult r;
  r.resonance_a = resonance_check(P.a);
  r.resonance_b = resonance_check(P.b_plus);
  r.psi = psi_at(P, P.match_point, &r.truncation_error, &r.conditioning);
  for (double w : {0.4, 0.5, 0.6}) {
    if (w == P.match_point) continue;
    r.spread = std::max(r.spread, (psi_at(P, w) - r.psi).norm() / r.psi.norm());
  }
  if (r.spread > P.spread_tol)
    throw NumericalError("accuracy: monodromy depends on the match point (spread " + std::to_string(r.spread) + ")");
  return r;
}

double verify_eg(const MonodromyProblem& P) {
  const cplx ipi(0, kPi);
  const CMat c = -P.a - P.b_plus - P.b_minus;
  auto with = [&](const CMat& a, const CMat& bp, const CMat& bm) {
    MonodromyProblem Q = P;
    Q.a = a;
    Q.b_plus = bp;
    Q.b_minus = bm;
    return psi_at(Q, P.match_point);
  };
  const CMat lhs = with(P.a, P.b_plus, P.b_minus).inverse() * expm(ipi * P.b_plus) * with(c, P.b_plus, P.b_minus) *
                   expm(ipi * c) * with(c, P.b_minus, P.b_plus).inverse() * expm(ipi * P.b_minus) *
                   with(P.a, P.b_minus, P.b_plus) * expm(ipi * P.a);
  return (lhs - CMat::Identity(lhs.rows(), lhs.cols())).norm();
}

OctagonKZ verify_octagon_kz(const SymPairTensors& T, const KRep& X0, const ClassicalRep& V, const ClassicalRep& W,
                            cplx hbar) {
  const cplx ipi(0, kPi);
  const KZCoeffs k = kz_coeffs(T, X0, V, W, hbar);
  const auto& dims = k.dims;
  const auto kW = T.restrict(W).X;
  const CMat a02 = hbar * (2.0 * on_legs(pair_tensor(X0.X, kW), dims, 0, 2) + on_leg(casimir(kW), dims, 2));
  MonodromyProblem P;
  P.a = k.a;
  P.b_plus = k.b_plus;
  P.b_minus = k.b_minus;
  const CMat Psi = psi_at(P, 0.5);
  MonodromyProblem P02 = P;
  P02.a = a02;
  const CMat Psi021 = psi_at(P02, 0.5);

  OctagonKZ out;
  {
    const KZCoeffs kp = kz_coeffs(T, X0, W, V, hbar);
    MonodromyProblem Q = P;
    Q.a = kp.a;
    Q.b_plus = kp.b_plus;
    Q.b_minus = kp.b_minus;
    const CMat L = leg_permutation(kp.dims, {0, 2, 1});
    const CMat alt = L * psi_at(Q, 0.5) * L.adjoint();
    out.psi021 = (alt - Psi021).norm();
  }
  const CMat c = -k.a - k.b_plus - k.b_minus;
  out.lemcomm = std::max({comm(k.d, k.a).norm(), comm(k.d, k.b_plus).norm(), comm(k.d, k.b_minus).norm(),
                          (k.d + c - a02).norm()});

  const CMat S2 = on_leg(T.sigma_on(W), dims, 2);
  auto sig2 = [&](const CMat& Y) { return CMat(S2 * Y * S2.adjoint()); };
  const CMat lhs = Psi.inverse() * expm(ipi * k.b_plus) * Psi021 * expm(ipi * a02) *
                   sig2(Psi021.inverse() * expm(ipi * k.b_plus) * Psi) * expm(ipi * k.a);
  out.rtkz = (lhs - expm(ipi * k.d)).norm();

  const CMat R = expm(-ipi * k.b_plus);
  const CMat oct = Psi.inverse() * R * Psi021 * expm(-ipi * a02) * sig2(Psi021.inverse() * R * Psi);
  out.octagon = (oct - expm(-ipi * (k.d - k.a))).norm();
  out.ribbon = (oct * expm(-ipi * k.a) - expm(-ipi * k.d)).norm();
  return out;
}

std::vector<std::pair<std::string, double>> flatness_residuals(const SymPairTensors& T, const KRep& X0,
                                                              const std::vector<ClassicalRep>& reps) {
  const int n = int(reps.size());
  if (n < 2) throw InputError("flatness needs at least two representations");
  std::vector<int> dims{X0.dim()};
  for (auto& V : reps) dims.push_back(V.dim());
  // legs 1..n
  auto tau = [&](int i, int j) {
    return on_legs(pair_tensor(T.g_images(reps[i - 1]), T.g_images(reps[j - 1])), dims, i, j);
  };
  auto mu = [&](int i, int j) {
    return CMat(on_legs(pair_tensor(T.restrict(reps[i - 1]).X, T.restrict(reps[j - 1]).X), dims, i, j) -
                on_legs(pair_tensor(T.m_images(reps[i - 1]), T.m_images(reps[j - 1])), dims, i, j));
  };
  auto nu = [&](int i) {
    const auto ki = T.restrict(reps[i - 1]).X;
    return CMat(2.0 * on_legs(pair_tensor(X0.X, ki), dims, 0, i) + on_leg(casimir(ki), dims, i));
  };
  std::map<std::string, double> res;
  auto bump = [&](const std::string& k, double v) { res[k] = std::max(res[k], v); };
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      bump("[tau_ij+nu_i+nu_j, mu_ij]", comm(tau(i, j) + nu(i) + nu(j), mu(i, j)).norm());
      bump("[mu_ij+nu_i+nu_j, tau_ij]", comm(mu(i, j) + nu(i) + nu(j), tau(i, j)).norm());
      bump("[tau_ij+nu_i+mu_ij, nu_j]", comm(tau(i, j) + nu(i) + mu(i, j), nu(j)).norm());
      for (int l = 1; l <= n; ++l) {
        if (l == i || l == j) continue;
        bump("[tau_ij, tau_il+tau_jl]", comm(tau(i, j), tau(i, l) + tau(j, l)).norm());
        bump("[mu_il, tau_ij+mu_jl]", comm(mu(i, l), tau(i, j) + mu(j, l)).norm());
        bump("[nu_l, tau_ij]", comm(nu(l), tau(i, j)).norm());
      }
    }
  // curvature at a few generic points
  const std::vector<std::vector<cplx>> pts{{0.3, 0.7, 1.9}, {cplx(0.2, 0.5), cplx(-1.1, 0.3), cplx(0.6, -0.4)},
                                           {cplx(1.3, 0.1), cplx(0.4, 0.9), cplx(-0.7, -0.2)}};
  for (auto& w : pts) {
    std::vector<CMat> Om;
    for (int i = 1; i <= n; ++i) {
      CMat O = nu(i) / w[i - 1];
      for (int j = 1; j <= n; ++j)
        if (j != i) O += tau(i, j) / (w[i - 1] - w[j - 1]) + mu(i, j) / (w[i - 1] + w[j - 1]);
      Om.push_back(O);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) bump("[Omega_i, Omega_j]", comm(Om[i], Om[j]).norm() / (Om[i].norm() * Om[j].norm()));
  }
  return {res.begin(), res.end()};
}

CMat kz_braid(const SymPairTensors& T, const KRep& X0, const ClassicalRep& V, cplx hbar) {
  const auto k1 = T.restrict(V).X;
  const std::vector<int> dims{X0.dim(), V.dim()};
  const CMat a = 2.0 * pair_tensor(X0.X, k1) + on_leg(casimir(k1), dims, 1);
  return expm(cplx(0, -kPi) * hbar * a);
}

}  // namespace qsp

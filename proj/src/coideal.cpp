#include "qsp/coideal.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <set>

#include "qsp/errors.hpp"
#include "qsp/rmatrix.hpp"

namespace qsp {

namespace {

bool has(const VertexSet& S, int r) { return std::find(S.begin(), S.end(), r) != S.end(); }

std::string vtx(int r) { return std::to_string(r + 1); }

CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Weight rho_X(const SatakeDiagram& S) {
  Weight w = zero_weight(S.datum);
  for (auto& b : positive_roots(S.datum, S.X)) w = add(w, b);
  return scale(Rat(1, 2), w);
}

AlgebraElement from_monomial(const AlgebraElement& proto, const Monomial& m, cplx c) {
  AlgebraElement x = proto.zero();
  x.add_term(m, c);
  return x;
}

double max_coeff(const AlgebraElement& x) {
  double m = 0;
  for (auto& [k, c] : x.terms()) m = std::max(m, std::abs(c));
  return m;
}

double max_coeff(const TensorElement& x) {
  double m = 0;
  for (auto& [k, c] : x.terms()) m = std::max(m, std::abs(c));
  return m;
}

// chi extended to words in the letters of X times K: zero on nonempty words
cplx chi_hat(const SatakeDiagram& S, const Character& chi, double q, const Monomial& m, double coeff_scale) {
  if (m.word.empty()) return chi.K(S.datum, m.k, q);
  for (int l : m.word)
    if (!S.in_X(letter_vertex(l)))
      throw InternalError("coproduct leg outside the coideal (letter at vertex " + vtx(letter_vertex(l)) +
                          ", coefficient scale " + std::to_string(coeff_scale) + ")");
  return 0.0;
}

// (chi (x) id) on a tensor whose first legs are X-words times K
AlgebraElement apply_chi_first(const SatakeDiagram& S, const Character& chi, const AlgebraElement& proto,
                               const TensorElement& t) {
  AlgebraElement out = proto.zero();
  for (auto& [k, c] : t.terms()) {
    if (std::abs(c) < 1e-13) continue;
    const cplx v = chi_hat(S, chi, proto.q(), k.first, std::abs(c));
    if (v != cplx(0)) out.add_term(k.second, c * v);
  }
  return out;
}

std::vector<CVec> null_basis(const CMat& L, double rel) {
  Eigen::BDCSVD<CMat> svd(L, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? std::max(sv[0], 1e-300) : 1.0;
  std::vector<CVec> out;
  for (int k = 0; k < L.cols(); ++k)
    if (k >= sv.size() || sv[k] < rel * top) out.push_back(svd.matrixV().col(k));
  return out;
}

// eta on the trivial summand of U (x) U is the identity
cplx trivial_scale(const WeightModule& U, const CMat& eta, const Perm& sigma) {
  const auto isos = decompose(tensor(U, U));
  for (auto& iso : isos) {
    bool zero = true;
    for (int x : iso.highest) zero = zero && x == 0;
    if (!zero || iso.multiplicity != 1) continue;
    const CVec v = iso.embedding.col(0);
    return std::sqrt(v.dot(kmatrix_fuse(U, eta, U, eta, sigma) * v));
  }
  throw NumericalError("K-matrix scale undetermined: U (x) U has no simple trivial summand");
}

// Re eta(n-1, 0) > 0, else the first nonzero entry
void gauge(CMat& eta) {
  const long n = eta.rows();
  cplx e = eta(n - 1, 0);
  const double tol = 1e-12 * eta.norm();
  for (long k = 0; std::abs(e) <= tol && k < eta.size(); ++k) e = eta.data()[k];
  if (e.real() < 0 || (e.real() == 0 && e.imag() < 0)) eta = -eta;
}

CMat unvec(const CVec& v, int n) { return Eigen::Map<const CMat>(v.data(), n, n); }

}  // namespace

std::vector<AlgebraElement> CoidealGenerators::all() const {
  std::vector<AlgebraElement> out = B;
  out.insert(out.end(), X.begin(), X.end());
  out.insert(out.end(), K.begin(), K.end());
  return out;
}

AlgebraElement theta_q(const BraidContext& ctx, const AlgebraElement& x) {
  const SatakeDiagram& S = ctx.diagram;
  std::vector<cplx> z(S.datum.rank());
  for (int r = 0; r < S.datum.rank(); ++r) z[r] = S.zc(r);
  AlgebraElement y = omega_auto(x);
  y = tau_auto(y, S.tau);
  y = psi_auto(y);
  y = braid_wX_on_algebra(ctx, y);
  return ad_s_auto(y, z).pruned(1e-14);
}

std::vector<Weight> p_theta_basis(const SatakeDiagram& S) {
  const RootDatum& D = S.datum;
  const int n = D.rank();
  std::vector<Weight> out;
  RMat acc(n, 0);
  for (int r = 0; r < n; ++r) {
    const Weight w = add(fundamental(D, r), theta_action(S, fundamental(D, r)));
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v[k] = to_double(w[k]);
    RMat trial(n, acc.cols() + 1);
    trial << acc, v;
    Eigen::FullPivLU<RMat> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() > acc.cols()) {
      acc = trial;
      out.push_back(w);
    }
  }
  return out;
}

void check_param_shape(const SatakeDiagram& S, const CoidealParams& p) {
  const int n = S.datum.rank();
  if (int(p.c.size()) != n || int(p.s.size()) != n) throw InputError("parameter vectors must have one entry per vertex");
  const auto H = classify_sets(S);
  for (int r : complement_X(S)) {
    if (p.c[r] == cplx(0)) throw InputError("c_" + vtx(r) + " must be nonzero");
    if (has(H.I_C, r) && std::abs(p.c[r] - p.c[S.tau[r]]) > 1e-12 * std::abs(p.c[r]))
      throw InputError("c_" + vtx(r) + " must equal c_" + vtx(S.tau[r]) + " on I_C");
    if (!has(H.I_S, r) && p.s[r] != cplx(0)) throw InputError("s_" + vtx(r) + " must vanish outside I_S");
  }
}

std::vector<AlgebraElement> b_generators(const BraidContext& ctx, const CoidealParams& p) {
  check_param_shape(ctx.diagram, p);
  std::vector<AlgebraElement> out;
  const double q = ctx.qp.q;
  for (int r : complement_X(ctx.diagram)) {
    auto F = AlgebraElement::F(ctx.datum, q, r);
    auto Kinv = F.Kr(r, -1);
    out.push_back((F + p.c[r] * (theta_q(ctx, F * F.Kr(r)) * Kinv) + p.s[r] * Kinv).pruned(1e-14));
  }
  return out;
}

CoidealGenerators coideal_generators(const BraidContext& ctx, const CoidealParams& p) {
  CoidealGenerators g;
  g.vertices = complement_X(ctx.diagram);
  g.B = b_generators(ctx, p);
  const double q = ctx.qp.q;
  for (int s : ctx.diagram.X) {
    auto e = AlgebraElement::E(ctx.datum, q, s);
    g.X.push_back(e);
    g.X.push_back(e.F(s));
    g.X.push_back(e.Kr(s));
    g.X.push_back(e.Kr(s, -1));
  }
  g.k_basis = p_theta_basis(ctx.diagram);
  for (auto& w : g.k_basis) {
    g.K.push_back(AlgebraElement::K(ctx.datum, q, w));
    g.K.push_back(AlgebraElement::K(ctx.datum, q, neg(w)));
  }
  return g;
}

Rat eqc_exponent(const SatakeDiagram& S, int r) {
  const RootDatum& D = S.datum;
  const Weight ar = simple_root(D, r);
  return pairing(D, sub(theta_action(S, ar), ar), simple_root(D, S.tau[r]));
}

CoidealParams no_parameter(const SatakeDiagram& S, const QParams& qp) {
  const int n = S.datum.rank();
  CoidealParams p{std::vector<cplx>(n, 0.0), std::vector<cplx>(n, 0.0)};
  for (int r : complement_X(S)) p.c[r] = qp.pow(eqc_exponent(S, r) / Rat(2));
  return p;
}

StarValidation validate_star(const SatakeDiagram& S, const CoidealParams& p, const QParams& qp) {
  StarValidation v;
  auto fail = [&](const std::string& m) {
    v.ok = false;
    v.violations.push_back(m);
  };
  try {
    check_param_shape(S, p);
  } catch (const InputError& e) {
    fail(e.what());
  }
  if (!v.ok) return v;
  std::optional<HermitianClass> hc;
  if (S.datum.components().size() == 1) hc = hermitian_type(S);
  for (int r : complement_X(S)) {
    const double target = qp.pow(eqc_exponent(S, r));
    if (std::abs(p.c[r].imag()) > 1e-12 * std::abs(p.c[r]) || p.c[r].real() <= 0) fail("c_" + vtx(r) + " must be positive");
    if (std::abs(p.c[r] * p.c[S.tau[r]] - target) > 1e-10 * target)
      fail("EqC fails at vertex " + vtx(r) + ": c_tau(r) c_r != q^" + rat_to_string(eqc_exponent(S, r)));
    if (std::abs(p.s[r].real()) > 1e-12 * std::max(1.0, std::abs(p.s[r])))
      fail("s_" + vtx(r) + " must be purely imaginary");
    if (!hc) continue;
    const bool dist = hc->kind != HermitianKind::NonHermitian && has(hc->orbit, r);
    if (p.s[r] != cplx(0) && !(hc->kind == HermitianKind::SType && dist))
      fail("s_" + vtx(r) + " must vanish away from the distinguished vertex");
    if (!(hc->kind == HermitianKind::CType && dist)) {
      const double c0 = qp.pow(eqc_exponent(S, r) / Rat(2));
      if (std::abs(p.c[r] - c0) > 1e-10 * c0) fail("c_" + vtx(r) + " must take its no-parameter value");
    }
  }
  return v;
}

MembershipResult star_membership(const BraidContext& ctx, const CoidealParams& p, const std::vector<WeightModule>& modules,
                                 int degree) {
  if (modules.empty()) throw InputError("star_membership needs at least one module");
  const WeightModule M = modules.size() == 1 ? modules[0] : direct_sum(modules);
  const int n = M.dim();
  MembershipResult res;
  std::set<IWeight> seen;
  for (auto& U : modules)
    for (auto& iso : decompose(U))
      if (seen.insert(iso.highest).second) res.cap += iso.irrep_dim * iso.irrep_dim;

  const auto gens = coideal_generators(ctx, p);
  std::vector<CMat> G;
  for (auto& g : gens.all()) G.push_back(act(M, g));

  std::vector<CVec> basis;
  auto try_add = [&](const CMat& m) {
    CVec v = Eigen::Map<const CVec>(m.data(), long(n) * n);
    const double nv = v.norm();
    if (nv == 0) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (auto& b : basis) v -= b * b.dot(v);
    if (v.norm() < 1e-9 * nv) return false;
    basis.push_back(v / v.norm());
    return true;
  };
  std::vector<CMat> frontier{CMat::Identity(n, n)};
  try_add(frontier[0]);
  for (int d = 1; d <= degree && !frontier.empty() && int(basis.size()) < res.cap; ++d) {
    std::vector<CMat> next;
    for (auto& m : frontier)
      for (auto& g : G) {
        CMat y = g * m;
        const double ny = y.norm();
        if (ny == 0) continue;
        y /= ny;
        if (try_add(y)) next.push_back(y);
      }
    frontier = std::move(next);
  }
  res.span_dim = int(basis.size());
  res.inconclusive = res.span_dim >= res.cap;
  for (size_t k = 0; k < gens.B.size(); ++k) {
    const CMat b = G[k];
    const CMat bs = b.adjoint();
    CVec v = Eigen::Map<const CVec>(bs.data(), long(n) * n);
    for (int pass = 0; pass < 2; ++pass)
      for (auto& e : basis) v -= e * e.dot(v);
    res.residual.push_back(v.norm() / std::max(b.norm(), 1e-300));
    res.max = std::max(res.max, res.residual.back());
  }
  return res;
}

Omega0 omega0_gamma(const SatakeDiagram& S) {
  const RootDatum& D = S.datum;
  const int n = D.rank();
  const Weight rX = rho_X(S);
  Omega0 o;
  o.pairing.assign(n, Rat(0));
  o.omega0 = zero_weight(D);
  for (int r : complement_X(S)) {
    const Weight ar = simple_root(D, r), at = simple_root(D, S.tau[r]);
    Weight v = sub(sub(theta_action(S, at), at), theta_action(S, ar));
    v = add(v, scale(Rat(2), rX));
    o.pairing[r] = pairing(D, v, ar) / Rat(4);
    // (varpi_s, alpha_r) = d_r delta_rs
    o.omega0[r] = o.pairing[r] / Rat(D.d(r));
  }
  if (permute_weight(S.tau, o.omega0) != o.omega0) throw InternalError("omega_0 is not tau-invariant");
  if (theta_action(S, o.omega0) != neg(o.omega0)) throw InternalError("Theta(omega_0) != -omega_0");
  return o;
}

CoidealParams tprime_params(const SatakeDiagram& S, const QParams& qp) {
  const RootDatum& D = S.datum;
  const int n = D.rank();
  const Weight rX = rho_X(S);
  CoidealParams p{std::vector<cplx>(n, 0.0), std::vector<cplx>(n, 0.0)};
  for (int r : complement_X(S)) {
    const Weight ar = simple_root(D, r);
    p.c[r] = qp.pow(pairing(D, ar, sub(theta_action(S, ar), scale(Rat(2), rX))) / Rat(2));
  }
  return p;
}

double Character::K(const RootDatum& D, const Weight& w, double q) const {
  auto c = root_coords(D, w);
  double e = 0;
  for (size_t r = 0; r < c.size(); ++r) e += to_double(c[r]) * f[r];
  return std::pow(q, e);
}

Character counit_character(const SatakeDiagram& S) {
  Character chi;
  chi.B.assign(S.datum.rank(), 0.0);
  chi.f.assign(S.datum.rank(), 0.0);
  return chi;
}

Character characters(const SatakeDiagram& S, double t) {
  const int n = S.datum.rank();
  return relative_character(S, {std::vector<cplx>(n, 1.0), std::vector<cplx>(n, 0.0)}, t);
}

Character relative_character(const SatakeDiagram& S, const CoidealParams& p, double t) {
  Character chi = counit_character(S);
  const auto hc = hermitian_type(S);
  chi.kind = hc.kind;
  if (hc.kind == HermitianKind::NonHermitian) return chi;
  chi.t = t;
  const int d = *hc.distinguished;
  if (hc.kind == HermitianKind::SType)
    chi.B[d] = p.s.at(d) + cplx(0, t);
  else
    chi.f[d] = t;
  return chi;
}

std::vector<std::pair<std::string, double>> character_relations_residual(const SatakeDiagram& S, const CoidealParams& p,
                                                                         const QParams& qp, const Character& chi) {
  const RootDatum& D = S.datum;
  const int n = D.rank();
  const double q = qp.q;
  const auto H = classify_sets(S);
  std::map<std::string, double> res{{"K_X", 0}, {"B_X", 0}, {"B_theta", 0}, {"eq:comm1", 0},
                                    {"eq:comm2", 0}, {"a=-2", 0}, {"B_J", 0}, {"eq:comm3", 0}};
  auto bump = [&](const std::string& k, double v) { res[k] = std::max(res[k], v); };
  auto B = [&](int r) { return S.in_X(r) ? cplx(0) : chi.B.at(r); };
  auto Kbar = [&](int r) { return chi.K(D, sub(simple_root(D, S.tau[r]), simple_root(D, r)), q); };
  auto inJ = [&](int r) { return has(H.J, r); };
  for (int r : S.X) {
    bump("K_X", std::abs(std::pow(chi.K(D, simple_root(D, r), q), 2) - 1.0));
    bump("B_X", std::abs(chi.B.at(r)));
  }
  for (int r : complement_X(S)) {
    const Weight ar = simple_root(D, r);
    if (theta_action(S, ar) != neg(ar)) bump("B_theta", std::abs(B(r)));
    if (!inJ(r)) bump("B_J", std::abs(B(r)));
    const int tr = S.tau[r];
    if (D.a(r, tr) == 0 && inJ(r)) bump("eq:comm1", std::abs(p.c[r] * Kbar(r) * Kbar(r) - p.c[tr]));
    if (D.a(r, tr) == -2)
      bump("a=-2", std::abs((std::pow(q, -8.0 * D.d(r)) * p.c[r] * Kbar(r) - p.c[tr]) * B(r)));
    if (inJ(r)) {
      const cplx rhs = -1.0 / p.c[tr] * std::pow(q, -pairing(D, ar, simple_root(D, tr)).numerator() /
                                                        double(pairing(D, ar, simple_root(D, tr)).denominator())) *
                       Kbar(r) * B(tr);
      bump("eq:comm3", std::abs(std::conj(B(r)) - rhs));
    }
  }
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      if (r == s || D.a(r, s) != -1) continue;
      const double qr = std::pow(q, D.d(r));
      const cplx lhs = (1 - qr) * (1 - 1 / qr) * B(r) * B(r) * B(s);
      cplx rhs = 0;
      if (!S.in_X(r) && inJ(r) && S.tau[r] == r) rhs -= qr * p.c[r] * Kbar(r) * B(s);
      if (r == S.tau[s]) {
        cplx inner = 0;
        if (!S.in_X(s) && inJ(s)) inner += qr * p.c[s] * Kbar(s);
        if (!S.in_X(r) && inJ(r)) inner += p.c[r] / (qr * qr) * Kbar(r);
        rhs += (qr + 1 / qr) * inner * B(r);
      }
      bump("eq:comm2", std::abs(lhs - rhs));
    }
  return {res.begin(), res.end()};
}

AlgebraElement conjugation_map(const BraidContext& ctx, const CoidealParams& /*p*/, const Character& chi,
                               const AlgebraElement& x, int b_vertex) {
  const SatakeDiagram& S = ctx.diagram;
  TensorElement t = coproduct(x);
  AlgebraElement out = x.zero();
  if (b_vertex >= 0) {
    const auto Kinv = x.Kr(b_vertex, -1);
    t -= TensorElement::simple(x, Kinv);
    out += Kinv * chi.B.at(b_vertex);
  }
  return (out + apply_chi_first(S, chi, x, t)).pruned(1e-14);
}

Conjugation conjugate(const BraidContext& ctx, const CoidealParams& p, const Character& chi,
                      const std::vector<std::pair<WeightModule, WeightModule>>& checks) {
  const SatakeDiagram& S = ctx.diagram;
  const RootDatum& D = S.datum;
  const double q = ctx.qp.q;
  Conjugation out;
  out.params = p;
  for (int r : complement_X(S)) {
    const Weight ar = simple_root(D, r);
    out.params.c[r] = p.c[r] * chi.K(D, neg(add(ar, theta_action(S, ar))), q);
    out.params.s[r] = chi.B.at(r);
  }
  const auto gens = coideal_generators(ctx, p);
  const auto target = b_generators(ctx, out.params);
  auto pi = [&](const AlgebraElement& x, int bv) { return conjugation_map(ctx, p, chi, x, bv); };
  std::vector<std::pair<AlgebraElement, int>> all;
  for (size_t k = 0; k < gens.B.size(); ++k) all.emplace_back(gens.B[k], gens.vertices[k]);
  for (auto& g : gens.X) all.emplace_back(g, -1);
  for (auto& g : gens.K) all.emplace_back(g, -1);
  for (size_t k = 0; k < gens.B.size(); ++k) {
    const auto img = pi(gens.B[k], gens.vertices[k]);
    out.image_residual = std::max(out.image_residual, max_coeff(img - target[k]) / max_coeff(target[k]));
  }
  for (auto& [g, bv] : all) {
    const AlgebraElement img = pi(g, bv);
    const TensorElement rhs = coproduct(img);
    TensorElement rest = coproduct(g);
    TensorElement lhs(ctx.datum, q);
    if (bv >= 0) {
      const auto Kinv = g.Kr(bv, -1);
      rest -= TensorElement::simple(g, Kinv);
      lhs += TensorElement::simple(img, Kinv);
    }
    for (auto& [k, c] : rest.terms()) {
      if (std::abs(c) < 1e-13) continue;
      const AlgebraElement m1 = from_monomial(g, k.first, c);
      lhs += TensorElement::simple(pi(m1, -1), from_monomial(g, k.second, 1.0));
    }
    TensorElement diff = lhs;
    diff -= rhs;
    out.algebra_residual = std::max(out.algebra_residual, max_coeff(diff) / std::max(max_coeff(rhs), 1e-300));
    for (auto& [U, V] : checks) {
      const CMat a = act(U, V, lhs), b = act(U, V, rhs);
      out.module_residual = std::max(out.module_residual, (a - b).norm() / std::max(b.norm(), 1e-300));
    }
  }
  return out;
}

Perm sigma_perm(const SatakeDiagram& S) {
  const auto t0 = tau0(S.datum);
  Perm s(S.tau.size());
  for (size_t r = 0; r < s.size(); ++r) s[r] = S.tau[t0[r]];
  return s;
}

std::vector<CMat> coideal_action(const BraidContext& ctx, const CoidealParams& p, const Character& chi,
                                 const WeightModule& U) {
  const auto gens = coideal_generators(ctx, p);
  std::vector<CMat> out;
  for (size_t k = 0; k < gens.B.size(); ++k) out.push_back(act(U, conjugation_map(ctx, p, chi, gens.B[k], gens.vertices[k])));
  for (auto& g : gens.X) out.push_back(act(U, conjugation_map(ctx, p, chi, g)));
  for (auto& g : gens.K) out.push_back(act(U, conjugation_map(ctx, p, chi, g)));
  return out;
}

CMat kmatrix_fuse(const WeightModule& U, const CMat& eta_U, const WeightModule& V, const CMat& eta_V, const Perm& sigma) {
  const CMat Rs = rmat(U, twist_module(V, sigma)).matrix;
  return r21(U, V) * kron(CMat::Identity(U.dim(), U.dim()), eta_V) * Rs * kron(eta_U, CMat::Identity(V.dim(), V.dim()));
}

KMatrix kmatrix_solve(const BraidContext& ctx, const CoidealParams& p, const Character& chi, const WeightModule& U,
                      std::optional<KMatrixRef> ref) {
  const SatakeDiagram& S = ctx.diagram;
  const Perm sigma = sigma_perm(S);
  const bool sigma_id = sigma == identity_perm(S.datum.rank());
  const int n = U.dim();
  const WeightModule Us = twist_module(U, sigma);
  const auto gens = coideal_generators(ctx, p);
  std::vector<AlgebraElement> images;
  for (size_t k = 0; k < gens.B.size(); ++k) images.push_back(conjugation_map(ctx, p, chi, gens.B[k], gens.vertices[k]));
  for (auto& g : gens.X) images.push_back(conjugation_map(ctx, p, chi, g));
  for (auto& g : gens.K) images.push_back(conjugation_map(ctx, p, chi, g));

  KMatrix out;
  std::vector<CMat> A, As;
  for (auto& y : images) {
    A.push_back(act(U, y));
    As.push_back(act(Us, y));
  }
  auto intertwining = [&](const CMat& eta) {
    double r = 0;
    for (size_t k = 0; k < A.size(); ++k)
      r = std::max(r, (eta * As[k] - A[k] * eta).norm() / std::max(eta.norm() * A[k].norm(), 1e-300));
    return r;
  };

  const CMat I = CMat::Identity(n, n);
  CMat L(long(A.size()) * n * n, long(n) * n);
  for (size_t k = 0; k < A.size(); ++k) {
    const double s = std::max(A[k].norm(), 1e-300);
    L.block(long(k) * n * n, 0, long(n) * n, long(n) * n) = (kron(As[k].transpose(), I) - kron(I, A[k])) / s;
  }
  std::vector<CMat> N;
  if (A.empty()) {
    for (int i = 0; i < n * n; ++i) N.push_back(unvec(CVec::Unit(n * n, i), n));
  } else {
    for (auto& v : null_basis(L, 1e-9)) N.push_back(unvec(v, n));
  }
  out.nullity = int(N.size());
  if (N.empty()) throw NumericalError("no K-matrix: the twisted intertwining system has only the zero solution");

  bool trivial = true;
  for (auto& w : U.weights)
    for (int x : w) trivial = trivial && x == 0;
  if (trivial && n == 1) {
    out.eta = CMat::Identity(1, 1);
    out.intertwining_residual = intertwining(out.eta);
    return out;
  }

  CMat eta;
  if (out.nullity <= 2 && !ref) {
    std::vector<CMat> Dl, Ds;
    for (auto& y : images) {
      const auto t = coproduct(y);
      Dl.push_back(act(U, U, t));
      Ds.push_back(act(Us, Us, t));
    }
    const CMat R21 = r21(U, U), Rs = rmat(U, Us).matrix;
    const CMat beta = flip(n, n) * rmat(U, U).matrix;
    const CMat In = I;
    const int k = out.nullity;
    auto constraint = [&](const CMat& Ni, const CMat& Nj) {
      const CMat Q = R21 * kron(In, Ni) * Rs * kron(Nj, In);
      std::vector<CVec> parts;
      for (size_t g = 0; g < Dl.size(); ++g) {
        const CMat c = (Q * Ds[g] - Dl[g] * Q) / std::max(Dl[g].norm(), 1e-300);
        parts.push_back(Eigen::Map<const CVec>(c.data(), c.size()));
      }
      if (sigma_id) {
        const CMat P = beta * kron(Ni, In) * beta * kron(Nj, In) - kron(Ni, In) * beta * kron(Nj, In) * beta;
        parts.push_back(Eigen::Map<const CVec>(P.data(), P.size()));
      }
      long len = 0;
      for (auto& v : parts) len += v.size();
      CVec w(len);
      long off = 0;
      for (auto& v : parts) {
        w.segment(off, v.size()) = v;
        off += v.size();
      }
      return std::make_pair(w, Q.norm());
    };
    std::vector<std::vector<CVec>> W(k, std::vector<CVec>(k));
    double scale_ref = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        auto [w, qn] = constraint(N[i], N[j]);
        W[i][j] = w;
        scale_ref = std::max(scale_ref, qn);
      }
    auto residual = [&](const std::vector<cplx>& x) {
      CVec f = CVec::Zero(W[0][0].size());
      double nx = 0;
      for (int i = 0; i < k; ++i) {
        nx += std::norm(x[i]);
        for (int j = 0; j < k; ++j) f += x[i] * x[j] * W[i][j];
      }
      return f.norm() / (nx * scale_ref);
    };
    std::vector<std::vector<cplx>> cands;
    if (k == 1) {
      cands.push_back({1.0});
    } else {
      const CVec w2 = W[1][1], w1 = W[0][1] + W[1][0], w0 = W[0][0];
      CVec u = w2.norm() > w1.norm() ? w2 : w1;
      if (u.norm() < 1e-300) u = w0;
      const cplx a = u.dot(w2), b = u.dot(w1), c = u.dot(w0);
      if (std::abs(a) > 1e-14 * (std::abs(b) + std::abs(c))) {
        const cplx disc = std::sqrt(b * b - 4.0 * a * c);
        cands.push_back({1.0, (-b + disc) / (2.0 * a)});
        cands.push_back({1.0, (-b - disc) / (2.0 * a)});
      } else if (std::abs(b) > 0) {
        cands.push_back({1.0, -c / b});
      }
      cands.push_back({0.0, 1.0});
    }
    std::vector<CMat> sols;
    double best = 1e300;
    for (auto& x : cands) {
      const double r = residual(x);
      best = std::min(best, r);
      if (r > 1e-8) continue;
      CMat e = CMat::Zero(n, n);
      for (int i = 0; i < k; ++i) e += x[i] * N[i];
      sols.push_back(e);
    }
    if (sols.empty())
      throw NumericalError("no K-matrix: the braid constraints have no solution (best residual " + std::to_string(best) + ")");
    auto is_scalar = [&](const CMat& e) { return (e - (e.trace() / double(n)) * I).norm() < 1e-9 * e.norm(); };
    std::vector<CMat> nonscalar;
    for (auto& e : sols)
      if (!is_scalar(e)) {
        bool dup = false;
        for (auto& f : nonscalar) {
          const cplx a = f.cwiseAbs().maxCoeff() > 0 ? (f.adjoint() * e).trace() / f.squaredNorm() : cplx(0);
          dup = dup || (e - a * f).norm() < 1e-8 * e.norm();
        }
        if (!dup) nonscalar.push_back(e);
      }
    if (nonscalar.size() > 1)
      throw NumericalError("K-matrix is ambiguous: " + std::to_string(nonscalar.size()) + " independent solutions");
    eta = nonscalar.empty() ? sols.front() : nonscalar.front();
    eta /= trivial_scale(U, eta, sigma);
    out.constraint_residual = best;
    gauge(eta);
  } else if (ref) {
    if (!sigma_id) throw NumericalError("fusion-based K-matrix needs a trivial twist");
    const WeightModule& V = *ref->V;
    const WeightModule UV = tensor(U, V);
    const CMat R21 = r21(U, V), R = rmat(U, V).matrix;
    const CMat left = R21 * kron(I, ref->eta_V) * R;
    const int k = out.nullity;
    const auto isos = decompose(UV);
    // eta on U (x) V commutes with the U_q(g)-endomorphisms of U (x) V
    std::vector<CMat> J;
    for (auto& iso : isos)
      for (int x = 0; x < iso.multiplicity; ++x)
        for (int y = 0; y < iso.multiplicity; ++y)
          J.push_back(iso.embedding.middleCols(long(x) * iso.irrep_dim, iso.irrep_dim) *
                      iso.embedding.middleCols(long(y) * iso.irrep_dim, iso.irrep_dim).adjoint());
    std::vector<CMat> Ek;
    std::vector<double> en;
    for (auto& Nk : N) {
      Ek.push_back(left * kron(Nk, CMat::Identity(V.dim(), V.dim())));
      en.push_back(Ek.back().norm());
    }
    const long blk = long(UV.dim()) * UV.dim();
    CMat Lk(long(J.size()) * blk, k);
    for (int j = 0; j < k; ++j)
      for (size_t g = 0; g < J.size(); ++g) {
        const CMat c = (Ek[j] * J[g] - J[g] * Ek[j]) / en[j];
        Lk.block(long(g) * blk, j, blk, 1) = Eigen::Map<const CVec>(c.data(), blk);
      }
    const auto nb = null_basis(Lk, 1e-8);
    if (nb.size() != 1)
      throw NumericalError("K-matrix is ambiguous: fusion constraints leave " + std::to_string(nb.size()) + " solutions");
    eta = CMat::Zero(n, n);
    for (int j = 0; j < k; ++j) eta += nb[0][j] / en[j] * N[j];
    out.constraint_residual = (Lk * nb[0]).norm();
    // the summand isomorphic to V carries eta_V; otherwise the trivial summand of U (x) U carries 1
    int found = -1;
    for (size_t i = 0; i < isos.size(); ++i)
      if (isos[i].highest == V.weights[0] && isos[i].multiplicity == 1) found = int(i);
    if (found >= 0) {
      const CMat P = isos[found].embedding;
      const CMat restricted = P.adjoint() * left * kron(eta, CMat::Identity(V.dim(), V.dim())) * P;
      const cplx a = (ref->eta_V.adjoint() * restricted).trace() / ref->eta_V.squaredNorm();
      eta /= a;
      out.constraint_residual = std::max(out.constraint_residual, (restricted / a - ref->eta_V).norm() / ref->eta_V.norm());
    } else {
      eta /= trivial_scale(U, eta, sigma);
      gauge(eta);
    }
  } else {
    throw NumericalError("K-matrix is ambiguous: twisted commutant has dimension " + std::to_string(out.nullity) +
                         "; supply a reference module");
  }
  out.eta = eta;
  out.intertwining_residual = intertwining(eta);
  return out;
}

}  // namespace qsp

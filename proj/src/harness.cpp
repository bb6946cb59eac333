#include "qsp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

#include "qsp/errors.hpp"
#include "qsp/rmatrix.hpp"

namespace qsp {

namespace {

const double kPi = 3.14159265358979323846;

std::shared_ptr<const RootDatum> a1() {
  static const auto D = std::make_shared<const RootDatum>(parse_root_datum("A1"));
  return D;
}

WeightModule su2(int m, double q) { return build_irrep(a1(), IWeight{m}, QParams(q)); }

// U_q(su2) module twisted by the Cartan-fixing automorphism with E, F -> -E, -F
WeightModule sign_twist(const WeightModule& V) {
  WeightModule W = V;
  W.E[0] = -W.E[0];
  W.F[0] = -W.F[0];
  return W;
}

double rel_resid(const CMat& lhs, const CMat& rhs, const CMat* P) {
  if (P) return (lhs * *P - rhs * *P).norm() / std::max((rhs * *P).norm(), 1e-300);
  return (lhs - rhs).norm() / std::max(rhs.norm(), 1e-300);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

struct Su2Coideal {
  QParams qp;
  SatakeDiagram S;
  BraidContext ctx;
  CoidealParams p;
  explicit Su2Coideal(double q)
      : qp(q), S(make_satake(*a1(), {}, {0})), ctx(make_braid_context(S, qp)), p(no_parameter(S, qp)) {}
  Character chi(double t) const { return relative_character(S, p, t); }
};

// eta on chi (.) (U (x) V) assembled from the K-matrices of the irreducible summands
CMat eta_by_naturality(const Su2Coideal& su, const Character& chi, const WeightModule& UV, const WeightModule& V1,
                       const CMat& eta1) {
  CMat out = CMat::Zero(UV.dim(), UV.dim());
  for (auto& iso : decompose(UV)) {
    CMat eta;
    if (iso.highest == IWeight{1})
      eta = eta1;
    else
      eta = kmatrix_solve(su.ctx, su.p, chi, build_irrep(su.ctx.datum, iso.highest, su.qp), KMatrixRef{&V1, eta1}).eta;
    for (int k = 0; k < iso.multiplicity; ++k) {
      const CMat P = iso.embedding.middleCols(k * iso.irrep_dim, iso.irrep_dim);
      out += P * eta * P.adjoint();
    }
  }
  return out;
}

CMat eta_on(const Su2Coideal& su, const Character& chi, int m, const WeightModule& V1, const CMat& eta1) {
  if (m == 1) return eta1;
  return kmatrix_solve(su.ctx, su.p, chi, su2(m, su.qp.q), KMatrixRef{&V1, eta1}).eta;
}

CMat interior_of(const TruncatedModule& M, int trailing, int margin) {
  const int n = M.dim() * trailing;
  CMat P = CMat::Zero(n, n);
  for (int i = 0; i < M.dim(); ++i)
    if (M.level[i] <= M.N - margin)
      for (int j = 0; j < trailing; ++j) P(i * trailing + j, i * trailing + j) = 1;
  return P;
}

std::vector<double> sorted_sv(const CMat& A) {
  Eigen::JacobiSVD<CMat> svd(A);
  std::vector<double> s(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
  std::sort(s.begin(), s.end());
  return s;
}

double set_mismatch(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
  return m;
}

template <class F>
Report timed(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r = body();
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.finalize();
  return r;
}

cplx hbar_of(double q) { return cplx(0, -std::log(q) / kPi); }

}  // namespace

void Report::add(const std::string& key, double residual, double tol) {
  residuals[key] = residual;
  tolerances[key] = tol;
}

void Report::finalize() {
  pass = true;
  for (auto& [k, v] : residuals)
    if (!(std::isfinite(v) && v < tolerances.at(k))) pass = false;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["case"] = r.case_id;
  j["params"] = r.params;
  j["residuals"] = r.residuals;
  j["tolerances"] = r.tolerances;
  j["observations"] = r.observations;
  j["notes"] = r.notes;
  j["pass"] = r.pass;
  j["runtime"] = r.runtime;
  return j;
}

double check_octagon(const CMat& lhs, const CMat& eta_V, const WeightModule& U, const WeightModule& V,
                     const WeightModule& V_sigma, int dx, const CMat* P) {
  const std::vector<int> dims{dx, U.dim(), V.dim()};
  const CMat rhs = on_legs(r21(U, V), dims, 1, 2) * on_legs(eta_V, dims, 0, 2) * on_legs(rmat(U, V_sigma).matrix, dims, 1, 2);
  return rel_resid(lhs, rhs, P);
}

double check_ribbon(const CMat& lhs, const CMat& eta_U, const CMat& eta_V, const WeightModule& U, const WeightModule& V,
                    const WeightModule& V_sigma, int dx, const CMat* P) {
  const std::vector<int> dims{dx, U.dim(), V.dim()};
  const CMat rhs = on_legs(r21(U, V), dims, 1, 2) * on_legs(eta_V, dims, 0, 2) *
                   on_legs(rmat(U, V_sigma).matrix, dims, 1, 2) * on_legs(eta_U, dims, 0, 1);
  return rel_resid(lhs, rhs, P);
}

CylinderResiduals check_cylinder(const CMat& theta_UV, const CMat& theta_U, const CMat& theta_V, const WeightModule& U,
                                 const WeightModule& V, const WeightModule& U_sigma, const WeightModule& V_sigma, int dx,
                                 const CMat* P) {
  const std::vector<int> uv{dx, U.dim(), V.dim()}, vu{dx, V.dim(), U.dim()};
  auto beta = [&](const WeightModule& A, const WeightModule& B) {
    return on_legs(braiding(A, B), {dx, A.dim(), B.dim()}, 1, 2);
  };
  CylinderResiduals c;
  // theta_{U (x) V} = beta_{V,U} (theta_V (x) U) beta_{U,sigma V} (theta_U (x) sigma V)
  const CMat first = beta(V, U) * on_legs(theta_V, vu, 0, 1) * beta(U, V_sigma) * on_legs(theta_U, uv, 0, 1);
  // = (theta_U (x) V) beta_{V,sigma U} (theta_V (x) sigma U) beta_{sigma U,sigma V}
  const CMat second = on_legs(theta_U, uv, 0, 1) * beta(V, U_sigma) * on_legs(theta_V, vu, 0, 1) * beta(U_sigma, V_sigma);
  c.first = rel_resid(theta_UV, first, P);
  c.second = rel_resid(theta_UV, second, P);
  return c;
}

AxiomResiduals coideal_axioms(double q, double t, int mu, int mv) {
  const Su2Coideal su(q);
  const auto chi = su.chi(t);
  const auto V1 = su2(1, q);
  const CMat eta1 = kmatrix_solve(su.ctx, su.p, chi, V1).eta;
  const auto U = su2(mu, q), V = su2(mv, q);
  const CMat eU = eta_on(su, chi, mu, V1, eta1), eV = eta_on(su, chi, mv, V1, eta1);
  const CMat eUV = eta_by_naturality(su, chi, tensor(U, V), V1, eta1);
  AxiomResiduals a;
  a.ribbon = check_ribbon(eUV, eU, eV, U, V, V, 1);
  const auto cyl = check_cylinder(eUV, eU, eV, U, V, U, V, 1);
  a.cylinder1 = cyl.first;
  a.cylinder2 = cyl.second;
  // chi (.) U splits into characters chi_{t_j}; eta_{chi (.) U, V} acts by the K-matrix of chi_{t_j} on each piece
  const CMat B = coideal_action(su.ctx, su.p, chi, U)[0];
  Eigen::ComplexEigenSolver<CMat> es(B);
  const CMat Q = es.eigenvectors(), Qi = Q.inverse();
  CMat lhs = CMat::Zero(U.dim() * V.dim(), U.dim() * V.dim());
  for (int j = 0; j < U.dim(); ++j) {
    const double tj = es.eigenvalues()[j].imag();
    const auto chij = su.chi(tj);
    const CMat e1 = kmatrix_solve(su.ctx, su.p, chij, V1).eta;
    const CMat ej = eta_on(su, chij, mv, V1, e1);
    const CMat proj = Q.col(j) * Qi.row(j);
    for (int a1i = 0; a1i < U.dim(); ++a1i)
      for (int b = 0; b < U.dim(); ++b) lhs.block(a1i * V.dim(), b * V.dim(), V.dim(), V.dim()) += proj(a1i, b) * ej;
  }
  a.octagon = check_octagon(lhs, eV, U, V, V, 1);
  return a;
}

AxiomResiduals kz_axioms(double q, double lambda) {
  const auto T = split_tensors(su2_theta());
  const auto V = classical_irrep(1);
  const auto o = verify_octagon_kz(T, T.character(lambda), V, V, hbar_of(q));
  AxiomResiduals a;
  a.octagon = o.octagon;
  a.ribbon = o.ribbon;
  return a;
}

AxiomResiduals vogan_axioms(double q, double r, int N) {
  const auto M = build_Mr(r, QParams(q), N);
  const auto V = su2(1, q), Vs = sign_twist(V);
  const CMat E = e_matrix(M, V);
  const int dm = M.dim();
  const CMat P = interior_of(M, V.dim() * V.dim(), 3);
  AxiomResiduals a;
  a.octagon = check_octagon(e_matrix(coaction_tensor(M, V), V), E, V, V, Vs, dm, &P);
  const CMat EVV = e_matrix(M, tensor(V, V));
  a.ribbon = check_ribbon(EVV, E, E, V, V, Vs, dm, &P);
  const auto cyl = check_cylinder(EVV, E, E, V, V, Vs, Vs, dm, &P);
  a.cylinder1 = cyl.first;
  a.cylinder2 = cyl.second;
  return a;
}

LambdaCandidates lambda_from_trace(const CMat& C, double q) {
  LambdaCandidates out;
  const double tr = (C.adjoint() * C).trace().real();
  const int n = int(C.rows());
  out.scalar = (C - C.trace() / double(n) * CMat::Identity(n, n)).norm() <= 1e-12 * std::max(C.norm(), 1e-300);
  const double T = q * tr;
  if (T < 2 - 1e-12) throw InputError("Tr(C^*C) below 2/q: no real lambda");
  const double x = (T + std::sqrt(std::max(T * T - 4, 0.0))) / 2;  // q^{-2 lambda} for lambda >= 0
  const double lam = std::log(x) / (-2 * std::log(q));
  out.plus = std::abs(lam);
  out.minus = -std::abs(lam);
  return out;
}

double t_of_lambda(double q, double lambda) {
  return std::pow(q, -0.5) * (std::pow(q, -lambda) - std::pow(q, lambda)) / (1 / q - q);
}

double lambda_of_t(double q, double t) {
  const double c = t * std::sqrt(q) * (1 / q - q);
  return std::asinh(c / 2) / -std::log(q);
}

CMat coideal_braid(double q, double t) {
  const Su2Coideal su(q);
  return kmatrix_solve(su.ctx, su.p, su.chi(t), su2(1, q)).eta;
}

cplx chi_n_value(double q, double lambda, int n) {
  return cplx(0, 1) / std::sqrt(q) * (std::pow(q, -lambda - n) - std::pow(q, lambda + n)) / (1 / q - q);
}

Report run_rank_one(double q, double r, int N, const std::vector<double>& t_grid) {
  return timed([&] {
    Report rep;
    rep.case_id = "rank-one/q=" + fmt(q) + "/r=" + fmt(r);
    rep.params = {{"q", q}, {"r", r}, {"N", double(N)}};
    const auto T = split_tensors(su2_theta());
    const auto V1 = su2(1, q);
    const Su2Coideal su(q);
    // (i) coideal braid against the KZ braid at lambda_t
    for (double t : t_grid) {
      const CMat C = coideal_braid(q, t);
      const auto lc = lambda_from_trace(C, q);
      const double lam = t >= 0 ? lc.plus : lc.minus;
      const std::string tag = "/t=" + fmt(t);
      rep.add("TheoUniBraid/lambda_t" + tag, std::abs(lam - lambda_of_t(q, t)), kTolAlg);
      const auto sv = sorted_sv(C);
      const std::vector<double> expect{std::pow(q, std::abs(lam) - 0.5), std::pow(q, -std::abs(lam) - 0.5)};
      rep.add("PropUnBraid/coideal" + tag, set_mismatch(sv, expect), kTolAlg);
      const CMat K = kz_braid(T, T.character(lam), classical_irrep(1), hbar_of(q));
      rep.add("PropUnBraid/kz-vs-coideal" + tag, set_mismatch(sorted_sv(K), sv), 1e-8);
      // chi_t (.) V splits into chi_{+1} and chi_{-1}
      const CMat B = coideal_action(su.ctx, su.p, su.chi(t), V1)[0];
      Eigen::ComplexEigenSolver<CMat> es(B);
      std::vector<cplx> got{es.eigenvalues()[0], es.eigenvalues()[1]}, want{chi_n_value(q, lam, 1), chi_n_value(q, lam, -1)};
      auto by_imag = [](cplx a, cplx b) { return a.imag() < b.imag(); };
      std::sort(got.begin(), got.end(), by_imag);
      std::sort(want.begin(), want.end(), by_imag);
      rep.add("chi_n/fusion" + tag, std::max(std::abs(got[0] - want[0]), std::abs(got[1] - want[1])), kTolAlg);
      rep.observations["lambda" + tag] = lam;
    }
    // (ii) Vogan side
    const auto M = build_Mr(r, QParams(q), N);
    const CMat E = e_matrix(M, V1);
    const CMat Pl = twist_to_plain(E, M, V1);
    const double lo = std::pow(q, r + 0.5), hi = std::pow(q, -r - 1.5);
    double eig = 0, svr = 0;
    int levels = 0;
    for (auto& w : weight_spaces(Pl, M, V1)) {
      if (w.indices.size() != 2 || w.weight + r > 2 * std::min(N - 2, 8)) continue;
      ++levels;
      eig = std::max(eig, set_mismatch({std::abs(w.eigenvalues[0]), std::abs(w.eigenvalues[1])}, {lo, hi}));
      svr = std::max(svr, set_mismatch(w.singular_values, {lo, hi}));
    }
    rep.add("E-eigenvalues/plain", eig, 1e-10);
    rep.add("E-eigenvalues/singular-values", svr, 1e-10);
    rep.add("E-eigenvalues/twisted-intertwining", twisted_intertwining_residual(E, M, V1), kTolAlg);
    rep.add("E-eigenvalues/plain-intertwining", plain_intertwining_residual(Pl, M, V1), kTolAlg);
    rep.observations["vogan_levels_checked"] = levels;
    const auto fus = fusion_check(M, V1);
    rep.add("LemFusVog", fus.matches ? 0.0 : 1.0, 0.5);
    // (iii) lambda from the Vogan singular values, and the two hypotheses
    CMat D = CMat::Zero(2, 2);
    D(0, 0) = lo;
    D(1, 1) = hi;
    const double lam_v = lambda_from_trace(D, q).plus;
    rep.observations["lambda_vogan"] = lam_v;
    const CMat Cv = coideal_braid(q, t_of_lambda(q, lam_v));
    rep.add("TheoUniBraid/vogan-vs-coideal", set_mismatch(sorted_sv(Cv), {lo, hi}), 1e-8);
    for (auto [name, lam] : {std::pair{"2r+2", 2 * r + 2}, std::pair{"r+1", r + 1}}) {
      const double mis = set_mismatch(sorted_sv(coideal_braid(q, t_of_lambda(q, lam))), {lo, hi});
      rep.observations[std::string("hypothesis_") + name + "_mismatch"] = mis;
      rep.notes[std::string("hypothesis_") + name] = mis < 1e-8 ? "match" : "mismatch";
    }
    return rep;
  });
}

HypothesisVerdict lambda_hypotheses(const std::vector<Report>& reps) {
  HypothesisVerdict v;
  bool any = false;
  v.doubled_matches = v.shifted_matches = true;
  for (auto& r : reps) {
    auto p = r.notes.find("hypothesis_2r+2"), d = r.notes.find("hypothesis_r+1");
    if (p == r.notes.end() || d == r.notes.end()) continue;
    any = true;
    v.doubled_matches = v.doubled_matches && p->second == "match";
    v.shifted_matches = v.shifted_matches && d->second == "match";
  }
  if (!any) v.doubled_matches = v.shifted_matches = false;
  return v;
}

Report verify_axioms(const std::string& source, double q) {
  return timed([&] {
    Report rep;
    rep.case_id = "axioms/" + source + "/q=" + fmt(q);
    rep.params = {{"q", q}};
    auto put = [&](const std::string& tag, const AxiomResiduals& a, double tol) {
      if (a.octagon) rep.add("EqOct2" + tag, *a.octagon, tol);
      if (a.ribbon) rep.add("EqRB2" + tag, *a.ribbon, tol);
      if (a.cylinder1) rep.add("cyl-tw-eq" + tag, *a.cylinder1, tol);
      if (a.cylinder2) rep.add("cyl-tw-eq-2" + tag, *a.cylinder2, tol);
      if (!a.cylinder1) rep.notes["cyl-tw-eq" + tag] = "n/a";
    };
    if (source == "coideal") {
      for (double t : {0.0, 0.5, 2.0})
        for (auto [mu, mv] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}})
          put("/t=" + fmt(t) + "/U=" + std::to_string(mu) + "/V=" + std::to_string(mv), coideal_axioms(q, t, mu, mv), kTolAlg);
    } else if (source == "kz") {
      for (double lam : {0.0, 1.0}) put("/lambda=" + fmt(lam), kz_axioms(q, lam), kTolOde);
    } else if (source == "vogan") {
      for (double r : {0.25, 1.0, 3.0}) put("/r=" + fmt(r), vogan_axioms(q, r, 12), kTolAlg);
    } else {
      throw InputError("unknown braid source '" + source + "' (coideal, kz or vogan)");
    }
    return rep;
  });
}

Report verify_kz(double q) {
  return timed([&] {
    Report rep;
    rep.case_id = "kz/q=" + fmt(q);
    rep.params = {{"q", q}};
    const auto T = split_tensors(su2_theta());
    const auto V = classical_irrep(1);
    for (double lam : {0.0, 1.0}) {
      const std::string tag = "/lambda=" + fmt(lam);
      const auto k = kz_coeffs(T, T.character(lam), V, V, hbar_of(q));
      MonodromyProblem P;
      P.a = k.a;
      P.b_plus = k.b_plus;
      P.b_minus = k.b_minus;
      const auto res = psi(P);
      rep.add("Psi/unitarity" + tag, (res.psi.adjoint() * res.psi - CMat::Identity(res.psi.rows(), res.psi.cols())).norm(), 1e-8);
      rep.add("Psi/match-spread" + tag, res.spread, 1e-6);
      rep.add("eq:Eg" + tag, verify_eg(P), kTolOde);
      const auto o = verify_octagon_kz(T, T.character(lam), V, V, hbar_of(q));
      rep.add("eq:RTKZ" + tag, o.rtkz, kTolOde);
      rep.add("EqOct2/kz" + tag, o.octagon, kTolOde);
      rep.add("EqRB2/kz" + tag, o.ribbon, kTolOde);
      rep.add("LemComm" + tag, o.lemcomm, 1e-10);
      for (auto& [name, r] : flatness_residuals(T, T.character(lam), {classical_irrep(1), classical_irrep(1), classical_irrep(2)}))
        rep.add("flatness/" + name + tag, r, 1e-10);
    }
    return rep;
  });
}

Report verify_appendixB(const SatakeDiagram& S, double q) {
  return timed([&] {
    Report rep;
    rep.case_id = "appendixB/" + S.datum.label();
    rep.params = {{"q", q}};
    const QParams qp(q);
    const auto ctx = make_braid_context(S, qp);
    const int n = S.datum.rank();
    std::vector<WeightModule> fund;
    for (int r = 0; r < n; ++r) {
      IWeight w(n, 0);
      w[r] = 1;
      fund.push_back(build_irrep(ctx.datum, w, qp));
      const auto R = verify_appB(ctx, to_weight(w), fund.back());
      const std::string tag = "/varpi=" + std::to_string(r + 1);
      rep.add("EqFormT-" + tag, std::max({R.t_minus, R.t_minus_inv, R.t_plus, R.t_plus_inv}), kTolAlg);
      rep.add("e_varpi=d" + tag, std::max(std::abs(R.e_module - R.e_closed), std::abs(R.d_module - R.e_closed)) /
                                     std::max(std::abs(R.e_closed), 1.0),
              kTolAlg);
    }
    const auto M = direct_sum(fund);
    for (int r : complement_X(S)) {
      const auto c = a_plus_on_module(ctx, r, M);
      const std::string tag = "/r=" + std::to_string(r + 1);
      rep.add("LemForma" + tag, std::abs(c.ratio - c.closed) / std::max(std::abs(c.closed), 1e-300), 1e-8);
      rep.add("LemForma/fit" + tag, c.residual, 1e-8);
    }
    return rep;
  });
}

Report verify_characters(const SatakeDiagram& S, double t, double q) {
  return timed([&] {
    Report rep;
    rep.case_id = "characters/" + S.datum.label() + "/t=" + fmt(t);
    rep.params = {{"q", q}, {"t", t}};
    const QParams qp(q);
    const auto cls = hermitian_type(S);
    rep.notes["hermitian_type"] = to_string(cls.kind);
    if (cls.distinguished) rep.notes["distinguished_vertex"] = std::to_string(*cls.distinguished + 1);
    const auto p = no_parameter(S, qp);
    const Character chi = cls.kind == HermitianKind::NonHermitian ? counit_character(S) : characters(S, t);
    for (auto& [name, r] : character_relations_residual(S, p, qp, chi)) rep.add(name, r, 1e-10);
    if (cls.kind == HermitianKind::NonHermitian) {
      rep.notes["conjugation"] = "n/a (no one-parameter family of characters)";
      return rep;
    }
    const auto ctx = make_braid_context(S, qp);
    const int n = S.datum.rank();
    IWeight w0(n, 0), w1(n, 0);
    w0[0] = 1;
    w1[n - 1] = 1;
    const auto V = build_irrep(ctx.datum, w0, qp), W = build_irrep(ctx.datum, w1, qp);
    const auto c = conjugate(ctx, p, relative_character(S, p, t), {{V, W}});
    rep.add("TheoCoidConj/algebra", c.algebra_residual, kTolAlg);
    rep.add("TheoCoidConj/modules", c.module_residual, kTolAlg);
    rep.add("TheoCoidConj/image", c.image_residual, kTolAlg);
    const auto back = conjugate(ctx, c.params, relative_character(S, c.params, -t));
    double rt = 0;
    for (int r = 0; r < n; ++r)
      rt = std::max({rt, std::abs(back.params.c[r] - p.c[r]), std::abs(back.params.s[r] - p.s[r])});
    rep.add("TheoCoidConj/round-trip", rt, 1e-12);
    return rep;
  });
}

std::vector<Report> run_all(const RunConfig& cfg) {
  std::vector<std::function<Report()>> jobs;
  for (double r : cfg.r_values) jobs.push_back([=] { return run_rank_one(cfg.q, r, cfg.levels); });
  for (const char* s : {"coideal", "kz", "vogan"}) jobs.push_back([=] { return verify_axioms(s, cfg.q); });
  jobs.push_back([=] { return verify_kz(cfg.q); });
  std::vector<SatakeDiagram> diagrams = cfg.diagrams;
  if (diagrams.empty()) {
    const auto A3 = parse_root_datum("A3");
    diagrams.push_back(make_satake(A3, {1}, {2, 1, 0}));
    diagrams.push_back(make_satake(A3, {0, 2}, {0, 1, 2}));
  }
  for (auto& S : diagrams) {
    jobs.push_back([=] { return verify_appendixB(S, cfg.q); });
    jobs.push_back([=] { return verify_characters(S, cfg.t, cfg.q); });
  }
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t width = cfg.threads > 0 ? size_t(cfg.threads) : hw;
  std::vector<Report> out(jobs.size());
  for (size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<Report>> fs;
    for (size_t k = start; k < std::min(jobs.size(), start + width); ++k) fs.push_back(std::async(std::launch::async, jobs[k]));
    for (size_t k = 0; k < fs.size(); ++k) out[start + k] = fs[k].get();
  }
  return out;
}

}  // namespace qsp

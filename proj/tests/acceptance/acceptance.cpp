// One line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "qsp/errors.hpp"
#include "qsp/harness.hpp"
#include "qsp/rmatrix.hpp"

using namespace qsp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::shared_ptr<const RootDatum> datum(const std::string& t) {
  return std::make_shared<const RootDatum>(parse_root_datum(t));
}

WeightModule irrep(const std::string& t, IWeight w, double q) { return build_irrep(datum(t), w, QParams(q)); }

IWeight unit(int n, int r) {
  IWeight w(n, 0);
  w[r] = 1;
  return w;
}

SatakeDiagram satake(const std::string& t, VertexSet X, Perm tau = {}) {
  const RootDatum D = parse_root_datum(t);
  if (tau.empty()) tau = identity_perm(D.rank());
  return make_satake(D, std::move(X), tau);
}

Perm flip(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = n - 1 - i;
  return p;
}

cplx hbar(double q) { return cplx(0, -std::log(q) / 3.14159265358979323846); }

// 1. golden R-matrix and YBE
Outcome c1() {
  const double q = 0.7, s = std::sqrt(q);
  const auto V = irrep("A1", {1}, q);
  CMat G = CMat::Zero(4, 4);
  G(0, 0) = s / q;
  G(1, 1) = s;
  G(1, 2) = s * (1 / q - q);
  G(2, 2) = s;
  G(3, 3) = s / q;
  const double golden = (rmat(V, V).matrix - G).cwiseAbs().maxCoeff();
  const double ybe = ybe_residual(V);
  return {golden < 1e-12 && ybe < 1e-10, "golden " + sci(golden) + " (tol 1e-12), YBE " + sci(ybe) + " (tol 1e-10)"};
}

// 2. ribbon identity, v_V = q^{3/2} on the vector representation
Outcome c2() {
  const double q = 0.7;
  double worst = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) worst = std::max(worst, ribbon_residual(irrep("A1", {a}, q), irrep("A1", {b}, q)));
  for (auto x : {IWeight{1, 0}, IWeight{0, 1}})
    for (auto y : {IWeight{1, 0}, IWeight{0, 1}}) worst = std::max(worst, ribbon_residual(irrep("A2", x, q), irrep("A2", y, q)));
  const CMat v = ribbon_element(irrep("A1", {1}, q));
  const double scalar = (v - std::pow(q, 1.5) * CMat::Identity(2, 2)).norm();
  return {worst < 1e-10 && scalar < 1e-12, "ribbon " + sci(worst) + " (tol 1e-10), v_V - q^{3/2} " + sci(scalar)};
}

// 3. defining relations and E* = F K on built irreps
Outcome c3() {
  const double q = 0.7;
  double worst = 0;
  int count = 0;
  auto take = [&](const std::string& t, IWeight w) {
    worst = std::max(worst, relation_residuals(irrep(t, w, q)).max());
    ++count;
  };
  for (int m = 0; m <= 5; ++m) take("A1", {m});
  for (auto w : std::vector<IWeight>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {3, 0}, {0, 3}}) take("A2", w);
  for (int r = 0; r < 3; ++r) take("A3", unit(3, r));
  return {worst < 1e-9, std::to_string(count) + " irreps, max relative residual " + sci(worst) + " (tol 1e-9)"};
}

// 4. *-invariance of the coideal, with a perturbation control
Outcome c4() {
  const QParams qp(0.7);
  struct Case {
    SatakeDiagram S;
    double t;
  };
  std::vector<Case> cases{{satake("A1", {}), 0.0},          {satake("A1", {}), 0.5},
                          {satake("A1", {}), 2.0},          {satake("A2", {}, flip(2)), 0.0},
                          {satake("A3", {1}, flip(3)), 0.0}, {satake("A3", {0, 2}), 0.0}};
  double worst = 0, control = 1e300;
  bool conclusive = true;
  for (auto& c : cases) {
    const auto ctx = make_braid_context(c.S, qp);
    const int n = c.S.datum.rank();
    auto p = no_parameter(c.S, qp);
    if (c.t != 0) p.s[0] = cplx(0, c.t);
    std::vector<WeightModule> mods;
    for (int r = 0; r < std::min(n, 2); ++r) mods.push_back(build_irrep(ctx.datum, unit(n, r), qp));
    if (n == 1) mods.push_back(build_irrep(ctx.datum, IWeight{2}, qp));
    const auto m = star_membership(ctx, p, mods);
    worst = std::max(worst, m.max);
    conclusive = conclusive && !m.inconclusive;
    auto bad = p;
    for (int r : complement_X(c.S)) bad.c[r] *= 1.05;
    control = std::min(control, star_membership(ctx, bad, mods).max);
  }
  return {worst < 1e-8 && control > 1e-3 && conclusive,
          "membership " + sci(worst) + " (tol 1e-8), perturbed c " + sci(control) + " (needs > 1e-3)"};
}

// 5. e_varpi and a_r^+ scalars
Outcome c5() {
  const double q = 0.7;
  const auto A3 = datum("A3");
  double e_worst = 0, a_worst = 0;
  std::vector<WeightModule> fund;
  for (int r = 0; r < 3; ++r) fund.push_back(build_irrep(A3, unit(3, r), QParams(q)));
  const auto M = direct_sum(fund);
  for (auto [X, tau] : std::vector<std::pair<VertexSet, Perm>>{{{1}, flip(3)}, {{0, 2}, identity_perm(3)}}) {
    const auto S = make_satake(*A3, X, tau);
    const auto ctx = make_braid_context(S, QParams(q));
    for (auto lam : std::vector<IWeight>{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}}) {
      const auto R = verify_appB(ctx, to_weight(lam), build_irrep(A3, lam, QParams(q)));
      e_worst = std::max({e_worst, std::abs(R.e_module - R.e_closed) / std::abs(R.e_closed),
                          std::abs(R.d_module - R.e_closed) / std::abs(R.e_closed)});
    }
    for (int r : complement_X(S)) {
      const auto a = a_plus_on_module(ctx, r, M);
      a_worst = std::max({a_worst, a.residual, std::abs(a.ratio - a.closed) / std::abs(a.closed)});
    }
  }
  return {e_worst < 1e-9 && a_worst < 1e-8, "e_varpi " + sci(e_worst) + " (tol 1e-9), a_r^+ " + sci(a_worst) + " (tol 1e-8)"};
}

// 6. monodromy engine
Outcome c6() {
  std::mt19937 rng(2024);
  std::normal_distribution<double> g(0, 0.15);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  auto skew = [&](int n) {
    CMat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
    return CMat((A - A.adjoint()) / 2.0);
  };
  double comm = 0, unit_err = 0, spread = 0;
  for (int rep = 0; rep < 3; ++rep) {
    const CMat Q = CMat::Identity(3, 3) + skew(3), Qi = Q.inverse();
    MonodromyProblem P;
    CMat Da = CMat::Zero(3, 3), Dp = Da, Dm = Da, two = Da;
    for (int i = 0; i < 3; ++i) {
      Da(i, i) = cplx(u(rng), u(rng));
      Dp(i, i) = cplx(u(rng), u(rng));
      Dm(i, i) = cplx(u(rng), u(rng));
      two(i, i) = std::pow(2.0, Dm(i, i));
    }
    P.a = Q * Da * Qi;
    P.b_plus = Q * Dp * Qi;
    P.b_minus = Q * Dm * Qi;
    const auto r = psi(P);
    comm = std::max(comm, (r.psi - Q * two * Qi).norm());
    spread = std::max(spread, r.spread);
    MonodromyProblem H;
    H.a = skew(3);
    H.b_plus = skew(3);
    H.b_minus = skew(3);
    const auto h = psi(H);
    unit_err = std::max(unit_err, (h.psi.adjoint() * h.psi - CMat::Identity(3, 3)).norm());
    spread = std::max(spread, h.spread);
  }
  return {comm < 1e-9 && unit_err < 1e-8 && spread < 1e-6,
          "2^{b-} " + sci(comm) + " (tol 1e-9), unitarity " + sci(unit_err) + " (tol 1e-8), spread " + sci(spread) +
              " (tol 1e-6)"};
}

// 7. cyclotomic identities
Outcome c7() {
  const auto T = split_tensors(su2_theta());
  double eg = 0, rt = 0, flat = 0;
  for (double q : {0.5, 0.7, 0.9})
    for (double lam : {0.0, 1.0}) {
      const auto k = kz_coeffs(T, T.character(lam), classical_irrep(1), classical_irrep(1), hbar(q));
      MonodromyProblem P;
      P.a = k.a;
      P.b_plus = k.b_plus;
      P.b_minus = k.b_minus;
      eg = std::max(eg, verify_eg(P));
      rt = std::max(rt, verify_octagon_kz(T, T.character(lam), classical_irrep(1), classical_irrep(1), hbar(q)).rtkz);
    }
  for (double lam : {0.0, 1.0})
    for (auto& [name, r] : flatness_residuals(T, T.character(lam), {classical_irrep(1), classical_irrep(1)}))
      flat = std::max(flat, r);
  return {eg < 1e-7 && rt < 1e-7 && flat < 1e-10,
          "Eg " + sci(eg) + " (tol 1e-7), RTKZ " + sci(rt) + " (tol 1e-7), flatness " + sci(flat) + " (tol 1e-10)"};
}

// 8. KZ braid singular values
Outcome c8() {
  const auto T = split_tensors(su2_theta());
  const double q = 0.7;
  double worst = 0;
  for (double lam : {0.5, 1.0, 2.0}) {
    Eigen::JacobiSVD<CMat> svd(kz_braid(T, T.character(lam), classical_irrep(1), hbar(q)));
    const auto s = svd.singularValues();
    worst = std::max({worst, std::abs(s[0] - std::pow(q, -lam - 0.5)), std::abs(s[1] - std::pow(q, lam - 0.5))});
  }
  return {worst < 1e-8, "max deviation " + sci(worst) + " (tol 1e-8)"};
}

// 9. Vogan side
Outcome c9() {
  const double q = 0.7;
  const auto V = irrep("A1", {1}, q);
  double spec = 0, lowest = 0, trunc = 0;
  bool fusion = true;
  for (double r : {0.25, 1.0, 3.0}) {
    const double lo = std::pow(q, r + 0.5), hi = std::pow(q, -r - 1.5);
    const auto M = build_Mr(r, QParams(q), 20);
    const CMat E = e_matrix(M, V);
    // eta_r (x) e_- spans the lowest weight space; its eigenvalue is q^{-r-3/2}
    lowest = std::max(lowest, std::abs(E(1, 1) - hi) / hi);
    const CMat P = twist_to_plain(E, M, V);
    for (auto& w : weight_spaces(P, M, V)) {
      if (w.indices.size() != 2 || w.weight + r >= 13) continue;
      spec = std::max({spec, std::abs(w.eigenvalues[0] - cplx(0, -1) * lo) / hi, std::abs(w.eigenvalues[1] - cplx(0, 1) * hi) / hi,
                       std::abs(w.singular_values[0] - lo) / hi, std::abs(w.singular_values[1] - hi) / hi});
    }
    const CMat a = e_matrix(build_Mr(r, QParams(q), 10), V);
    const int keep = 9 * V.dim();
    trunc = std::max(trunc, (a.topLeftCorner(keep, keep) - E.topLeftCorner(keep, keep)).norm() /
                                E.topLeftCorner(keep, keep).norm());
    const auto f = fusion_check(M, V);
    fusion = fusion && f.matches && f.lowest.size() == 2 && std::abs(f.lowest[0].first + r + 1) < 1e-12 &&
             std::abs(f.lowest[1].first + r - 1) < 1e-12;
  }
  return {spec < 1e-10 && lowest < 1e-12 && trunc < 1e-13 && fusion,
          "spectra " + sci(spec) + " (tol 1e-10), lowest vector " + sci(lowest) + ", N=10 vs 20 " + sci(trunc) +
              " (tol 1e-13), fusion " + (fusion ? "(1,1)" : "wrong")};
}

// 10. characters and conjugation
Outcome c10() {
  const QParams qp(0.7);
  double rel = 0, inter = 0, back = 0;
  for (auto S : {satake("A1", {}), satake("A2", {}, flip(2))}) {
    const auto ctx = make_braid_context(S, qp);
    const int n = S.datum.rank();
    const auto p = no_parameter(S, qp);
    const auto V = build_irrep(ctx.datum, unit(n, 0), qp), W = build_irrep(ctx.datum, unit(n, n - 1), qp);
    for (double t : {0.3, -0.8}) {
      for (auto& [name, r] : character_relations_residual(S, p, qp, characters(S, t))) rel = std::max(rel, r);
      const auto c = conjugate(ctx, p, relative_character(S, p, t), {{V, W}});
      inter = std::max({inter, c.algebra_residual, c.module_residual, c.image_residual});
      const auto b = conjugate(ctx, c.params, relative_character(S, c.params, -t));
      for (int r = 0; r < n; ++r)
        back = std::max({back, std::abs(b.params.c[r] - p.c[r]), std::abs(b.params.s[r] - p.s[r])});
    }
  }
  return {rel < 1e-10 && inter < 1e-9 && back < 1e-12,
          "relations " + sci(rel) + " (tol 1e-10), intertwining " + sci(inter) + " (tol 1e-9), round trip " + sci(back) +
              " (tol 1e-12)"};
}

// 11. Hermitian classification table
Outcome c11() {
  using K = HermitianKind;
  int checked = 0, wrong = 0;
  auto expect = [&](const std::string& t, VertexSet X1, Perm tau, K kind, int dist1) {
    const auto D = parse_root_datum(t);
    for (int& r : X1) --r;
    if (tau.empty()) tau = identity_perm(D.rank());
    const auto h = hermitian_type(make_satake(D, X1, tau));
    ++checked;
    if (h.kind != kind || !h.distinguished || *h.distinguished != dist1 - 1) ++wrong;
  };
  auto swap_last = [](int n) {
    Perm p = identity_perm(n);
    std::swap(p[n - 2], p[n - 1]);
    return p;
  };
  // AIII su(p,q), p <= q, p + q <= 5
  for (int p = 1; p <= 2; ++p)
    for (int q = p; p + q <= 5; ++q) {
      const int n = p + q - 1;
      VertexSet X;
      for (int r = p + 1; r <= q - 1; ++r) X.push_back(r);
      expect("A" + std::to_string(n), X, flip(n), p == q ? K::SType : K::CType, p);
    }
  // DIII so*(2n)
  expect("D4", {1, 3}, {}, K::SType, 4);
  expect("D5", {1, 3}, swap_last(5), K::CType, 5);
  expect("D6", {1, 3, 5}, {}, K::SType, 6);
  // BDI so(2,q), q <= 5
  expect("B2", {}, {}, K::SType, 1);
  expect("D3", {}, swap_last(3), K::SType, 1);
  expect("B3", {3}, {}, K::SType, 1);
  expect("D4", {3, 4}, {}, K::SType, 1);
  // CI
  for (int l = 2; l <= 4; ++l) expect("C" + std::to_string(l), {}, {}, K::SType, l);
  return {wrong == 0, std::to_string(checked) + " diagrams, " + std::to_string(wrong) + " mismatches"};
}

// 12. rank-one probe
Outcome c12() {
  std::vector<Report> reps;
  bool ok = true;
  for (double r : {0.25, 1.0}) {
    reps.push_back(run_rank_one(0.7, r, 20));
    ok = ok && reps.back().pass;
  }
  const auto v = lambda_hypotheses(reps);
  std::string d = std::string("suite ") + (ok ? "green" : "red") + ", lambda=2r+2 " +
                  (v.doubled_matches ? "matches" : "fails") + ", lambda=r+1 " + (v.shifted_matches ? "matches" : "fails");
  for (auto& rep : reps) d += ", lambda_vogan(r=" + num(rep.params.at("r")) + ")=" + num(rep.observations.at("lambda_vogan"));
  return {ok && v.exactly_one(), d};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"R-matrix golden and YBE", c1},
      {"ribbon identity", c2},
      {"*-representation relations", c3},
      {"coideal *-invariance", c4},
      {"e_varpi and a_r^+ scalars", c5},
      {"monodromy engine", c6},
      {"cyclotomic identities", c7},
      {"KZ braid singular values", c8},
      {"Vogan E eigenvalues and fusion", c9},
      {"characters and conjugation", c10},
      {"Hermitian classification", c11},
      {"rank-one probe", c12},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? kExitPass : kExitFail;
}

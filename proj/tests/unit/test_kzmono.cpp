#include <cmath>
#include <random>

#include "doctest.h"
#include "qsp/errors.hpp"
#include "qsp/kzmono.hpp"
#include "qsp/rmatrix.hpp"

using namespace qsp;

namespace {

const double kPi = 3.14159265358979323846;

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cplx hbar_of(double q) { return cplx(0, -std::log(q) / kPi); }

CMat random_skew(int n, std::mt19937& rng) {
  std::normal_distribution<double> g(0, 0.15);
  CMat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
  return (A - A.adjoint()) / 2.0;
}

MonodromyProblem su2_problem(double lambda, double q, int m1 = 1, int m2 = 1) {
  const auto T = split_tensors(su2_theta());
  const auto k = kz_coeffs(T, T.character(lambda), classical_irrep(m1), classical_irrep(m2), hbar_of(q));
  MonodromyProblem P;
  P.a = k.a;
  P.b_plus = k.b_plus;
  P.b_minus = k.b_minus;
  return P;
}

}  // namespace

TEST_CASE("symmetric pair tensors for su2") {
  const auto T = split_tensors(su2_theta());
  CHECK(T.kbasis.size() == 1);
  CHECK(T.mbasis.size() == 2);
  for (int m1 = 1; m1 <= 3; ++m1)
    for (int m2 = 1; m2 <= 2; ++m2) {
      const auto V = classical_irrep(m1), W = classical_irrep(m2);
      const CMat tk = pair_tensor(T.restrict(V).X, T.restrict(W).X);
      const CMat tm = pair_tensor(T.m_images(V), T.m_images(W));
      const CMat ef = V.e - V.f, efw = W.e - W.f;
      CHECK((tk + kron(ef, efw) / 2.0).norm() < 1e-12);
      CHECK((tm - kron(V.h, W.h) / 2.0 - kron(V.e + V.f, W.e + W.f) / 2.0).norm() < 1e-12);
      const CMat t = kron(V.e, W.f) + kron(V.f, W.e) + kron(V.h, W.h) / 2.0;
      CHECK((tk + tm - t).norm() < 1e-12);
      // (sigma (x) sigma) t = t
      const CMat SS = kron(T.sigma_on(V), T.sigma_on(W));
      CHECK((SS * t * SS.adjoint() - t).norm() < 1e-12);
    }
  auto D = parse_root_datum("A1");
  for (int m = 1; m <= 4; ++m) {
    const auto V = classical_irrep(m);
    const CMat C = casimir(T.g_images(V));
    CHECK((C - to_double(casimir_scalar(D, {Rat(m)})) * CMat::Identity(m + 1, m + 1)).norm() < 1e-12);
    const CMat S = T.sigma_on(V);
    CHECK((S * S * V.e * (S * S).adjoint() - V.e).norm() < 1e-12);
    CHECK((S * V.e * S.adjoint() + V.f).norm() < 1e-12);
    CHECK((S.adjoint() * S - CMat::Identity(m + 1, m + 1)).norm() < 1e-12);
  }
  CHECK(std::abs(casimir(T.g_images(classical_irrep(1)))(0, 0) - 1.5) < 1e-14);
  CMat bad = su2_theta();
  bad(2, 2) = 1;
  CHECK_THROWS_AS(split_tensors(bad), InputError);
  CHECK_THROWS_AS(split_tensors(2.0 * su2_theta()), InputError);
  // the identity-like involution h -> h, e -> -e, f -> -f is also fine
  CMat diag = CMat::Zero(3, 3);
  diag(0, 0) = -1;
  diag(1, 1) = -1;
  diag(2, 2) = 1;
  const auto Td = split_tensors(diag);
  CHECK(Td.kbasis.size() == 1);
  CHECK(Td.mbasis.size() == 2);
}

TEST_CASE("KZ coefficients") {
  const auto T = split_tensors(su2_theta());
  const auto V = classical_irrep(1);
  const double lambda = 0.8;
  const cplx hb = hbar_of(0.6);
  const auto k = kz_coeffs(T, T.character(lambda), V, V, hb);
  // a on chi_lambda (x) V: hbar (i lambda (e - f) + (e - f)^*(e - f) / 2)
  const CMat g = V.e - V.f;
  const CMat a2 = hb * (cplx(0, lambda) * g + g.adjoint() * g / 2.0);
  CHECK((k.a - kron(a2, CMat::Identity(2, 2))).norm() < 1e-12);
  for (auto* m : {&k.a, &k.b_plus, &k.b_minus, &k.d}) CHECK((*m + m->adjoint()).norm() < 1e-12);
  const auto z = kz_coeffs(T, T.character(lambda), V, V, 0.0);
  CHECK(z.a.norm() == 0);
  CHECK(z.b_plus.norm() == 0);
  for (int m1 : {1, 2})
    for (int m2 : {1, 2}) {
      const auto kk = kz_coeffs(T, T.restrict(classical_irrep(2)), classical_irrep(m1), classical_irrep(m2), hb);
      for (auto* m : {&kk.a, &kk.b_plus, &kk.b_minus})
        CHECK((kk.d * *m - *m * kk.d).norm() < 1e-12);
    }
}

TEST_CASE("resonance flags") {
  CMat a = CMat::Zero(2, 2);
  a(1, 1) = 1.0;
  CHECK(resonance_check(a).resonant);
  a(1, 1) = 0.5;
  CHECK_FALSE(resonance_check(a).resonant);
  MonodromyProblem P;
  P.a = CMat::Zero(2, 2);
  P.a(1, 1) = 2.0;
  P.b_plus = CMat::Zero(2, 2);
  P.b_minus = CMat::Zero(2, 2);
  CHECK_THROWS_AS(psi(P), NumericalError);
}

TEST_CASE("monodromy in closed form cases") {
  MonodromyProblem Z;
  Z.a = Z.b_plus = Z.b_minus = CMat::Zero(3, 3);
  CHECK((psi(Z).psi - CMat::Identity(3, 3)).norm() < 1e-12);
  // commuting coefficients: Psi = 2^{b_-}
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int rep = 0; rep < 4; ++rep) {
    CMat Q = CMat::Identity(3, 3) + random_skew(3, rng);
    CMat twoD = CMat::Zero(3, 3);
    auto diag = [&](bool imag, bool keep) {
      CMat D = CMat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) D(i, i) = imag ? cplx(0, u(rng)) : cplx(u(rng), u(rng));
      if (keep)
        for (int i = 0; i < 3; ++i) twoD(i, i) = std::pow(2.0, D(i, i));
      return CMat(Q * D * Q.inverse());
    };
    MonodromyProblem P;
    P.a = diag(rep % 2, false);
    P.b_plus = diag(rep % 2, false);
    P.b_minus = diag(rep % 2, true);
    const auto r = psi(P);
    const CMat expect = Q * twoD * Q.inverse();
    CHECK((r.psi - expect).norm() < 1e-9);
    CHECK(r.spread < 1e-6);
  }
}

TEST_CASE("monodromy for su2 KZ problems") {
  for (double q : {0.5, 0.7, 0.9})
    for (double lambda : {0.0, 1.0}) {
      const auto P = su2_problem(lambda, q);
      const auto r = psi(P);
      CAPTURE(q);
      CAPTURE(lambda);
      CHECK(r.spread < 1e-6);
      CHECK(r.truncation_error < 1e-12);
      CHECK((r.psi.adjoint() * r.psi - CMat::Identity(4, 4)).norm() < 1e-8);
      CHECK(verify_eg(P) < 1e-7);
      // Psi(a + D) = Psi(a) for D commuting with a, b_+, b_-
      const auto T = split_tensors(su2_theta());
      const auto k = kz_coeffs(T, T.character(lambda), classical_irrep(1), classical_irrep(1), hbar_of(q));
      MonodromyProblem PD = P;
      PD.a = P.a + k.d;
      CHECK((psi(PD).psi - r.psi).norm() < 1e-7);
    }
  // generic non-commuting skew-Hermitian coefficients
  std::mt19937 rng(11);
  for (int rep = 0; rep < 3; ++rep) {
    MonodromyProblem P;
    P.a = random_skew(3, rng);
    P.b_plus = random_skew(3, rng);
    P.b_minus = random_skew(3, rng);
    const auto r = psi(P);
    CHECK((r.psi.adjoint() * r.psi - CMat::Identity(3, 3)).norm() < 1e-8);
    CHECK(verify_eg(P) < 1e-7);
  }
}

TEST_CASE("octagon and ribbon identities from the KZ monodromy") {
  const auto T = split_tensors(su2_theta());
  for (double q : {0.5, 0.7, 0.9})
    for (double lambda : {0.0, 1.0})
      for (auto [m1, m2] : {std::pair{1, 1}, std::pair{1, 2}}) {
        const auto o = verify_octagon_kz(T, T.character(lambda), classical_irrep(m1), classical_irrep(m2), hbar_of(q));
        CAPTURE(q);
        CAPTURE(lambda);
        CHECK(o.rtkz < 1e-7);
        CHECK(o.octagon < 1e-7);
        CHECK(o.ribbon < 1e-7);
        CHECK(o.psi021 < 1e-8);
        CHECK(o.lemcomm < 1e-12);
      }
}

TEST_CASE("flatness of the 2-cyclotomic KZ system") {
  const auto T = split_tensors(su2_theta());
  for (auto X0 : {T.character(0.7), T.restrict(classical_irrep(2))}) {
    for (auto reps : {std::vector<ClassicalRep>{classical_irrep(1), classical_irrep(2)},
                      std::vector<ClassicalRep>{classical_irrep(1), classical_irrep(1), classical_irrep(2)}}) {
      for (auto& [name, r] : flatness_residuals(T, X0, reps)) {
        CAPTURE(name);
        CHECK(r < 1e-10);
      }
    }
  }
}

TEST_CASE("KZ braid for su2") {
  const auto T = split_tensors(su2_theta());
  const auto V = classical_irrep(1);
  CMat g(2, 2);
  g << 0, 1, -1, 0;
  for (double q : {0.4, 0.75})
    for (double lambda : {0.0, 0.6, -1.7}) {
      const CMat E = kz_braid(T, T.character(lambda), V, hbar_of(q));
      const double c = (std::pow(q, lambda) + std::pow(q, -lambda)) / 2, s = (std::pow(q, lambda) - std::pow(q, -lambda)) / 2;
      const cplx i(0, 1);
      CMat expect(2, 2);
      expect << i * s, c, -c, i * s;
      expect /= std::sqrt(q);
      CHECK((E * g - expect).norm() < 1e-12);
      Eigen::JacobiSVD<CMat> svd(E);
      const double hi = std::pow(q, -std::abs(lambda) - 0.5), lo = std::pow(q, std::abs(lambda) - 0.5);
      CHECK(std::abs(svd.singularValues()[0] - hi) < 1e-12);
      CHECK(std::abs(svd.singularValues()[1] - lo) < 1e-12);
      if (lambda == 0) CHECK((E * g - g / std::sqrt(q)).norm() < 1e-12);
      // commutes with the diagonal k-action
      const CMat kd = T.character(lambda).X[0](0, 0) * CMat::Identity(2, 2) + T.restrict(V).X[0];
      CHECK((E * kd - kd * E).norm() < 1e-12);
    }
}

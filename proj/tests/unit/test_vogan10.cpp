#include <cmath>

#include "doctest.h"
#include "qsp/errors.hpp"
#include "qsp/rmatrix.hpp"
#include "qsp/vogan10.hpp"

using namespace qsp;

namespace {

WeightModule su2_irrep(int m, double q) {
  return build_irrep(std::make_shared<const RootDatum>(parse_root_datum("A1")), IWeight{m}, QParams(q));
}

int index_of(const WeightModule& V, int h) {
  for (int i = 0; i < V.dim(); ++i)
    if (V.weights[i][0] == h) return i;
  return -1;
}

}  // namespace

TEST_CASE("M_r relations and *-structure") {
  for (double q : {0.3, 0.6, 0.85})
    for (double r : {0.0, 0.5, 1.0, 2.5}) {
      const auto M = build_Mr(r, QParams(q), 12);
      CAPTURE(q);
      CAPTURE(r);
      CHECK(vogan_relations(M).max() < 1e-12);
      CHECK((M.Fs - M.F.adjoint()).norm() == 0);
      CHECK(M.F.col(0).norm() == 0);
      // |f_n|^2 from the closed form: q^{-2n-1} (1 - q^{2n}) (1 + q^{2r+2-2n}) / (q^{-1} - q)^2
      for (int n = 1; n <= 12; ++n) {
        const double f2 = std::pow(q, -2.0 * n - 1) * (1 - std::pow(q, 2.0 * n)) * (1 + std::pow(q, 2 * r + 2 - 2.0 * n)) /
                          std::pow(1 / q - q, 2);
        CHECK(std::abs(std::norm(M.F(n - 1, n)) - f2) < 1e-10 * f2);
      }
      const auto T = coaction_tensor(M, su2_irrep(1, q));
      CHECK(vogan_relations(T).max() < 1e-12);
    }
  CHECK_THROWS_AS(build_Mr(1.0, QParams(0.5), 1), InputError);
}

TEST_CASE("finite-dimensional modules satisfy the untwisted relation") {
  for (int m : {1, 2, 3}) {
    const auto V = su2_irrep(m, 0.7);
    CHECK(vogan_relations(as_truncated(V), 1.0).max() < 1e-12);
  }
}

TEST_CASE("untwisted E reduces to R_21 R (1 (x) v^{-1})") {
  for (double q : {0.4, 0.8})
    for (int m : {1, 2, 3})
      for (int k : {1, 2}) {
        const auto W = su2_irrep(m, q), V = su2_irrep(k, q);
        const CMat E = e_matrix(as_truncated(W), V, 1.0);
        const CMat vinv = ribbon_element(V).inverse();
        CMat rhs = r21(W, V) * rmat(W, V).matrix;
        CMat tail = CMat::Zero(rhs.rows(), rhs.cols());
        for (int i = 0; i < W.dim(); ++i) tail.block(i * V.dim(), i * V.dim(), V.dim(), V.dim()) = vinv;
        CHECK((E - rhs * tail).norm() < 1e-11 * rhs.norm());
        CHECK(plain_intertwining_residual(E, as_truncated(W), V) < 1e-12);
      }
}

TEST_CASE("E on M_r (x) V") {
  for (double q : {0.35, 0.6, 0.9})
    for (double r : {0.0, 1.0, 1.5, 3.0}) {
      CAPTURE(q);
      CAPTURE(r);
      const auto V = su2_irrep(1, q);
      const auto M = build_Mr(r, QParams(q), 14);
      const CMat E = e_matrix(M, V);
      const int minus = index_of(V, -1);
      // lowest vector eta_r (x) e_-
      CVec x = CVec::Zero(E.cols());
      x[minus] = 1;
      CHECK((E * x - std::pow(q, -r - 1.5) * x).norm() < 1e-12);
      CHECK(twisted_intertwining_residual(E, M, V) < 1e-12);
      const CMat P = twist_to_plain(E, M, V);
      CHECK(plain_intertwining_residual(P, M, V) < 1e-12);
      CHECK((P * x - cplx(0, 1) * std::pow(q, -r - 1.5) * x).norm() < 1e-12);
      const double lo = std::pow(q, r + 0.5), hi = std::pow(q, -r - 1.5);
      // entries grow like q^{-2n}; past level 6 the 2x2 spectra lose digits to cancellation
      auto usable = [&](const WeightSpace& w) { return w.indices.size() == 2 && w.weight + r < 13; };
      for (auto& w : weight_spaces(E, M, V)) {
        if (!usable(w)) continue;
        CAPTURE(w.weight);
        CHECK(std::abs(w.singular_values[0] - lo) < 1e-11 * hi);
        CHECK(std::abs(w.singular_values[1] - hi) < 1e-11 * hi);
        CHECK(std::abs(std::abs(w.eigenvalues[0] * w.eigenvalues[1]) - lo * hi) < 1e-11 * hi * hi);
      }
      for (auto& w : weight_spaces(P, M, V)) {
        if (!usable(w)) continue;
        CHECK(std::abs(w.eigenvalues[0] - cplx(0, -1) * lo) < 1e-11 * hi);
        CHECK(std::abs(w.eigenvalues[1] - cplx(0, 1) * hi) < 1e-11 * hi);
      }
    }
}

TEST_CASE("E does not depend on the truncation") {
  const double q = 0.55, r = 1.0;
  const auto V = su2_irrep(1, q);
  const CMat a = e_matrix(build_Mr(r, QParams(q), 10), V), b = e_matrix(build_Mr(r, QParams(q), 20), V);
  const int keep = 9 * V.dim();
  CHECK((a.topLeftCorner(keep, keep) - b.topLeftCorner(keep, keep)).norm() < 1e-13 * b.topLeftCorner(keep, keep).norm());
}

TEST_CASE("fusion M_r (x) V = M_{r+1} + M_{r-1}") {
  for (double r : {0.0, 1.0, 2.5}) {
    const auto f = fusion_check(build_Mr(r, QParams(0.6), 10), su2_irrep(1, 0.6));
    CHECK(f.matches);
    REQUIRE(f.lowest.size() == 2);
    CHECK(f.lowest[0].second == 1);
    CHECK(f.lowest[1].second == 1);
  }
  CHECK_THROWS_AS(fusion_check(build_Mr(1.0, QParams(0.6), 2), su2_irrep(1, 0.6)), InputError);
}

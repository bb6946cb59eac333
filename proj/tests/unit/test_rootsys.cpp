#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "doctest.h"
#include "qsp/errors.hpp"
#include "qsp/rootsys.hpp"

using namespace qsp;

namespace {

// brute-force closure of the simple roots under simple reflections (root coordinates)
std::set<std::vector<long long>> root_closure(const RootDatum& D, const VertexSet& S) {
  std::set<std::vector<long long>> seen;
  std::queue<std::vector<long long>> todo;
  const int n = D.rank();
  for (int r : S) {
    std::vector<long long> c(n, 0);
    c[r] = 1;
    todo.push(c);
    seen.insert(c);
  }
  while (!todo.empty()) {
    auto c = todo.front();
    todo.pop();
    for (int r : S) {
      // (alpha_r^vee, beta) = sum_s c_s a_{rs}
      long long p = 0;
      for (int s = 0; s < n; ++s) p += c[s] * D.a(r, s);
      auto d = c;
      d[r] -= p;
      if (seen.insert(d).second) todo.push(d);
    }
  }
  std::set<std::vector<long long>> pos;
  for (auto& c : seen)
    if (std::all_of(c.begin(), c.end(), [](long long x) { return x >= 0; })) pos.insert(c);
  return pos;
}

std::vector<long long> coords_of(const RootDatum& D, const Weight& w) {
  std::vector<long long> out;
  for (auto& x : root_coords(D, w)) {
    REQUIRE(x.denominator() == 1);
    out.push_back(x.numerator());
  }
  return out;
}

// Weyl group by BFS on the orbit of a regular element; returns max word length and an element of that length
std::pair<int, WeylWord> brute_longest(const RootDatum& D, const VertexSet& S) {
  Weight start = zero_weight(D);
  for (int r : S) start[r] = 1;
  std::map<Weight, WeylWord> seen{{start, {}}};
  std::queue<Weight> todo;
  todo.push(start);
  WeylWord best;
  while (!todo.empty()) {
    Weight w = todo.front();
    todo.pop();
    for (int r : S) {
      Weight v = w;
      const Rat m = w[r];
      for (int s = 0; s < D.rank(); ++s) v[s] -= m * Rat(D.a(s, r));
      if (!seen.count(v)) {
        WeylWord word = seen[w];
        word.insert(word.begin(), r);
        seen[v] = word;
        if (word.size() > best.size()) best = word;
        todo.push(v);
      }
    }
  }
  return {int(best.size()), best};
}

}  // namespace

TEST_CASE("Cartan data invariants") {
  for (std::string t : {"A1", "A2", "A5", "B2", "B4", "C3", "D4", "D6", "E6", "E7", "E8", "F4", "G2", "A1xB2"}) {
    auto D = parse_root_datum(t);
    long long det = 1;
    for (auto& c : D.components()) {
      // index of Q in P is the determinant of the component Cartan matrix
      std::vector<double> A;
      for (int r = 0; r < c.rank; ++r)
        for (int s = 0; s < c.rank; ++s) A.push_back(D.a(c.offset + r, c.offset + s));
      // Gaussian elimination in doubles is enough for these tiny integer matrices
      const int n = c.rank;
      double d = 1;
      for (int k = 0; k < n; ++k) {
        d *= A[k * n + k];
        for (int i = k + 1; i < n; ++i) {
          double f = A[i * n + k] / A[k * n + k];
          for (int j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
        }
      }
      det = std::lcm(det, (long long)std::llround(d));
    }
    CHECK(D.dA() == det);
    for (int r = 0; r < D.rank(); ++r) {
      CHECK(D.a(r, r) == 2);
      CHECK(D.d(r) > 0);
      for (int s = 0; s < D.rank(); ++s) {
        if (r != s) CHECK(D.a(r, s) <= 0);
        CHECK(D.d(r) * D.a(r, s) == D.d(s) * D.a(s, r));
      }
      CHECK(pairing(D, simple_root(D, r), simple_root(D, r)) / 2 == Rat(D.d(r)));
    }
  }
  auto A1 = parse_root_datum("A1");
  CHECK(A1.a(0, 0) == 2);
  CHECK(A1.d(0) == 1);
  CHECK(A1.dA() == 2);
  auto A2 = parse_root_datum("A2");
  CHECK(A2.a(0, 1) == -1);
  CHECK(A2.a(1, 0) == -1);
  CHECK(A2.dA() == 3);
  auto G2 = parse_root_datum("G2");
  CHECK(std::set<int>{G2.d(0), G2.d(1)} == std::set<int>{1, 3});
}

TEST_CASE("invalid type specifications") {
  CHECK_THROWS_AS(parse_root_datum("H3"), InputError);
  CHECK_THROWS_AS(parse_root_datum("A0"), InputError);
  CHECK_THROWS_AS(parse_root_datum("E5"), InputError);
  CHECK_THROWS_AS(parse_root_datum("A9"), InputError);
  CHECK_THROWS_AS(parse_root_datum("D2"), InputError);
}

TEST_CASE("positive roots against reflection closure") {
  for (std::string t : {"A2", "A4", "B3", "C4", "D5", "G2", "F4", "E6"}) {
    auto D = parse_root_datum(t);
    auto I = all_vertices(D);
    std::set<std::vector<long long>> got;
    for (auto& b : positive_roots(D, I)) got.insert(coords_of(D, b));
    CHECK(got == root_closure(D, I));
    CHECK(got.size() == positive_roots(D, I).size());
  }
  auto A2 = parse_root_datum("A2");
  std::set<std::vector<long long>> want{{1, 0}, {0, 1}, {1, 1}};
  std::set<std::vector<long long>> got;
  for (auto& b : positive_roots(A2, {0, 1})) got.insert(coords_of(A2, b));
  CHECK(got == want);
  CHECK(positive_roots(A2, {}).empty());
  auto A3 = parse_root_datum("A3");
  auto p = positive_roots(A3, {1});
  REQUIRE(p.size() == 1);
  CHECK(p[0] == simple_root(A3, 1));
}

TEST_CASE("longest element length against Weyl group enumeration") {
  for (std::string t : {"A1", "A2", "A3", "B3", "C3", "D4", "G2", "F4"}) {
    auto D = parse_root_datum(t);
    auto w = longest_element(D, all_vertices(D));
    CHECK(int(w.size()) == brute_longest(D, all_vertices(D)).first);
  }
  auto A1 = parse_root_datum("A1");
  CHECK(longest_element(A1, {0}) == WeylWord{0});
  auto A3 = parse_root_datum("A3");
  CHECK(longest_element(A3, {1}) == WeylWord{1});
  CHECK(longest_element(parse_root_datum("A2"), {0, 1}).size() == 3);
}

TEST_CASE("reduced words invert exactly length-many positive roots") {
  for (std::string t : {"A3", "B3", "D4", "G2", "C3"}) {
    auto D = parse_root_datum(t);
    auto all = positive_roots(D, all_vertices(D));
    const int n = D.rank();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      VertexSet X;
      for (int r = 0; r < n; ++r)
        if (mask & (1u << r)) X.push_back(r);
      auto w = longest_element(D, X);
      int inverted = 0;
      for (auto& b : all) {
        auto c = root_coords(D, weyl_act(D, w, b));
        if (std::all_of(c.begin(), c.end(), [](const Rat& x) { return x <= 0; })) ++inverted;
      }
      CHECK(inverted == int(w.size()));
      CHECK(int(w.size()) == brute_longest(D, X).first);
    }
  }
}

TEST_CASE("Weyl action") {
  auto A1 = parse_root_datum("A1");
  CHECK(weyl_act(A1, {0}, simple_root(A1, 0)) == neg(simple_root(A1, 0)));
  auto A2 = parse_root_datum("A2");
  CHECK(weyl_act(A2, longest_element(A2, {0, 1}), fundamental(A2, 0)) == neg(fundamental(A2, 1)));
  // the orbit of w1 has a unique antidominant element
  auto [len, w0] = brute_longest(A2, {0, 1});
  CHECK(weyl_act(A2, w0, fundamental(A2, 0)) == neg(fundamental(A2, 1)));
  CHECK(weyl_act(A2, {}, fundamental(A2, 0)) == fundamental(A2, 0));
  for (int r = 0; r < 2; ++r) {
    Weight mu{Rat(3), Rat(-2)};
    CHECK(simple_reflection(A2, r, simple_reflection(A2, r, mu)) == mu);
  }
}

TEST_CASE("rho_X check pairings") {
  for (std::string t : {"A3", "B3", "G2", "D4"}) {
    auto D = parse_root_datum(t);
    for (int r = 0; r < D.rank(); ++r) CHECK(rho_check(D, {r})[r] == Rat(1));
    for (auto& x : rho_check(D, {})) CHECK(x == Rat(0));
  }
  auto A3 = parse_root_datum("A3");
  // rho^vee = (alpha_1^vee + alpha_3^vee)/2, (alpha_2, alpha_s^vee) = a_{s2}
  Rat direct = Rat(A3.a(0, 1) + A3.a(2, 1), 2);
  CHECK(direct == Rat(-1));
  CHECK(rho_check(A3, {0, 2})[1] == direct);
}

TEST_CASE("q-numbers") {
  CHECK(qint(1, 0.3) == doctest::Approx(1.0));
  using R = boost::rational<long long>;
  const R q(1, 2);
  // defining formula (q^-3 - q^3)/(q^-1 - q) in exact arithmetic
  R q3 = q * q * q;
  R def = (R(1) / q3 - q3) / (R(1) / q - q);
  CHECK(def == R(21, 4));
  CHECK(qint<R>(3, q) == def);
  CHECK(qint(3, 0.5) == doctest::Approx(5.25).epsilon(1e-15));
  CHECK(qbinom(4, 2, 1.0) == doctest::Approx(6.0));
  CHECK(qint(-2, 0.5) == doctest::Approx(-qint(2, 0.5)));
}

TEST_CASE("q-binomial identity in exact rational arithmetic") {
  using boost::multiprecision::cpp_rational;
  for (auto q : {cpp_rational(1, 2), cpp_rational(2, 3), cpp_rational(7, 5)}) {
    for (int m = 0; m <= 8; ++m)
      for (int n = 0; n <= m; ++n) {
        CHECK(qbinom<cpp_rational>(m, n, q) * qfact<cpp_rational>(n, q) * qfact<cpp_rational>(m - n, q) ==
              qfact<cpp_rational>(m, q));
      }
  }
}

TEST_CASE("tau0") {
  auto id = [](int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  };
  CHECK(tau0(parse_root_datum("A1")) == id(1));
  CHECK(tau0(parse_root_datum("A2")) == std::vector<int>{1, 0});
  CHECK(tau0(parse_root_datum("D4")) == id(4));
  CHECK(tau0(parse_root_datum("D5")) == std::vector<int>{0, 1, 2, 4, 3});
  // w0 = -1 in W(E7)
  CHECK(tau0(parse_root_datum("E7")) == id(7));
  for (std::string t : {"A4", "B3", "E6", "D6"}) {
    auto D = parse_root_datum(t);
    auto [len, w0] = brute_longest(D, all_vertices(D));
    auto t0 = tau0(D);
    for (int r = 0; r < D.rank(); ++r) CHECK(neg(weyl_act(D, w0, simple_root(D, r))) == simple_root(D, t0[r]));
  }
}

TEST_CASE("pairing is symmetric, Weyl invariant and integral on the root lattice") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> u(-3, 3);
  for (std::string t : {"A3", "B3", "C3", "G2", "F4", "D4"}) {
    auto D = parse_root_datum(t);
    for (int trial = 0; trial < 20; ++trial) {
      Weight a = zero_weight(D), b = zero_weight(D);
      for (auto& x : a) x = u(rng);
      for (auto& x : b) x = u(rng);
      CHECK(pairing(D, a, b) == pairing(D, b, a));
      CHECK((pairing(D, a, b) * Rat(D.dA())).denominator() == 1);
      for (int r = 0; r < D.rank(); ++r)
        CHECK(pairing(D, simple_reflection(D, r, a), simple_reflection(D, r, b)) == pairing(D, a, b));
      std::vector<Rat> ca(D.rank()), cb(D.rank());
      for (auto& x : ca) x = u(rng);
      for (auto& x : cb) x = u(rng);
      CHECK(pairing(D, from_root_coords(D, ca), from_root_coords(D, cb)).denominator() == 1);
    }
  }
}

TEST_CASE("Casimir scalars") {
  auto A1 = parse_root_datum("A1");
  CHECK(casimir_scalar(A1, fundamental(A1, 0)) == Rat(3, 2));
  CHECK(casimir_scalar(A1, zero_weight(A1)) == Rat(0));
  CHECK(casimir_scalar(A1, simple_root(A1, 0)) == Rat(4));
}

TEST_CASE("rational string round trip") {
  Rat x(-7, 3);
  CHECK(rat_from_string(rat_to_string(x)) == x);
  CHECK(rat_from_string("5") == Rat(5));
  CHECK_THROWS_AS(rat_from_string("a/b"), InputError);
}

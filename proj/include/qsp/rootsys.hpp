#pragma once
#include <boost/rational.hpp>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

// boost 1.74 rational mixed comparisons recurse under C++20 rewritten operator candidates;
// exact non-template overloads take precedence.
namespace boost {
#define QSP_RAT_CMP(I)                                                                                             \
  inline bool operator==(const rational<long long>& a, I b) { return a.denominator() == 1 && a.numerator() == b; } \
  inline bool operator==(I b, const rational<long long>& a) { return a == b; }                                     \
  inline bool operator!=(const rational<long long>& a, I b) { return !(a == b); }                                  \
  inline bool operator!=(I b, const rational<long long>& a) { return !(a == b); }
QSP_RAT_CMP(int)
QSP_RAT_CMP(long long)
#undef QSP_RAT_CMP
}  // namespace boost

namespace qsp {

using Rat = boost::rational<long long>;
// coordinates in the fundamental-weight basis
using Weight = std::vector<Rat>;
using IWeight = std::vector<int>;
// 0-based vertex indices; s_{w[0]} s_{w[1]} ... (rightmost letter acts first)
using WeylWord = std::vector<int>;
using VertexSet = std::vector<int>;

struct Component {
  char type;
  int rank;
  int offset;
};

class RootDatum {
 public:
  static RootDatum build(const std::vector<std::pair<char, int>>& spec);

  int rank() const { return n_; }
  const std::vector<Component>& components() const { return comps_; }
  int a(int r, int s) const { return A_[r * n_ + s]; }
  int d(int r) const { return d_[r]; }
  long long dA() const { return dA_; }
  Rat ainv(int r, int s) const { return Ainv_[r * n_ + s]; }
  const std::vector<int>& cartan() const { return A_; }
  std::string label() const;  // e.g. "A3" or "A1xB2"
  int component_of(int r) const;

  bool operator==(const RootDatum& o) const { return A_ == o.A_ && d_ == o.d_; }

 private:
  int n_ = 0;
  std::vector<Component> comps_;
  std::vector<int> A_;
  std::vector<int> d_;
  std::vector<Rat> Ainv_;
  long long dA_ = 1;
};

RootDatum build_root_datum(const std::vector<std::pair<char, int>>& spec);
// Parses "A3", "B2", "A1xA1", "E6".
RootDatum parse_root_datum(const std::string& label);

Weight zero_weight(const RootDatum& D);
Weight fundamental(const RootDatum& D, int r);
Weight simple_root(const RootDatum& D, int r);
Weight to_weight(const IWeight& m);
IWeight to_iweight(const Weight& w);  // throws InputError if not integral
bool is_integral(const Weight& w);
bool is_dominant(const Weight& w);

Weight add(const Weight& a, const Weight& b);
Weight sub(const Weight& a, const Weight& b);
Weight scale(const Rat& c, const Weight& a);
Weight neg(const Weight& a);

// expansion in simple roots, c = A^{-1} m
std::vector<Rat> root_coords(const RootDatum& D, const Weight& mu);
Weight from_root_coords(const RootDatum& D, const std::vector<Rat>& c);
Rat pairing(const RootDatum& D, const Weight& mu, const Weight& nu);
double pairing(const RootDatum& D, const IWeight& mu, const IWeight& nu);
// (beta^vee, mu) for a root beta
Rat copairing(const RootDatum& D, const Weight& beta, const Weight& mu);

Weight simple_reflection(const RootDatum& D, int r, const Weight& mu);
Weight weyl_act(const RootDatum& D, const WeylWord& w, const Weight& mu);

WeylWord longest_element(const RootDatum& D, const VertexSet& subset);
std::vector<Weight> positive_roots(const RootDatum& D, const VertexSet& subset);
VertexSet all_vertices(const RootDatum& D);

// (alpha_r, rho_X^vee) for every r in I
std::vector<Rat> rho_check(const RootDatum& D, const VertexSet& X);
Weight rho(const RootDatum& D);
std::vector<int> tau0(const RootDatum& D);

long long weyl_dimension(const RootDatum& D, const Weight& lambda);
// (lambda, lambda + 2 rho)
Rat casimir_scalar(const RootDatum& D, const Weight& lambda);

// q-numbers: [n]_q = (q^{-n} - q^n)/(q^{-1} - q), written as a finite sum so that q = 1 is allowed
template <class T>
T qint(int n, const T& q) {
  if (n < 0) return -qint<T>(-n, q);
  T term(1);
  for (int k = 0; k < n - 1; ++k) term = term * q;
  const T q2 = q * q;
  T sum(0);
  for (int k = 0; k < n; ++k) {
    sum = sum + term;
    term = term / q2;
  }
  return sum;
}

template <class T>
T qfact(int n, const T& q) {
  T r(1);
  for (int k = 1; k <= n; ++k) r = r * qint<T>(k, q);
  return r;
}

template <class T>
T qbinom(int m, int n, const T& q) {
  if (n < 0 || n > m) return T(0);
  return qfact<T>(m, q) / (qfact<T>(n, q) * qfact<T>(m - n, q));
}

inline double qint(int n, double q) { return qint<double>(n, q); }
inline double qfact(int n, double q) { return qfact<double>(n, q); }
inline double qbinom(int m, int n, double q) { return qbinom<double>(m, n, q); }

inline double to_double(const Rat& r) { return double(r.numerator()) / double(r.denominator()); }
std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

}  // namespace qsp

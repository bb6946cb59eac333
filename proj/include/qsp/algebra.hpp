#pragma once
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "qsp/rootsys.hpp"

namespace qsp {

using cplx = std::complex<double>;

// Letter +(r+1) is E_r, -(r+1) is F_r. A monomial is word * K_k.
struct Monomial {
  std::vector<int> word;
  Weight k;
  bool operator<(const Monomial& o) const {
    if (word != o.word) return word < o.word;
    return k < o.k;
  }
  bool operator==(const Monomial& o) const { return word == o.word && k == o.k; }
};

inline int letter_E(int r) { return r + 1; }
inline int letter_F(int r) { return -(r + 1); }
inline int letter_vertex(int l) { return (l > 0 ? l : -l) - 1; }

// Noncommutative polynomial in E_r, F_r, K_w at a fixed numeric q, kept in the normal form
// sum c * (word) * K_k with the Cartan part moved to the right.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(std::shared_ptr<const RootDatum> D, double q) : D_(std::move(D)), q_(q) {}

  static AlgebraElement scalar(std::shared_ptr<const RootDatum> D, double q, cplx c);
  static AlgebraElement E(std::shared_ptr<const RootDatum> D, double q, int r);
  static AlgebraElement F(std::shared_ptr<const RootDatum> D, double q, int r);
  static AlgebraElement K(std::shared_ptr<const RootDatum> D, double q, const Weight& w);

  const RootDatum& datum() const { return *D_; }
  std::shared_ptr<const RootDatum> datum_ptr() const { return D_; }
  double q() const { return q_; }
  const std::map<Monomial, cplx>& terms() const { return terms_; }

  AlgebraElement zero() const { return AlgebraElement(D_, q_); }
  AlgebraElement one() const { return scalar(D_, q_, 1.0); }
  AlgebraElement E(int r) const { return E(D_, q_, r); }
  AlgebraElement F(int r) const { return F(D_, q_, r); }
  AlgebraElement K(const Weight& w) const { return K(D_, q_, w); }
  AlgebraElement Kr(int r, int power = 1) const;

  void add_term(const Monomial& m, cplx c);
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, cplx c) { return a *= c; }
  friend AlgebraElement operator*(cplx c, AlgebraElement a) { return a *= c; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  AlgebraElement pow(int n) const;

  int degree() const;
  bool is_zero(double tol = 0.0) const;
  bool has_letter_sign(int sign) const;
  AlgebraElement pruned(double tol = 1e-15) const;

 private:
  std::shared_ptr<const RootDatum> D_;
  double q_ = 1.0;
  std::map<Monomial, cplx> terms_;
};

// weight of a word in fundamental coordinates
Weight word_weight(const RootDatum& D, const std::vector<int>& word);
// (c, m1 m2) with m1 m2 in normal form
std::pair<cplx, Monomial> monomial_product(const RootDatum& D, double q, const Monomial& a, const Monomial& b);

// Algebra homomorphism given by letter images and a linear map on Cartan weights.
AlgebraElement substitute(const AlgebraElement& x, const std::function<AlgebraElement(int letter)>& img,
                          const std::function<Weight(const Weight&)>& kmap);

// Adjoint action Ad_q(x)(y) = x_(1) y S(x_(2)) for generators
AlgebraElement ad_E(int r, const AlgebraElement& y);
AlgebraElement ad_F(int r, const AlgebraElement& y);
AlgebraElement ad_K(const Weight& w, const AlgebraElement& y);
// q-divided power of ad_E: ad(E_r)^n / [n]_{q_r}!
AlgebraElement ad_E_divided(int r, int n, const AlgebraElement& y);

// Two-leg tensors sum c * m1 (x) m2
class TensorElement {
 public:
  TensorElement() = default;
  TensorElement(std::shared_ptr<const RootDatum> D, double q) : D_(std::move(D)), q_(q) {}
  using Key = std::pair<Monomial, Monomial>;
  const std::map<Key, cplx>& terms() const { return terms_; }
  void add_term(const Monomial& a, const Monomial& b, cplx c);
  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  friend TensorElement operator*(const TensorElement& a, const TensorElement& b);
  const RootDatum& datum() const { return *D_; }
  double q() const { return q_; }
  static TensorElement simple(const AlgebraElement& a, const AlgebraElement& b);

 private:
  std::shared_ptr<const RootDatum> D_;
  double q_ = 1.0;
  std::map<Key, cplx> terms_;
};

// Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^{-1} + 1(x)F, Delta(K) = K(x)K
TensorElement coproduct(const AlgebraElement& x);

}  // namespace qsp

#include "qsp/algebra.hpp"

#include <cmath>

#include "qsp/errors.hpp"

namespace qsp {

Weight word_weight(const RootDatum& D, const std::vector<int>& word) {
  Weight w = zero_weight(D);
  for (int l : word) {
    const int r = letter_vertex(l);
    for (int s = 0; s < D.rank(); ++s) w[s] += Rat(l > 0 ? D.a(s, r) : -D.a(s, r));
  }
  return w;
}

std::pair<cplx, Monomial> monomial_product(const RootDatum& D, double q, const Monomial& a, const Monomial& b) {
  Monomial m;
  m.word = a.word;
  m.word.insert(m.word.end(), b.word.begin(), b.word.end());
  m.k = a.k.empty() ? b.k : (b.k.empty() ? a.k : add(a.k, b.k));
  double c = 1.0;
  if (!a.k.empty() && !b.word.empty()) {
    Rat e = pairing(D, a.k, word_weight(D, b.word));
    if (e != 0) c = std::pow(q, to_double(e));
  }
  return {cplx(c), m};
}

AlgebraElement AlgebraElement::scalar(std::shared_ptr<const RootDatum> D, double q, cplx c) {
  AlgebraElement x(D, q);
  x.add_term({{}, zero_weight(*D)}, c);
  return x;
}

AlgebraElement AlgebraElement::E(std::shared_ptr<const RootDatum> D, double q, int r) {
  AlgebraElement x(D, q);
  x.add_term({{letter_E(r)}, zero_weight(*D)}, 1.0);
  return x;
}

AlgebraElement AlgebraElement::F(std::shared_ptr<const RootDatum> D, double q, int r) {
  AlgebraElement x(D, q);
  x.add_term({{letter_F(r)}, zero_weight(*D)}, 1.0);
  return x;
}

AlgebraElement AlgebraElement::K(std::shared_ptr<const RootDatum> D, double q, const Weight& w) {
  AlgebraElement x(D, q);
  x.add_term({{}, w}, 1.0);
  return x;
}

AlgebraElement AlgebraElement::Kr(int r, int power) const {
  return K(scale(Rat(power), simple_root(*D_, r)));
}

void AlgebraElement::add_term(const Monomial& m, cplx c) {
  if (c == cplx(0)) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == cplx(0)) terms_.erase(it);
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (!D_) {
    D_ = o.D_;
    q_ = o.q_;
  }
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (!D_) {
    D_ = o.D_;
    q_ = o.q_;
  }
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx c) {
  if (c == cplx(0)) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out(a.D_ ? a.D_ : b.D_, a.D_ ? a.q_ : b.q_);
  for (auto& [ma, ca] : a.terms_)
    for (auto& [mb, cb] : b.terms_) {
      auto [f, m] = monomial_product(*out.D_, out.q_, ma, mb);
      out.add_term(m, ca * cb * f);
    }
  return out;
}

AlgebraElement AlgebraElement::pow(int n) const {
  AlgebraElement r = one();
  for (int k = 0; k < n; ++k) r = r * (*this);
  return r;
}

int AlgebraElement::degree() const {
  int d = 0;
  for (auto& kv : terms_) d = std::max(d, int(kv.first.word.size()));
  return d;
}

bool AlgebraElement::is_zero(double tol) const {
  for (auto& kv : terms_)
    if (std::abs(kv.second) > tol) return false;
  return true;
}

bool AlgebraElement::has_letter_sign(int sign) const {
  for (auto& kv : terms_)
    for (int l : kv.first.word)
      if ((l > 0) == (sign > 0)) return true;
  return false;
}

AlgebraElement AlgebraElement::pruned(double tol) const {
  AlgebraElement out(D_, q_);
  double scale = 0;
  for (auto& kv : terms_) scale = std::max(scale, std::abs(kv.second));
  for (auto& kv : terms_)
    if (std::abs(kv.second) > tol * scale) out.terms_.insert(kv);
  return out;
}

AlgebraElement substitute(const AlgebraElement& x, const std::function<AlgebraElement(int)>& img,
                          const std::function<Weight(const Weight&)>& kmap) {
  AlgebraElement out = x.zero();
  std::map<int, AlgebraElement> cache;
  for (auto& [m, c] : x.terms()) {
    AlgebraElement t = x.one();
    for (int l : m.word) {
      auto it = cache.find(l);
      if (it == cache.end()) it = cache.emplace(l, img(l)).first;
      t = t * it->second;
    }
    t = t * x.K(kmap(m.k));
    out += t * c;
  }
  return out;
}

AlgebraElement ad_E(int r, const AlgebraElement& y) {
  // E y - K_r y K_r^{-1} E
  return y.E(r) * y - y.Kr(r) * y * y.Kr(r, -1) * y.E(r);
}

AlgebraElement ad_F(int r, const AlgebraElement& y) {
  // F y K_r - y F K_r
  return y.F(r) * y * y.Kr(r) - y * y.F(r) * y.Kr(r);
}

AlgebraElement ad_K(const Weight& w, const AlgebraElement& y) { return y.K(w) * y * y.K(neg(w)); }

AlgebraElement ad_E_divided(int r, int n, const AlgebraElement& y) {
  AlgebraElement out = y;
  for (int k = 0; k < n; ++k) out = ad_E(r, out);
  const double qr = std::pow(y.q(), y.datum().d(r));
  return out * cplx(1.0 / qfact(n, qr));
}

void TensorElement::add_term(const Monomial& a, const Monomial& b, cplx c) {
  if (c == cplx(0)) return;
  auto [it, fresh] = terms_.emplace(Key{a, b}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == cplx(0)) terms_.erase(it);
  }
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  if (!D_) {
    D_ = o.D_;
    q_ = o.q_;
  }
  for (auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  if (!D_) {
    D_ = o.D_;
    q_ = o.q_;
  }
  for (auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
  return *this;
}

TensorElement operator*(const TensorElement& a, const TensorElement& b) {
  TensorElement out(a.D_ ? a.D_ : b.D_, a.D_ ? a.q_ : b.q_);
  for (auto& [ka, ca] : a.terms_)
    for (auto& [kb, cb] : b.terms_) {
      auto [f1, m1] = monomial_product(*out.D_, out.q_, ka.first, kb.first);
      auto [f2, m2] = monomial_product(*out.D_, out.q_, ka.second, kb.second);
      out.add_term(m1, m2, ca * cb * f1 * f2);
    }
  return out;
}

TensorElement TensorElement::simple(const AlgebraElement& a, const AlgebraElement& b) {
  TensorElement t(a.datum_ptr(), a.q());
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) t.add_term(ma, mb, ca * cb);
  return t;
}

TensorElement coproduct(const AlgebraElement& x) {
  const auto D = x.datum_ptr();
  const double q = x.q();
  const Weight z = zero_weight(*D);
  TensorElement out(D, q);
  std::map<int, TensorElement> images;
  auto image = [&](int l) -> const TensorElement& {
    auto it = images.find(l);
    if (it != images.end()) return it->second;
    const int r = letter_vertex(l);
    const Weight ar = simple_root(*D, r);
    TensorElement t(D, q);
    if (l > 0) {
      t.add_term({{l}, z}, {{}, z}, 1.0);
      t.add_term({{}, ar}, {{l}, z}, 1.0);
    } else {
      t.add_term({{l}, z}, {{}, neg(ar)}, 1.0);
      t.add_term({{}, z}, {{l}, z}, 1.0);
    }
    return images.emplace(l, t).first->second;
  };
  for (auto& [m, c] : x.terms()) {
    TensorElement t(D, q);
    t.add_term({{}, z}, {{}, z}, c);
    for (int l : m.word) t = t * image(l);
    TensorElement kk(D, q);
    kk.add_term({{}, m.k}, {{}, m.k}, 1.0);
    t = t * kk;
    out += t;
  }
  return out;
}

}  // namespace qsp

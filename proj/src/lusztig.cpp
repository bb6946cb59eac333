#include "qsp/lusztig.hpp"

#include <cmath>
#include <map>

#include "qsp/errors.hpp"

namespace qsp {

namespace {

int weyl_length_check(const RootDatum& D, const VertexSet& X, const WeylWord& w) {
  // number of positive roots of X sent to negative roots
  int inv = 0;
  for (auto& b : positive_roots(D, X)) {
    auto c = root_coords(D, weyl_act(D, w, b));
    bool neg = true;
    for (auto& x : c) neg = neg && x <= Rat(0);
    inv += neg;
  }
  return inv;
}

double qr_of(const AlgebraElement& x, int r) { return std::pow(x.q(), x.datum().d(r)); }

AlgebraElement letter_image(const AlgebraElement& proto, int r, int l) {
  const RootDatum& D = proto.datum();
  const int s = letter_vertex(l);
  const double qr = qr_of(proto, r);
  if (s == r) {
    if (l > 0) return proto.F(r) * proto.Kr(r) * cplx(-1.0);
    return proto.Kr(r, -1) * proto.E(r) * cplx(-1.0);
  }
  const int a = -D.a(r, s);
  if (a == 0) return l > 0 ? proto.E(s) : proto.F(s);
  AlgebraElement out = proto.zero();
  for (int m = 0; m <= a; ++m) {
    const int n = a - m;
    const double c = std::pow(-qr, l > 0 ? -m : m) / (qfact(m, qr) * qfact(n, qr));
    if (l > 0)
      out += proto.E(r).pow(n) * proto.E(s) * proto.E(r).pow(m) * cplx(c);
    else
      out += proto.F(r).pow(m) * proto.F(s) * proto.F(r).pow(n) * cplx(c);
  }
  return out;
}

CMat divided_power(const CMat& X, int k, double qr) {
  return mpow(X, k) / qfact(k, qr);
}

}  // namespace

BraidContext make_braid_context(const SatakeDiagram& S, const QParams& qp, const WeylWord& word) {
  BraidContext ctx;
  ctx.datum = std::make_shared<const RootDatum>(S.datum);
  ctx.diagram = S;
  ctx.qp = qp;
  const auto longest = longest_element(S.datum, S.X);
  if (word.empty()) {
    ctx.word = longest;
  } else {
    for (int r : word)
      if (!S.in_X(r)) throw InputError("reduced word uses a vertex outside X");
    if (word.size() != longest.size() || weyl_length_check(S.datum, S.X, word) != int(word.size()))
      throw InputError("word is not a reduced expression of w_X");
    ctx.word = word;
  }
  for (size_t k = 0; k < ctx.word.size(); ++k) {
    WeylWord prefix(ctx.word.begin(), ctx.word.begin() + k);
    ctx.betas.push_back(weyl_act(S.datum, prefix, simple_root(S.datum, ctx.word[k])));
  }
  return ctx;
}

AlgebraElement braid_on_algebra(int r, const AlgebraElement& x) {
  const RootDatum& D = x.datum();
  return substitute(
      x, [&](int l) { return letter_image(x, r, l); },
      [&](const Weight& k) { return simple_reflection(D, r, k); });
}

AlgebraElement braid_word_on_algebra(const WeylWord& w, const AlgebraElement& x) {
  AlgebraElement y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = braid_on_algebra(*it, y).pruned(1e-14);
  return y;
}

AlgebraElement braid_wX_on_algebra(const BraidContext& ctx, const AlgebraElement& x) {
  return braid_word_on_algebra(ctx.word, x);
}

CMat braid_on_module(const WeightModule& M, int r) {
  const int N = M.dim();
  const double qr = M.qp.qr(M.D(), r);
  int L = 0;
  std::map<int, std::vector<int>> cols;
  for (int j = 0; j < N; ++j) {
    L = std::max(L, std::abs(M.weights[j][r]));
    cols[M.weights[j][r]].push_back(j);
  }
  std::vector<CMat> Ep, Fp;
  for (int k = 0; k <= 2 * L; ++k) {
    Ep.push_back(divided_power(M.E[r], k, qr));
    Fp.push_back(divided_power(M.F[r], k, qr));
  }
  CMat T = CMat::Zero(N, N);
  for (auto& [m, idx] : cols) {
    CMat P = CMat::Zero(N, idx.size());
    for (size_t k = 0; k < idx.size(); ++k) P(idx[k], k) = 1.0;
    CMat out = CMat::Zero(N, idx.size());
    for (int c = 0; c <= L; ++c) {
      CMat Xc = Ep[c] * P;
      if (Xc.norm() == 0) continue;
      for (int a = 0; a <= L; ++a) {
        const int b = m + a + c;
        if (b < 0 || b > 2 * L) continue;
        CMat Y = Fp[b] * Xc;
        if (Y.norm() == 0) continue;
        const double coef = (b % 2 ? -1.0 : 1.0) * std::pow(qr, b - a * c);
        out += coef * (Ep[a] * Y);
      }
    }
    for (size_t k = 0; k < idx.size(); ++k) T.col(idx[k]) = out.col(k);
  }
  return T;
}

CMat braid_word_on_module(const WeightModule& M, const WeylWord& w) {
  CMat T = CMat::Identity(M.dim(), M.dim());
  for (int r : w) T = T * braid_on_module(M, r);
  return T;
}

AlgebraElement omega_auto(const AlgebraElement& x) {
  return substitute(
      x,
      [&](int l) {
        const int r = letter_vertex(l);
        return (l > 0 ? x.F(r) : x.E(r)) * cplx(-1.0);
      },
      [](const Weight& k) { return neg(k); });
}

AlgebraElement psi_auto(const AlgebraElement& x) {
  return substitute(
      x,
      [&](int l) {
        const int r = letter_vertex(l);
        return l > 0 ? x.E(r) * x.Kr(r) : x.Kr(r, -1) * x.F(r);
      },
      [](const Weight& k) { return k; });
}

AlgebraElement tau_auto(const AlgebraElement& x, const Perm& tau) {
  return substitute(
      x,
      [&](int l) {
        const int r = tau.at(letter_vertex(l));
        return l > 0 ? x.E(r) : x.F(r);
      },
      [&](const Weight& k) { return permute_weight(tau, k); });
}

AlgebraElement ad_s_auto(const AlgebraElement& x, const std::vector<cplx>& z) {
  return substitute(
      x,
      [&](int l) {
        const int r = letter_vertex(l);
        return l > 0 ? x.E(r) * z.at(r) : x.F(r) * (1.0 / z.at(r));
      },
      [](const Weight& k) { return k; });
}

std::vector<int> string_lengths(const BraidContext& ctx, const Weight& varpi) {
  std::vector<int> n;
  for (auto& b : ctx.betas) {
    Rat c = copairing(*ctx.datum, b, varpi);
    if (c.denominator() != 1 || c < Rat(0)) throw InputError("weight is not dominant integral for the X-subsystem");
    n.push_back(int(c.numerator()));
  }
  return n;
}

std::pair<AlgebraElement, AlgebraElement> z_elements(const BraidContext& ctx, const Weight& varpi) {
  const auto n = string_lengths(ctx, varpi);
  const double q = ctx.qp.q;
  AlgebraElement zm = AlgebraElement::scalar(ctx.datum, q, 1.0), zp = zm;
  // leftmost factor carries r_M
  for (size_t k = 0; k < n.size(); ++k) {
    const int r = ctx.word[k];
    zm = zm.F(r).pow(n[k]) * zm;
    zp = zp.E(r).pow(n[k]) * zp;
  }
  return {zm, zp};
}

std::pair<double, double> e_d_constants(const BraidContext& ctx, const Weight& varpi) {
  const auto n = string_lengths(ctx, varpi);
  double p = 1;
  for (size_t k = 0; k < n.size(); ++k) {
    const double f = qfact(n[k], ctx.qp.qr(*ctx.datum, ctx.word[k]));
    p *= f * f;
  }
  return {p, p};
}

double a_plus(const BraidContext& ctx, int r) {
  if (ctx.diagram.in_X(r)) throw InputError("a_plus needs a vertex outside X");
  const Weight w = weyl_act(*ctx.datum, ctx.word, simple_root(*ctx.datum, r));
  return 1.0 / std::sqrt(e_d_constants(ctx, w).second);
}

AlgebraElement ad_z_plus(const BraidContext& ctx, int r) {
  const Weight w = weyl_act(*ctx.datum, ctx.word, simple_root(*ctx.datum, r));
  const auto n = string_lengths(ctx, w);
  AlgebraElement y = AlgebraElement::E(ctx.datum, ctx.qp.q, r);
  for (size_t k = 0; k < n.size(); ++k)
    for (int j = 0; j < n[k]; ++j) y = ad_E(ctx.word[k], y);
  return y;
}

double AppBResiduals::max() const {
  return std::max({t_minus, t_minus_inv, t_plus, t_plus_inv, std::abs(e_module - e_closed) / e_closed,
                   std::abs(d_module - e_closed) / e_closed});
}

AppBResiduals verify_appB(const BraidContext& ctx, const Weight& varpi, const WeightModule& M) {
  const RootDatum& D = *ctx.datum;
  if (M.dim() == 0 || to_weight(M.weights[0]) != varpi)
    throw InputError("module does not have a highest weight vector of the requested weight first");
  const auto n = string_lengths(ctx, varpi);
  auto [zm, zp] = z_elements(ctx, varpi);
  double fact = 1;
  int sign = 1;
  for (size_t k = 0; k < n.size(); ++k) {
    fact *= qfact(n[k], ctx.qp.qr(D, ctx.word[k]));
    if (n[k] % 2) sign = -sign;
  }
  Weight rhoX = zero_weight(D);
  for (auto& b : positive_roots(D, ctx.diagram.X)) rhoX = add(rhoX, b);
  const double qrho = ctx.qp.pow(pairing(D, varpi, rhoX));  // q^{2(varpi, rho_X)}

  const CMat T = braid_word_on_module(M, ctx.word);
  const CMat Tinv = T.partialPivLu().inverse();
  const CMat Zm = act(M, zm), Zp = act(M, zp);
  CVec xi = CVec::Zero(M.dim());
  xi[0] = 1.0;
  const CVec Txi = T * xi;
  auto rel = [](const CVec& a, const CVec& b) { return (a - b).norm() / std::max(a.norm(), 1e-300); };

  AppBResiduals R;
  R.t_minus = rel(Txi, qrho * sign / fact * (Zm * xi));
  R.t_minus_inv = rel(Tinv * xi, (Zm * xi) / fact);
  R.t_plus = rel(T * Txi, (Zp * Txi) / fact);
  R.t_plus_inv = rel(Tinv * Txi, sign / (qrho * fact) * (Zp * Txi));
  const CVec e = Zp * (Zm * xi);
  R.e_module = e[0].real();
  const CVec d = Zm * (Zp * Txi);
  const cplx dd = Txi.dot(d) / Txi.squaredNorm();
  R.d_module = dd.real();
  R.e_closed = e_d_constants(ctx, varpi).first;
  // e and d must be real multiples of their vectors
  R.t_minus = std::max(R.t_minus, rel(e, e[0] * xi));
  R.t_minus = std::max(R.t_minus, rel(d, dd * Txi));
  return R;
}

APlusCheck a_plus_on_module(const BraidContext& ctx, int r, const WeightModule& M) {
  const CMat T = braid_word_on_module(M, ctx.word);
  const CMat lhs = T * M.E[r] * T.partialPivLu().inverse();
  const CMat rhs = act(M, ad_z_plus(ctx, r));
  APlusCheck c;
  const double nn = rhs.squaredNorm();
  if (nn == 0) throw NumericalError("Ad(Z^+)(E_r) vanishes on the module; module not faithful enough");
  const cplx a = (rhs.adjoint() * lhs).trace() / nn;
  c.ratio = a.real();
  c.residual = (lhs - a * rhs).norm() / std::max(lhs.norm(), 1e-300) + std::abs(a.imag());
  c.closed = a_plus(ctx, r);
  return c;
}

}  // namespace qsp

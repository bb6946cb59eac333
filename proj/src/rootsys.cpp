#include "qsp/rootsys.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qsp/errors.hpp"

namespace qsp {

namespace {

std::vector<int> component_cartan(char t, int n, std::vector<int>& d) {
  std::vector<int> A(n * n, 0);
  auto at = [&](int r, int s) -> int& { return A[r * n + s]; };
  for (int r = 0; r < n; ++r) at(r, r) = 2;
  d.assign(n, 1);
  auto chain = [&](int len) {
    for (int r = 0; r + 1 < len; ++r) at(r, r + 1) = at(r + 1, r) = -1;
  };
  switch (t) {
    case 'A':
      chain(n);
      break;
    case 'B':
      chain(n);
      at(n - 1, n - 2) = -2;
      for (int r = 0; r < n - 1; ++r) d[r] = 2;
      break;
    case 'C':
      chain(n);
      at(n - 2, n - 1) = -2;
      d[n - 1] = 2;
      break;
    case 'D':
      chain(n - 1);
      at(n - 2, n - 1) = at(n - 1, n - 2) = 0;
      at(n - 3, n - 1) = at(n - 1, n - 3) = -1;
      break;
    case 'E': {
      const int edges[][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
      for (auto& e : edges)
        if (e[0] < n && e[1] < n) at(e[0], e[1]) = at(e[1], e[0]) = -1;
      break;
    }
    case 'F':
      chain(4);
      at(1, 2) = -1;
      at(2, 1) = -2;
      d = {2, 2, 1, 1};
      break;
    case 'G':
      at(0, 1) = -3;
      at(1, 0) = -1;
      d = {1, 3};
      break;
    default:
      break;
  }
  return A;
}

void check_type(char t, int n) {
  bool ok = false;
  switch (t) {
    case 'A': ok = n >= 1 && n <= 8; break;
    case 'B': ok = n >= 2 && n <= 8; break;
    case 'C': ok = n >= 2 && n <= 8; break;
    case 'D': ok = n >= 3 && n <= 8; break;
    case 'E': ok = n >= 6 && n <= 8; break;
    case 'F': ok = n == 4; break;
    case 'G': ok = n == 2; break;
    default:
      throw InputError(std::string("unknown Cartan type '") + t + "'");
  }
  if (!ok) throw InputError(std::string("invalid rank ") + std::to_string(n) + " for type " + t);
}

// exact inverse by Gauss-Jordan over the rationals
std::vector<Rat> rational_inverse(const std::vector<int>& A, int n) {
  std::vector<Rat> M(n * 2 * n, Rat(0));
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) M[r * 2 * n + s] = A[r * n + s];
    M[r * 2 * n + n + r] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (M[p * 2 * n + c] == 0) ++p;
    if (p != c)
      for (int k = 0; k < 2 * n; ++k) std::swap(M[p * 2 * n + k], M[c * 2 * n + k]);
    Rat piv = M[c * 2 * n + c];
    for (int k = 0; k < 2 * n; ++k) M[c * 2 * n + k] /= piv;
    for (int r = 0; r < n; ++r) {
      if (r == c || M[r * 2 * n + c] == 0) continue;
      Rat f = M[r * 2 * n + c];
      for (int k = 0; k < 2 * n; ++k) M[r * 2 * n + k] -= f * M[c * 2 * n + k];
    }
  }
  std::vector<Rat> inv(n * n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) inv[r * n + s] = M[r * 2 * n + n + s];
  return inv;
}

long long int_det(const std::vector<int>& A, int n) {
  std::vector<Rat> M(A.begin(), A.end());
  Rat det = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && M[p * n + c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(M[p * n + k], M[c * n + k]);
      det = -det;
    }
    det *= M[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      Rat f = M[r * n + c] / M[c * n + c];
      for (int k = c; k < n; ++k) M[r * n + k] -= f * M[c * n + k];
    }
  }
  return det.numerator();
}

}  // namespace

RootDatum RootDatum::build(const std::vector<std::pair<char, int>>& spec) {
  if (spec.empty()) throw InputError("empty type specification");
  RootDatum D;
  int n = 0;
  for (auto& [t, k] : spec) {
    check_type(t, k);
    n += k;
  }
  D.n_ = n;
  D.A_.assign(n * n, 0);
  D.d_.assign(n, 1);
  int off = 0;
  long long dA = 1;
  for (auto& [t, k] : spec) {
    std::vector<int> d;
    auto A = component_cartan(t, k, d);
    for (int r = 0; r < k; ++r) {
      D.d_[off + r] = d[r];
      for (int s = 0; s < k; ++s) D.A_[(off + r) * n + off + s] = A[r * k + s];
    }
    long long det = int_det(A, k);
    dA = std::lcm(dA, det);
    D.comps_.push_back({t, k, off});
    off += k;
  }
  D.dA_ = dA;
  D.Ainv_ = rational_inverse(D.A_, n);
  return D;
}

std::string RootDatum::label() const {
  std::string s;
  for (size_t i = 0; i < comps_.size(); ++i) {
    if (i) s += "x";
    s += comps_[i].type;
    s += std::to_string(comps_[i].rank);
  }
  return s;
}

int RootDatum::component_of(int r) const {
  for (size_t i = 0; i < comps_.size(); ++i)
    if (r >= comps_[i].offset && r < comps_[i].offset + comps_[i].rank) return int(i);
  throw InputError("vertex out of range");
}

RootDatum build_root_datum(const std::vector<std::pair<char, int>>& spec) { return RootDatum::build(spec); }

RootDatum parse_root_datum(const std::string& label) {
  std::vector<std::pair<char, int>> spec;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.size() < 2) throw InputError("cannot parse algebra '" + label + "'");
    char t = char(std::toupper(static_cast<unsigned char>(part[0])));
    int k = 0;
    try {
      k = std::stoi(part.substr(1));
    } catch (...) {
      throw InputError("cannot parse algebra '" + label + "'");
    }
    spec.emplace_back(t, k);
  }
  return RootDatum::build(spec);
}

Weight zero_weight(const RootDatum& D) { return Weight(D.rank(), Rat(0)); }

Weight fundamental(const RootDatum& D, int r) {
  Weight w = zero_weight(D);
  w.at(r) = 1;
  return w;
}

Weight simple_root(const RootDatum& D, int r) {
  Weight w(D.rank());
  for (int s = 0; s < D.rank(); ++s) w[s] = D.a(s, r);
  return w;
}

Weight to_weight(const IWeight& m) { return Weight(m.begin(), m.end()); }

IWeight to_iweight(const Weight& w) {
  IWeight m(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i].denominator() != 1) throw InputError("weight is not integral");
    m[i] = int(w[i].numerator());
  }
  return m;
}

bool is_integral(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](const Rat& x) { return x.denominator() == 1; });
}

bool is_dominant(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](const Rat& x) { return x >= 0; });
}

Weight add(const Weight& a, const Weight& b) {
  Weight c(a);
  for (size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}
Weight sub(const Weight& a, const Weight& b) {
  Weight c(a);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}
Weight scale(const Rat& k, const Weight& a) {
  Weight c(a);
  for (auto& x : c) x *= k;
  return c;
}
Weight neg(const Weight& a) { return scale(Rat(-1), a); }

std::vector<Rat> root_coords(const RootDatum& D, const Weight& mu) {
  const int n = D.rank();
  std::vector<Rat> c(n, Rat(0));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) c[r] += D.ainv(r, s) * mu[s];
  return c;
}

Weight from_root_coords(const RootDatum& D, const std::vector<Rat>& c) {
  const int n = D.rank();
  Weight m(n, Rat(0));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) m[r] += Rat(D.a(r, s)) * c[s];
  return m;
}

Rat pairing(const RootDatum& D, const Weight& mu, const Weight& nu) {
  auto c = root_coords(D, nu);
  Rat p = 0;
  for (int r = 0; r < D.rank(); ++r) p += mu[r] * Rat(D.d(r)) * c[r];
  return p;
}

double pairing(const RootDatum& D, const IWeight& mu, const IWeight& nu) {
  return to_double(pairing(D, to_weight(mu), to_weight(nu)));
}

Rat copairing(const RootDatum& D, const Weight& beta, const Weight& mu) {
  return Rat(2) * pairing(D, beta, mu) / pairing(D, beta, beta);
}

Weight simple_reflection(const RootDatum& D, int r, const Weight& mu) {
  Weight out(mu);
  const Rat m = mu[r];
  for (int s = 0; s < D.rank(); ++s) out[s] -= m * Rat(D.a(s, r));
  return out;
}

Weight weyl_act(const RootDatum& D, const WeylWord& w, const Weight& mu) {
  Weight out(mu);
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = simple_reflection(D, *it, out);
  return out;
}

VertexSet all_vertices(const RootDatum& D) {
  VertexSet I(D.rank());
  std::iota(I.begin(), I.end(), 0);
  return I;
}

WeylWord longest_element(const RootDatum& D, const VertexSet& subset) {
  Weight mu = zero_weight(D);
  for (int r : subset) {
    if (r < 0 || r >= D.rank()) throw InputError("vertex out of range");
    mu[r] = 1;
  }
  WeylWord word;
  for (;;) {
    int pick = -1;
    for (int r : subset)
      if (mu[r] > 0 && (pick < 0 || r < pick)) pick = r;
    if (pick < 0) break;
    word.push_back(pick);
    mu = simple_reflection(D, pick, mu);
  }
  return word;
}

std::vector<Weight> positive_roots(const RootDatum& D, const VertexSet& subset) {
  WeylWord w = longest_element(D, subset);
  std::vector<Weight> roots;
  for (size_t k = 0; k < w.size(); ++k) {
    WeylWord prefix(w.begin(), w.begin() + k);
    roots.push_back(weyl_act(D, prefix, simple_root(D, w[k])));
  }
  return roots;
}

std::vector<Rat> rho_check(const RootDatum& D, const VertexSet& X) {
  std::vector<Rat> out(D.rank(), Rat(0));
  for (const auto& beta : positive_roots(D, X))
    for (int r = 0; r < D.rank(); ++r) out[r] += copairing(D, beta, simple_root(D, r)) / Rat(2);
  return out;
}

Weight rho(const RootDatum& D) { return Weight(D.rank(), Rat(1)); }

std::vector<int> tau0(const RootDatum& D) {
  WeylWord w0 = longest_element(D, all_vertices(D));
  std::vector<int> t(D.rank(), -1);
  for (int r = 0; r < D.rank(); ++r) {
    Weight img = neg(weyl_act(D, w0, simple_root(D, r)));
    for (int s = 0; s < D.rank(); ++s)
      if (img == simple_root(D, s)) t[r] = s;
    if (t[r] < 0) throw InternalError("-w0 does not permute simple roots");
  }
  return t;
}

long long weyl_dimension(const RootDatum& D, const Weight& lambda) {
  Weight lr = add(lambda, rho(D));
  Weight rh = rho(D);
  Rat dim = 1;
  for (const auto& beta : positive_roots(D, all_vertices(D))) dim *= pairing(D, lr, beta) / pairing(D, rh, beta);
  if (dim.denominator() != 1) throw InternalError("non-integral Weyl dimension");
  return dim.numerator();
}

Rat casimir_scalar(const RootDatum& D, const Weight& lambda) {
  return pairing(D, lambda, add(lambda, scale(Rat(2), rho(D))));
}

std::string rat_to_string(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rat rat_from_string(const std::string& s) {
  auto pos = s.find('/');
  try {
    if (pos == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, pos)), std::stoll(s.substr(pos + 1)));
  } catch (const std::exception&) {
    throw InputError("cannot parse rational '" + s + "'");
  }
}

}  // namespace qsp

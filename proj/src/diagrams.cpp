#include "qsp/diagrams.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "qsp/errors.hpp"

namespace qsp {

namespace {

Phase normalize(long long k, long long n) {
  long long g = std::gcd(k < 0 ? -k : k, n);
  if (g == 0) g = 1;
  k /= g;
  n /= g;
  k %= n;
  if (k < 0) k += n;
  return {int(k), int(n)};
}

bool contains(const VertexSet& S, int r) { return std::find(S.begin(), S.end(), r) != S.end(); }

void check_vertices(const RootDatum& D, const VertexSet& S) {
  for (int r : S)
    if (r < 0 || r >= D.rank()) throw InputError("vertex " + std::to_string(r + 1) + " out of range");
}

void check_perm(const RootDatum& D, const Perm& p, const char* what) {
  if (int(p.size()) != D.rank()) throw InputError(std::string(what) + " has wrong length");
  std::vector<int> seen(p.size(), 0);
  for (int x : p) {
    if (x < 0 || x >= D.rank() || seen[x]++) throw InputError(std::string(what) + " is not a permutation");
  }
  if (!is_involution(p)) throw InputError(std::string(what) + " is not involutive");
  if (!is_diagram_automorphism(D, p)) throw InputError(std::string(what) + " is not a diagram automorphism");
}

int two_rho_pairing(const std::vector<Rat>& rc, int r) {
  Rat m = Rat(2) * rc[r];
  if (m.denominator() != 1) throw InternalError("2(alpha_r, rho_X^vee) is not integral");
  return int(m.numerator());
}

}  // namespace

std::complex<double> Phase::value() const {
  const double a = 2.0 * M_PI * double(k) / double(n);
  // exact values at quarter turns keep goldens clean
  if ((4 * k) % n == 0) {
    switch (((4 * k) / n) % 4) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }
  return {std::cos(a), std::sin(a)};
}

Phase Phase::operator*(const Phase& o) const {
  long long N = std::lcm<long long>(n, o.n);
  return normalize(k * (N / n) + o.k * (N / o.n), N);
}

bool Phase::operator==(const Phase& o) const {
  Phase a = normalize(k, n), b = normalize(o.k, o.n);
  return a.k == b.k && a.n == b.n;
}

bool SatakeDiagram::in_X(int r) const { return contains(X, r); }

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

bool is_diagram_automorphism(const RootDatum& D, const Perm& p) {
  const int n = D.rank();
  if (int(p.size()) != n) return false;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      if (D.a(p[r], p[s]) != D.a(r, s)) return false;
  return true;
}

bool is_involution(const Perm& p) {
  for (size_t r = 0; r < p.size(); ++r)
    if (p[p[r]] != int(r)) return false;
  return true;
}

std::vector<Perm> diagram_involutions(const RootDatum& D) {
  const int n = D.rank();
  std::vector<Perm> out;
  Perm p(n, -1);
  std::vector<bool> used(n, false);
  // backtracking: assign p[r] in order, checking the Cartan entries against earlier vertices
  auto rec = [&](auto&& self, int r) -> void {
    if (r == n) {
      if (is_involution(p)) out.push_back(p);
      return;
    }
    for (int s = 0; s < n; ++s) {
      if (used[s] || D.a(s, s) != D.a(r, r)) continue;
      bool ok = true;
      for (int u = 0; u < r && ok; ++u)
        ok = D.a(s, p[u]) == D.a(r, u) && D.a(p[u], s) == D.a(u, r);
      if (!ok) continue;
      if (s < r && p[s] != r) continue;
      used[s] = true;
      p[r] = s;
      self(self, r + 1);
      used[s] = false;
      p[r] = -1;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

Weight permute_weight(const Perm& p, const Weight& mu) {
  Weight out(mu.size());
  for (size_t r = 0; r < mu.size(); ++r) out[p[r]] = mu[r];
  return out;
}

AdmissibilityResult check_admissible(const RootDatum& D, const VertexSet& X, const Perm& tau) {
  check_vertices(D, X);
  check_perm(D, tau, "tau");
  AdmissibilityResult res;
  if (int(X.size()) == D.rank()) res.violations.push_back("X equals the full vertex set");
  for (int r : X)
    if (!contains(X, tau[r])) res.violations.push_back("tau does not preserve X at vertex " + std::to_string(r + 1));
  if (res.violations.empty()) {
    WeylWord wX = longest_element(D, X);
    for (int r : X) {
      Weight img = neg(weyl_act(D, wX, simple_root(D, r)));
      if (img != simple_root(D, tau[r]))
        res.violations.push_back("tau differs from -w_X at vertex " + std::to_string(r + 1));
    }
  }
  auto rc = rho_check(D, X);
  for (int r = 0; r < D.rank(); ++r)
    if (tau[r] == r && !contains(X, r) && rc[r].denominator() != 1)
      res.violations.push_back("(alpha_" + std::to_string(r + 1) + ", rho_X^vee) is not an integer");
  res.ok = res.violations.empty();
  return res;
}

std::vector<Phase> choose_z(const RootDatum& D, const VertexSet& X, const Perm& tau) {
  auto rc = rho_check(D, X);
  std::vector<Phase> z(D.rank(), Phase{0, 1});
  for (int r = 0; r < D.rank(); ++r) {
    const int t = tau[r];
    if (t == r || contains(X, r) || r > t) continue;
    const int m = two_rho_pairing(rc, r);
    z[r] = normalize(-m, 4);
    z[t] = z[r] * normalize(m, 2);
  }
  return z;
}

SatakeDiagram make_satake(const RootDatum& D, VertexSet X, const Perm& tau) {
  std::sort(X.begin(), X.end());
  X.erase(std::unique(X.begin(), X.end()), X.end());
  auto res = check_admissible(D, X, tau);
  if (!res.ok) {
    std::string msg = "pair is not admissible:";
    for (auto& v : res.violations) msg += " " + v + ";";
    throw InputError(msg);
  }
  SatakeDiagram S{D, X, tau, choose_z(D, X, tau)};
  return S;
}

bool z_condition_holds(const SatakeDiagram& S) {
  auto rc = rho_check(S.datum, S.X);
  for (int r = 0; r < S.datum.rank(); ++r) {
    if ((S.in_X(r) || S.tau[r] == r) && !(S.z[r] == Phase{0, 1})) return false;
    if (S.in_X(r)) continue;
    Phase lhs = S.z[r] * S.z[S.tau[r]].conj();
    if (!(lhs == normalize(two_rho_pairing(rc, r), 2))) return false;
  }
  return true;
}

Weight theta_action(const SatakeDiagram& S, const Weight& mu) {
  return neg(weyl_act(S.datum, longest_element(S.datum, S.X), permute_weight(S.tau, mu)));
}

std::vector<SatakeDiagram> enumerate_admissible(const RootDatum& D) {
  const int n = D.rank();
  std::vector<SatakeDiagram> out;
  auto invs = diagram_involutions(D);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    VertexSet X;
    for (int r = 0; r < n; ++r)
      if (mask & (1u << r)) X.push_back(r);
    for (const auto& tau : invs)
      if (check_admissible(D, X, tau).ok) out.push_back(SatakeDiagram{D, X, tau, choose_z(D, X, tau)});
  }
  return out;
}

bool check_vogan(const RootDatum& D, const VertexSet& Y, const Perm& mu) {
  check_vertices(D, Y);
  if (int(mu.size()) != D.rank() || !is_involution(mu) || !is_diagram_automorphism(D, mu)) return false;
  for (int r : Y)
    if (mu[r] != r) return false;
  if (Y.empty() && mu == identity_perm(D.rank())) return false;
  return true;
}

bool is_standard_vogan(const RootDatum& D, const VertexSet& Y, const Perm& mu) {
  if (!check_vogan(D, Y, mu)) return false;
  std::vector<int> marks(D.components().size(), 0);
  for (int r : Y)
    if (++marks[D.component_of(r)] > 1) return false;
  for (int r : Y) {
    const auto& c = D.components()[D.component_of(r)];
    bool mu_trivial = true;
    for (int s = c.offset; s < c.offset + c.rank; ++s) mu_trivial = mu_trivial && mu[s] == s;
    if (!mu_trivial) continue;
    for (int s = 0; s < D.rank(); ++s) {
      Weight ws = fundamental(D, s);
      if (pairing(D, sub(fundamental(D, r), ws), ws) > 0) return false;
    }
  }
  return true;
}

std::vector<int> vogan_signs(const VoganDiagram& V) {
  std::vector<int> eps(V.datum.rank(), 1);
  for (int r : V.Y) eps.at(r) = -1;
  return eps;
}

Weight vogan_N(const VoganDiagram& V, const Weight& w) { return permute_weight(V.mu, w); }

VertexSet complement_X(const SatakeDiagram& S) {
  VertexSet out;
  for (int r = 0; r < S.datum.rank(); ++r)
    if (!S.in_X(r)) out.push_back(r);
  return out;
}

VertexSet istar(const SatakeDiagram& S) {
  VertexSet out;
  for (int r : complement_X(S))
    if (r <= S.tau[r]) out.push_back(r);
  return out;
}

HermitianSets classify_sets(const SatakeDiagram& S) {
  const RootDatum& D = S.datum;
  HermitianSets H;
  for (int r : complement_X(S)) {
    Weight ar = simple_root(D, r);
    if (S.tau[r] != r && pairing(D, ar, theta_action(S, ar)) == 0) H.I_C.push_back(r);
    bool perp = true;
    for (int s : S.X) perp = perp && D.a(s, r) == 0;
    if (perp) H.J.push_back(r);
    if (S.tau[r] == r && perp) H.I_ns.push_back(r);
  }
  for (int r : H.I_ns) {
    bool even = true;
    for (int s : H.I_ns) even = even && D.a(s, r) % 2 == 0;
    if (even) H.I_S.push_back(r);
  }
  return H;
}

HermitianClass hermitian_type(const SatakeDiagram& S) {
  const RootDatum& D = S.datum;
  if (D.components().size() != 1) throw InputError("hermitian_type needs an irreducible diagram");
  auto H = classify_sets(S);
  HermitianClass C;
  std::vector<int> orbits;
  for (int r : complement_X(S))
    if (S.tau[r] != r && r < S.tau[r] && !contains(H.I_C, r)) orbits.push_back(r);
  if (!H.I_S.empty() && !orbits.empty()) throw InternalError("diagram is both S-type and C-type");
  if (!H.I_S.empty()) {
    C.kind = HermitianKind::SType;
    C.distinguished = H.I_S.front();
    C.orbit = {H.I_S.front()};
  } else if (!orbits.empty()) {
    C.kind = HermitianKind::CType;
    const int r = orbits.front();
    const int t = S.tau[r];
    const bool larger = D.components().front().type == 'D';
    C.distinguished = larger ? t : r;
    C.orbit = larger ? std::vector<int>{t, r} : std::vector<int>{r, t};
  }
  return C;
}

std::string to_string(HermitianKind k) {
  switch (k) {
    case HermitianKind::SType: return "S-type";
    case HermitianKind::CType: return "C-type";
    default: return "non-Hermitian";
  }
}

}  // namespace qsp

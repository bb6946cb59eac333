#pragma once
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qsp/rootsys.hpp"

namespace qsp {

using Perm = std::vector<int>;

// exp(2 pi i k / n)
struct Phase {
  int k = 0;
  int n = 1;
  std::complex<double> value() const;
  Phase conj() const { return {(n - k) % n, n}; }
  Phase operator*(const Phase& o) const;
  bool operator==(const Phase& o) const;
};

struct SatakeDiagram {
  RootDatum datum;
  VertexSet X;
  Perm tau;
  std::vector<Phase> z;

  bool in_X(int r) const;
  std::complex<double> zc(int r) const { return z.at(r).value(); }
};

struct VoganDiagram {
  RootDatum datum;
  VertexSet Y;
  Perm mu;
};

enum class HermitianKind { NonHermitian, SType, CType };

struct HermitianClass {
  HermitianKind kind = HermitianKind::NonHermitian;
  std::optional<int> distinguished;
  std::vector<int> orbit;  // {p} for S-type, {p, tau(p)} for C-type
};

struct HermitianSets {
  VertexSet I_C, I_ns, I_S, J;
};

struct AdmissibilityResult {
  bool ok = false;
  std::vector<std::string> violations;
};

Perm identity_perm(int n);
bool is_diagram_automorphism(const RootDatum& D, const Perm& p);
bool is_involution(const Perm& p);
std::vector<Perm> diagram_involutions(const RootDatum& D);

// tau acting on fundamental-weight coordinates
Weight permute_weight(const Perm& p, const Weight& mu);

AdmissibilityResult check_admissible(const RootDatum& D, const VertexSet& X, const Perm& tau);
std::vector<Phase> choose_z(const RootDatum& D, const VertexSet& X, const Perm& tau);
// Validates and attaches canonical phases. Throws InputError on a non-admissible pair.
SatakeDiagram make_satake(const RootDatum& D, VertexSet X, const Perm& tau);
// Checks z_r conj(z_{tau r}) = (-1)^{2(alpha_r, rho_X^vee)} and z = 1 on X, exactly.
bool z_condition_holds(const SatakeDiagram& S);

Weight theta_action(const SatakeDiagram& S, const Weight& mu);
std::vector<SatakeDiagram> enumerate_admissible(const RootDatum& D);

bool check_vogan(const RootDatum& D, const VertexSet& Y, const Perm& mu);
bool is_standard_vogan(const RootDatum& D, const VertexSet& Y, const Perm& mu);
// epsilon_r = -1 iff r in Y
std::vector<int> vogan_signs(const VoganDiagram& V);
Weight vogan_N(const VoganDiagram& V, const Weight& w);

HermitianSets classify_sets(const SatakeDiagram& S);
HermitianClass hermitian_type(const SatakeDiagram& S);
std::string to_string(HermitianKind k);

// tau-orbit representatives in I \ X, smaller index of each orbit
VertexSet istar(const SatakeDiagram& S);
VertexSet complement_X(const SatakeDiagram& S);

}  // namespace qsp

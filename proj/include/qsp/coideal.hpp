#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsp/diagrams.hpp"
#include "qsp/lusztig.hpp"
#include "qsp/uqrep.hpp"

namespace qsp {

// Indexed by vertex; entries on X are ignored and kept at 0.
struct CoidealParams {
  std::vector<cplx> c, s;
};

struct CoidealGenerators {
  std::vector<int> vertices;        // r in I \ X, in increasing order
  std::vector<AlgebraElement> B;    // B_r, same order as vertices
  std::vector<AlgebraElement> X;    // E_s, F_s, K_s, K_s^{-1} for s in X
  std::vector<Weight> k_basis;      // basis of P^Theta
  std::vector<AlgebraElement> K;    // K_w, K_w^{-1} for w in k_basis
  std::vector<AlgebraElement> all() const;
};

// theta_q = Ad(s) o T_{w_X} o psi o tau o omega
AlgebraElement theta_q(const BraidContext& ctx, const AlgebraElement& x);
std::vector<Weight> p_theta_basis(const SatakeDiagram& S);

// Checks the C_q / S_q shape of the parameters (c_r != 0, c_r = c_{tau r} on I_C, s_r = 0 off I_S).
void check_param_shape(const SatakeDiagram& S, const CoidealParams& p);
std::vector<AlgebraElement> b_generators(const BraidContext& ctx, const CoidealParams& p);
CoidealGenerators coideal_generators(const BraidContext& ctx, const CoidealParams& p);

// (Theta(alpha_r) - alpha_r, alpha_{tau r}), the exponent of c_{tau r} c_r for *-invariance
Rat eqc_exponent(const SatakeDiagram& S, int r);
CoidealParams no_parameter(const SatakeDiagram& S, const QParams& qp);

struct StarValidation {
  bool ok = true;
  std::vector<std::string> violations;
};
StarValidation validate_star(const SatakeDiagram& S, const CoidealParams& p, const QParams& qp);

struct MembershipResult {
  std::vector<double> residual;  // per B_r, relative to |pi(B_r)|
  double max = 0;
  int span_dim = 0;
  int cap = 0;               // dimension of the image of U_q(g)
  bool inconclusive = false; // span filled the whole image
};
// Distance of pi(B_r)^* from the span of coideal monomials of degree <= degree on the direct sum of modules.
MembershipResult star_membership(const BraidContext& ctx, const CoidealParams& p, const std::vector<WeightModule>& modules,
                                 int degree = 6);

struct Omega0 {
  Weight omega0;
  std::vector<Rat> pairing;  // (omega_0, alpha_r)
};
Omega0 omega0_gamma(const SatakeDiagram& S);
// c'_r = q^{(alpha_r, Theta(alpha_r) - 2 rho_X)/2}, s' = 0
CoidealParams tprime_params(const SatakeDiagram& S, const QParams& qp);

// One-dimensional character of a coideal: values on B_r and chi(K_w) = q^{f(w)}.
struct Character {
  HermitianKind kind = HermitianKind::NonHermitian;
  double t = 0;
  std::vector<cplx> B;       // per vertex
  std::vector<double> f;     // f(alpha_r) per vertex
  double K(const RootDatum& D, const Weight& w, double q) const;
};
Character counit_character(const SatakeDiagram& S);
// chi_t on the no-parameter coideal
Character characters(const SatakeDiagram& S, double t);
// chi_t relative to a coideal in the family: S-type value s_p + it, C-type shift f(alpha_p) = t
Character relative_character(const SatakeDiagram& S, const CoidealParams& p, double t);

// residuals of the commutative-quotient relations, keyed by relation name
std::vector<std::pair<std::string, double>> character_relations_residual(const SatakeDiagram& S, const CoidealParams& p,
                                                                         const QParams& qp, const Character& chi);

// (chi (x) id) Delta(x) for a coideal generator x; pass b_vertex = r when x is B_r of p, -1 otherwise
// (then every first tensor leg of Delta(x) must be a word in the letters of X).
AlgebraElement conjugation_map(const BraidContext& ctx, const CoidealParams& p, const Character& chi,
                               const AlgebraElement& x, int b_vertex = -1);

struct Conjugation {
  CoidealParams params;
  double algebra_residual = 0;  // (pi (x) id)Delta - Delta pi on generators, coefficientwise
  double module_residual = 0;   // same on the supplied module pairs
  double image_residual = 0;    // pi(B_r) against B_r of the returned parameters
};
Conjugation conjugate(const BraidContext& ctx, const CoidealParams& p, const Character& chi,
                      const std::vector<std::pair<WeightModule, WeightModule>>& checks = {});

// sigma = tau tau_0
Perm sigma_perm(const SatakeDiagram& S);

// action of the coideal generators on chi (.) U
std::vector<CMat> coideal_action(const BraidContext& ctx, const CoidealParams& p, const Character& chi,
                                 const WeightModule& U);

struct KMatrix {
  CMat eta;
  int nullity = 0;                   // dimension of the twisted commutant
  double intertwining_residual = 0;  // eta pi(sigma b) - pi(b) eta
  double constraint_residual = 0;    // quadratic or fusion constraints at the solution
};
struct KMatrixRef {
  const WeightModule* V = nullptr;
  CMat eta_V;
};
// Braid eta on chi (.) U. Fixes eta up to sign by the trivial component of U (x) U (or by the reference
// module through fusion), then makes the (last, first) entry positive.
KMatrix kmatrix_solve(const BraidContext& ctx, const CoidealParams& p, const Character& chi, const WeightModule& U,
                      std::optional<KMatrixRef> ref = std::nullopt);

// eta on chi (.) (U (x) V) from eta_U, eta_V: R21 (1 (x) eta_V) ((id (x) sigma)R) (eta_U (x) 1)
CMat kmatrix_fuse(const WeightModule& U, const CMat& eta_U, const WeightModule& V, const CMat& eta_V, const Perm& sigma);

}  // namespace qsp

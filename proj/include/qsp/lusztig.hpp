#pragma once
#include <memory>
#include <utility>
#include <vector>

#include "qsp/algebra.hpp"
#include "qsp/diagrams.hpp"
#include "qsp/uqrep.hpp"

namespace qsp {

struct BraidContext {
  std::shared_ptr<const RootDatum> datum;
  SatakeDiagram diagram;
  WeylWord word;  // reduced word r_1 ... r_M for w_X
  std::vector<Weight> betas;  // beta_k = s_{r_1} ... s_{r_{k-1}} (alpha_{r_k})
  QParams qp;
};

// Uses the longest element of X unless a word is supplied; a supplied word must be a reduced word for w_X.
BraidContext make_braid_context(const SatakeDiagram& S, const QParams& qp, const WeylWord& word = {});

// T_r on U_q(g) (Lusztig's automorphism in the convention T_r(E_r) = -F_r K_r)
AlgebraElement braid_on_algebra(int r, const AlgebraElement& x);
AlgebraElement braid_word_on_algebra(const WeylWord& w, const AlgebraElement& x);
AlgebraElement braid_wX_on_algebra(const BraidContext& ctx, const AlgebraElement& x);

// T_r on an integrable module, divided-power formula on each r-string
CMat braid_on_module(const WeightModule& M, int r);
CMat braid_word_on_module(const WeightModule& M, const WeylWord& w);

// automorphisms entering theta_q
AlgebraElement omega_auto(const AlgebraElement& x);
AlgebraElement psi_auto(const AlgebraElement& x);
AlgebraElement tau_auto(const AlgebraElement& x, const Perm& tau);
AlgebraElement ad_s_auto(const AlgebraElement& x, const std::vector<cplx>& z);

// n_k = (varpi, beta_k^vee); throws InputError if some n_k < 0
std::vector<int> string_lengths(const BraidContext& ctx, const Weight& varpi);
// (Z^-, Z^+) = (F_{r_M}^{n_M} ... F_{r_1}^{n_1}, E_{r_M}^{n_M} ... E_{r_1}^{n_1}), ordinary powers
std::pair<AlgebraElement, AlgebraElement> z_elements(const BraidContext& ctx, const Weight& varpi);
// e_varpi and d, both prod_k ([n_k]_{q_{r_k}}!)^2
std::pair<double, double> e_d_constants(const BraidContext& ctx, const Weight& varpi);
double a_plus(const BraidContext& ctx, int r);
// Ad_q(Z_r^+)(E_r), the E_{r_1} power applied first
AlgebraElement ad_z_plus(const BraidContext& ctx, int r);

struct AppBResiduals {
  double t_minus = 0;      // T_{w_X} xi against Z^- xi
  double t_minus_inv = 0;  // T_{w_X}^{-1} xi against Z^- xi
  double t_plus = 0;       // T_{w_X}(T_{w_X} xi) against Z^+ T xi
  double t_plus_inv = 0;   // T_{w_X}^{-1}(T_{w_X} xi) against Z^+ T xi
  double e_module = 0, d_module = 0, e_closed = 0;
  double max() const;
};
// M must contain a highest weight vector of weight varpi at index 0 (any build_irrep output)
AppBResiduals verify_appB(const BraidContext& ctx, const Weight& varpi, const WeightModule& M);

struct APlusCheck {
  double ratio = 0;     // least-squares scalar a with pi(T_{w_X} E_r) = a pi(Ad(Z^+) E_r)
  double residual = 0;  // relative misfit of that scalar relation
  double closed = 0;    // a_plus(ctx, r)
};
APlusCheck a_plus_on_module(const BraidContext& ctx, int r, const WeightModule& M);

}  // namespace qsp

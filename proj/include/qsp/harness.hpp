#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsp/coideal.hpp"
#include "qsp/kzmono.hpp"
#include "qsp/vogan10.hpp"

namespace qsp {

// Default tolerances: pure linear algebra, monodromy-dependent quantities.
inline constexpr double kTolAlg = 1e-9;
inline constexpr double kTolOde = 1e-7;

struct Report {
  std::string case_id;
  std::map<std::string, double> params;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> observations;  // reported, not gating
  std::map<std::string, std::string> notes;
  bool pass = true;
  double runtime = 0;

  void add(const std::string& key, double residual, double tol);
  // pass <=> every residual is finite and below its tolerance
  void finalize();
};
nlohmann::json to_json(const Report& r);

// Residuals of the braid axioms, written on X (.) U (.) V with legs (0, 1, 2).
// P restricts the comparison to trusted columns (truncated modules); nullptr means all.
double check_octagon(const CMat& lhs, const CMat& eta_V, const WeightModule& U, const WeightModule& V,
                     const WeightModule& V_sigma, int dx, const CMat* P = nullptr);
double check_ribbon(const CMat& lhs, const CMat& eta_U, const CMat& eta_V, const WeightModule& U, const WeightModule& V,
                    const WeightModule& V_sigma, int dx, const CMat* P = nullptr);
struct CylinderResiduals {
  double first = 0, second = 0;
};
CylinderResiduals check_cylinder(const CMat& theta_UV, const CMat& theta_U, const CMat& theta_V, const WeightModule& U,
                                 const WeightModule& V, const WeightModule& U_sigma, const WeightModule& V_sigma, int dx,
                                 const CMat* P = nullptr);

struct AxiomResiduals {
  std::optional<double> octagon, ribbon, cylinder1, cylinder2;
};
// su2 coideal with character chi_t, on U = V = V_{1/2} (or higher spin through the fusion constraint)
AxiomResiduals coideal_axioms(double q, double t, int mu = 1, int mv = 1);
// KZ side: Psi as associator, e^{-pi i a} as braid
AxiomResiduals kz_axioms(double q, double lambda);
// Vogan side: truncated E on M_r
AxiomResiduals vogan_axioms(double q, double r, int N);

struct LambdaCandidates {
  double plus = 0, minus = 0;  // lambda and -lambda
  bool scalar = false;         // C is a multiple of the identity (excluded case)
};
// Solves Tr(C^* C) = q^{-1}(q^{2 lambda} + q^{-2 lambda}); throws InputError below 2 q^{-1}
LambdaCandidates lambda_from_trace(const CMat& C, double q);
// t = q^{-1/2}(q^{-lambda} - q^lambda)/(q^{-1} - q) and its inverse
double t_of_lambda(double q, double lambda);
double lambda_of_t(double q, double t);

// K-matrix of the su2 coideal on V_{1/2} for the character chi_t
CMat coideal_braid(double q, double t);
// chi_n(B_t) = i q^{-1/2}(q^{-lambda-n} - q^{lambda+n})/(q^{-1} - q)
cplx chi_n_value(double q, double lambda, int n);

Report run_rank_one(double q, double r, int N, const std::vector<double>& t_grid = {0.0, 0.3, 1.0, 2.5});
Report verify_axioms(const std::string& source, double q);
Report verify_kz(double q);
Report verify_appendixB(const SatakeDiagram& S, double q);
Report verify_characters(const SatakeDiagram& S, double t, double q);

struct RunConfig {
  double q = 0.7;
  std::vector<double> r_values{0.25, 1.0};
  int levels = 20;
  std::vector<SatakeDiagram> diagrams;  // empty: su4 with X = {2} (tau flip) and X = {1, 3}
  double t = 0.3;
  int threads = 0;  // 0: hardware concurrency
};
std::vector<Report> run_all(const RunConfig& cfg);

// Outcome of the two lambda(r) hypotheses across several r
struct HypothesisVerdict {
  bool doubled_matches = false;  // lambda = 2r + 2
  bool shifted_matches = false;  // lambda = r + 1
  bool exactly_one() const { return doubled_matches != shifted_matches; }
};
HypothesisVerdict lambda_hypotheses(const std::vector<Report>& rank_one_reports);

}  // namespace qsp

#pragma once
#include <vector>

#include "qsp/uqrep.hpp"

namespace qsp {

// Truncated admissible *-representation of the rank-one twisted double, generated by F, F^* and K = K_alpha.
// Basis vectors e_0 .. e_N of M_r, or products e_n (x) v for M_r (x) V.
struct TruncatedModule {
  double r = 0;
  int N = 0;
  QParams qp;
  CMat K, F, Fs;
  std::vector<double> H;   // log_q of the K eigenvalue
  std::vector<int> level;  // level of the M_r factor
  int dim() const { return int(H.size()); }
  // basis vectors whose images under F, F^*, K and their relations are unaffected by the cut
  std::vector<int> interior() const;
};

// K e_n = q^{-r+2n} e_n, q^{1/2}(q^{-1}-q) F e_n = q^{-n} ((1-q^{2n})(1+q^{2r+2-2n}))^{1/2} e_{n-1}
TruncatedModule build_Mr(double r, const QParams& qp, int N);
// A finite-dimensional irrep of U_q(su2) seen through the same generators (F^* = K^{-1} E)
TruncatedModule as_truncated(const WeightModule& V);

struct VoganRelations {
  double KF = 0, KFs = 0, FsF = 0;
  double max() const;
};
// K F = q^{-2} F K, K F^* = q^2 F^* K, F^*F - q^2 F F^* = (1 + K^{-2})/(q - q^{-1}), on interior vectors
VoganRelations vogan_relations(const TruncatedModule& M, double eps = -1);

// the action of alpha(x) on M (x) V
TruncatedModule coaction_tensor(const TruncatedModule& M, const WeightModule& V);

// R~_21 (id (x) nu_q)(R~)(1 (x) v^{-1}) on M (x) V; eps is the sign of nu_q on E and F
CMat e_matrix(const TruncatedModule& M, const WeightModule& V, double eps = -1);
// E (1 (x) K_chi^{-1}), K_chi acting on an H-weight h vector of V by i^h
CMat twist_to_plain(const CMat& E, const TruncatedModule& M, const WeightModule& V);

// E (id (x) nu_q) alpha(x) - alpha(x) E on interior vectors, relative
double twisted_intertwining_residual(const CMat& E, const TruncatedModule& M, const WeightModule& V, double eps = -1);
double plain_intertwining_residual(const CMat& P, const TruncatedModule& M, const WeightModule& V);

struct WeightSpace {
  double weight = 0;  // total H weight
  std::vector<int> indices;
  std::vector<cplx> eigenvalues;
  std::vector<double> singular_values;
};
// restriction of an operator to the interior total-weight spaces of M (x) V
std::vector<WeightSpace> weight_spaces(const CMat& A, const TruncatedModule& M, const WeightModule& V);

struct FusionRecord {
  std::vector<std::pair<double, int>> lowest;  // (lowest weight H, multiplicity)
  bool matches = false;                         // exactly H = -(r+1) and -(r-1), once each
};
FusionRecord fusion_check(const TruncatedModule& M, const WeightModule& V);

}  // namespace qsp

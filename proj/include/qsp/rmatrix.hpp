#pragma once
#include <string>
#include <vector>

#include "qsp/uqrep.hpp"

namespace qsp {

struct RMatrix {
  CMat matrix;  // on M (x) N, Kronecker basis i * dim(N) + j
  int dm = 0, dn = 0;
  std::string convention;  // which of R, R21, R^-1, R21^-1 of the product formula was kept
};

// Cartan factor q^{-(wt_i, wt_j)}
CMat cartan_factor(const WeightModule& M, const WeightModule& N);
// Theta = Theta_{beta_M} ... Theta_{beta_1} over the positive roots from the reduced word of w_0
CMat quasi_r(const WeightModule& M, const WeightModule& N);

RMatrix rmat(const WeightModule& M, const WeightModule& N);
// Independent oracle: solves R Delta(x) = Delta^op(x) R with R - D supported on weight shifts
// (mu + beta, nu - beta), beta > 0. Throws NumericalError when the system does not pin R.
RMatrix rmat_oracle(const WeightModule& M, const WeightModule& N);

// Delta and Delta^op images of the generators on M (x) N
struct TensorGenerators {
  std::vector<CMat> E, F, Eop, Fop, K;
};
TensorGenerators tensor_generators(const WeightModule& M, const WeightModule& N);
double intertwining_residual(const CMat& R, const TensorGenerators& g);

// beta_{M,N} = Sigma o R : M (x) N -> N (x) M
CMat braiding(const WeightModule& M, const WeightModule& N);
// R_{21} acting on M (x) N
CMat r21(const WeightModule& M, const WeightModule& N);

// A acts on the tensor factors (i, j) (in that order) of a multiple tensor product with the given dims
CMat on_legs(const CMat& A, const std::vector<int>& dims, int i, int j);
CMat on_leg(const CMat& A, const std::vector<int>& dims, int i);
// permutation operator sending factor k of the source to position perm[k] of the target
CMat leg_permutation(const std::vector<int>& dims, const std::vector<int>& perm);

double ybe_residual(const WeightModule& M);
struct HexagonResiduals {
  double first = 0, second = 0;  // (Delta (x) id)R = R13 R23, (id (x) Delta)R = R13 R12
};
HexagonResiduals hexagon_residuals(const WeightModule& M, const WeightModule& N, const WeightModule& P);
double ribbon_residual(const WeightModule& M, const WeightModule& N);

}  // namespace qsp

#pragma once
#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "qsp/algebra.hpp"
#include "qsp/rootsys.hpp"

namespace qsp {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

struct QParams {
  double q = 0.7;
  QParams() = default;
  explicit QParams(double qv);  // throws InputError unless 0 < q < 1
  cplx hbar() const;             // -i ln(q) / pi
  double pow(const Rat& e) const { return std::pow(q, to_double(e)); }
  double qr(const RootDatum& D, int r) const { return std::pow(q, D.d(r)); }
};

struct WeightModule {
  std::shared_ptr<const RootDatum> datum;
  QParams qp;
  std::vector<IWeight> weights;
  std::vector<CMat> E, F;

  int dim() const { return int(weights.size()); }
  const RootDatum& D() const { return *datum; }
  // K_w = diag q^{(w, wt)}
  CMat K(const Weight& w) const;
  CMat Kr(int r, int power = 1) const;
  CVec k_diag(const Weight& w) const;
};

constexpr int kDefaultDimCap = 400;

WeightModule build_irrep(std::shared_ptr<const RootDatum> D, const IWeight& lambda, const QParams& qp,
                         int dim_cap = kDefaultDimCap);
WeightModule trivial_module(std::shared_ptr<const RootDatum> D, const QParams& qp);
WeightModule tensor(const WeightModule& M, const WeightModule& N);
WeightModule direct_sum(const std::vector<WeightModule>& parts);
// pull back along a diagram automorphism: x acts as pi(tau(x))
WeightModule twist_module(const WeightModule& M, const std::vector<int>& tau);

struct Isotypic {
  IWeight highest;
  int multiplicity = 0;
  // columns: multiplicity consecutive isometric copies of the irrep basis
  CMat embedding;
  int irrep_dim = 0;
};

std::vector<Isotypic> decompose(const WeightModule& M);
// isometric intertwiner from the irrep V_lambda to M with xi -> v (v a unit highest weight vector)
CMat embed_irrep(const WeightModule& V, const WeightModule& M, const CVec& v);

CMat act(const WeightModule& M, const AlgebraElement& x);
CMat act(const WeightModule& M, const WeightModule& N, const TensorElement& t);

struct RelationResiduals {
  double cartan = 0, ef = 0, serre = 0, star = 0;
  double max() const { return std::max(std::max(cartan, ef), std::max(serre, star)); }
};
RelationResiduals relation_residuals(const WeightModule& M);

// flip M (x) N -> N (x) M
CMat flip(int dm, int dn);
// ribbon element v = q^{C} on each isotypic component
CMat ribbon_element(const WeightModule& M);

double rel_norm(const CMat& a, const CMat& b);
CMat mpow(const CMat& a, int n);

}  // namespace qsp

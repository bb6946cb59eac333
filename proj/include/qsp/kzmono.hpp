#pragma once
#include <string>
#include <vector>

#include "qsp/uqrep.hpp"

namespace qsp {

// Classical irrep of sl2 on C^{m+1}, orthonormal weight basis m/2, m/2 - 1, ..., -m/2.
struct ClassicalRep {
  int m = 0;
  CMat e, f, h;
  int dim() const { return int(e.rows()); }
  // element with coordinates (x_e, x_f, x_h)
  CMat of(const CVec& x) const { return x[0] * e + x[1] * f + x[2] * h; }
};
ClassicalRep classical_irrep(int m);

// A representation of k^C given by the images of the orthonormal basis of g_+.
struct KRep {
  std::vector<CMat> X;
  int dim() const { return X.empty() ? 0 : int(X[0].rows()); }
};

struct SymPairTensors {
  CMat sigma;                       // 3x3 on coordinates (e, f, h)
  std::vector<CVec> kbasis, mbasis; // orthonormal bases of g_+ and g_- for <X, Y> = (X, Y^*)

  // sigma on a representation: S with S rho(x) S^{-1} = rho(sigma x), S unitary
  CMat sigma_on(const ClassicalRep& V) const;
  KRep restrict(const ClassicalRep& V) const;
  std::vector<CMat> m_images(const ClassicalRep& V) const;
  std::vector<CMat> g_images(const ClassicalRep& V) const;  // kbasis then mbasis
  // one-dimensional character with (f - e) -> i lambda
  KRep character(double lambda) const;
};

// The classical involution with e -> -f, f -> -e, h -> -h.
CMat su2_theta();
// Validates sigma (involutive, Lie automorphism, unitary, commutes with *), builds orthonormal eigenbases.
SymPairTensors split_tensors(const CMat& sigma);

// sum_i A_i^* (x) B_i
CMat pair_tensor(const std::vector<CMat>& A, const std::vector<CMat>& B);
CMat casimir(const std::vector<CMat>& A);

struct KZCoeffs {
  CMat a, b_plus, b_minus, d;
  std::vector<int> dims;
};
// a = hbar (2 t^k_01 + C^k_1), b_+ = hbar t_12, b_- = hbar (t^k_12 - t^m_12) on X0 (x) V1 (x) V2
KZCoeffs kz_coeffs(const SymPairTensors& T, const KRep& X0, const ClassicalRep& V1, const ClassicalRep& V2, cplx hbar);

struct ResonanceFlags {
  bool resonant = false;
  double min_gap = 0;  // smallest distance of an eigenvalue difference to a nonzero integer
};
ResonanceFlags resonance_check(const CMat& m);

struct MonodromyProblem {
  CMat a, b_plus, b_minus;
  int series_order = 40;
  double match_point = 0.5;
  double delta = 0.1;
  double abs_tol = 1e-12, rel_tol = 1e-10;
  double spread_tol = 1e-6;
};

struct MonodromyResult {
  CMat psi;
  double truncation_error = 0;
  double spread = 0;  // over match points 0.4, 0.5, 0.6
  double conditioning = 0;
  ResonanceFlags resonance_a, resonance_b;
};

MonodromyResult psi(const MonodromyProblem& P);
// Psi only, for a fixed match point
CMat psi_at(const MonodromyProblem& P, double match_point, double* tail = nullptr, double* cond = nullptr);

// residual of Psi(a,b+,b-)^{-1} e^{pi i b+} Psi(c,b+,b-) e^{pi i c} Psi(c,b-,b+)^{-1} e^{pi i b-} Psi(a,b-,b+) e^{pi i a} = 1
double verify_eg(const MonodromyProblem& P);

struct OctagonKZ {
  double rtkz = 0;     // the monodromy identity with e^{pi i d}
  double octagon = 0;  // sigma-octagon against (Delta (x) id)(E)
  double ribbon = 0;   // ribbon sigma-braid form against (id (x) Delta)(E)
  double psi021 = 0;   // Psi(a_02, b+, b-) against the leg-permuted Psi on X0 (x) W (x) V
  double lemcomm = 0;  // [d, a], [d, b+], [d, b-] and the identities for d
};
OctagonKZ verify_octagon_kz(const SymPairTensors& T, const KRep& X0, const ClassicalRep& V, const ClassicalRep& W,
                            cplx hbar);

// commutator identities of the 2-cyclotomic KZ_n system and [Omega_i, Omega_j] at sample points
std::vector<std::pair<std::string, double>> flatness_residuals(const SymPairTensors& T, const KRep& X0,
                                                              const std::vector<ClassicalRep>& reps);

// e^{-pi i hbar (2 t^k_01 + C^k_1)} on X0 (x) V
CMat kz_braid(const SymPairTensors& T, const KRep& X0, const ClassicalRep& V, cplx hbar);

CMat expm(const CMat& A);

}  // namespace qsp

#ifndef GDQST_LINALG_HPP
#define GDQST_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace gdqst {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Numerical thresholds used across the library. Every tolerance that a
// routine consults is collected here so tests and callers can see (and
// in a few cases override) the exact contract.
struct Tolerances {
  // Relative asymmetry allowed before a matrix is rejected as non-symmetric.
  static constexpr double symmetryRel = 1e-8;
  // Minimum-eigenvalue floor for positive-semidefiniteness checks
  // (validity of states, channels and generators). Overridable via the
  // GDQST_TOL environment variable; see validityTolerance().
  static constexpr double psdFloor = 1e-9;
  // Two eigenvalues closer than degeneracyRel * ||X||_F are treated as a
  // degenerate pair.
  static constexpr double degeneracyRel = 1e-8;
  // Relative singular-value cutoff for Krylov rank detection in
  // minimal-polynomial computation.
  static constexpr double krylovRankRel = 1e-9;
  // A reconstructed object whose imaginary part exceeds
  // imagResidueRel * ||result|| indicates an inconsistent solve.
  static constexpr double imagResidueRel = 1e-6;
  // ||X^T Omega X - Omega||_F at or below this marks X as symplectic.
  static constexpr double symplecticResidual = 1e-8;
  // Eigenvalue pairs of the evolution matrix closer than
  // nodeGapRel * max|lambda| make the node set degenerate.
  static constexpr double nodeGapRel = 1e-8;
  // Coefficients smaller than zeroEntryRel * max|entry| are structural zeros
  // (used to detect measurement directions invisible to the dynamics).
  static constexpr double zeroEntryRel = 1e-8;
  // Condition numbers above this mark a linear system as ill-conditioned.
  static constexpr double condLimit = 1e12;
  // Purity residual ||(Gamma Omega)^2 + I||_F allowed for a pure state.
  static constexpr double purityResidual = 1e-8;
  // Threshold on eigenvector-basis connectivity weights when deciding
  // whether the dynamics couples two modes.
  static constexpr double couplingWeight = 1e-10;
};

// PSD floor for validity checks: Tolerances::psdFloor unless the
// GDQST_TOL environment variable holds a positive double.
double validityTolerance();

// ---- symmetric-matrix vectorization ------------------------------------
//
// Symmetric n x n matrices are flattened to vectors of length n(n+1)/2.
// Index pairs {i,j}, 0-based, i <= j, are ordered lexicographically by
// (i, j). Off-diagonal slots carry a factor sqrt(2) so that the pairing
// <svec(A), svec(B)> equals Tr(A B).

inline int pairCount(int n) { return n * (n + 1) / 2; }

// All index pairs {i,j} with i <= j in canonical order.
std::vector<std::pair<int, int>> symPairs(int n);

// Position of pair {i,j} (i <= j) in the canonical order.
int pairIndex(int i, int j, int n);

Vec svec(const Mat& a);
CVec svec(const CMat& a);
Mat smat(const Vec& v, int n);
CMat smat(const CVec& v, int n);

// Matrix Q with Q vec(A) = svec(A) for symmetric A (column-major vec)
// and Q Q^T = I. Shape n(n+1)/2 x n^2.
Mat buildQ(int n);

// Symmetrized Kronecker product: the operator on svec-space acting as
// S |-> (A S B^T + B S A^T) / 2, i.e. Q (kron(A,B) + kron(B,A)) Q^T / 2.
// Satisfies symKron(A,A) svec(S) = svec(A S A^T).
Mat symKron(const Mat& a, const Mat& b);
CMat symKron(const CMat& a, const CMat& b);

// ---- spectral data ------------------------------------------------------

struct Spectral {
  CVec lambda;     // eigenvalues
  CMat p;          // eigenvectors as columns, X = P diag(lambda) P^{-1}
  bool distinct;   // no pair closer than degeneracyRel * ||X||_F
  double minGap;   // smallest pairwise eigenvalue distance
  double condP;    // condition number of the eigenvector matrix
};

// Dense eigendecomposition of a real square matrix.
Spectral spectral(const Mat& x);

// Condition number (ratio of extreme singular values); infinity when the
// smallest singular value underflows.
double conditionNumber(const Mat& a);
double conditionNumber(const CMat& a);

// ---- minimal polynomial -------------------------------------------------

// Minimal polynomial p(x) = x^delta - sum_{i<delta} coeffs[i] x^i of a
// square matrix, found by detecting the first linear dependence in the
// Krylov sequence I, T, T^2, ... (flattened, columns scaled to unit norm
// before the rank test and the coefficient solve).
//
// j0 is the multiplicity of the root 0, computed as the first k with
// rank(T^{k+1}) == rank(T^k); it is 0 exactly when T is invertible
// within tolerance.
struct MinimalPolynomial {
  int delta = 0;       // degree
  int j0 = 0;          // multiplicity of the zero root
  Vec coeffs;          // length delta; T^delta = sum coeffs[i] T^i
  double krylovGap = 0;  // singular-value gap backing the rank decision
};

MinimalPolynomial minimalPolynomial(const Mat& t,
                                    double rankTol = Tolerances::krylovRankRel);

// ---- matrix exponential -------------------------------------------------

// exp(t C). Throws std::overflow_error when ||t C||_F is too large for a
// representable result, and std::invalid_argument on non-finite input.
Mat matrixExp(const Mat& c, double t);

// ---- generalized Vandermonde --------------------------------------------

// Z with Z(j, k) = exp(nodes[j] * times[k]), plus its condition number.
struct ExpVandermonde {
  CMat z;
  double cond;
};
ExpVandermonde expVandermonde(const CVec& nodes, const Vec& times);

// M with M(i, j) = nodes[j]^i for i = 0..rows-1 (power Vandermonde,
// rows indexed by exponent).
CMat powerVandermonde(const CVec& nodes, int rows);

// prod_{p<q} (nodes[q] - nodes[p]); equals det(powerVandermonde(nodes, n)).
Complex pairDifferenceProduct(const CVec& nodes);

// ---- small helpers ------------------------------------------------------

// Relative asymmetry ||A - A^T|| / max(1, ||A||) (Frobenius).
double asymmetry(const Mat& a);

// Largest |imaginary part| of any entry relative to max(1, ||A||).
double imagResidue(const CMat& a);
double imagResidue(const CVec& v);

// Minimum eigenvalue of a (numerically) Hermitian complex matrix; the
// input is symmetrized as (H + H^*)/2 before the solve.
double minEigHermitian(const CMat& h);
double maxEigHermitian(const CMat& h);

}  // namespace gdqst

#endif  // GDQST_LINALG_HPP

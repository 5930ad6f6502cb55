#ifndef GDQST_MODEL_HPP
#define GDQST_MODEL_HPP

#include <cstdint>
#include <random>
#include <string>

#include "gdqst/linalg.hpp"

namespace gdqst {

// Phase-space coordinates are ordered (q_1..q_m, p_1..p_m), so mode i
// (0-based) owns coordinates i and i+m. The symplectic form in this
// ordering is Omega = [[0, I_m], [-I_m, 0]].
Mat omega(int m);

// Gaussian state of m modes: covariance gamma (2m x 2m, symmetric,
// anticommutator normalization with vacuum gamma = I) and displacement d.
struct GaussianState {
  int m = 0;
  Mat gamma;
  Vec d;
};

// Discrete Gaussian channel acting as gamma -> X gamma X^T + Y,
// d -> X d. Complete positivity: Y + i Omega - i X Omega X^T >= 0.
struct GaussianChannel {
  int m = 0;
  Mat x;
  Mat y;
};

// Generator of a continuous Gaussian semigroup, parameterized by the
// drift C (giving X_t = exp(t C)) and the diffusion-defining symmetric
// matrix B >= 0. Validity: B - i (Omega C + C^T Omega) / 2 >= 0.
struct QdsGenerator {
  int m = 0;
  Mat c;
  Mat b;
};

// Homodyne measurement direction: unit vector b in phase space. The
// measured statistics are mean <b, d> and variance <svec(b b^T), svec(gamma)>.
struct HomodyneSetting {
  int m = 0;
  Vec b;       // unit norm
  Vec a;       // svec(b b^T), cached
};

// Builds a setting from any nonzero direction (normalizes b).
HomodyneSetting makeSetting(const Vec& b);

struct ValidityReport {
  bool valid = false;
  double symmetryResidual = 0;  // relative asymmetry of the tested matrix
  double minEigenvalue = 0;     // of the positivity certificate
  std::string detail;
};

// gamma symmetric and gamma + i Omega >= -tol.
ValidityReport validateState(const GaussianState& s, double tol);
ValidityReport validateState(const GaussianState& s);

// Y symmetric and Y + i Omega - i X Omega X^T >= -tol.
ValidityReport validateChannel(const GaussianChannel& c, double tol);
ValidityReport validateChannel(const GaussianChannel& c);

// B symmetric and B - i (Omega C + C^T Omega)/2 >= -tol.
ValidityReport validateGenerator(const QdsGenerator& g, double tol);
ValidityReport validateGenerator(const QdsGenerator& g);

// Purity residual ||(gamma Omega)^2 + I||_F; a state is pure iff this
// vanishes. isPure applies Tolerances::purityResidual.
double purityResidual(const Mat& gamma);
bool isPure(const GaussianState& s, double tol = Tolerances::purityResidual);

// Pure-state covariance from its Cholesky-like parameterization:
// gamma = [[A, A B], [B A, B A B + A^{-1}]] with A > 0 and B symmetric.
// Every pure covariance arises this way in (q, p) block coordinates.
Mat pureFromAB(const Mat& a, const Mat& b);

// ||X^T Omega X - Omega||_F and the symplectic verdict at tolerance
// Tolerances::symplecticResidual.
struct SymplecticCheck {
  double residual = 0;
  bool symplectic = false;
};
SymplecticCheck symplecticCheck(const Mat& x);

// ---- reproducible random instances --------------------------------------
//
// All randomness flows through Rng so that identical seeds give identical
// draws across platforms: uniforms take the top 53 bits of a mt19937_64
// word; normals use the Box-Muller transform on two fresh uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double normal();                         // standard normal
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Random valid state via a symplectic conjugation of a thermal diagonal:
// gamma = S^T diag(nu, nu) S with S = exp(Omega H), H symmetric with
// entries uniform in [-1, 1], nu_i uniform in [1, 3] (all 1 when pure),
// d entries uniform in [-2, 2].
GaussianState randomState(int m, std::uint64_t seed, bool pure = false);

// Random valid channel: X has uniform entries rescaled to a spectral
// radius in [0.5, 1.5] and distinct eigenvalues (re-drawn up to 100
// times); Y = s I + W W^T with s chosen so the positivity certificate
// holds with margin 0.1.
GaussianChannel randomChannel(int m, std::uint64_t seed);

// Random valid generator: C = (A - H) Omega with A antisymmetric and H
// symmetric, entries uniform in [-1, 1]; B = W W^T + (max(0,
// lambdaMax(S)) + 0.1) I where S is the Hermitian part of the validity
// certificate, so B - S >= 0.1 I. Re-drawn (up to 100 times) until both
// C and 2 symKron(C, I) have distinct eigenvalues.
QdsGenerator randomGenerator(int m, std::uint64_t seed);

// Random symplectic matrix exp(Omega H), H symmetric.
Mat randomSymplectic(int m, std::uint64_t seed);

// Random homodyne direction (normalized standard-normal vector).
HomodyneSetting randomSetting(int m, std::uint64_t seed);

}  // namespace gdqst

#endif  // GDQST_MODEL_HPP

#ifndef GDQST_RECONSTRUCTION_HPP
#define GDQST_RECONSTRUCTION_HPP

#include <string>
#include <vector>

#include "gdqst/dynamics.hpp"
#include "gdqst/model.hpp"

namespace gdqst {

// Structural conditions under which one fixed homodyne setting cannot
// identify the state. Any raised flag moves the instance off the generic
// case and the solvers refuse (or, for `ambiguous`, qualify) the result.
struct ObstructionFlags {
  bool symplecticX = false;        // X^T Omega X == Omega: noiseless
                                   // unitary dynamics, variance series
                                   // is periodic-like and non-informative
  bool degenerateNodes = false;    // eigenvalue products collide, the
                                   // moment matrix loses rank
  bool orthogonalSetting = false;  // some eigendirection is invisible to
                                   // the setting (zero coefficient)
  bool blockDiagonal = false;      // dynamics splits into uncoupled mode
                                   // groups and the setting misses one
  bool ambiguous = false;          // several states fit the data equally
  bool illConditioned = false;     // solvable but condition > condLimit

  bool any() const {
    return symplecticX || degenerateNodes || orthogonalSetting ||
           blockDiagonal || ambiguous;
  }
};

// The linear systems tying the measured series to the unknown state, in
// the eigenbasis of the evolution. For the variance series the unknown
// is gamma' = (P (x)_s P)^{-1} svec(gamma) and the i-th sample reads
// <a', diag-power i of the node vector, gamma'>; for the mean series the
// unknown is d' = P^{-1} d against phi = P^T b.
struct ReconstructionSystem {
  int m = 0;
  CVec nodes;        // products lambda_mu lambda_nu in canonical pair order
  CMat momentM;      // rows: time index; columns: node powers
  CVec aPrime;       // setting in the symmetrized eigenbasis
  CMat powerA;       // rows: time index; columns: lambda_j^i
  CVec phi;          // P^T b
  CMat psp;          // P (x)_s P
  CMat p;            // eigenvectors of X
  CVec lambda;       // eigenvalues of X
  double condM = 0;  // moment matrix
  double condN = 0;  // diag(aPrime) restricted to used columns
  double condA = 0;  // power matrix
  double condPsP = 0;
  std::vector<int> pureColumns;  // pair indices kept in pure mode (empty
                                 // otherwise)
  ObstructionFlags flags;
};

// Pure mode keeps only the pair indices {i,j} with i < m and (j < m or
// j - m >= i): the parameter count of a pure covariance.
enum class SystemMode { Full, Pure };

ReconstructionSystem buildSystem(const Mat& x, const HomodyneSetting& h,
                                 SystemMode mode = SystemMode::Full);

// Pair indices retained by the pure-mode system.
std::vector<int> pureColumnIndices(int m);

struct CovarianceResult {
  Mat gamma;
  bool ok = false;
  std::string reason;
  ObstructionFlags flags;
  double imagResidue = 0;   // relative imaginary residue of the solve
  double solveResidual = 0;  // relative residual of the linear system
  double condM = 0;
  double condN = 0;
};

// Recovers gamma from the noise-stripped variance series alpha
// (alpha[i] = <a, svec(X^i gamma X^{iT})>, i = 0..len-1, len >=
// m(2m+1)). Refuses when an obstruction flag fires.
CovarianceResult reconstructCov(const Vec& alpha, const Mat& x,
                                const HomodyneSetting& h);

struct DisplacementResult {
  Vec d;
  bool ok = false;
  std::string reason;
  ObstructionFlags flags;
  double imagResidue = 0;
  double solveResidual = 0;
  double condA = 0;
};

// Recovers d from the mean series beta (beta[i] = <b, X^i d>,
// i = 0..len-1, len >= 2m).
DisplacementResult reconstructDisp(const Vec& beta, const Mat& x,
                                   const HomodyneSetting& h);

struct PureResult {
  Mat gamma;
  bool ok = false;
  std::string reason;
  ObstructionFlags flags;
  double purity = 0;         // purity residual of the returned state
  double dataResidual = 0;   // relative misfit against the input series
  int candidates = 0;        // distinct data-consistent pure states found
  double imagResidue = 0;
  double condRestricted = 0;  // restricted linear system
};

// Recovers a pure-state covariance from a shortened variance series
// (m(m+1) samples suffice to parameter-count a pure state). The
// restricted linear solve seeds a projected Gauss-Newton search for a
// physical pure state on the affine set of data-consistent solutions;
// multiple starts probe for alternative solutions and set `ambiguous`
// when a distinct one fits the data equally well. With one extra sample
// (m(m+1)+1) the ambiguity disappears in practice.
PureResult reconstructPure(const Vec& alpha, const Mat& x,
                           const HomodyneSetting& h);

// End-to-end report for a full reconstruction from a measurement record.
struct TomographyReport {
  GaussianState estimate;
  bool ok = false;
  std::string reason;
  ObstructionFlags flags;
  ValidityReport stateValidity;
  double forwardResidual = 0;  // re-simulated record vs input, relative
  double imagResidue = 0;
  double condM = 0;
  double condN = 0;
  double condA = 0;
  double gridCondition = 0;  // continuous records: resampling condition
  bool pureMode = false;
  bool ambiguous = false;
};

// Full pipeline for a discrete-time record: strip additive noise,
// rebuild (gamma, d), validate, and report the forward residual.
TomographyReport reconstructFull(const MeasurementRecord& r,
                                 const GaussianChannel& c, bool pure = false);

// Continuous-time version: the record may sit on any distinct times > 0;
// it is resampled onto the integer grid of the unit-time channel first.
TomographyReport reconstructFull(const MeasurementRecord& r,
                                 const QdsGenerator& g, bool pure = false);

// ---- a-priori diagnosis --------------------------------------------------

enum class Verdict { Generic, NullSet };

struct DiagnosisReport {
  Verdict verdict = Verdict::Generic;
  std::vector<std::string> reasons;
  ObstructionFlags flags;
  double symplecticResidual = 0;
  double minNodeGap = 0;         // relative to max |node|
  double minAPrime = 0;          // relative to max |a'|
  double minPhi = 0;             // relative to max |phi|
  bool couplingConnected = true;  // mode-coupling graph of X
  double condM = 0;
  double condA = 0;
};

// Decides, before any data is taken, whether (dynamics, setting) is a
// generic identifiable pair or lies on the structural null set.
DiagnosisReport diagnose(const Mat& x, const HomodyneSetting& h);
DiagnosisReport diagnose(const QdsGenerator& g, const HomodyneSetting& h);

// Whether modes form a connected graph under the coupling pattern of X
// (modes i and j are linked when any cross-block entry of X exceeds
// Tolerances::couplingWeight relative to max|X|).
bool modeCouplingConnected(const Mat& x);

// ---- multi-setting completeness -------------------------------------------

struct CompletenessReport {
  bool complete = false;
  int svecRank = 0;    // rank of stacked svec(b b^T), target m(2m+1)
  int dispRank = 0;    // rank of stacked b, target 2m
  int svecTarget = 0;
  int dispTarget = 0;
};

// Checks whether a family of settings spans enough directions to
// determine any (gamma, d) from zero-time statistics alone.
CompletenessReport settingCompleteness(const std::vector<HomodyneSetting>& hs);

}  // namespace gdqst

#endif  // GDQST_RECONSTRUCTION_HPP

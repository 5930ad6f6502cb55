#ifndef GDQST_EXTENSION_HPP
#define GDQST_EXTENSION_HPP

#include <vector>

#include "gdqst/model.hpp"

namespace gdqst {

// Linear recurrences obeyed by any scalar series of the form
// s_i = <u, T^i v>, derived from the minimal polynomial of T
// (degree delta, zero-root multiplicity j0).
//
// Forward:  s_{delta+k} = sum_i forward[i] * s_{j0+i+k}   (len delta-j0)
// Backward: s_n = sum_i backward[i] * s_{n+1+i}           (len delta-j0),
// valid for n >= j0. Backward coefficients require a nonzero trailing
// coefficient (the recurrence is inverted past the zero root); they are
// empty when delta == j0.
struct RecurrenceCoefficients {
  int delta = 0;
  int j0 = 0;
  Vec forward;
  Vec backward;
};

RecurrenceCoefficients recurrenceFromMatrix(const Mat& t);

// One-step companion matrix of the sliding window, for the forward or
// backward iteration; its powers bound how far roundoff in the seed can
// grow over many steps.
Mat companionMatrix(const RecurrenceCoefficients& rec, bool forward);

// Extends a series sampled at consecutive integer times t0, t0+1, ...
// forward until time `horizon` inclusive. The seed must contain at
// least delta - min(t0, j0) entries (indices below j0 carry no
// recurrence information when t0 < j0, so they cannot help seed it).
// Returns the full series from t0 to horizon.
std::vector<double> extendSeriesForward(const std::vector<double>& series,
                                        int t0,
                                        const RecurrenceCoefficients& rec,
                                        int horizon);

// Extends the series backward until time `target` (>= j0; earlier values
// are not determined by the recurrence once the zero root truncates it).
// Returns the full series from target to t0 + len(series) - 1.
std::vector<double> extendSeriesBackward(const std::vector<double>& series,
                                         int t0,
                                         const RecurrenceCoefficients& rec,
                                         int target);

// Lagrange-type interpolation in the exponential model: given samples of
// s(t) = <u, exp(tC) v> at n = dim(C) distinct times, the value at any t
// is the weighted sum with weights w(t) = Z^{-1} v(t), Z(j,k) =
// exp(mu_j t_k), v(t)_j = exp(mu_j t), mu the eigenvalues of C.
// Requires distinct eigenvalues and distinct times.
class InterpolationWeights {
 public:
  // Weight vector for evaluation time t, real-projected. The imaginary
  // residue of the solve must stay below Tolerances::imagResidueRel
  // scaled by the conditioning of the node system.
  Vec at(double t) const;

  double zCondition() const { return cond_; }
  bool illConditioned() const { return cond_ > Tolerances::condLimit; }
  const Vec& times() const { return times_; }

 private:
  friend InterpolationWeights interpolationWeights(const Mat& c,
                                                   const Vec& times);
  Vec times_;
  CVec mu_;
  Eigen::PartialPivLU<CMat> zLu_;
  double cond_ = 0;
};

InterpolationWeights interpolationWeights(const Mat& c, const Vec& times);

// Resamples continuous-time series onto another time grid using the
// interpolation weights of the matrix governing it: the variance series
// (kind Alpha) evolves under 2 symKron(C, I), the mean series (kind
// Beta) under C itself. The sample count must equal that matrix's
// dimension: m(2m+1) for Alpha, 2m for Beta.
enum class SeriesKind { Alpha, Beta };

struct GridResample {
  Vec values;
  double zCondition = 0;
  bool illConditioned = false;
};

GridResample continuousSeriesToGrid(const Vec& samples, const Vec& times,
                                    const QdsGenerator& g,
                                    const Vec& queryTimes, SeriesKind kind);

}  // namespace gdqst

#endif  // GDQST_EXTENSION_HPP

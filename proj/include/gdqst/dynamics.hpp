#ifndef GDQST_DYNAMICS_HPP
#define GDQST_DYNAMICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gdqst/model.hpp"

namespace gdqst {

// One application of gamma -> X gamma X^T + Y, d -> X d.
GaussianState applyChannel(const GaussianState& s, const GaussianChannel& c);

// i-fold application, computed in closed form:
// gamma_i = X^i gamma X^{iT} + sum_{j<i} X^j Y X^{jT}, d_i = X^i d.
GaussianState evolveDiscrete(const GaussianState& s, const GaussianChannel& c,
                             int steps);

// Accumulated additive noise sum_{j<i} X^j Y X^{jT} of i channel steps.
Mat accumulatedNoise(const GaussianChannel& c, int steps);

// Time-t member of the semigroup generated by (C, B):
// X_t = exp(t C), Y_t = 2 * integral_0^t exp(sC) (Omega^T B Omega) exp(sC^T) ds,
// evaluated in closed form through one block matrix exponential
// (the standard augmented-matrix trick for integrals of this shape).
// Requires t >= 0; t == 0 gives the identity channel.
GaussianChannel qdsChannelAt(const QdsGenerator& g, double t);

// Additive noise accumulated by time t (== qdsChannelAt(g, t).y).
Mat accumulatedNoise(const QdsGenerator& g, double t);

// Composition defect of the two-parameter family at (s, t): Frobenius
// norms of X_{s+t} - X_t X_s and Y_{s+t} - (X_t Y_s X_t^T + Y_t),
// relative to max(1, norm of the left-hand side).
struct SemigroupResidual {
  double xPart = 0;
  double yPart = 0;
};
SemigroupResidual semigroupResidual(const QdsGenerator& g, double s, double t);

// Exact homodyne statistics of state s along setting h.
struct HomodyneStatistics {
  double mean = 0;
  double variance = 0;
};
HomodyneStatistics homodyneStatistics(const GaussianState& s,
                                      const HomodyneSetting& h);

// Empirical mean and unbiased sample variance of `shots` Gaussian draws
// with the exact statistics. Requires shots >= 2.
HomodyneStatistics sampleHomodyne(const GaussianState& s,
                                  const HomodyneSetting& h, long shots,
                                  std::uint64_t seed);

// One measured point of a record. shots < 0 marks exact (infinite-shot)
// statistics.
struct RecordEntry {
  double time = 0;
  double mean = 0;
  double variance = 0;
  long shots = -1;
};

// A homodyne time series taken at one fixed setting.
struct MeasurementRecord {
  int m = 0;
  HomodyneSetting setting;
  std::vector<RecordEntry> entries;
  bool continuousTime = false;
  // Records the map convention the series was generated under, so a
  // consumer can refuse data produced under a different one.
  std::string convention = kChannelConvention;

  static constexpr const char* kChannelConvention =
      "gamma->X.gamma.Xt+Y;d->X.d";
};

// Discrete-time record: entries at integer steps t0, t0+1, ..,
// t0+count-1. shots < 0 records exact statistics; otherwise sampled with
// the given seed (one independent sub-seed per entry).
MeasurementRecord recordDiscrete(const GaussianState& s,
                                 const GaussianChannel& c,
                                 const HomodyneSetting& h, int t0, int count,
                                 long shots, std::uint64_t seed);

// Continuous-time record at the given times (each >= 0).
MeasurementRecord recordContinuous(const GaussianState& s,
                                   const QdsGenerator& g,
                                   const HomodyneSetting& h,
                                   const std::vector<double>& times,
                                   long shots, std::uint64_t seed);

// Measurement series with the channel's additive contribution removed:
// alpha_k = variance_k - <a, svec(noise at t_k)>, beta_k = mean_k.
// These are the homogeneous sequences the reconstruction consumes.
struct StrippedSeries {
  Vec alpha;
  Vec beta;
  Vec times;
  bool continuousTime = false;
};

StrippedSeries stripAdditive(const MeasurementRecord& r,
                             const GaussianChannel& c);
StrippedSeries stripAdditive(const MeasurementRecord& r,
                             const QdsGenerator& g);

}  // namespace gdqst

#endif  // GDQST_DYNAMICS_HPP

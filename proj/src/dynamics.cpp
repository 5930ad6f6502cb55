#include "gdqst/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gdqst {

namespace {

void requireSameModes(int a, int b, const char* who) {
  if (a != b) {
    throw std::invalid_argument(std::string(who) + ": mode counts differ (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void requireConvention(const MeasurementRecord& r, const char* who) {
  if (r.convention != MeasurementRecord::kChannelConvention) {
    throw std::invalid_argument(std::string(who) +
                                ": record was generated under convention '" +
                                r.convention + "', expected '" +
                                MeasurementRecord::kChannelConvention + "'");
  }
}

// Integer step index of a discrete-record time stamp.
int integerTime(double t, const char* who) {
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9 || r < 0) {
    throw std::invalid_argument(std::string(who) + ": discrete record holds " +
                                "non-integer or negative time " + std::to_string(t));
  }
  return static_cast<int>(r);
}

}  // namespace

GaussianState applyChannel(const GaussianState& s, const GaussianChannel& c) {
  requireSameModes(s.m, c.m, "applyChannel");
  GaussianState out;
  out.m = s.m;
  out.gamma = c.x * s.gamma * c.x.transpose() + c.y;
  out.gamma = 0.5 * (out.gamma + out.gamma.transpose());
  out.d = c.x * s.d;
  return out;
}

Mat accumulatedNoise(const GaussianChannel& c, int steps) {
  if (steps < 0) {
    throw std::invalid_argument("accumulatedNoise: steps must be >= 0");
  }
  const int n = 2 * c.m;
  Mat acc = Mat::Zero(n, n);
  Mat p = Mat::Identity(n, n);
  for (int j = 0; j < steps; ++j) {
    acc += p * c.y * p.transpose();
    p = c.x * p;
  }
  return 0.5 * (acc + acc.transpose());
}

GaussianState evolveDiscrete(const GaussianState& s, const GaussianChannel& c,
                             int steps) {
  requireSameModes(s.m, c.m, "evolveDiscrete");
  if (steps < 0) {
    throw std::invalid_argument("evolveDiscrete: steps must be >= 0");
  }
  const int n = 2 * s.m;
  Mat acc = Mat::Zero(n, n);
  Mat p = Mat::Identity(n, n);
  for (int j = 0; j < steps; ++j) {
    acc += p * c.y * p.transpose();
    p = c.x * p;
  }
  GaussianState out;
  out.m = s.m;
  out.gamma = p * s.gamma * p.transpose() + acc;
  out.gamma = 0.5 * (out.gamma + out.gamma.transpose());
  out.d = p * s.d;
  return out;
}

GaussianChannel qdsChannelAt(const QdsGenerator& g, double t) {
  if (!(t >= 0)) {
    throw std::invalid_argument("qdsChannelAt: time must be >= 0, got " +
                                std::to_string(t));
  }
  const int n = 2 * g.m;
  GaussianChannel c;
  c.m = g.m;
  if (t == 0) {
    c.x = Mat::Identity(n, n);
    c.y = Mat::Zero(n, n);
    return c;
  }
  c.x = matrixExp(g.c, t);
  // One augmented exponential yields the noise integral: with
  // F = exp(t [[-C, Qt], [0, C^T]]) and Qt = Omega^T B Omega, the blocks
  // satisfy F22^T F12 = integral_0^t exp(sC) Qt exp(sC^T) ds.
  const Mat om = omega(g.m);
  const Mat qt = om.transpose() * g.b * om;
  Mat blk = Mat::Zero(2 * n, 2 * n);
  blk.block(0, 0, n, n) = -g.c;
  blk.block(0, n, n, n) = qt;
  blk.block(n, n, n, n) = g.c.transpose();
  const Mat f = matrixExp(blk, t);
  const Mat y = 2.0 * f.block(n, n, n, n).transpose() * f.block(0, n, n, n);
  c.y = 0.5 * (y + y.transpose());
  return c;
}

Mat accumulatedNoise(const QdsGenerator& g, double t) {
  return qdsChannelAt(g, t).y;
}

SemigroupResidual semigroupResidual(const QdsGenerator& g, double s, double t) {
  const GaussianChannel cs = qdsChannelAt(g, s);
  const GaussianChannel ct = qdsChannelAt(g, t);
  const GaussianChannel cst = qdsChannelAt(g, s + t);
  SemigroupResidual out;
  out.xPart = (cst.x - ct.x * cs.x).norm() / std::max(1.0, cst.x.norm());
  out.yPart = (cst.y - (ct.x * cs.y * ct.x.transpose() + ct.y)).norm() /
              std::max(1.0, cst.y.norm());
  return out;
}

HomodyneStatistics homodyneStatistics(const GaussianState& s,
                                      const HomodyneSetting& h) {
  requireSameModes(s.m, h.m, "homodyneStatistics");
  HomodyneStatistics out;
  out.mean = h.b.dot(s.d);
  out.variance = h.a.dot(svec(s.gamma));
  return out;
}

HomodyneStatistics sampleHomodyne(const GaussianState& s,
                                  const HomodyneSetting& h, long shots,
                                  std::uint64_t seed) {
  if (shots < 2) {
    throw std::invalid_argument("sampleHomodyne: need at least 2 shots for a variance");
  }
  const HomodyneStatistics exact = homodyneStatistics(s, h);
  const double sigma = std::sqrt(std::max(exact.variance, 0.0));
  Rng rng(seed);
  double sum = 0.0;
  double sumSq = 0.0;
  for (long k = 0; k < shots; ++k) {
    const double x = exact.mean + sigma * rng.normal();
    sum += x;
    sumSq += x * x;
  }
  HomodyneStatistics out;
  out.mean = sum / static_cast<double>(shots);
  out.variance = (sumSq - sum * out.mean) / static_cast<double>(shots - 1);
  return out;
}

MeasurementRecord recordDiscrete(const GaussianState& s,
                                 const GaussianChannel& c,
                                 const HomodyneSetting& h, int t0, int count,
                                 long shots, std::uint64_t seed) {
  requireSameModes(s.m, c.m, "recordDiscrete");
  requireSameModes(s.m, h.m, "recordDiscrete");
  if (t0 < 0 || count < 1) {
    throw std::invalid_argument("recordDiscrete: need t0 >= 0 and count >= 1");
  }
  MeasurementRecord rec;
  rec.m = s.m;
  rec.setting = h;
  rec.continuousTime = false;
  Rng seeder(seed);
  GaussianState st = evolveDiscrete(s, c, t0);
  for (int k = 0; k < count; ++k) {
    RecordEntry e;
    e.time = static_cast<double>(t0 + k);
    e.shots = shots < 0 ? -1 : shots;
    const HomodyneStatistics stats =
        shots < 0 ? homodyneStatistics(st, h)
                  : sampleHomodyne(st, h, shots, seeder.raw());
    e.mean = stats.mean;
    e.variance = stats.variance;
    rec.entries.push_back(e);
    if (k + 1 < count) st = applyChannel(st, c);
  }
  return rec;
}

MeasurementRecord recordContinuous(const GaussianState& s,
                                   const QdsGenerator& g,
                                   const HomodyneSetting& h,
                                   const std::vector<double>& times,
                                   long shots, std::uint64_t seed) {
  requireSameModes(s.m, g.m, "recordContinuous");
  requireSameModes(s.m, h.m, "recordContinuous");
  if (times.empty()) {
    throw std::invalid_argument("recordContinuous: need at least one time");
  }
  MeasurementRecord rec;
  rec.m = s.m;
  rec.setting = h;
  rec.continuousTime = true;
  Rng seeder(seed);
  for (double t : times) {
    if (!(t >= 0)) {
      throw std::invalid_argument("recordContinuous: times must be >= 0");
    }
    const GaussianState st = applyChannel(s, qdsChannelAt(g, t));
    RecordEntry e;
    e.time = t;
    e.shots = shots < 0 ? -1 : shots;
    const HomodyneStatistics stats =
        shots < 0 ? homodyneStatistics(st, h)
                  : sampleHomodyne(st, h, shots, seeder.raw());
    e.mean = stats.mean;
    e.variance = stats.variance;
    rec.entries.push_back(e);
  }
  return rec;
}

StrippedSeries stripAdditive(const MeasurementRecord& r,
                             const GaussianChannel& c) {
  requireConvention(r, "stripAdditive");
  requireSameModes(r.m, c.m, "stripAdditive");
  if (r.continuousTime) {
    throw std::invalid_argument("stripAdditive: discrete channel given for a "
                                "continuous-time record");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(r.entries.size());
  StrippedSeries out;
  out.alpha = Vec(n);
  out.beta = Vec(n);
  out.times = Vec(n);
  out.continuousTime = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    const RecordEntry& e = r.entries[k];
    const int steps = integerTime(e.time, "stripAdditive");
    const Mat noise = accumulatedNoise(c, steps);
    out.alpha(k) = e.variance - r.setting.a.dot(svec(noise));
    out.beta(k) = e.mean;
    out.times(k) = e.time;
  }
  return out;
}

StrippedSeries stripAdditive(const MeasurementRecord& r,
                             const QdsGenerator& g) {
  requireConvention(r, "stripAdditive");
  requireSameModes(r.m, g.m, "stripAdditive");
  if (!r.continuousTime) {
    throw std::invalid_argument("stripAdditive: generator given for a "
                                "discrete-time record");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(r.entries.size());
  StrippedSeries out;
  out.alpha = Vec(n);
  out.beta = Vec(n);
  out.times = Vec(n);
  out.continuousTime = true;
  for (Eigen::Index k = 0; k < n; ++k) {
    const RecordEntry& e = r.entries[k];
    const Mat noise = accumulatedNoise(g, e.time);
    out.alpha(k) = e.variance - r.setting.a.dot(svec(noise));
    out.beta(k) = e.mean;
    out.times(k) = e.time;
  }
  return out;
}

}  // namespace gdqst

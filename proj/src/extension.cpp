#include "gdqst/extension.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gdqst {

namespace {

// Smallest admissible seed for extending a series that starts at t0.
int requiredSeed(const RecurrenceCoefficients& rec, int t0) {
  return rec.delta - std::min(t0, rec.j0);
}

}  // namespace

RecurrenceCoefficients recurrenceFromMatrix(const Mat& t) {
  const MinimalPolynomial mp = minimalPolynomial(t);
  RecurrenceCoefficients rec;
  rec.delta = mp.delta;
  rec.j0 = mp.j0;
  const int len = mp.delta - mp.j0;
  rec.forward = Vec(len);
  for (int i = 0; i < len; ++i) rec.forward(i) = mp.coeffs(mp.j0 + i);
  // Inverting s_{n+delta-j0} = sum_i forward[i] s_{n+i} for the lowest
  // term gives the backward window over the next delta-j0 values:
  // s_n = (s_{n+L} - sum_{i=1}^{L-1} forward[i] s_{n+i}) / forward[0].
  if (len > 0 && std::abs(rec.forward(0)) > 1e-300) {
    rec.backward = Vec(len);
    for (int i = 0; i + 1 < len; ++i) {
      rec.backward(i) = -rec.forward(i + 1) / rec.forward(0);
    }
    rec.backward(len - 1) = 1.0 / rec.forward(0);
  }
  return rec;
}

Mat companionMatrix(const RecurrenceCoefficients& rec, bool forward) {
  const Vec& c = forward ? rec.forward : rec.backward;
  const int len = static_cast<int>(c.size());
  if (len == 0) {
    throw std::invalid_argument("companionMatrix: recurrence direction unavailable");
  }
  Mat cm = Mat::Zero(len, len);
  for (int i = 0; i + 1 < len; ++i) cm(i, i + 1) = 1.0;
  cm.row(len - 1) = c.transpose();
  return cm;
}

std::vector<double> extendSeriesForward(const std::vector<double>& series,
                                        int t0,
                                        const RecurrenceCoefficients& rec,
                                        int horizon) {
  if (t0 < 0) {
    throw std::invalid_argument("extendSeriesForward: t0 must be >= 0");
  }
  const int need = requiredSeed(rec, t0);
  if (static_cast<int>(series.size()) < need) {
    throw std::invalid_argument(
        "extendSeriesForward: seed needs at least delta - min(t0, j0) = " +
        std::to_string(need) + " samples, got " +
        std::to_string(series.size()));
  }
  const int last = t0 + static_cast<int>(series.size()) - 1;
  if (horizon < t0) {
    throw std::invalid_argument("extendSeriesForward: horizon precedes the series");
  }
  std::vector<double> vals(series.begin(), series.end());
  if (horizon <= last) {
    vals.resize(horizon - t0 + 1);
    return vals;
  }
  const int len = static_cast<int>(rec.forward.size());
  if (len == 0) {
    // delta == j0: the dynamics is nilpotent past j0, all later values 0.
    vals.resize(horizon - t0 + 1, 0.0);
    return vals;
  }
  vals.reserve(horizon - t0 + 1);
  for (int time = last + 1; time <= horizon; ++time) {
    // s_time = sum_i forward[i] * s_{time - len + i}
    double v = 0.0;
    for (int i = 0; i < len; ++i) {
      v += rec.forward(i) * vals[time - len + i - t0];
    }
    vals.push_back(v);
  }
  return vals;
}

std::vector<double> extendSeriesBackward(const std::vector<double>& series,
                                         int t0,
                                         const RecurrenceCoefficients& rec,
                                         int target) {
  if (target < rec.j0) {
    throw std::invalid_argument(
        "extendSeriesBackward: values before time j0 = " +
        std::to_string(rec.j0) +
        " are not determined by the recurrence (requested target " +
        std::to_string(target) + ")");
  }
  if (target > t0) {
    throw std::invalid_argument("extendSeriesBackward: target lies after the series start");
  }
  const int len = static_cast<int>(rec.backward.size());
  if (len == 0 && target < t0) {
    throw std::invalid_argument(
        "extendSeriesBackward: recurrence is not invertible (trailing "
        "coefficient vanishes)");
  }
  if (static_cast<int>(series.size()) < len) {
    throw std::invalid_argument(
        "extendSeriesBackward: seed needs at least delta - j0 = " +
        std::to_string(len) + " samples, got " + std::to_string(series.size()));
  }
  std::vector<double> vals(series.begin(), series.end());
  // Prepend one value at a time: s_n = sum_i backward[i] * s_{n+1+i},
  // where vals currently starts at time n+1.
  for (int time = t0 - 1; time >= target; --time) {
    double v = 0.0;
    for (int i = 0; i < len; ++i) v += rec.backward(i) * vals[i];
    vals.insert(vals.begin(), v);
  }
  return vals;
}

Vec InterpolationWeights::at(double t) const {
  const Eigen::Index n = mu_.size();
  CVec v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = std::exp(mu_(j) * t);
  const CVec w = zLu_.solve(v);
  // The spectrum of a real matrix is conjugate-symmetric, so the exact
  // weights are real; numerical leakage into the imaginary part grows
  // with the conditioning of the node system.
  const double residue = imagResidue(w);
  if (residue > Tolerances::imagResidueRel * std::max(1.0, cond_)) {
    throw std::runtime_error(
        "InterpolationWeights: weight solve left imaginary residue " +
        std::to_string(residue));
  }
  return w.real();
}

InterpolationWeights interpolationWeights(const Mat& c, const Vec& times) {
  if (times.size() != c.rows()) {
    throw std::invalid_argument(
        "interpolationWeights: need exactly dim(C) = " +
        std::to_string(c.rows()) + " sample times, got " +
        std::to_string(times.size()));
  }
  const Spectral sp = spectral(c);
  if (!sp.distinct) {
    throw std::invalid_argument(
        "interpolationWeights: governing matrix has a degenerate spectrum");
  }
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    for (Eigen::Index j = i + 1; j < times.size(); ++j) {
      if (std::abs(times(i) - times(j)) < 1e-12) {
        throw std::invalid_argument("interpolationWeights: sample times must be distinct");
      }
    }
  }
  InterpolationWeights w;
  w.times_ = times;
  w.mu_ = sp.lambda;
  const ExpVandermonde ev = expVandermonde(sp.lambda, times);
  w.zLu_ = Eigen::PartialPivLU<CMat>(ev.z);
  w.cond_ = ev.cond;
  return w;
}

GridResample continuousSeriesToGrid(const Vec& samples, const Vec& times,
                                    const QdsGenerator& g,
                                    const Vec& queryTimes, SeriesKind kind) {
  if (samples.size() != times.size()) {
    throw std::invalid_argument("continuousSeriesToGrid: samples and times differ in length");
  }
  const int n = 2 * g.m;
  Mat governing;
  if (kind == SeriesKind::Alpha) {
    governing = 2.0 * symKron(g.c, Mat::Identity(n, n));
  } else {
    governing = g.c;
  }
  if (samples.size() != governing.rows()) {
    const char* what = kind == SeriesKind::Alpha ? "m(2m+1)" : "2m";
    throw std::invalid_argument(
        "continuousSeriesToGrid: need exactly " + std::string(what) + " = " +
        std::to_string(governing.rows()) + " samples, got " +
        std::to_string(samples.size()));
  }
  const InterpolationWeights w = interpolationWeights(governing, times);
  GridResample out;
  out.zCondition = w.zCondition();
  out.illConditioned = w.illConditioned();
  out.values = Vec(queryTimes.size());
  for (Eigen::Index q = 0; q < queryTimes.size(); ++q) {
    out.values(q) = w.at(queryTimes(q)).dot(samples);
  }
  return out;
}

}  // namespace gdqst

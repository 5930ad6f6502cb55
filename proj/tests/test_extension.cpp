#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gdqst/dynamics.hpp"
#include "gdqst/extension.hpp"

using namespace gdqst;

namespace {

// Scalar series s_i = <u, T^i v>.
std::vector<double> directSeries(const Mat& t, const Vec& u, const Vec& v,
                                 int count) {
  std::vector<double> s;
  Vec w = v;
  for (int i = 0; i < count; ++i) {
    s.push_back(u.dot(w));
    w = t * w;
  }
  return s;
}

Mat randomDense(int n, Rng& rng) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  }
  return a;
}

}  // namespace

TEST_CASE("recurrence of diag(1,2) has the textbook coefficients") {
  Mat t = Mat::Zero(2, 2);
  t(0, 0) = 1;
  t(1, 1) = 2;
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  REQUIRE(rec.delta == 2);
  REQUIRE(rec.j0 == 0);
  REQUIRE(rec.forward.size() == 2);
  CHECK(rec.forward(0) == doctest::Approx(-2).epsilon(1e-10));
  CHECK(rec.forward(1) == doctest::Approx(3).epsilon(1e-10));
  REQUIRE(rec.backward.size() == 2);
  CHECK(rec.backward(0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(rec.backward(1) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("matrix powers satisfy the forward recurrence") {
  Rng rng(51);
  for (int n : {3, 4, 6}) {
    const Mat t = randomDense(n, rng);
    const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
    const double tn = t.norm();
    for (int k = 0; k <= 3; ++k) {
      // T^{delta+k} vs sum_i forward[i] T^{j0+i+k}
      Mat lhs = Mat::Identity(n, n);
      for (int p = 0; p < rec.delta + k; ++p) lhs = lhs * t;
      Mat rhs = Mat::Zero(n, n);
      for (int i = 0; i < rec.forward.size(); ++i) {
        Mat term = Mat::Identity(n, n);
        for (int p = 0; p < rec.j0 + i + k; ++p) term = term * t;
        rhs += rec.forward(i) * term;
      }
      CHECK((lhs - rhs).norm() <= 1e-8 * std::pow(tn, rec.delta + k));
    }
  }
}

TEST_CASE("backward extension of a geometric mixture is exact") {
  // s_i = 3*1^i + 4*2^i obeys the diag(1,2) recurrence; seeding at t0=5
  // and extending back to 0 must land on the exact values.
  Mat t = Mat::Zero(2, 2);
  t(0, 0) = 1;
  t(1, 1) = 2;
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  const std::vector<double> seed{131, 259};  // s_5, s_6
  const std::vector<double> full =
      extendSeriesBackward(seed, 5, rec, 0);
  const std::vector<double> expect{7, 11, 19, 35, 67, 131, 259};
  REQUIRE(full.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i) {
    CHECK(full[i] == doctest::Approx(expect[i]).epsilon(1e-10));
  }
}

TEST_CASE("forward extension reproduces direct simulation") {
  Rng rng(52);
  for (int n : {3, 4}) {
    const Mat raw = randomDense(n, rng);
    const Mat t = raw / raw.norm();  // tame growth for a tight check
    Vec u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u(i) = rng.uniform(-1, 1);
      v(i) = rng.uniform(-1, 1);
    }
    const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
    const std::vector<double> truth = directSeries(t, u, v, 21);
    // Seed with the first delta values at t0 = 0.
    const std::vector<double> seed(truth.begin(), truth.begin() + rec.delta);
    const std::vector<double> ext = extendSeriesForward(seed, 0, rec, 20);
    REQUIRE(ext.size() == 21);
    double scale = 0;
    for (double x : truth) scale = std::max(scale, std::abs(x));
    for (int i = 0; i < 21; ++i) {
      CHECK(std::abs(ext[i] - truth[i]) <= 1e-9 * std::max(1e-12, scale));
    }
  }
}

TEST_CASE("forward extension works from a late start") {
  Rng rng(53);
  const Mat raw = randomDense(4, rng);
  const Mat t = raw / raw.norm();
  Vec u(4), v(4);
  for (int i = 0; i < 4; ++i) {
    u(i) = rng.uniform(-1, 1);
    v(i) = rng.uniform(-1, 1);
  }
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  const std::vector<double> truth = directSeries(t, u, v, 21);
  const int t0 = 5;
  const std::vector<double> seed(truth.begin() + t0,
                                 truth.begin() + t0 + rec.delta);
  const std::vector<double> ext = extendSeriesForward(seed, t0, rec, 20);
  REQUIRE(ext.size() == static_cast<size_t>(21 - t0));
  double scale = 0;
  for (double x : truth) scale = std::max(scale, std::abs(x));
  for (size_t i = 0; i < ext.size(); ++i) {
    CHECK(std::abs(ext[i] - truth[t0 + i]) <= 1e-9 * std::max(1e-12, scale));
  }
}

TEST_CASE("seed-length preconditions are reported with the required count") {
  Mat t = Mat::Zero(2, 2);
  t(0, 0) = 1;
  t(1, 1) = 2;
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  try {
    extendSeriesForward({1.0}, 0, rec, 10);
    FAIL("expected a seed-length rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(extendSeriesBackward({1.0}, 5, rec, 0), std::invalid_argument);
}

TEST_CASE("zero-root multiplicity limits the backward reach") {
  Mat t = Mat::Zero(2, 2);
  t(1, 1) = 2;  // j0 = 1
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  REQUIRE(rec.j0 == 1);
  REQUIRE(rec.forward.size() == 1);
  CHECK(rec.forward(0) == doctest::Approx(2).epsilon(1e-10));
  // Reaching below j0 is rejected and the message names j0.
  try {
    extendSeriesBackward({8.0, 16.0}, 3, rec, 0);
    FAIL("expected a j0 rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("j0 = 1") != std::string::npos);
  }
  // Going back to exactly j0 works.
  const std::vector<double> back = extendSeriesBackward({8.0, 16.0}, 3, rec, 1);
  REQUIRE(back.size() == 4);
  CHECK(back[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(back[1] == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("nilpotent dynamics extends forward to zeros and not backward") {
  Mat t = Mat::Zero(2, 2);
  t(0, 1) = 1;  // delta == j0 == 2
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  REQUIRE(rec.delta == 2);
  REQUIRE(rec.j0 == 2);
  CHECK(rec.forward.size() == 0);
  CHECK(rec.backward.size() == 0);
  const std::vector<double> ext = extendSeriesForward({3.0, 5.0}, 0, rec, 5);
  REQUIRE(ext.size() == 6);
  CHECK(ext[2] == 0.0);
  CHECK(ext[5] == 0.0);
  CHECK_THROWS_AS(extendSeriesBackward({3.0, 5.0}, 2, rec, 0),
                  std::invalid_argument);
}

TEST_CASE("companion matrix advances the sliding window") {
  Mat t = Mat::Zero(2, 2);
  t(0, 0) = 1;
  t(1, 1) = 2;
  const RecurrenceCoefficients rec = recurrenceFromMatrix(t);
  const Mat cf = companionMatrix(rec, true);
  Vec window(2);
  window << 7, 11;  // s_0, s_1 of 3*1^i + 4*2^i
  const Vec next = cf * window;
  CHECK(next(0) == doctest::Approx(11));
  CHECK(next(1) == doctest::Approx(19));
}

TEST_CASE("interpolation weights reproduce each grid point exactly at itself") {
  Rng rng(54);
  const Mat raw = randomDense(4, rng);
  const Mat c = raw - 0.5 * Mat::Identity(4, 4);
  Vec times(4);
  times << 0.3, 0.8, 1.7, 2.4;
  const InterpolationWeights w = interpolationWeights(c, times);
  for (int k = 0; k < 4; ++k) {
    const Vec wk = w.at(times(k));
    for (int j = 0; j < 4; ++j) {
      const double expect = (j == k) ? 1.0 : 0.0;
      CHECK(std::abs(wk(j) - expect) <= 1e-7 * std::max(1.0, w.zCondition()));
    }
  }
}

TEST_CASE("interpolation weights evaluate exponential series off the grid") {
  Rng rng(55);
  const Mat raw = randomDense(3, rng);
  const Mat c = raw - 0.3 * Mat::Identity(3, 3);
  Vec u(3), v(3);
  for (int i = 0; i < 3; ++i) {
    u(i) = rng.uniform(-1, 1);
    v(i) = rng.uniform(-1, 1);
  }
  Vec times(3);
  times << 0.4, 1.1, 2.6;
  Vec samples(3);
  for (int k = 0; k < 3; ++k) samples(k) = u.dot(matrixExp(c, times(k)) * v);
  const InterpolationWeights w = interpolationWeights(c, times);
  for (double t : {0.0, 0.75, 1.9, 3.2}) {
    const double direct = u.dot(matrixExp(c, t) * v);
    const double interp = w.at(t).dot(samples);
    CHECK(std::abs(interp - direct) <=
          1e-8 * w.zCondition() * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("interpolation preconditions: counts, distinctness, spectra") {
  Rng rng(56);
  const Mat c = randomDense(4, rng);
  Vec tooFew(3);
  tooFew << 0.1, 0.5, 0.9;
  CHECK_THROWS_AS(interpolationWeights(c, tooFew), std::invalid_argument);
  Vec repeated(4);
  repeated << 0.1, 0.5, 0.5, 0.9;
  CHECK_THROWS_AS(interpolationWeights(c, repeated), std::invalid_argument);
  Vec fine(2);
  fine << 0.1, 0.9;
  CHECK_THROWS_AS(interpolationWeights(Mat::Identity(2, 2), fine),
                  std::invalid_argument);  // degenerate spectrum
}

TEST_CASE("continuous series resample onto the integer grid") {
  const QdsGenerator g = randomGenerator(1, 57);
  const GaussianState s = randomState(1, 58);
  const HomodyneSetting h = randomSetting(1, 59);
  const std::vector<double> times{0.35, 1.2, 2.6};
  const MeasurementRecord rec = recordContinuous(s, g, h, times, -1, 0);
  const StrippedSeries series = stripAdditive(rec, g);

  Vec grid(3);
  grid << 0, 1, 2;
  const GridResample alpha = continuousSeriesToGrid(series.alpha, series.times,
                                                    g, grid, SeriesKind::Alpha);
  // Reference: strip an exact integer-time record.
  const MeasurementRecord ints = recordContinuous(s, g, h, {0.0, 1.0, 2.0}, -1, 0);
  const StrippedSeries truth = stripAdditive(ints, g);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(alpha.values(k) - truth.alpha(k)) <=
          1e-8 * alpha.zCondition * std::max(1.0, std::abs(truth.alpha(k))));
  }

  Vec gridB(2);
  gridB << 0, 1;
  const GridResample beta =
      continuousSeriesToGrid(series.beta.head(2), series.times.head(2), g,
                             gridB, SeriesKind::Beta);
  const StrippedSeries truthB = stripAdditive(
      recordContinuous(s, g, h, {0.0, 1.0}, -1, 0), g);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(beta.values(k) - truthB.beta(k)) <=
          1e-8 * beta.zCondition * std::max(1.0, std::abs(truthB.beta(k))));
  }
}

TEST_CASE("resampling rejects the wrong sample count by name") {
  const QdsGenerator g = randomGenerator(1, 60);
  Vec samples(2), times(2);
  samples << 1, 2;
  times << 0.3, 0.9;
  try {
    continuousSeriesToGrid(samples, times, g, times, SeriesKind::Alpha);
    FAIL("expected a sample-count rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("m(2m+1)") != std::string::npos);
  }
  Vec one(1);
  one << 0.5;
  try {
    continuousSeriesToGrid(one, one, g, one, SeriesKind::Beta);
    FAIL("expected a sample-count rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2m") != std::string::npos);
  }
}

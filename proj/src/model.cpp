#include "gdqst/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gdqst {

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr std::complex<double> kI{0.0, 1.0};

void requireModes(int m, const char* who) {
  if (m < 1) {
    throw std::invalid_argument(std::string(who) + ": mode count must be >= 1, got " +
                                std::to_string(m));
  }
}

// Symmetric matrix with independent uniform [-1, 1] entries on and above
// the diagonal, drawn row-major.
Mat randomSymmetric(int n, Rng& rng) {
  Mat h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      h(i, j) = rng.uniform(-1.0, 1.0);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

// Antisymmetric matrix with uniform [-1, 1] strict upper triangle.
Mat randomAntisymmetric(int n, Rng& rng) {
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = rng.uniform(-1.0, 1.0);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

Mat randomDense(int rows, int cols, Rng& rng) {
  Mat w(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) w(i, j) = rng.uniform(-1.0, 1.0);
  }
  return w;
}

ValidityReport psdReport(double asym, const CMat& certificate, double tol) {
  ValidityReport rep;
  rep.symmetryResidual = asym;
  if (asym > Tolerances::symmetryRel) {
    rep.valid = false;
    rep.detail = "matrix asymmetry " + std::to_string(asym) +
                 " exceeds tolerance";
    rep.minEigenvalue = 0;
    return rep;
  }
  rep.minEigenvalue = minEigHermitian(certificate);
  rep.valid = rep.minEigenvalue >= -tol;
  if (!rep.valid) {
    rep.detail = "positivity certificate has minimum eigenvalue " +
                 std::to_string(rep.minEigenvalue);
  }
  return rep;
}

}  // namespace

Mat omega(int m) {
  requireModes(m, "omega");
  Mat om = Mat::Zero(2 * m, 2 * m);
  om.block(0, m, m, m) = Mat::Identity(m, m);
  om.block(m, 0, m, m) = -Mat::Identity(m, m);
  return om;
}

HomodyneSetting makeSetting(const Vec& b) {
  if (b.size() % 2 != 0 || b.size() < 2) {
    throw std::invalid_argument("makeSetting: direction length must be 2m");
  }
  const double norm = b.norm();
  if (norm < 1e-12) {
    throw std::invalid_argument("makeSetting: direction has (near-)zero norm");
  }
  HomodyneSetting h;
  h.m = static_cast<int>(b.size()) / 2;
  h.b = b / norm;
  h.a = svec(Mat(h.b * h.b.transpose()));
  return h;
}

ValidityReport validateState(const GaussianState& s, double tol) {
  if (s.gamma.rows() != 2 * s.m || s.gamma.cols() != 2 * s.m ||
      s.d.size() != 2 * s.m) {
    throw std::invalid_argument("validateState: shapes inconsistent with mode count");
  }
  const CMat cert = s.gamma.cast<Complex>() + kI * omega(s.m).cast<Complex>();
  return psdReport(asymmetry(s.gamma), cert, tol);
}

ValidityReport validateState(const GaussianState& s) {
  return validateState(s, validityTolerance());
}

ValidityReport validateChannel(const GaussianChannel& c, double tol) {
  if (c.x.rows() != 2 * c.m || c.x.cols() != 2 * c.m ||
      c.y.rows() != 2 * c.m || c.y.cols() != 2 * c.m) {
    throw std::invalid_argument("validateChannel: shapes inconsistent with mode count");
  }
  const CMat om = omega(c.m).cast<Complex>();
  const CMat cx = c.x.cast<Complex>();
  const CMat cert = c.y.cast<Complex>() + kI * om - kI * cx * om * cx.transpose();
  return psdReport(asymmetry(c.y), cert, tol);
}

ValidityReport validateChannel(const GaussianChannel& c) {
  return validateChannel(c, validityTolerance());
}

ValidityReport validateGenerator(const QdsGenerator& g, double tol) {
  if (g.c.rows() != 2 * g.m || g.c.cols() != 2 * g.m ||
      g.b.rows() != 2 * g.m || g.b.cols() != 2 * g.m) {
    throw std::invalid_argument("validateGenerator: shapes inconsistent with mode count");
  }
  const Mat om = omega(g.m);
  const Mat s = om * g.c + g.c.transpose() * om;
  const CMat cert = g.b.cast<Complex>() - kI * 0.5 * s.cast<Complex>();
  return psdReport(asymmetry(g.b), cert, tol);
}

ValidityReport validateGenerator(const QdsGenerator& g) {
  return validateGenerator(g, validityTolerance());
}

double purityResidual(const Mat& gamma) {
  const int n = static_cast<int>(gamma.rows());
  if (n % 2 != 0 || gamma.cols() != n) {
    throw std::invalid_argument("purityResidual: covariance must be 2m x 2m");
  }
  const Mat go = gamma * omega(n / 2);
  return (go * go + Mat::Identity(n, n)).norm();
}

bool isPure(const GaussianState& s, double tol) {
  return purityResidual(s.gamma) <= tol;
}

Mat pureFromAB(const Mat& a, const Mat& b) {
  const int m = static_cast<int>(a.rows());
  if (a.cols() != m || b.rows() != m || b.cols() != m) {
    throw std::invalid_argument("pureFromAB: A and B must be square of equal size");
  }
  if (asymmetry(a) > Tolerances::symmetryRel ||
      asymmetry(b) > Tolerances::symmetryRel) {
    throw std::invalid_argument("pureFromAB: A and B must be symmetric");
  }
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("pureFromAB: A must be positive definite");
  }
  const Mat aInv = llt.solve(Mat::Identity(m, m));
  Mat gamma(2 * m, 2 * m);
  gamma.block(0, 0, m, m) = a;
  gamma.block(0, m, m, m) = a * b;
  gamma.block(m, 0, m, m) = b * a;
  gamma.block(m, m, m, m) = b * a * b + aInv;
  return 0.5 * (gamma + gamma.transpose());
}

SymplecticCheck symplecticCheck(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  if (n % 2 != 0 || x.cols() != n) {
    throw std::invalid_argument("symplecticCheck: matrix must be 2m x 2m");
  }
  const Mat om = omega(n / 2);
  SymplecticCheck out;
  out.residual = (x.transpose() * om * x - om).norm();
  out.symplectic = out.residual <= Tolerances::symplecticResidual;
  return out;
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

GaussianState randomState(int m, std::uint64_t seed, bool pure) {
  requireModes(m, "randomState");
  Rng rng(seed);
  const Mat h = randomSymmetric(2 * m, rng);
  const Mat s = matrixExp(omega(m) * h, 1.0);
  Vec nu(m);
  for (int i = 0; i < m; ++i) nu(i) = pure ? 1.0 : rng.uniform(1.0, 3.0);
  Vec diag(2 * m);
  diag << nu, nu;
  GaussianState st;
  st.m = m;
  st.gamma = s.transpose() * diag.asDiagonal() * s;
  st.gamma = 0.5 * (st.gamma + st.gamma.transpose());
  st.d = Vec(2 * m);
  for (int i = 0; i < 2 * m; ++i) st.d(i) = rng.uniform(-2.0, 2.0);
  return st;
}

GaussianChannel randomChannel(int m, std::uint64_t seed) {
  requireModes(m, "randomChannel");
  Rng rng(seed);
  const int n = 2 * m;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat x = randomDense(n, n, rng);
    const double targetRadius = rng.uniform(0.5, 1.5);
    const Spectral sp0 = spectral(x);
    const double radius = sp0.lambda.cwiseAbs().maxCoeff();
    if (radius < 1e-12) continue;
    x *= targetRadius / radius;
    if (!spectral(x).distinct) continue;

    const Mat w = randomDense(n, n, rng);
    const CMat om = omega(m).cast<Complex>();
    const CMat cx = x.cast<Complex>();
    const double floor = minEigHermitian(kI * om - kI * cx * om * cx.transpose());
    const double shift = std::max(0.0, -floor) + 0.1;
    GaussianChannel c;
    c.m = m;
    c.x = x;
    c.y = shift * Mat::Identity(n, n) + w * w.transpose();
    return c;
  }
  throw std::runtime_error("randomChannel: no channel with distinct eigenvalues in 100 draws");
}

QdsGenerator randomGenerator(int m, std::uint64_t seed) {
  requireModes(m, "randomGenerator");
  Rng rng(seed);
  const int n = 2 * m;
  const Mat om = omega(m);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Mat a = randomAntisymmetric(n, rng);
    const Mat h = randomSymmetric(n, rng);
    const Mat c = (a - h) * om;
    if (!spectral(c).distinct) continue;
    if (!spectral(2.0 * symKron(c, Mat::Identity(n, n))).distinct) continue;

    const Mat w = randomDense(n, n, rng);
    const Mat s = om * c + c.transpose() * om;
    const double top = maxEigHermitian(kI * 0.5 * s.cast<Complex>());
    QdsGenerator g;
    g.m = m;
    g.c = c;
    g.b = w * w.transpose() + (std::max(0.0, top) + 0.1) * Mat::Identity(n, n);
    return g;
  }
  throw std::runtime_error("randomGenerator: no generator with distinct spectra in 100 draws");
}

Mat randomSymplectic(int m, std::uint64_t seed) {
  requireModes(m, "randomSymplectic");
  Rng rng(seed);
  const Mat h = randomSymmetric(2 * m, rng);
  return matrixExp(omega(m) * h, 1.0);
}

HomodyneSetting randomSetting(int m, std::uint64_t seed) {
  requireModes(m, "randomSetting");
  Rng rng(seed);
  Vec b(2 * m);
  for (int i = 0; i < 2 * m; ++i) b(i) = rng.normal();
  return makeSetting(b);
}

}  // namespace gdqst

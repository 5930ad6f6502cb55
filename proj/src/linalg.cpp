#include "gdqst/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace gdqst {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void requireSquare(const Eigen::Index rows, const Eigen::Index cols,
                   const char* who) {
  if (rows != cols) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> svecImpl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  requireSquare(a.rows(), a.cols(), "svec");
  const int n = static_cast<int>(a.rows());
  Eigen::Vector<Scalar, Eigen::Dynamic> v(pairCount(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      v(k++) = (i == j) ? a(i, i) : Scalar(kSqrt2) * a(i, j);
    }
  }
  return v;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> smatImpl(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& v, int n) {
  if (v.size() != pairCount(n)) {
    throw std::invalid_argument("smat: vector length " + std::to_string(v.size()) +
                                " does not match n(n+1)/2 for n = " + std::to_string(n));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == j) {
        a(i, i) = v(k);
      } else {
        a(i, j) = v(k) / Scalar(kSqrt2);
        a(j, i) = a(i, j);
      }
      ++k;
    }
  }
  return a;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symKronImpl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b) {
  requireSquare(a.rows(), a.cols(), "symKron");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("symKron: operands must have equal shape");
  }
  const int n = static_cast<int>(a.rows());
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M q = buildQ(n).cast<Scalar>();
  const M mixed = Eigen::kroneckerProduct(a, b).eval() +
                  Eigen::kroneckerProduct(b, a).eval();
  return Scalar(0.5) * q * mixed * q.transpose();
}

template <typename MatrixType>
double condImpl(const MatrixType& a) {
  if (a.rows() == 0 || a.cols() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixType> svd(a);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smin <= 0 || !std::isfinite(smax / smin)) {
    return std::numeric_limits<double>::infinity();
  }
  return smax / smin;
}

}  // namespace

double validityTolerance() {
  if (const char* env = std::getenv("GDQST_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && std::isfinite(v) && v > 0) return v;
  }
  return Tolerances::psdFloor;
}

std::vector<std::pair<int, int>> symPairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(pairCount(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

int pairIndex(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n) {
    throw std::out_of_range("pairIndex: {" + std::to_string(i) + "," +
                            std::to_string(j) + "} out of range for n = " +
                            std::to_string(n));
  }
  return i * n - i * (i - 1) / 2 + (j - i);
}

Vec svec(const Mat& a) { return svecImpl<double>(a); }
CVec svec(const CMat& a) { return svecImpl<Complex>(a); }
Mat smat(const Vec& v, int n) { return smatImpl<double>(v, n); }
CMat smat(const CVec& v, int n) { return smatImpl<Complex>(v, n); }

Mat buildQ(int n) {
  Mat q = Mat::Zero(pairCount(n), n * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == j) {
        q(k, i * n + i) = 1.0;  // column-major vec index of (i, i)
      } else {
        q(k, j * n + i) = 1.0 / kSqrt2;  // entry (i, j)
        q(k, i * n + j) = 1.0 / kSqrt2;  // entry (j, i)
      }
      ++k;
    }
  }
  return q;
}

Mat symKron(const Mat& a, const Mat& b) { return symKronImpl<double>(a, b); }
CMat symKron(const CMat& a, const CMat& b) { return symKronImpl<Complex>(a, b); }

Spectral spectral(const Mat& x) {
  requireSquare(x.rows(), x.cols(), "spectral");
  if (!x.allFinite()) throw std::invalid_argument("spectral: non-finite input");
  Eigen::EigenSolver<Mat> es(x);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral: eigendecomposition failed to converge");
  }
  Spectral out;
  out.lambda = es.eigenvalues();
  out.p = es.eigenvectors();
  const int n = static_cast<int>(x.rows());
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      gap = std::min(gap, std::abs(out.lambda(i) - out.lambda(j)));
    }
  }
  out.minGap = (n > 1) ? gap : std::numeric_limits<double>::infinity();
  const double scale = std::max(x.norm(), 1e-300);
  out.distinct = out.minGap >= Tolerances::degeneracyRel * scale;
  out.condP = conditionNumber(out.p);
  return out;
}

double conditionNumber(const Mat& a) { return condImpl(a); }
double conditionNumber(const CMat& a) { return condImpl(a); }

MinimalPolynomial minimalPolynomial(const Mat& t, double rankTol) {
  requireSquare(t.rows(), t.cols(), "minimalPolynomial");
  if (!t.allFinite()) {
    throw std::invalid_argument("minimalPolynomial: non-finite input");
  }
  const int n = static_cast<int>(t.rows());
  const int nn = n * n;

  // Krylov sequence of flattened powers, with per-column scaling so the
  // rank test is insensitive to growth or decay of ||T^k||.
  Mat powers(nn, n + 1);
  Vec scales(n + 1);
  Mat tk = Mat::Identity(n, n);
  for (int k = 0; k <= n; ++k) {
    powers.col(k) = Eigen::Map<const Vec>(tk.data(), nn);
    scales(k) = std::max(powers.col(k).norm(), 1e-300);
    if (k < n) tk = tk * t;
  }

  MinimalPolynomial out;
  for (int k = 1; k <= n; ++k) {
    Mat scaled(nn, k + 1);
    for (int c = 0; c <= k; ++c) scaled.col(c) = powers.col(c) / scales(c);
    Eigen::JacobiSVD<Mat> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin <= rankTol * smax || k == n) {
      out.delta = k;
      out.krylovGap = (smax > 0) ? smin / smax : 0.0;
      // Coefficients of T^delta over lower powers, solved in the scaled
      // basis and unscaled afterwards.
      Mat basis(nn, k);
      for (int c = 0; c < k; ++c) basis.col(c) = powers.col(c) / scales(c);
      Vec rhs = powers.col(k) / scales(k);
      Vec ctil = basis.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
      out.coeffs = Vec(k);
      for (int c = 0; c < k; ++c) {
        out.coeffs(c) = ctil(c) * scales(k) / scales(c);
      }
      break;
    }
  }

  // Multiplicity of the zero root: first k with rank(T^{k+1}) == rank(T^k).
  auto rankOf = [&](const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a);
    svd.setThreshold(rankTol);
    return static_cast<int>(svd.rank());
  };
  int prevRank = n;  // rank of T^0
  Mat power = Mat::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    power = power * t;
    const int r = rankOf(power);
    if (r == prevRank) break;
    prevRank = r;
    out.j0 = k + 1;
  }
  if (out.j0 > out.delta) out.j0 = out.delta;
  return out;
}

Mat matrixExp(const Mat& c, double t) {
  requireSquare(c.rows(), c.cols(), "matrixExp");
  if (!c.allFinite() || !std::isfinite(t)) {
    throw std::invalid_argument("matrixExp: non-finite input");
  }
  const Mat scaled = t * c;
  if (scaled.norm() > 700.0) {
    throw std::overflow_error(
        "matrixExp: ||t*C|| = " + std::to_string(scaled.norm()) +
        " exceeds the representable range");
  }
  return scaled.exp();
}

ExpVandermonde expVandermonde(const CVec& nodes, const Vec& times) {
  ExpVandermonde out;
  out.z = CMat(nodes.size(), times.size());
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    for (Eigen::Index k = 0; k < times.size(); ++k) {
      out.z(j, k) = std::exp(nodes(j) * times(k));
    }
  }
  out.cond = conditionNumber(out.z);
  return out;
}

CMat powerVandermonde(const CVec& nodes, int rows) {
  CMat m(rows, nodes.size());
  CVec row = CVec::Ones(nodes.size());
  for (int i = 0; i < rows; ++i) {
    m.row(i) = row.transpose();
    row = row.cwiseProduct(nodes);
  }
  return m;
}

Complex pairDifferenceProduct(const CVec& nodes) {
  Complex prod(1.0, 0.0);
  for (Eigen::Index p = 0; p < nodes.size(); ++p) {
    for (Eigen::Index q = p + 1; q < nodes.size(); ++q) {
      prod *= nodes(q) - nodes(p);
    }
  }
  return prod;
}

double asymmetry(const Mat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.transpose()).norm() / std::max(1.0, a.norm());
}

double imagResidue(const CMat& a) {
  return a.imag().cwiseAbs().maxCoeff() / std::max(1.0, a.norm());
}

double imagResidue(const CVec& v) {
  return v.imag().cwiseAbs().maxCoeff() / std::max(1.0, v.norm());
}

double minEigHermitian(const CMat& h) {
  requireSquare(h.rows(), h.cols(), "minEigHermitian");
  const CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("minEigHermitian: eigensolver failed");
  }
  return es.eigenvalues().minCoeff();
}

double maxEigHermitian(const CMat& h) {
  requireSquare(h.rows(), h.cols(), "maxEigHermitian");
  const CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("maxEigHermitian: eigensolver failed");
  }
  return es.eigenvalues().maxCoeff();
}

}  // namespace gdqst

#include "gdqst/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gdqst/extension.hpp"

namespace gdqst {

namespace {

int modesOf(const Mat& x, const char* who) {
  const int n = static_cast<int>(x.rows());
  if (n % 2 != 0 || x.cols() != n || n < 2) {
    throw std::invalid_argument(std::string(who) + ": evolution matrix must be 2m x 2m");
  }
  return n / 2;
}

// Node products lambda_mu lambda_nu in canonical pair order.
CVec nodeProducts(const CVec& lambda) {
  const int n = static_cast<int>(lambda.size());
  CVec nodes(pairCount(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) nodes(k++) = lambda(i) * lambda(j);
  }
  return nodes;
}

double minPairGap(const CVec& v) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    for (Eigen::Index j = i + 1; j < v.size(); ++j) {
      gap = std::min(gap, std::abs(v(i) - v(j)));
    }
  }
  return v.size() > 1 ? gap : std::numeric_limits<double>::infinity();
}

// Ratio of extreme magnitudes of a diagonal scaling; infinite when the
// smallest entry vanishes.
double diagCondition(const CVec& d) {
  const double lo = d.cwiseAbs().minCoeff();
  const double hi = d.cwiseAbs().maxCoeff();
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

CVec solveComplex(const CMat& s, const CVec& rhs) {
  if (s.rows() == s.cols()) {
    return Eigen::PartialPivLU<CMat>(s).solve(rhs);
  }
  return s.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
}

// Least-squares solve and rank/null-space data of a real system.
struct RealLstsq {
  Vec minNorm;
  Mat nullBasis;
  int rank = 0;
};

RealLstsq realLstsq(const Mat& a, const Vec& rhs, double rankTol) {
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(rankTol);
  RealLstsq out;
  out.rank = static_cast<int>(svd.rank());
  out.minNorm = svd.solve(rhs);
  out.nullBasis = svd.matrixV().rightCols(a.cols() - out.rank);
  return out;
}

// Flattened purity defect (G Omega)^2 + I of a candidate covariance.
Vec purityDefect(const Mat& g, const Mat& om) {
  const int n = static_cast<int>(g.rows());
  const Mat go = g * om;
  Mat f = go * go + Mat::Identity(n, n);
  return Eigen::Map<Vec>(f.data(), n * n);
}

}  // namespace

std::vector<int> pureColumnIndices(int m) {
  std::vector<int> cols;
  const int n = 2 * m;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // Pairs inside the position block, plus position-momentum pairs on
      // or above the block diagonal: m(m+1) indices in total, matching
      // the parameter count of a pure covariance.
      const bool keep = (i < m) && (j < m || (j - m) >= i);
      if (keep) cols.push_back(k);
      ++k;
    }
  }
  return cols;
}

ReconstructionSystem buildSystem(const Mat& x, const HomodyneSetting& h,
                                 SystemMode mode) {
  const int m = modesOf(x, "buildSystem");
  if (h.m != m) {
    throw std::invalid_argument("buildSystem: setting and dynamics mode counts differ");
  }
  ReconstructionSystem sys;
  sys.m = m;

  const Spectral sp = spectral(x);
  sys.lambda = sp.lambda;
  sys.p = sp.p;
  sys.nodes = nodeProducts(sp.lambda);
  sys.psp = symKron(CMat(sp.p), CMat(sp.p));
  sys.condPsP = conditionNumber(sys.psp);
  sys.aPrime = sys.psp.transpose() * svec(Mat(h.b * h.b.transpose())).cast<Complex>();
  sys.phi = sp.p.transpose() * h.b.cast<Complex>();

  const int unknowns = mode == SystemMode::Pure
                           ? m * (m + 1)
                           : pairCount(2 * m);
  if (mode == SystemMode::Pure) {
    sys.pureColumns = pureColumnIndices(m);
    CVec restricted(sys.pureColumns.size());
    for (size_t c = 0; c < sys.pureColumns.size(); ++c) {
      restricted(c) = sys.nodes(sys.pureColumns[c]);
    }
    sys.momentM = powerVandermonde(restricted, unknowns);
    CVec aRestr(sys.pureColumns.size());
    for (size_t c = 0; c < sys.pureColumns.size(); ++c) {
      aRestr(c) = sys.aPrime(sys.pureColumns[c]);
    }
    sys.condN = diagCondition(aRestr);
  } else {
    sys.momentM = powerVandermonde(sys.nodes, unknowns);
    sys.condN = diagCondition(sys.aPrime);
  }
  sys.condM = conditionNumber(sys.momentM);
  sys.powerA = powerVandermonde(sys.lambda, 2 * m);
  sys.condA = conditionNumber(sys.powerA);

  // Structural obstructions.
  sys.flags.symplecticX = symplecticCheck(x).symplectic;
  const double nodeScale = std::max(sys.nodes.cwiseAbs().maxCoeff(), 1e-300);
  sys.flags.degenerateNodes =
      minPairGap(sys.nodes) < Tolerances::nodeGapRel * nodeScale;
  const double aScale = std::max(sys.aPrime.cwiseAbs().maxCoeff(), 1e-300);
  const double phiScale = std::max(sys.phi.cwiseAbs().maxCoeff(), 1e-300);
  const bool aZero =
      sys.aPrime.cwiseAbs().minCoeff() < Tolerances::zeroEntryRel * aScale;
  const bool phiZero =
      sys.phi.cwiseAbs().minCoeff() < Tolerances::zeroEntryRel * phiScale;
  const bool disconnected = !modeCouplingConnected(x);
  sys.flags.blockDiagonal = disconnected && (aZero || phiZero);
  sys.flags.orthogonalSetting = (aZero || phiZero) && !sys.flags.blockDiagonal;
  sys.flags.illConditioned =
      sys.condM * sys.condN > Tolerances::condLimit;
  return sys;
}

bool modeCouplingConnected(const Mat& x) {
  const int m = modesOf(x, "modeCouplingConnected");
  const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
  const double thr = Tolerances::couplingWeight * scale;
  // Union of coordinate couplings between mode blocks {i, i+m}.
  std::vector<int> comp(m);
  for (int i = 0; i < m; ++i) comp[i] = i;
  const auto root = [&](int i) {
    while (comp[i] != i) i = comp[i] = comp[comp[i]];
    return i;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const bool coupled = std::abs(x(i, j)) > thr || std::abs(x(i, j + m)) > thr ||
                           std::abs(x(i + m, j)) > thr ||
                           std::abs(x(i + m, j + m)) > thr;
      if (coupled) comp[root(i)] = root(j);
    }
  }
  const int r0 = root(0);
  for (int i = 1; i < m; ++i) {
    if (root(i) != r0) return false;
  }
  return true;
}

CovarianceResult reconstructCov(const Vec& alpha, const Mat& x,
                                const HomodyneSetting& h) {
  const int m = modesOf(x, "reconstructCov");
  const int unknowns = pairCount(2 * m);
  if (alpha.size() < unknowns) {
    throw std::invalid_argument(
        "reconstructCov: need at least m(2m+1) = " + std::to_string(unknowns) +
        " samples, got " + std::to_string(alpha.size()));
  }
  const ReconstructionSystem sys = buildSystem(x, h, SystemMode::Full);
  CovarianceResult out;
  out.flags = sys.flags;
  out.condM = sys.condM;
  out.condN = sys.condN;
  if (sys.flags.symplecticX) {
    out.reason = "dynamics is symplectic: the variance series carries no "
                 "fresh information and the state is not identifiable";
    return out;
  }
  if (sys.flags.degenerateNodes) {
    out.reason = "eigenvalue products collide: the moment system is rank "
                 "deficient";
    return out;
  }
  if (sys.flags.blockDiagonal) {
    out.reason = "dynamics decouples mode groups the setting never probes";
    return out;
  }
  if (sys.flags.orthogonalSetting) {
    out.reason = "setting is orthogonal to an eigendirection of the dynamics";
    return out;
  }

  const int rows = static_cast<int>(alpha.size());
  const CMat moment = powerVandermonde(sys.nodes, rows);
  out.condM = conditionNumber(moment);
  const CMat system = moment * sys.aPrime.asDiagonal();
  const CVec gammaPrime = solveComplex(system, alpha.cast<Complex>());
  out.solveResidual = (system * gammaPrime - alpha.cast<Complex>()).norm() /
                      std::max(1.0, alpha.norm());
  const CVec gammaSvec = sys.psp * gammaPrime;
  out.imagResidue = imagResidue(gammaSvec);
  out.gamma = smat(Vec(gammaSvec.real()), 2 * m);
  out.gamma = 0.5 * (out.gamma + out.gamma.transpose());
  // The exact solution is real (the node system is conjugate-symmetric),
  // so imaginary leakage is solve roundoff and grows with the system's
  // conditioning; only leakage beyond that signals inconsistent data.
  if (out.imagResidue >
      Tolerances::imagResidueRel * std::max(1.0, out.condM * out.condN / 1e6)) {
    out.reason = "solve left an imaginary residue of " +
                 std::to_string(out.imagResidue) +
                 "; the series is inconsistent with the dynamics";
    return out;
  }
  out.ok = true;
  return out;
}

DisplacementResult reconstructDisp(const Vec& beta, const Mat& x,
                                   const HomodyneSetting& h) {
  const int m = modesOf(x, "reconstructDisp");
  if (beta.size() < 2 * m) {
    throw std::invalid_argument("reconstructDisp: need at least 2m = " +
                                std::to_string(2 * m) + " samples, got " +
                                std::to_string(beta.size()));
  }
  const Spectral sp = spectral(x);
  DisplacementResult out;
  if (!sp.distinct) {
    out.flags.degenerateNodes = true;
    out.reason = "dynamics has a degenerate spectrum";
    return out;
  }
  const CVec phi = sp.p.transpose() * h.b.cast<Complex>();
  const double phiScale = std::max(phi.cwiseAbs().maxCoeff(), 1e-300);
  if (phi.cwiseAbs().minCoeff() < Tolerances::zeroEntryRel * phiScale) {
    if (!modeCouplingConnected(x)) {
      out.flags.blockDiagonal = true;
      out.reason = "dynamics decouples mode groups the setting never probes; "
                   "the mean system is singular";
    } else {
      out.flags.orthogonalSetting = true;
      out.reason = "setting is orthogonal to an eigendirection of the "
                   "dynamics; the mean system is singular";
    }
    return out;
  }
  const int rows = static_cast<int>(beta.size());
  const CMat power = powerVandermonde(sp.lambda, rows);
  out.condA = conditionNumber(power);
  out.flags.illConditioned = out.condA * diagCondition(phi) > Tolerances::condLimit;
  const CMat system = power * phi.asDiagonal();
  const CVec dPrime = solveComplex(system, beta.cast<Complex>());
  out.solveResidual = (system * dPrime - beta.cast<Complex>()).norm() /
                      std::max(1.0, beta.norm());
  const CVec d = sp.p * dPrime;
  out.imagResidue = imagResidue(d);
  out.d = d.real();
  // Same rule as the covariance solve: the exact result is real, and the
  // imaginary leakage of the solve scales with its conditioning.
  if (out.imagResidue >
      Tolerances::imagResidueRel *
          std::max(1.0, out.condA * diagCondition(phi) / 1e6)) {
    out.reason = "solve left an imaginary residue of " +
                 std::to_string(out.imagResidue) +
                 "; the series is inconsistent with the dynamics";
    return out;
  }
  out.ok = true;
  return out;
}

PureResult reconstructPure(const Vec& alpha, const Mat& x,
                           const HomodyneSetting& h) {
  const int m = modesOf(x, "reconstructPure");
  const int n = 2 * m;
  const int kPure = m * (m + 1);
  const int unknowns = pairCount(n);
  if (alpha.size() < kPure) {
    throw std::invalid_argument("reconstructPure: need at least m(m+1) = " +
                                std::to_string(kPure) + " samples, got " +
                                std::to_string(alpha.size()));
  }
  const ReconstructionSystem sys = buildSystem(x, h, SystemMode::Pure);
  PureResult out;
  out.flags = sys.flags;
  out.condRestricted = sys.condM * sys.condN;
  if (sys.flags.symplecticX || sys.flags.degenerateNodes ||
      sys.flags.blockDiagonal || sys.flags.orthogonalSetting) {
    out.reason = "structural obstruction: the pair (dynamics, setting) lies "
                 "on the non-identifiable null set";
    return out;
  }

  const int rows = static_cast<int>(alpha.size());
  const Mat om = omega(m);

  // Row system in state space: row_i = a^T K^i with K the action of the
  // dynamics on svec coordinates.
  const Mat kAct = symKron(x, x);
  Mat rowSys(rows, unknowns);
  Vec u = h.a;
  for (int i = 0; i < rows; ++i) {
    rowSys.row(i) = u.transpose();
    u = kAct.transpose() * u;
  }
  const RealLstsq ls = realLstsq(rowSys, alpha, 1e-10);
  const int nullDim = unknowns - ls.rank;

  // Seed 1: solution of the restricted linear system (pure columns only),
  // embedded back into full svec coordinates.
  Vec seedRestricted;
  {
    CMat momentRows = powerVandermonde(
        [&] {
          CVec restr(sys.pureColumns.size());
          for (size_t c = 0; c < sys.pureColumns.size(); ++c) {
            restr(c) = sys.nodes(sys.pureColumns[c]);
          }
          return restr;
        }(),
        rows);
    CVec aRestr(sys.pureColumns.size());
    for (size_t c = 0; c < sys.pureColumns.size(); ++c) {
      aRestr(c) = sys.aPrime(sys.pureColumns[c]);
    }
    const CMat system = momentRows * aRestr.asDiagonal();
    const CVec sol = solveComplex(system, alpha.cast<Complex>());
    CVec full = CVec::Zero(unknowns);
    for (size_t c = 0; c < sys.pureColumns.size(); ++c) {
      full(sys.pureColumns[c]) = sol(c);
    }
    const CVec gammaSvec = sys.psp * full;
    out.imagResidue = imagResidue(gammaSvec);
    seedRestricted = gammaSvec.real();
  }

  // Gauss-Newton for a pure physical state on the affine set of
  // data-consistent solutions g = minNorm + nullBasis * z.
  const auto refine = [&](Vec z, Vec& gOut, double& purityOut) {
    constexpr int kMaxIter = 80;
    if (nullDim == 0) {
      gOut = ls.minNorm;
      purityOut = purityDefect(smat(gOut, n), om).norm();
      return;
    }
    for (int it = 0; it < kMaxIter; ++it) {
      const Vec g = ls.minNorm + ls.nullBasis * z;
      const Mat gam = smat(g, n);
      const Vec f = purityDefect(gam, om);
      const double fn = f.norm();
      if (fn < 1e-12 * std::max(1.0, gam.squaredNorm())) break;
      Mat jac(n * n, nullDim);
      for (int c = 0; c < nullDim; ++c) {
        const Mat dg = smat(Vec(ls.nullBasis.col(c)), n);
        const Mat dgo = dg * om;
        const Mat go = gam * om;
        Mat df = dgo * go + go * dgo;
        jac.col(c) = Eigen::Map<Vec>(df.data(), n * n);
      }
      const Vec dz = jac.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                         .solve(Vec(-f));
      double eta = 1.0;
      double bestNorm = fn;
      Vec bestZ = z;
      for (int bt = 0; bt < 30; ++bt) {
        const Vec zTry = z + eta * dz;
        const Vec fTry =
            purityDefect(smat(Vec(ls.minNorm + ls.nullBasis * zTry), n), om);
        if (fTry.norm() < bestNorm) {
          bestNorm = fTry.norm();
          bestZ = zTry;
          break;
        }
        eta *= 0.5;
      }
      if (bestNorm >= fn * (1.0 - 1e-12)) break;  // stalled
      z = bestZ;
    }
    gOut = ls.minNorm + ls.nullBasis * z;
    purityOut = purityDefect(smat(gOut, n), om).norm();
  };

  // Multistart: the min-norm point, the restricted-system seed, a
  // deterministic ladder of magnitudes along each null direction (distinct
  // solution branches can sit several times |minNorm| away from the
  // min-norm point), then random perturbations. Deterministic for fixed
  // inputs.
  const double scale = ls.minNorm.norm() + 1.0;
  std::vector<Vec> starts;
  starts.push_back(Vec::Zero(nullDim));
  if (nullDim > 0) {
    starts.push_back(
        Vec(ls.nullBasis.transpose() * (seedRestricted - ls.minNorm)));
    for (int dirIdx = 0; dirIdx < nullDim; ++dirIdx) {
      for (double mag : {1.0, 2.0, 4.0, 8.0}) {
        for (double sign : {1.0, -1.0}) {
          Vec z = Vec::Zero(nullDim);
          z(dirIdx) = sign * mag * scale;
          starts.push_back(z);
        }
      }
    }
    Rng rng(0x5ad5eedULL);
    for (int s = 0; s < 30; ++s) {
      Vec z(nullDim);
      for (int i = 0; i < nullDim; ++i) z(i) = scale * rng.normal();
      starts.push_back(z);
    }
  }
  std::vector<Vec> found;
  Vec firstG;
  double firstPurity = 0;
  for (const Vec& z0 : starts) {
    Vec g;
    double purity = 0;
    refine(z0, g, purity);
    if (purity > Tolerances::purityResidual) continue;
    const Mat gam = smat(g, n);
    // Physical pure state: positive definite covariance.
    Eigen::SelfAdjointEigenSolver<Mat> es(gam, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-9) continue;
    bool duplicate = false;
    for (const Vec& other : found) {
      if ((g - other).norm() <= 1e-6 * std::max(1.0, other.norm())) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      found.push_back(g);
      if (found.size() == 1) {
        firstG = g;
        firstPurity = purity;
      }
    }
  }

  out.candidates = static_cast<int>(found.size());
  if (found.empty()) {
    out.reason = "no physical pure state is consistent with the series";
    return out;
  }
  out.gamma = smat(firstG, n);
  out.gamma = 0.5 * (out.gamma + out.gamma.transpose());
  out.purity = firstPurity;
  out.dataResidual =
      (rowSys * firstG - alpha).norm() / std::max(1.0, alpha.norm());
  out.flags.ambiguous = found.size() > 1;
  out.ok = true;
  if (out.flags.ambiguous) {
    out.reason = "several pure states reproduce the series; returning the "
                 "first found (one extra sample removes the ambiguity)";
  }
  return out;
}

namespace {

// Relative distance between a record and its re-simulation from an estimate.
double forwardResidual(const MeasurementRecord& data,
                       const MeasurementRecord& fit) {
  double num = 0;
  double den = 0;
  for (size_t k = 0; k < data.entries.size(); ++k) {
    const double dm = data.entries[k].mean - fit.entries[k].mean;
    const double dv = data.entries[k].variance - fit.entries[k].variance;
    num += dm * dm + dv * dv;
    den += data.entries[k].mean * data.entries[k].mean +
           data.entries[k].variance * data.entries[k].variance;
  }
  return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

TomographyReport assembleReport(const CovarianceResult& cov,
                                const DisplacementResult& disp, int m,
                                bool pure) {
  TomographyReport rep;
  rep.pureMode = pure;
  rep.flags = cov.flags;
  rep.flags.blockDiagonal = rep.flags.blockDiagonal || disp.flags.blockDiagonal;
  rep.flags.orthogonalSetting =
      rep.flags.orthogonalSetting || disp.flags.orthogonalSetting;
  rep.flags.degenerateNodes =
      rep.flags.degenerateNodes || disp.flags.degenerateNodes;
  rep.flags.illConditioned =
      rep.flags.illConditioned || disp.flags.illConditioned;
  rep.condM = cov.condM;
  rep.condN = cov.condN;
  rep.condA = disp.condA;
  rep.imagResidue = std::max(cov.imagResidue, disp.imagResidue);
  if (!cov.ok) {
    rep.reason = cov.reason;
    return rep;
  }
  if (!disp.ok) {
    rep.reason = disp.reason;
    return rep;
  }
  rep.estimate.m = m;
  rep.estimate.gamma = cov.gamma;
  rep.estimate.d = disp.d;
  rep.stateValidity = validateState(rep.estimate);
  rep.ok = true;
  return rep;
}

}  // namespace

TomographyReport reconstructFull(const MeasurementRecord& r,
                                 const GaussianChannel& c, bool pure) {
  StrippedSeries series = stripAdditive(r, c);
  const int m = c.m;
  const int t0 = static_cast<int>(std::llround(series.times(0)));

  // Series must be indexed from step 0; earlier start offsets are undone
  // through the backward recurrence of the dynamics.
  if (t0 > 0) {
    const Mat kAct = symKron(c.x, c.x);
    const RecurrenceCoefficients recA = recurrenceFromMatrix(kAct);
    const RecurrenceCoefficients recB = recurrenceFromMatrix(c.x);
    std::vector<double> a(series.alpha.data(),
                          series.alpha.data() + series.alpha.size());
    std::vector<double> b(series.beta.data(),
                          series.beta.data() + series.beta.size());
    try {
      a = extendSeriesBackward(a, t0, recA, 0);
      b = extendSeriesBackward(b, t0, recB, 0);
    } catch (const std::invalid_argument& err) {
      TomographyReport rep;
      rep.pureMode = pure;
      rep.reason = std::string("record starts at step ") + std::to_string(t0) +
                   " and cannot be shifted to 0: " + err.what();
      return rep;
    }
    series.alpha = Eigen::Map<Vec>(a.data(), static_cast<Eigen::Index>(a.size()));
    series.beta = Eigen::Map<Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
  }

  TomographyReport rep;
  if (pure) {
    const PureResult ps = reconstructPure(series.alpha, c.x, r.setting);
    const DisplacementResult disp =
        reconstructDisp(series.beta, c.x, r.setting);
    CovarianceResult cov;
    cov.ok = ps.ok;
    cov.reason = ps.reason;
    cov.flags = ps.flags;
    cov.gamma = ps.gamma;
    cov.imagResidue = ps.imagResidue;
    cov.condM = ps.condRestricted;
    rep = assembleReport(cov, disp, m, true);
    rep.ambiguous = ps.flags.ambiguous;
    rep.flags.ambiguous = ps.flags.ambiguous;
    if (rep.ok && ps.flags.ambiguous && rep.reason.empty()) {
      rep.reason = ps.reason;
    }
  } else {
    const CovarianceResult cov = reconstructCov(series.alpha, c.x, r.setting);
    const DisplacementResult disp =
        reconstructDisp(series.beta, c.x, r.setting);
    rep = assembleReport(cov, disp, m, false);
  }
  if (rep.ok) {
    const MeasurementRecord refit = recordDiscrete(
        rep.estimate, c, r.setting, t0, static_cast<int>(r.entries.size()),
        -1, 0);
    rep.forwardResidual = forwardResidual(r, refit);
  }
  return rep;
}

TomographyReport reconstructFull(const MeasurementRecord& r,
                                 const QdsGenerator& g, bool pure) {
  const StrippedSeries series = stripAdditive(r, g);
  const int m = g.m;
  const int varCount = pairCount(2 * m);
  const int meanCount = 2 * m;
  TomographyReport rep;
  rep.pureMode = pure;
  if (series.alpha.size() != varCount) {
    rep.reason = "continuous records need exactly m(2m+1) = " +
                 std::to_string(varCount) + " samples to resample, got " +
                 std::to_string(series.alpha.size());
    return rep;
  }

  // Resample both series onto the integer grid of the unit-time channel,
  // then reconstruct discretely against X_1.
  GridResample alphaGrid, betaGrid;
  try {
    Vec gridA(varCount);
    for (int i = 0; i < varCount; ++i) gridA(i) = i;
    alphaGrid = continuousSeriesToGrid(series.alpha, series.times, g, gridA,
                                       SeriesKind::Alpha);
    Vec gridB(meanCount);
    for (int i = 0; i < meanCount; ++i) gridB(i) = i;
    betaGrid = continuousSeriesToGrid(series.beta.head(meanCount),
                                      series.times.head(meanCount), g, gridB,
                                      SeriesKind::Beta);
  } catch (const std::exception& err) {
    rep.reason = std::string("resampling onto the integer grid failed: ") +
                 err.what();
    return rep;
  }
  const GaussianChannel unit = qdsChannelAt(g, 1.0);
  if (pure) {
    const PureResult ps =
        reconstructPure(alphaGrid.values.head(m * (m + 1)), unit.x, r.setting);
    const DisplacementResult disp =
        reconstructDisp(betaGrid.values, unit.x, r.setting);
    CovarianceResult cov;
    cov.ok = ps.ok;
    cov.reason = ps.reason;
    cov.flags = ps.flags;
    cov.gamma = ps.gamma;
    cov.imagResidue = ps.imagResidue;
    cov.condM = ps.condRestricted;
    rep = assembleReport(cov, disp, m, true);
    rep.ambiguous = ps.flags.ambiguous;
    rep.flags.ambiguous = ps.flags.ambiguous;
  } else {
    const CovarianceResult cov =
        reconstructCov(alphaGrid.values, unit.x, r.setting);
    const DisplacementResult disp =
        reconstructDisp(betaGrid.values, unit.x, r.setting);
    rep = assembleReport(cov, disp, m, false);
  }
  rep.gridCondition = std::max(alphaGrid.zCondition, betaGrid.zCondition);
  rep.flags.illConditioned =
      rep.flags.illConditioned || alphaGrid.illConditioned ||
      betaGrid.illConditioned;
  if (rep.ok) {
    std::vector<double> times(r.entries.size());
    for (size_t k = 0; k < r.entries.size(); ++k) times[k] = r.entries[k].time;
    const MeasurementRecord refit =
        recordContinuous(rep.estimate, g, r.setting, times, -1, 0);
    rep.forwardResidual = forwardResidual(r, refit);
  }
  return rep;
}

DiagnosisReport diagnose(const Mat& x, const HomodyneSetting& h) {
  const ReconstructionSystem sys = buildSystem(x, h, SystemMode::Full);
  DiagnosisReport rep;
  rep.flags = sys.flags;
  rep.symplecticResidual = symplecticCheck(x).residual;
  const double nodeScale = std::max(sys.nodes.cwiseAbs().maxCoeff(), 1e-300);
  rep.minNodeGap = minPairGap(sys.nodes) / nodeScale;
  rep.minAPrime = sys.aPrime.cwiseAbs().minCoeff() /
                  std::max(sys.aPrime.cwiseAbs().maxCoeff(), 1e-300);
  rep.minPhi = sys.phi.cwiseAbs().minCoeff() /
               std::max(sys.phi.cwiseAbs().maxCoeff(), 1e-300);
  rep.couplingConnected = modeCouplingConnected(x);
  rep.condM = sys.condM;
  rep.condA = sys.condA;
  if (sys.flags.symplecticX) {
    rep.reasons.push_back("dynamics is symplectic (residual " +
                          std::to_string(rep.symplecticResidual) +
                          "): variances evolve without fresh noise and the "
                          "moment system degenerates");
  }
  if (sys.flags.degenerateNodes) {
    rep.reasons.push_back("eigenvalue products collide (relative gap " +
                          std::to_string(rep.minNodeGap) + ")");
  }
  if (sys.flags.blockDiagonal) {
    rep.reasons.push_back("dynamics decouples mode groups and the setting "
                          "misses at least one of them");
  }
  if (sys.flags.orthogonalSetting) {
    rep.reasons.push_back("setting is orthogonal to an eigendirection "
                          "(smallest relative coefficient " +
                          std::to_string(std::min(rep.minAPrime, rep.minPhi)) +
                          ")");
  }
  rep.verdict = (sys.flags.symplecticX || sys.flags.degenerateNodes ||
                 sys.flags.blockDiagonal || sys.flags.orthogonalSetting)
                    ? Verdict::NullSet
                    : Verdict::Generic;
  return rep;
}

DiagnosisReport diagnose(const QdsGenerator& g, const HomodyneSetting& h) {
  return diagnose(qdsChannelAt(g, 1.0).x, h);
}

CompletenessReport settingCompleteness(const std::vector<HomodyneSetting>& hs) {
  if (hs.empty()) {
    throw std::invalid_argument("settingCompleteness: need at least one setting");
  }
  const int m = hs[0].m;
  for (const auto& h : hs) {
    if (h.m != m) {
      throw std::invalid_argument("settingCompleteness: mixed mode counts");
    }
  }
  CompletenessReport rep;
  rep.svecTarget = pairCount(2 * m);
  rep.dispTarget = 2 * m;
  Mat svecStack(hs.size(), rep.svecTarget);
  Mat dispStack(hs.size(), rep.dispTarget);
  for (size_t k = 0; k < hs.size(); ++k) {
    svecStack.row(k) = hs[k].a.transpose();
    dispStack.row(k) = hs[k].b.transpose();
  }
  Eigen::BDCSVD<Mat> s1(svecStack);
  s1.setThreshold(1e-10);
  Eigen::BDCSVD<Mat> s2(dispStack);
  s2.setThreshold(1e-10);
  rep.svecRank = static_cast<int>(s1.rank());
  rep.dispRank = static_cast<int>(s2.rank());
  rep.complete =
      rep.svecRank == rep.svecTarget && rep.dispRank == rep.dispTarget;
  return rep;
}

}  // namespace gdqst

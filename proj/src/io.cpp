#include "gdqst/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gdqst {

namespace {

const Json& field(const Json& j, const char* name, const std::string& what) {
  const auto it = j.find(name);
  if (it == j.end()) {
    throw std::runtime_error(what + ": missing field '" + name + "'");
  }
  return *it;
}

double finiteNumber(const Json& j, const std::string& what) {
  if (!j.is_number()) {
    throw std::runtime_error(what + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw std::runtime_error(what + ": non-finite value");
  }
  return v;
}

int envelopeModes(const Json& j, const char* kind) {
  const std::string what = std::string("document '") + kind + "'";
  const std::string k = field(j, "kind", what).get<std::string>();
  if (k != kind) {
    throw std::runtime_error(what + ": kind is '" + k + "'");
  }
  const int version = field(j, "version", what).get<int>();
  if (version != kSchemaVersion) {
    throw std::runtime_error(what + ": unsupported version " +
                             std::to_string(version));
  }
  const int m = field(j, "modes", what).get<int>();
  if (m < 1) {
    throw std::runtime_error(what + ": modes must be >= 1");
  }
  return m;
}

Json envelope(const char* kind, int m) {
  Json j;
  j["kind"] = kind;
  j["version"] = kSchemaVersion;
  j["modes"] = m;
  return j;
}

void checkSquare(const Mat& a, int n, const char* name,
                 const std::string& what) {
  if (a.rows() != n || a.cols() != n) {
    throw std::runtime_error(what + ": field '" + name + "' must be " +
                             std::to_string(n) + "x" + std::to_string(n));
  }
}

void checkLength(const Vec& v, int n, const char* name,
                 const std::string& what) {
  if (v.size() != n) {
    throw std::runtime_error(what + ": field '" + name + "' must have length " +
                             std::to_string(n));
  }
}

}  // namespace

Json toJson(const Mat& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json toJson(const Vec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Mat matFromJson(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw std::runtime_error(what + ": expected a nested array (row-major matrix)");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.front().size());
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) {
      throw std::runtime_error(what + ": ragged matrix rows");
    }
    for (int c = 0; c < cols; ++c) {
      a(i, c) = finiteNumber(j[i][c], what);
    }
  }
  return a;
}

Vec vecFromJson(const Json& j, const std::string& what) {
  if (!j.is_array()) {
    throw std::runtime_error(what + ": expected an array");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = finiteNumber(j[static_cast<size_t>(i)], what);
  }
  return v;
}

Json toJson(const GaussianState& s) {
  Json j = envelope("state", s.m);
  j["gamma"] = toJson(s.gamma);
  j["d"] = toJson(s.d);
  return j;
}

Json toJson(const GaussianChannel& c) {
  Json j = envelope("channel", c.m);
  j["x"] = toJson(c.x);
  j["y"] = toJson(c.y);
  return j;
}

Json toJson(const QdsGenerator& g) {
  Json j = envelope("generator", g.m);
  j["c"] = toJson(g.c);
  j["b"] = toJson(g.b);
  return j;
}

Json toJson(const HomodyneSetting& h) {
  Json j = envelope("setting", h.m);
  j["b"] = toJson(h.b);
  return j;
}

Json toJson(const MeasurementRecord& r) {
  Json j = envelope("record", r.m);
  j["setting"] = toJson(r.setting);
  j["continuousTime"] = r.continuousTime;
  j["convention"] = r.convention;
  Json entries = Json::array();
  for (const RecordEntry& e : r.entries) {
    Json je;
    je["time"] = e.time;
    je["mean"] = e.mean;
    je["variance"] = e.variance;
    je["shots"] = e.shots;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json toJson(const ObstructionFlags& f) {
  Json j;
  j["symplecticX"] = f.symplecticX;
  j["degenerateNodes"] = f.degenerateNodes;
  j["orthogonalSetting"] = f.orthogonalSetting;
  j["blockDiagonal"] = f.blockDiagonal;
  j["ambiguous"] = f.ambiguous;
  j["illConditioned"] = f.illConditioned;
  return j;
}

Json toJson(const ValidityReport& v) {
  Json j;
  j["valid"] = v.valid;
  j["symmetryResidual"] = v.symmetryResidual;
  j["minEigenvalue"] = v.minEigenvalue;
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

Json toJson(const TomographyReport& t) {
  Json j = envelope("report", t.estimate.m > 0 ? t.estimate.m : 1);
  j["ok"] = t.ok;
  if (!t.reason.empty()) j["reason"] = t.reason;
  if (t.ok) {
    j["estimate"] = toJson(t.estimate);
    j["stateValidity"] = toJson(t.stateValidity);
  }
  j["flags"] = toJson(t.flags);
  j["forwardResidual"] = t.forwardResidual;
  j["imagResidue"] = t.imagResidue;
  j["conditioning"] = {{"momentSystem", t.condM},
                       {"settingDiagonal", t.condN},
                       {"meanSystem", t.condA},
                       {"resampling", t.gridCondition}};
  j["pureMode"] = t.pureMode;
  j["ambiguous"] = t.ambiguous;
  return j;
}

Json toJson(const DiagnosisReport& d) {
  Json j;
  j["kind"] = "diagnosis";
  j["version"] = kSchemaVersion;
  j["verdict"] = d.verdict == Verdict::Generic ? "generic" : "null-set";
  j["reasons"] = d.reasons;
  j["flags"] = toJson(d.flags);
  j["symplecticResidual"] = d.symplecticResidual;
  j["minNodeGap"] = d.minNodeGap;
  j["minSettingCoefficient"] = std::min(d.minAPrime, d.minPhi);
  j["couplingConnected"] = d.couplingConnected;
  j["conditioning"] = {{"momentSystem", d.condM}, {"meanSystem", d.condA}};
  return j;
}

GaussianState stateFromJson(const Json& j) {
  const int m = envelopeModes(j, "state");
  GaussianState s;
  s.m = m;
  s.gamma = matFromJson(field(j, "gamma", "state"), "state.gamma");
  s.d = vecFromJson(field(j, "d", "state"), "state.d");
  checkSquare(s.gamma, 2 * m, "gamma", "state");
  checkLength(s.d, 2 * m, "d", "state");
  return s;
}

GaussianChannel channelFromJson(const Json& j) {
  const int m = envelopeModes(j, "channel");
  GaussianChannel c;
  c.m = m;
  c.x = matFromJson(field(j, "x", "channel"), "channel.x");
  c.y = matFromJson(field(j, "y", "channel"), "channel.y");
  checkSquare(c.x, 2 * m, "x", "channel");
  checkSquare(c.y, 2 * m, "y", "channel");
  return c;
}

QdsGenerator generatorFromJson(const Json& j) {
  const int m = envelopeModes(j, "generator");
  QdsGenerator g;
  g.m = m;
  g.c = matFromJson(field(j, "c", "generator"), "generator.c");
  g.b = matFromJson(field(j, "b", "generator"), "generator.b");
  checkSquare(g.c, 2 * m, "c", "generator");
  checkSquare(g.b, 2 * m, "b", "generator");
  return g;
}

HomodyneSetting settingFromJson(const Json& j) {
  const int m = envelopeModes(j, "setting");
  const Vec b = vecFromJson(field(j, "b", "setting"), "setting.b");
  checkLength(b, 2 * m, "b", "setting");
  if (std::abs(b.norm() - 1.0) > 1e-9) {
    throw std::runtime_error("setting.b: direction must be unit norm");
  }
  return makeSetting(b);
}

MeasurementRecord recordFromJson(const Json& j) {
  const int m = envelopeModes(j, "record");
  MeasurementRecord r;
  r.m = m;
  r.setting = settingFromJson(field(j, "setting", "record"));
  if (r.setting.m != m) {
    throw std::runtime_error("record: embedded setting has a different mode count");
  }
  r.continuousTime = field(j, "continuousTime", "record").get<bool>();
  r.convention = field(j, "convention", "record").get<std::string>();
  const Json& entries = field(j, "entries", "record");
  if (!entries.is_array() || entries.empty()) {
    throw std::runtime_error("record.entries: expected a non-empty array");
  }
  for (const Json& je : entries) {
    RecordEntry e;
    e.time = finiteNumber(field(je, "time", "record.entries"), "record.entries.time");
    e.mean = finiteNumber(field(je, "mean", "record.entries"), "record.entries.mean");
    e.variance = finiteNumber(field(je, "variance", "record.entries"),
                              "record.entries.variance");
    e.shots = field(je, "shots", "record.entries").get<long>();
    r.entries.push_back(e);
  }
  return r;
}

void saveJson(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("saveJson: cannot open '" + path + "' for writing");
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw std::runtime_error("saveJson: write to '" + path + "' failed");
  }
}

Json loadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("loadJson: cannot open '" + path + "'");
  }
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("loadJson: '" + path + "' is not valid JSON: " +
                             e.what());
  }
  return j;
}

std::string peekKind(const std::string& path) {
  const Json j = loadJson(path);
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::runtime_error("peekKind: '" + path + "' has no 'kind' field");
  }
  return j["kind"].get<std::string>();
}

}  // namespace gdqst

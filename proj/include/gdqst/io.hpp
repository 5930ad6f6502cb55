#ifndef GDQST_IO_HPP
#define GDQST_IO_HPP

#include <string>

#include <json.hpp>

#include "gdqst/dynamics.hpp"
#include "gdqst/reconstruction.hpp"

namespace gdqst {

using Json = nlohmann::json;

// All documents share the envelope {"kind": <type>, "version": 1,
// "modes": m, ...payload}. Matrices serialize as row-major nested
// arrays; vectors as flat arrays. Derived quantities (svec caches,
// condition numbers of inputs) are never serialized. Wall-clock
// metadata, when present, lives only under "meta" so documents with
// identical content are byte-identical.

inline constexpr int kSchemaVersion = 1;

Json toJson(const Mat& a);
Json toJson(const Vec& v);
Mat matFromJson(const Json& j, const std::string& what);
Vec vecFromJson(const Json& j, const std::string& what);

Json toJson(const GaussianState& s);
Json toJson(const GaussianChannel& c);
Json toJson(const QdsGenerator& g);
Json toJson(const HomodyneSetting& h);
Json toJson(const MeasurementRecord& r);
Json toJson(const ObstructionFlags& f);
Json toJson(const ValidityReport& v);
Json toJson(const TomographyReport& t);
Json toJson(const DiagnosisReport& d);

// Parsers check the envelope (kind, version, modes), all shapes, and
// finiteness of every number; they throw std::runtime_error with the
// offending field named.
GaussianState stateFromJson(const Json& j);
GaussianChannel channelFromJson(const Json& j);
QdsGenerator generatorFromJson(const Json& j);
HomodyneSetting settingFromJson(const Json& j);
MeasurementRecord recordFromJson(const Json& j);

// File helpers (2-space indentation, trailing newline).
void saveJson(const Json& j, const std::string& path);
Json loadJson(const std::string& path);

// Reads the "kind" field of a document on disk.
std::string peekKind(const std::string& path);

}  // namespace gdqst

#endif  // GDQST_IO_HPP

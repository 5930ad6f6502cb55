// Command-line front end: generate random instances, simulate homodyne
// records under discrete channels or continuous semigroups, reconstruct
// states from records, and diagnose (dynamics, setting) pairs.
//
// Exit codes: 0 success, 2 usage error, 3 invalid or unreadable input,
// 4 reconstruction refused (structural null set), 5 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gdqst/dynamics.hpp"
#include "gdqst/io.hpp"
#include "gdqst/model.hpp"
#include "gdqst/reconstruction.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitRefused = 4;
constexpr int kExitNumerical = 5;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

void emit(const gdqst::Json& j, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    gdqst::saveJson(j, outPath);
  }
}

gdqst::Json loadOrThrow(const std::string& path) {
  try {
    return gdqst::loadJson(path);
  } catch (const std::exception& e) {
    throw CliError(kExitInvalidInput, e.what());
  }
}

// Loads either a channel or a generator document, dispatching on "kind".
struct Dynamics {
  bool continuous = false;
  gdqst::GaussianChannel channel;
  gdqst::QdsGenerator generator;
  int modes() const { return continuous ? generator.m : channel.m; }
};

Dynamics loadDynamics(const std::string& path) {
  const gdqst::Json j = loadOrThrow(path);
  Dynamics dyn;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "channel") {
      dyn.channel = gdqst::channelFromJson(j);
      const gdqst::ValidityReport v = gdqst::validateChannel(dyn.channel);
      if (!v.valid) {
        throw CliError(kExitInvalidInput,
                       "channel in '" + path + "' is not completely positive: " +
                           v.detail);
      }
    } else if (kind == "generator") {
      dyn.continuous = true;
      dyn.generator = gdqst::generatorFromJson(j);
      const gdqst::ValidityReport v = gdqst::validateGenerator(dyn.generator);
      if (!v.valid) {
        throw CliError(kExitInvalidInput, "generator in '" + path +
                                              "' is not a valid semigroup "
                                              "generator: " +
                                              v.detail);
      }
    } else {
      throw CliError(kExitInvalidInput,
                     "'" + path + "' holds kind '" + kind +
                         "', expected 'channel' or 'generator'");
    }
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kExitInvalidInput, e.what());
  }
  return dyn;
}

gdqst::GaussianState loadState(const std::string& path) {
  try {
    const gdqst::GaussianState s = gdqst::stateFromJson(loadOrThrow(path));
    const gdqst::ValidityReport v = gdqst::validateState(s);
    if (!v.valid) {
      throw CliError(kExitInvalidInput,
                     "state in '" + path + "' is unphysical: " + v.detail);
    }
    return s;
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kExitInvalidInput, e.what());
  }
}

gdqst::HomodyneSetting loadSetting(const std::string& path) {
  try {
    return gdqst::settingFromJson(loadOrThrow(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kExitInvalidInput, e.what());
  }
}

gdqst::MeasurementRecord loadRecord(const std::string& path) {
  try {
    return gdqst::recordFromJson(loadOrThrow(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kExitInvalidInput, e.what());
  }
}

std::vector<double> parseTimes(const std::string& spec) {
  std::vector<double> times;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      times.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CliError(kExitUsage, "--times: cannot parse '" + item + "'");
    }
  }
  if (times.empty()) {
    throw CliError(kExitUsage, "--times: empty list");
  }
  return times;
}

int exitCodeForReport(const gdqst::TomographyReport& rep) {
  if (rep.ok) return kExitOk;
  return rep.flags.any() ? kExitRefused : kExitNumerical;
}

void writeCsv(const std::string& path, const gdqst::MeasurementRecord& data,
              const gdqst::MeasurementRecord& refit) {
  std::ofstream out(path);
  if (!out) {
    throw CliError(kExitNumerical, "cannot open '" + path + "' for writing");
  }
  out << "time,mean,variance,reconstructedResidual\n";
  for (size_t k = 0; k < data.entries.size(); ++k) {
    const double dm = data.entries[k].mean - refit.entries[k].mean;
    const double dv = data.entries[k].variance - refit.entries[k].variance;
    out << data.entries[k].time << "," << data.entries[k].mean << ","
        << data.entries[k].variance << "," << std::sqrt(dm * dm + dv * dv)
        << "\n";
  }
}

double relError(const gdqst::Mat& est, const gdqst::Mat& truth) {
  return (est - truth).norm() / std::max(1.0, truth.norm());
}

double relError(const gdqst::Vec& est, const gdqst::Vec& truth) {
  return (est - truth).norm() / std::max(1.0, truth.norm());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Gaussian-state tomography under known dynamics: simulate homodyne "
      "time series and reconstruct the state that produced them.\n"
      "The GDQST_TOL environment variable overrides the default "
      "positivity tolerance used by all validity checks."};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand(
      "generate", "Write a random state, channel, generator, or setting");
  std::string genWhat;
  int genModes = 1;
  std::uint64_t genSeed = 1;
  bool genPure = false;
  std::string genOut;
  gen->add_option("what", genWhat, "state | channel | generator | setting")
      ->required()
      ->check(CLI::IsMember({"state", "channel", "generator", "setting"}));
  gen->add_option("-m,--modes", genModes, "number of modes")->check(CLI::PositiveNumber);
  gen->add_option("-s,--seed", genSeed, "random seed");
  gen->add_flag("--pure", genPure, "draw a pure state (state only)");
  gen->add_option("-o,--out", genOut, "output path (stdout when omitted)");

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "Produce a homodyne measurement record for a state under "
                  "the given dynamics");
  std::string simState, simDynamics, simSetting, simTimes, simOut;
  int simT0 = 0;
  int simCount = 0;
  long simShots = -1;
  std::uint64_t simSeed = 1;
  sim->add_option("--state", simState, "state document")->required();
  sim->add_option("--dynamics", simDynamics, "channel or generator document")
      ->required();
  sim->add_option("--setting", simSetting, "homodyne setting document")->required();
  sim->add_option("--t0", simT0, "first discrete step (discrete dynamics)");
  sim->add_option("--count", simCount,
                  "number of samples (default m(2m+1))");
  sim->add_option("--times", simTimes,
                  "comma-separated sample times (continuous dynamics; "
                  "default k/4 for k = 1..count)");
  sim->add_option("--shots", simShots,
                  "shots per sample; negative records exact statistics");
  sim->add_option("-s,--seed", simSeed, "sampling seed");
  sim->add_option("-o,--out", simOut, "output path (stdout when omitted)");

  // reconstruct --------------------------------------------------------------
  auto* rec = app.add_subcommand(
      "reconstruct", "Recover the state behind a measurement record");
  std::string recRecord, recDynamics, recTruth, recOut, recCsv;
  bool recPure = false;
  rec->add_option("--record", recRecord, "measurement record document")->required();
  rec->add_option("--dynamics", recDynamics, "channel or generator document")
      ->required();
  rec->add_flag("--pure", recPure, "use the shortened pure-state scheme");
  rec->add_option("--truth", recTruth,
                  "optional true state; adds error fields to the report");
  rec->add_option("-o,--out", recOut, "output path (stdout when omitted)");
  rec->add_option("--csv", recCsv,
                  "also write per-entry residuals as CSV "
                  "(time, mean, variance, reconstructedResidual)");

  // diagnose ---------------------------------------------------------------
  auto* diag = app.add_subcommand(
      "diagnose", "Decide whether (dynamics, setting) identifies the state");
  std::string diagDynamics, diagSetting, diagOut;
  diag->add_option("--dynamics", diagDynamics, "channel or generator document")
      ->required();
  diag->add_option("--setting", diagSetting, "homodyne setting document")->required();
  diag->add_option("-o,--out", diagOut, "output path (stdout when omitted)");

  // roundtrip ----------------------------------------------------------------
  auto* rt = app.add_subcommand(
      "roundtrip", "Generate, simulate, and reconstruct random instances; "
                   "report recovery errors");
  int rtModes = 1;
  int rtTrials = 10;
  std::uint64_t rtSeed = 1;
  long rtShots = -1;
  bool rtContinuous = false;
  bool rtPure = false;
  std::string rtOut;
  rt->add_option("-m,--modes", rtModes, "number of modes")->check(CLI::PositiveNumber);
  rt->add_option("-t,--trials", rtTrials, "number of trials")->check(CLI::PositiveNumber);
  rt->add_option("-s,--seed", rtSeed, "base seed");
  rt->add_option("--shots", rtShots,
                 "shots per sample; negative uses exact statistics");
  rt->add_flag("--continuous", rtContinuous, "use semigroup dynamics");
  rt->add_flag("--pure", rtPure, "pure states and the shortened scheme");
  rt->add_option("-o,--out", rtOut, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(gen)) {
      gdqst::Json j;
      if (genWhat == "state") {
        j = gdqst::toJson(gdqst::randomState(genModes, genSeed, genPure));
      } else if (genWhat == "channel") {
        j = gdqst::toJson(gdqst::randomChannel(genModes, genSeed));
      } else if (genWhat == "generator") {
        j = gdqst::toJson(gdqst::randomGenerator(genModes, genSeed));
      } else {
        j = gdqst::toJson(gdqst::randomSetting(genModes, genSeed));
      }
      emit(j, genOut);
      return kExitOk;
    }

    if (app.got_subcommand(sim)) {
      const gdqst::GaussianState state = loadState(simState);
      const Dynamics dyn = loadDynamics(simDynamics);
      const gdqst::HomodyneSetting setting = loadSetting(simSetting);
      const int m = state.m;
      const int count =
          simCount > 0 ? simCount : m * (2 * m + 1);
      gdqst::MeasurementRecord record;
      if (dyn.continuous) {
        std::vector<double> times;
        if (!simTimes.empty()) {
          times = parseTimes(simTimes);
        } else {
          for (int k = 1; k <= count; ++k) times.push_back(0.25 * k);
        }
        record = gdqst::recordContinuous(state, dyn.generator, setting, times,
                                         simShots, simSeed);
      } else {
        record = gdqst::recordDiscrete(state, dyn.channel, setting, simT0,
                                       count, simShots, simSeed);
      }
      emit(gdqst::toJson(record), simOut);
      return kExitOk;
    }

    if (app.got_subcommand(rec)) {
      const gdqst::MeasurementRecord record = loadRecord(recRecord);
      const Dynamics dyn = loadDynamics(recDynamics);
      gdqst::TomographyReport report =
          dyn.continuous ? gdqst::reconstructFull(record, dyn.generator, recPure)
                         : gdqst::reconstructFull(record, dyn.channel, recPure);
      gdqst::Json j = gdqst::toJson(report);
      if (!recTruth.empty() && report.ok) {
        const gdqst::GaussianState truth = loadState(recTruth);
        j["errorGamma"] = relError(report.estimate.gamma, truth.gamma);
        j["errorD"] = relError(report.estimate.d, truth.d);
      }
      emit(j, recOut);
      if (report.ok && !recCsv.empty()) {
        gdqst::MeasurementRecord refit;
        if (dyn.continuous) {
          std::vector<double> times;
          for (const auto& e : record.entries) times.push_back(e.time);
          refit = gdqst::recordContinuous(report.estimate, dyn.generator,
                                          record.setting, times, -1, 0);
        } else {
          const int t0 = static_cast<int>(std::llround(record.entries.front().time));
          refit = gdqst::recordDiscrete(report.estimate, dyn.channel,
                                        record.setting, t0,
                                        static_cast<int>(record.entries.size()),
                                        -1, 0);
        }
        writeCsv(recCsv, record, refit);
      }
      if (!report.ok) {
        std::cerr << "reconstruction failed: " << report.reason << "\n";
      }
      return exitCodeForReport(report);
    }

    if (app.got_subcommand(diag)) {
      const Dynamics dyn = loadDynamics(diagDynamics);
      const gdqst::HomodyneSetting setting = loadSetting(diagSetting);
      const gdqst::DiagnosisReport report =
          dyn.continuous ? gdqst::diagnose(dyn.generator, setting)
                         : gdqst::diagnose(dyn.channel.x, setting);
      emit(gdqst::toJson(report), diagOut);
      return kExitOk;
    }

    if (app.got_subcommand(rt)) {
      gdqst::Json trials = gdqst::Json::array();
      double worstGamma = 0;
      double worstD = 0;
      int failures = 0;
      for (int t = 0; t < rtTrials; ++t) {
        const std::uint64_t seed = rtSeed + 1000003ULL * t;
        const gdqst::GaussianState truth =
            gdqst::randomState(rtModes, seed, rtPure);
        const gdqst::HomodyneSetting setting =
            gdqst::randomSetting(rtModes, seed ^ 0xabcdefULL);
        const int m = rtModes;
        gdqst::MeasurementRecord record;
        gdqst::TomographyReport report;
        if (rtContinuous) {
          const gdqst::QdsGenerator g = gdqst::randomGenerator(rtModes, seed + 7);
          std::vector<double> times;
          const int count = m * (2 * m + 1);
          gdqst::Rng rng(seed + 13);
          for (int k = 0; k < count; ++k) times.push_back(rng.uniform(1e-3, 3.0));
          std::sort(times.begin(), times.end());
          record = gdqst::recordContinuous(truth, g, setting, times, rtShots,
                                           seed + 17);
          report = gdqst::reconstructFull(record, g, rtPure);
        } else {
          const gdqst::GaussianChannel c = gdqst::randomChannel(rtModes, seed + 7);
          const int count = rtPure ? m * (m + 1) : m * (2 * m + 1);
          record = gdqst::recordDiscrete(truth, c, setting, 0, count, rtShots,
                                         seed + 17);
          report = gdqst::reconstructFull(record, c, rtPure);
        }
        gdqst::Json row;
        row["trial"] = t;
        row["ok"] = report.ok;
        if (report.ok) {
          row["errorGamma"] = relError(report.estimate.gamma, truth.gamma);
          row["errorD"] = relError(report.estimate.d, truth.d);
          row["ambiguous"] = report.ambiguous;
          worstGamma = std::max(worstGamma, row["errorGamma"].get<double>());
          worstD = std::max(worstD, row["errorD"].get<double>());
        } else {
          row["reason"] = report.reason;
          ++failures;
        }
        trials.push_back(std::move(row));
      }
      gdqst::Json summary;
      summary["kind"] = "roundtrip-summary";
      summary["version"] = gdqst::kSchemaVersion;
      summary["modes"] = rtModes;
      summary["trials"] = trials;
      summary["failures"] = failures;
      summary["worstErrorGamma"] = worstGamma;
      summary["worstErrorD"] = worstD;
      emit(summary, rtOut);
      return failures == 0 ? kExitOk : kExitNumerical;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

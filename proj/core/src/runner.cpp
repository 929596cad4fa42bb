// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "decolab/analytic.hpp"
#include "decolab/oracle.hpp"
#include "decolab/sid.hpp"
#include "decolab/timescales.hpp"

namespace decolab {

namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), std::streamsize(content.size()));
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

/// One CSV row per grid point. The envelope column carries the scenario's
/// natural decay diagnostic (documented per scenario in the README).
std::string render_csv(const std::vector<double>& t, const std::vector<double>& re,
                       const std::vector<double>& im,
                       const std::vector<double>& envelope) {
  std::string csv = "t, value_re, value_im, envelope\n";
  csv.reserve(csv.size() + t.size() * 80);
  char buf[256];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g, %.17g, %.17g, %.17g\n", t[i], re[i], im[i],
                  envelope[i]);
    csv += buf;
  }
  return csv;
}

Json json_time(const TimeValue& t) {
  switch (t.kind) {
    case TimeValue::Kind::Finite:
      return t.value;
    case TimeValue::Kind::Infinite:
      return "infinite";
    case TimeValue::Kind::NotReached:
      return "not reached";
    case TimeValue::Kind::NotEvaluated:
      break;
  }
  return nullptr;
}

Json json_method(const TimeValue& t, TimeScaleMethod method) {
  if (t.kind == TimeValue::Kind::NotEvaluated) return nullptr;
  return to_string(method);
}

Json json_times(const TimeScaleReport& report) {
  Json out;
  out["t_ds"] = json_time(report.t_ds);
  out["t_ds_method"] = json_method(report.t_ds, report.t_ds_method);
  out["t_rs"] = json_time(report.t_rs);
  out["t_rs_method"] = json_method(report.t_rs, report.t_rs_method);
  out["t_ru"] = json_time(report.t_ru);
  out["t_ru_method"] = json_method(report.t_ru, report.t_ru_method);
  out["ordering_ok"] = report.ordering_ok;
  return out;
}

/// Every run writes the same top-level key set; inapplicable sections are
/// null so downstream readers never branch on key presence.
Json summary_skeleton(const RunConfig& config) {
  Json out;
  out["scenario"] = to_string(config.scenario);
  out["seed"] = config.seed;
  out["grid"] = {{"t_start", config.grid.t_start},
                 {"t_end", config.grid.t_end},
                 {"n_points", config.grid.n_points}};
  out["spin_bath"] = nullptr;
  out["sid"] = nullptr;
  out["two_times"] = nullptr;
  out["times"] = nullptr;
  out["verify"] = nullptr;
  return out;
}

std::string observable_kind_name(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::SystemOnly:
      return "system_only";
    case ObservableKind::Full:
      return "full";
    case ObservableKind::SingleEnvSpin:
      return "single_env";
  }
  return "unknown";
}

std::string format_time_value(const TimeValue& t) {
  if (t.kind == TimeValue::Kind::Finite) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", t.value);
    return buf;
  }
  return to_string(t.kind);
}

int run_spin_bath(const RunConfig& config, const std::filesystem::path& out_dir,
                  bool quiet) {
  const SpinBathConfig model = realize_spin_bath(config.spin_bath, config.seed);
  require_valid(model);
  const ObservableSpec obs =
      realize_observable(config.spin_bath.observable, model.n_env());

  const std::vector<double> times = config.grid.times();
  std::vector<double> value(times.size()), envelope(times.size()),
      zeros(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    value[i] = expectation(model, obs, times[i]);
  }
  switch (obs.kind) {
    case ObservableKind::SystemOnly:
      for (std::size_t i = 0; i < times.size(); ++i) {
        envelope[i] = std::abs(overlap_r(model, times[i]));
      }
      break;
    case ObservableKind::Full:
      for (std::size_t i = 0; i < times.size(); ++i) {
        envelope[i] = std::abs(gamma1(model, obs, times[i]));
      }
      break;
    case ObservableKind::SingleEnvSpin: {
      const EnvSpin& spin = model.spins[obs.env_index];
      const HermitianBlock2& block = obs.env[obs.env_index];
      const double static_part =
          std::norm(spin.alpha) * block.d0 + std::norm(spin.beta) * block.d1;
      for (std::size_t i = 0; i < times.size(); ++i) {
        envelope[i] = std::abs(value[i] - static_part);
      }
      break;
    }
  }

  const TimeScaleReport report = spin_bath_report(model, config.grid);

  Json summary = summary_skeleton(config);
  Json section;
  section["n_env"] = model.n_env();
  section["g_max"] = config.spin_bath.g_max;
  section["hbar"] = model.hbar;
  section["observable_kind"] = observable_kind_name(obs.kind);
  section["sampled_environment"] = config.spin_bath.spins.empty();
  section["interaction_energy_spread"] = interaction_energy_spread(model);
  section["overlap_abs_end"] = std::abs(overlap_r(model, config.grid.t_end));
  section["purity_start"] = purity(model, config.grid.t_start);
  section["purity_end"] = purity(model, config.grid.t_end);
  summary["spin_bath"] = section;
  summary["times"] = json_times(report);

  write_file(out_dir / "series.csv", render_csv(times, value, zeros, envelope));
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  if (!quiet) {
    std::cout << "spin_bath: " << times.size() << " samples, n_env = "
              << model.n_env() << ", observable = " << observable_kind_name(obs.kind)
              << "\n"
              << "  t_ds = " << format_time_value(report.t_ds)
              << ", t_rs = " << format_time_value(report.t_rs)
              << ", t_ru = " << format_time_value(report.t_ru) << "\n"
              << "  wrote " << (out_dir / "series.csv").string() << " and "
              << (out_dir / "summary.json").string() << "\n";
  }
  return kExitOk;
}

int run_sid(const RunConfig& config, const std::filesystem::path& out_dir,
            bool quiet) {
  const SidRunConfig& sid = config.sid;
  const SidKernel kernel =
      sample_kernel(sid.kernel, sid.n_omega, sid.omega_max, sid.hbar);

  const std::vector<double> times = config.grid.times();
  const double asymptote = asymptotic_value(kernel);
  std::vector<double> value(times.size()), envelope(times.size()),
      zeros(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    value[i] = expectation_at(kernel, times[i]);
    envelope[i] = offdiag_envelope(kernel, times[i]);
  }

  const TimeGrid fit_grid = default_envelope_grid(kernel);
  bool have_decay = false;
  DecayEstimate decay;
  try {
    decay = fit_kernel_decay(kernel);
    have_decay = true;
  } catch (const FitDomainError&) {
    // The envelope did not expose a usable decay window (e.g. it collapses
    // to the noise floor immediately); the run still reports the series.
  }

  TimeScaleReport report;
  if (have_decay && decay.exponential) {
    report.t_ds = TimeValue::finite(decay.t_relax);
    report.t_ds_method = TimeScaleMethod::EnvelopeFit;
  } else {
    report.t_ds = crossing_time(offdiag_envelope(kernel, fit_grid),
                                kDecoherenceRatio);
    report.t_ds_method = TimeScaleMethod::ThresholdCrossing;
  }
  report.t_rs = TimeValue::not_evaluated();
  report.t_ru = TimeValue::finite(revival_time(kernel));
  report.t_ru_method = TimeScaleMethod::PoleFormula;
  report.ordering_ok = ordering_ok(report.t_ds, report.t_rs, report.t_ru);

  std::string family_name = "custom";
  if (std::holds_alternative<LorentzianKernel>(sid.kernel)) family_name = "lorentzian";
  if (std::holds_alternative<GaussianKernel>(sid.kernel)) family_name = "gaussian";
  if (std::holds_alternative<TableKernel>(sid.kernel)) family_name = "table";

  Json summary = summary_skeleton(config);
  Json section;
  section["kernel_family"] = family_name;
  section["n_omega"] = kernel.n_omega;
  section["omega_max"] = kernel.omega_max;
  section["hbar"] = kernel.hbar;
  section["asymptotic_value"] = asymptote;
  section["revival_time"] = revival_time(kernel);
  section["fit_window"] = {{"t_start", fit_grid.t_start},
                           {"t_end", fit_grid.t_end},
                           {"n_points", fit_grid.n_points}};
  if (have_decay) {
    section["decay"] = {{"gamma", decay.gamma},
                        {"t_relax", decay.t_relax},
                        {"residual", decay.residual},
                        {"exponential", decay.exponential},
                        {"n_used", decay.n_used}};
  } else {
    section["decay"] = nullptr;
  }
  summary["sid"] = section;
  summary["times"] = json_times(report);

  write_file(out_dir / "series.csv", render_csv(times, value, zeros, envelope));
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  if (!quiet) {
    std::cout << "sid: " << times.size() << " samples, kernel = " << family_name
              << ", n_omega = " << kernel.n_omega << "\n";
    if (have_decay) {
      std::cout << "  gamma = " << format_double(decay.gamma) << " ("
                << (decay.exponential ? "exponential" : "not exponential")
                << "), t_relax = " << format_double(decay.t_relax) << "\n";
    } else {
      std::cout << "  no usable decay window on the fit grid\n";
    }
    std::cout << "  t_ds = " << format_time_value(report.t_ds)
              << ", t_ru = " << format_time_value(report.t_ru) << "\n"
              << "  wrote " << (out_dir / "series.csv").string() << " and "
              << (out_dir / "summary.json").string() << "\n";
  }
  return kExitOk;
}

int run_two_times(const RunConfig& config, const std::filesystem::path& out_dir,
                  bool quiet) {
  const TwoTimesScenario& tt = config.two_times;
  const RealSeries series = two_times_series(tt, config.grid);
  const TwoStageDetection detection = detect_two_stages(series, tt.hbar);
  const TimeScaleReport report = two_times_report(tt, config.grid);

  std::vector<double> zeros(series.t.size(), 0.0);

  Json summary = summary_skeleton(config);
  Json section;
  section["gamma_se"] = tt.gamma_se;
  section["gamma_e"] = tt.gamma_e;
  section["weight_a"] = tt.weight_a;
  section["weight_b"] = tt.weight_b;
  section["hbar"] = tt.hbar;
  section["detection"] = {{"two_stages", detection.two_stages},
                          {"gamma_fast", detection.gamma_fast},
                          {"gamma_slow", detection.gamma_slow},
                          {"split_time", detection.split_time},
                          {"residual_fast", detection.residual_fast},
                          {"residual_slow", detection.residual_slow}};
  summary["two_times"] = section;
  summary["times"] = json_times(report);

  write_file(out_dir / "series.csv",
             render_csv(series.t, series.v, zeros, series.v));
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  if (!quiet) {
    std::cout << "two_times: " << series.t.size() << " samples, "
              << (detection.two_stages ? "two stages" : "single stage") << "\n"
              << "  gamma_fast = " << format_double(detection.gamma_fast)
              << ", gamma_slow = " << format_double(detection.gamma_slow) << "\n"
              << "  t_rs = " << format_time_value(report.t_rs)
              << ", t_ru = " << format_time_value(report.t_ru) << "\n"
              << "  wrote " << (out_dir / "series.csv").string() << " and "
              << (out_dir / "summary.json").string() << "\n";
  }
  return kExitOk;
}

int run_verify_scenario(const RunConfig& config, const std::filesystem::path& out_dir,
                        bool quiet) {
  VerifySettings settings;
  settings.env_sizes = config.verify.sizes;
  settings.trials_per_size = config.verify.trials;
  settings.tolerance = config.verify.tolerance;
  settings.seed = config.seed;
  settings.quiet = quiet;
  const VerificationReport report = run_verification(settings);

  Json summary = summary_skeleton(config);
  Json section;
  section["sizes"] = config.verify.sizes;
  section["trials"] = config.verify.trials;
  section["tolerance"] = config.verify.tolerance;
  section["checks_run"] = report.checks_run;
  section["failures"] = report.failures;
  section["max_abs_error"] = report.max_abs_error;
  section["worst_case"] = report.worst_case;
  section["ok"] = report.ok();
  Json operations = Json::array();
  for (const VerificationEntry& entry : report.entries) {
    operations.push_back({{"operation", entry.operation},
                          {"checks", entry.checks},
                          {"failures", entry.failures},
                          {"max_abs_error", entry.max_abs_error},
                          {"pass", entry.failures == 0}});
  }
  section["operations"] = operations;
  summary["verify"] = section;

  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  if (!quiet) {
    std::cout << format_report(report) << "  wrote "
              << (out_dir / "summary.json").string() << "\n";
  }
  if (!report.ok()) {
    std::cerr << "verification failed: " << report.failures << " of "
              << report.checks_run << " checks exceeded tolerance "
              << format_double(settings.tolerance) << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int run_scenario(const RunConfig& config, const std::string& out_dir, bool quiet) {
  try {
    const std::filesystem::path out(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
      throw IoError("cannot create output directory '" + out_dir +
                    "': " + ec.message());
    }
    switch (config.scenario) {
      case Scenario::SpinBath:
        return run_spin_bath(config, out, quiet);
      case Scenario::Sid:
        return run_sid(config, out, quiet);
      case Scenario::TwoTimes:
        return run_two_times(config, out, quiet);
      case Scenario::Verify:
        return run_verify_scenario(config, out, quiet);
    }
    std::cerr << "error: unknown scenario\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DetectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

namespace {

/// Index layout for the per-operation result rows.
enum : std::size_t {
  kOpOverlap = 0,
  kOpExpectationSystem,
  kOpExpectationFull,
  kOpExpectationSingle,
  kOpReducedState,
  kOpPurity,
  kOpNorm,
  kOpCount,
};

const char* const kOperationNames[kOpCount] = {
    "branch overlap",
    "expectation (system-only)",
    "expectation (full product)",
    "expectation (single environment spin)",
    "reduced state",
    "purity",
    "evolved norm",
};

struct Recorder {
  VerificationReport report;
  double tolerance = 0.0;

  explicit Recorder(double tol) : tolerance(tol) {
    for (std::size_t op = 0; op < kOpCount; ++op) {
      VerificationEntry entry;
      entry.operation = kOperationNames[op];
      report.entries.push_back(entry);
    }
  }

  void add(std::size_t op, double error, std::size_t n_env, std::size_t trial,
           double t) {
    VerificationEntry& entry = report.entries[op];
    ++entry.checks;
    ++report.checks_run;
    if (!(error <= tolerance)) {
      ++entry.failures;
      ++report.failures;
    }
    if (error > entry.max_abs_error) entry.max_abs_error = error;
    if (error > report.max_abs_error) {
      report.max_abs_error = error;
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s (n_env=%zu, trial=%zu, t=%.6g)",
                    kOperationNames[op], n_env, trial, t);
      report.worst_case = buf;
    }
  }
};

HermitianBlock2 random_block(std::mt19937_64& engine) {
  const auto symmetric = [&engine] { return 2.0 * uniform_01(engine) - 1.0; };
  HermitianBlock2 block;
  block.d0 = symmetric();
  block.d1 = symmetric();
  block.off = 0.5 * Complex{symmetric(), symmetric()};
  return block;
}

}  // namespace

VerificationReport run_verification(const VerifySettings& settings) {
  Recorder recorder(settings.tolerance);
  std::mt19937_64 master(settings.seed);

  for (std::size_t n_env : settings.env_sizes) {
    if (n_env > kMaxOracleSpins) {
      throw CapacityError("verification size " + std::to_string(n_env) +
                          " exceeds the dense-evolution capacity of " +
                          std::to_string(kMaxOracleSpins) + " spins");
    }
    for (std::size_t trial = 0; trial < settings.trials_per_size; ++trial) {
      const std::uint64_t model_seed = master();
      const std::uint64_t aux_seed = master();
      const SpinBathConfig model = sample_spin_bath_config(n_env, model_seed, 1.0);
      std::mt19937_64 aux(aux_seed);

      const ObservableSpec obs_system =
          observable_system_only(random_block(aux), n_env);
      std::vector<HermitianBlock2> env_blocks;
      env_blocks.reserve(n_env);
      for (std::size_t i = 0; i < n_env; ++i) env_blocks.push_back(random_block(aux));
      const ObservableSpec obs_full =
          make_full_observable(random_block(aux), env_blocks);
      ObservableSpec obs_single;
      if (n_env > 0) {
        const std::size_t j = std::size_t(aux() % n_env);
        obs_single = observable_single_env(j, random_block(aux), n_env);
      }

      const FullState psi0 = build_initial(model);
      constexpr std::size_t kTimesPerTrial = 8;
      for (std::size_t k = 0; k < kTimesPerTrial; ++k) {
        const double t = -10.0 + 20.0 * uniform_01(aux);
        const FullState psi_t = evolve(psi0, model, t);

        recorder.add(kOpOverlap,
                     std::abs(overlap_r(model, t) - environment_overlap(model, t)),
                     n_env, trial, t);
        recorder.add(kOpExpectationSystem,
                     std::abs(expectation(model, obs_system, t) -
                              expectation(psi_t, obs_system)),
                     n_env, trial, t);
        recorder.add(kOpExpectationFull,
                     std::abs(expectation(model, obs_full, t) -
                              expectation(psi_t, obs_full)),
                     n_env, trial, t);
        if (n_env > 0) {
          recorder.add(kOpExpectationSingle,
                       std::abs(expectation(model, obs_single, t) -
                                expectation(psi_t, obs_single)),
                       n_env, trial, t);
        }

        const ReducedState2 closed = reduced_state(model, t);
        const ReducedState2 traced = partial_trace(psi_t);
        const double reduced_error =
            std::max({std::abs(closed.p0 - traced.p0), std::abs(closed.p1 - traced.p1),
                      std::abs(closed.coh - traced.coh)});
        recorder.add(kOpReducedState, reduced_error, n_env, trial, t);

        const double traced_purity = traced.p0 * traced.p0 + traced.p1 * traced.p1 +
                                     2.0 * std::norm(traced.coh);
        recorder.add(kOpPurity, std::abs(purity(model, t) - traced_purity), n_env,
                     trial, t);
        recorder.add(kOpNorm, std::abs(state_norm(psi_t) - 1.0), n_env, trial, t);
      }
    }
  }
  return recorder.report;
}

std::string format_report(const VerificationReport& report) {
  std::size_t width = std::string("operation").size();
  for (const VerificationEntry& entry : report.entries) {
    width = std::max(width, entry.operation.size());
  }
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %8s  %12s  %s\n", int(width), "operation",
                "checks", "failures", "max |delta|", "status");
  out += buf;
  for (const VerificationEntry& entry : report.entries) {
    std::snprintf(buf, sizeof buf, "%-*s  %8zu  %8zu  %12.3e  %s\n", int(width),
                  entry.operation.c_str(), entry.checks, entry.failures,
                  entry.max_abs_error, entry.failures == 0 ? "pass" : "FAIL");
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-*s  %8zu  %8zu  %12.3e  %s\n", int(width), "total",
                report.checks_run, report.failures, report.max_abs_error,
                report.failures == 0 ? "pass" : "FAIL");
  out += buf;
  if (!report.worst_case.empty()) {
    out += "worst case: " + report.worst_case + "\n";
  }
  return out;
}

}  // namespace decolab

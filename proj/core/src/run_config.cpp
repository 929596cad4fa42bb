// This file is part of decolab.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include "decolab/run_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "decolab/oracle.hpp"

namespace decolab {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(path + "/" + item.key(), "unknown key");
  }
}

const Json* find(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double get_number(const Json& obj, const std::string& path, const char* key,
                  double fallback) {
  const Json* v = find(obj, key);
  return v ? as_number(*v, path + "/" + key) : fallback;
}

std::uint64_t as_unsigned(const Json& value, const std::string& path) {
  if (!value.is_number_unsigned()) fail(path, "must be a non-negative integer");
  return value.get<std::uint64_t>();
}

std::uint64_t get_unsigned(const Json& obj, const std::string& path, const char* key,
                           std::uint64_t fallback) {
  const Json* v = find(obj, key);
  return v ? as_unsigned(*v, path + "/" + key) : fallback;
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "must be a string");
  return value.get<std::string>();
}

Complex as_complex(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    fail(path, "must be a two-element array [re, im]");
  }
  return Complex{as_number(value[0], path + "/0"), as_number(value[1], path + "/1")};
}

Complex get_complex(const Json& obj, const std::string& path, const char* key,
                    Complex fallback) {
  const Json* v = find(obj, key);
  return v ? as_complex(*v, path + "/" + key) : fallback;
}

HermitianBlock2 as_block(const Json& value, const std::string& path) {
  if (!value.is_object()) fail(path, "must be an object {d0, d1, off}");
  check_keys(value, path, {"d0", "d1", "off"});
  HermitianBlock2 block;
  block.d0 = get_number(value, path, "d0", 1.0);
  block.d1 = get_number(value, path, "d1", 1.0);
  block.off = get_complex(value, path, "off", Complex{0.0, 0.0});
  return block;
}

void require_positive(double x, const std::string& path) {
  if (!(x > 0.0)) fail(path, "must be positive");
}

void parse_grid(const Json& obj, RunConfig& config) {
  check_keys(obj, "/grid", {"t_start", "t_end", "n_points"});
  const double t_start = get_number(obj, "/grid", "t_start", 0.0);
  const double t_end = get_number(obj, "/grid", "t_end", 100.0);
  const std::uint64_t n_points = get_unsigned(obj, "/grid", "n_points", 2001);
  if (!(t_end > t_start)) fail("/grid", "requires t_end > t_start");
  if (n_points < 2) fail("/grid/n_points", "must be at least 2");
  config.grid = TimeGrid(t_start, t_end, std::size_t(n_points));
}

void parse_observable(const Json& obj, SpinBathRunConfig& spin_bath) {
  const std::string path = "/spin_bath/observable";
  check_keys(obj, path, {"kind", "system", "env", "env_index"});
  const Json* kind = find(obj, "kind");
  if (!kind) fail(path + "/kind", "required");
  const std::string kind_name = as_string(*kind, path + "/kind");
  ObservableConfig& oc = spin_bath.observable;
  if (kind_name == "system_only") {
    oc.kind = ObservableKind::SystemOnly;
  } else if (kind_name == "full") {
    oc.kind = ObservableKind::Full;
  } else if (kind_name == "single_env") {
    oc.kind = ObservableKind::SingleEnvSpin;
  } else {
    fail(path + "/kind", "must be one of 'system_only', 'full', 'single_env'");
  }
  if (const Json* system = find(obj, "system")) {
    if (oc.kind == ObservableKind::SingleEnvSpin) {
      fail(path + "/system", "not used when kind is 'single_env' (system is identity)");
    }
    oc.system = as_block(*system, path + "/system");
  } else {
    oc.system = identity_block();
  }
  if (const Json* env = find(obj, "env")) {
    if (oc.kind == ObservableKind::SystemOnly) {
      fail(path + "/env", "not used when kind is 'system_only'");
    }
    oc.env = as_block(*env, path + "/env");
  } else {
    oc.env = identity_block();
  }
  if (const Json* env_index = find(obj, "env_index")) {
    if (oc.kind != ObservableKind::SingleEnvSpin) {
      fail(path + "/env_index", "only used when kind is 'single_env'");
    }
    oc.env_index = std::size_t(as_unsigned(*env_index, path + "/env_index"));
  } else {
    oc.env_index = 0;
  }
  if (oc.kind == ObservableKind::SingleEnvSpin && oc.env_index >= spin_bath.n_env) {
    fail(path + "/env_index", "out of range for " + std::to_string(spin_bath.n_env) +
                                  " environment spins");
  }
}

void parse_spin_bath(const Json& obj, RunConfig& config) {
  const std::string path = "/spin_bath";
  check_keys(obj, path, {"n_env", "g_max", "a", "b", "hbar", "spins", "observable"});
  SpinBathRunConfig& sb = config.spin_bath;
  sb.g_max = get_number(obj, path, "g_max", 1.0);
  require_positive(sb.g_max, path + "/g_max");
  sb.a = get_complex(obj, path, "a", sb.a);
  sb.b = get_complex(obj, path, "b", sb.b);
  sb.hbar = get_number(obj, path, "hbar", 1.0);
  require_positive(sb.hbar, path + "/hbar");
  const double norm = std::norm(sb.a) + std::norm(sb.b);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    fail(path, "central amplitudes not normalized: |a|^2 + |b|^2 = " +
                   std::to_string(norm));
  }
  if (const Json* spins = find(obj, "spins")) {
    if (!spins->is_array()) fail(path + "/spins", "must be an array");
    sb.spins.clear();
    for (std::size_t i = 0; i < spins->size(); ++i) {
      const std::string spin_path = path + "/spins/" + std::to_string(i);
      const Json& entry = (*spins)[i];
      if (!entry.is_object()) fail(spin_path, "must be an object {alpha, beta, g}");
      check_keys(entry, spin_path, {"alpha", "beta", "g"});
      const Json* alpha = find(entry, "alpha");
      const Json* beta = find(entry, "beta");
      const Json* g = find(entry, "g");
      if (!alpha || !beta || !g) fail(spin_path, "requires alpha, beta, g");
      EnvSpin spin;
      spin.alpha = as_complex(*alpha, spin_path + "/alpha");
      spin.beta = as_complex(*beta, spin_path + "/beta");
      spin.g = as_number(*g, spin_path + "/g");
      const double spin_norm = std::norm(spin.alpha) + std::norm(spin.beta);
      if (std::abs(spin_norm - 1.0) > kNormTolerance) {
        fail(spin_path, "not normalized: |alpha|^2 + |beta|^2 = " +
                            std::to_string(spin_norm));
      }
      sb.spins.push_back(spin);
    }
  }
  const Json* n_env = find(obj, "n_env");
  if (!sb.spins.empty()) {
    if (n_env && as_unsigned(*n_env, path + "/n_env") != sb.spins.size()) {
      fail(path + "/n_env", "does not match the explicit spin list length " +
                                std::to_string(sb.spins.size()));
    }
    sb.n_env = sb.spins.size();
  } else if (n_env) {
    sb.n_env = std::size_t(as_unsigned(*n_env, path + "/n_env"));
  }
  if (const Json* observable = find(obj, "observable")) {
    if (!observable->is_object()) fail(path + "/observable", "must be an object");
    parse_observable(*observable, sb);
  }
}

// Mirror of the construction-time containment gate, duplicated here so the
// error carries the config path.
void check_mass_at_parse(double center, double omega_max, const std::string& path) {
  const double sigma = omega_max / 16.0;
  const double root2 = 1.4142135623730950488;
  const double mass = 0.5 * (std::erf((omega_max - center) / (root2 * sigma)) +
                             std::erf(center / (root2 * sigma)));
  if (!(mass >= 1.0 - 1e-6)) {
    fail(path, "kernel profile mass inside [0, omega_max] is only " +
                   std::to_string(mass) + "; move center away from the domain edges");
  }
}

std::string resolve_path(const std::string& raw, const std::string& base_dir) {
  std::filesystem::path p(raw);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

void parse_sid(const Json& obj, RunConfig& config, const std::string& base_dir) {
  const std::string path = "/sid";
  check_keys(obj, path, {"kernel", "n_omega", "omega_max", "hbar"});
  SidRunConfig& sid = config.sid;
  sid.hbar = get_number(obj, path, "hbar", 1.0);
  require_positive(sid.hbar, path + "/hbar");
  sid.omega_max = get_number(obj, path, "omega_max", 20.0);
  require_positive(sid.omega_max, path + "/omega_max");
  sid.n_omega = std::size_t(get_unsigned(obj, path, "n_omega", 512));

  std::string family_name = "lorentzian";
  const Json* kernel = find(obj, "kernel");
  if (kernel) {
    const std::string kpath = path + "/kernel";
    if (!kernel->is_object()) fail(kpath, "must be an object");
    const Json* family = find(*kernel, "family");
    if (!family) fail(kpath + "/family", "required");
    family_name = as_string(*family, kpath + "/family");
    if (family_name == "lorentzian") {
      check_keys(*kernel, kpath, {"family", "center", "width", "amplitude"});
      LorentzianKernel k;
      k.center = get_number(*kernel, kpath, "center", 10.0);
      k.width = get_number(*kernel, kpath, "width", 1.0);
      k.amplitude = get_number(*kernel, kpath, "amplitude", 1.0);
      require_positive(k.width, kpath + "/width");
      check_mass_at_parse(k.center, sid.omega_max, kpath + "/center");
      sid.kernel = k;
    } else if (family_name == "gaussian") {
      check_keys(*kernel, kpath, {"family", "center", "sigma", "amplitude"});
      GaussianKernel k;
      k.center = get_number(*kernel, kpath, "center", 10.0);
      k.sigma = get_number(*kernel, kpath, "sigma", 1.0);
      k.amplitude = get_number(*kernel, kpath, "amplitude", 1.0);
      require_positive(k.sigma, kpath + "/sigma");
      check_mass_at_parse(k.center, sid.omega_max, kpath + "/center");
      sid.kernel = k;
    } else if (family_name == "table") {
      check_keys(*kernel, kpath, {"family", "diag_file", "offdiag_file"});
      const Json* diag_file = find(*kernel, "diag_file");
      const Json* offdiag_file = find(*kernel, "offdiag_file");
      if (!diag_file || !offdiag_file) {
        fail(kpath, "table kernels require diag_file and offdiag_file");
      }
      sid.table_diag_path =
          resolve_path(as_string(*diag_file, kpath + "/diag_file"), base_dir);
      sid.table_offdiag_path =
          resolve_path(as_string(*offdiag_file, kpath + "/offdiag_file"), base_dir);
      TableKernel table = load_table_kernel(sid.table_diag_path, sid.table_offdiag_path);
      const std::size_t table_n = table.omega.size();
      const double table_max = table.omega.back();
      if (find(obj, "n_omega") && sid.n_omega != table_n) {
        fail(path + "/n_omega", "does not match the table node count " +
                                    std::to_string(table_n));
      }
      if (find(obj, "omega_max") &&
          std::abs(sid.omega_max - table_max) > 1e-9 * std::max(1.0, table_max)) {
        fail(path + "/omega_max", "does not match the table domain");
      }
      sid.n_omega = table_n;
      sid.omega_max = table_max;
      sid.kernel = std::move(table);
    } else {
      fail(kpath + "/family", "must be one of 'lorentzian', 'gaussian', 'table'");
    }
  } else {
    check_mass_at_parse(LorentzianKernel{}.center, sid.omega_max, path + "/kernel");
  }
  if (sid.n_omega < 8 || sid.n_omega > kMaxOmegaPoints) {
    fail(path + "/n_omega", "must be between 8 and " + std::to_string(kMaxOmegaPoints));
  }
}

void parse_two_times(const Json& obj, RunConfig& config) {
  const std::string path = "/two_times";
  check_keys(obj, path, {"gamma_se", "gamma_e", "weight_a", "weight_b", "hbar"});
  TwoTimesScenario& tt = config.two_times;
  tt.gamma_se = get_number(obj, path, "gamma_se", 1.0);
  tt.gamma_e = get_number(obj, path, "gamma_e", 1e-3);
  tt.weight_a = get_number(obj, path, "weight_a", 1.0);
  tt.weight_b = get_number(obj, path, "weight_b", 1.0);
  tt.hbar = get_number(obj, path, "hbar", 1.0);
  require_positive(tt.gamma_se, path + "/gamma_se");
  if (tt.gamma_e < 0.0) fail(path + "/gamma_e", "must be non-negative");
  require_positive(tt.weight_a, path + "/weight_a");
  require_positive(tt.weight_b, path + "/weight_b");
  require_positive(tt.hbar, path + "/hbar");
}

void parse_verify(const Json& obj, RunConfig& config) {
  const std::string path = "/verify";
  check_keys(obj, path, {"sizes", "trials", "tolerance"});
  VerifyRunConfig& verify = config.verify;
  if (const Json* sizes = find(obj, "sizes")) {
    if (!sizes->is_array() || sizes->empty()) {
      fail(path + "/sizes", "must be a non-empty array of spin counts");
    }
    verify.sizes.clear();
    for (std::size_t i = 0; i < sizes->size(); ++i) {
      const std::uint64_t n =
          as_unsigned((*sizes)[i], path + "/sizes/" + std::to_string(i));
      if (n > kMaxOracleSpins) {
        fail(path + "/sizes/" + std::to_string(i),
             "exceeds the dense-evolution capacity of " +
                 std::to_string(kMaxOracleSpins) + " spins");
      }
      verify.sizes.push_back(std::size_t(n));
    }
  }
  verify.trials = std::size_t(get_unsigned(obj, path, "trials", 100));
  if (verify.trials == 0) fail(path + "/trials", "must be at least 1");
  verify.tolerance = get_number(obj, path, "tolerance", 1e-10);
  require_positive(verify.tolerance, path + "/tolerance");
}

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::SpinBath:
      return "spin_bath";
    case Scenario::Sid:
      return "sid";
    case Scenario::TwoTimes:
      return "two_times";
    case Scenario::Verify:
      return "verify";
  }
  return "unknown";
}

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("/: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("/", "top level must be an object");
  check_keys(root, "", {"scenario", "seed", "grid", "spin_bath", "sid", "two_times",
                        "verify"});

  RunConfig config;
  const Json* scenario = find(root, "scenario");
  if (!scenario) fail("/scenario", "required");
  const std::string name = as_string(*scenario, "/scenario");
  if (name == "spin_bath") {
    config.scenario = Scenario::SpinBath;
  } else if (name == "sid") {
    config.scenario = Scenario::Sid;
  } else if (name == "two_times") {
    config.scenario = Scenario::TwoTimes;
  } else if (name == "verify") {
    config.scenario = Scenario::Verify;
  } else {
    fail("/scenario", "must be one of 'spin_bath', 'sid', 'two_times', 'verify'");
  }

  config.seed = get_unsigned(root, "", "seed", 1);
  if (const Json* grid = find(root, "grid")) {
    if (!grid->is_object()) fail("/grid", "must be an object");
    parse_grid(*grid, config);
  }

  const std::pair<const char*, Scenario> sections[] = {
      {"spin_bath", Scenario::SpinBath},
      {"sid", Scenario::Sid},
      {"two_times", Scenario::TwoTimes},
      {"verify", Scenario::Verify},
  };
  for (const auto& [key, owner] : sections) {
    const Json* section = find(root, key);
    if (!section) continue;
    if (owner != config.scenario) {
      fail(std::string("/") + key, "section not used by scenario '" + name + "'");
    }
    if (!section->is_object()) fail(std::string("/") + key, "must be an object");
    switch (owner) {
      case Scenario::SpinBath:
        parse_spin_bath(*section, config);
        break;
      case Scenario::Sid:
        parse_sid(*section, config, base_dir);
        break;
      case Scenario::TwoTimes:
        parse_two_times(*section, config);
        break;
      case Scenario::Verify:
        parse_verify(*section, config);
        break;
    }
  }
  if (config.scenario == Scenario::Sid && !find(root, "sid")) {
    // Defaults still need the containment gate against the default domain.
    check_mass_at_parse(LorentzianKernel{}.center, config.sid.omega_max, "/sid/kernel");
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_run_config(buffer.str(), base_dir.empty() ? "." : base_dir);
}

namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json block_to_json(const HermitianBlock2& block) {
  Json out;
  out["d0"] = block.d0;
  out["d1"] = block.d1;
  out["off"] = complex_to_json(block.off);
  return out;
}

}  // namespace

std::string serialize_run_config(const RunConfig& config) {
  Json root;
  root["scenario"] = to_string(config.scenario);
  root["seed"] = config.seed;
  root["grid"] = {{"t_start", config.grid.t_start},
                  {"t_end", config.grid.t_end},
                  {"n_points", config.grid.n_points}};
  switch (config.scenario) {
    case Scenario::SpinBath: {
      const SpinBathRunConfig& sb = config.spin_bath;
      Json section;
      section["n_env"] = sb.n_env;
      section["g_max"] = sb.g_max;
      section["a"] = complex_to_json(sb.a);
      section["b"] = complex_to_json(sb.b);
      section["hbar"] = sb.hbar;
      if (!sb.spins.empty()) {
        Json spins = Json::array();
        for (const EnvSpin& spin : sb.spins) {
          Json entry;
          entry["alpha"] = complex_to_json(spin.alpha);
          entry["beta"] = complex_to_json(spin.beta);
          entry["g"] = spin.g;
          spins.push_back(entry);
        }
        section["spins"] = spins;
      }
      Json observable;
      switch (sb.observable.kind) {
        case ObservableKind::SystemOnly:
          observable["kind"] = "system_only";
          observable["system"] = block_to_json(sb.observable.system);
          break;
        case ObservableKind::Full:
          observable["kind"] = "full";
          observable["system"] = block_to_json(sb.observable.system);
          observable["env"] = block_to_json(sb.observable.env);
          break;
        case ObservableKind::SingleEnvSpin:
          observable["kind"] = "single_env";
          observable["env"] = block_to_json(sb.observable.env);
          observable["env_index"] = sb.observable.env_index;
          break;
      }
      section["observable"] = observable;
      root["spin_bath"] = section;
      break;
    }
    case Scenario::Sid: {
      const SidRunConfig& sid = config.sid;
      Json kernel;
      if (const auto* lorentzian = std::get_if<LorentzianKernel>(&sid.kernel)) {
        kernel["family"] = "lorentzian";
        kernel["center"] = lorentzian->center;
        kernel["width"] = lorentzian->width;
        kernel["amplitude"] = lorentzian->amplitude;
      } else if (const auto* gaussian = std::get_if<GaussianKernel>(&sid.kernel)) {
        kernel["family"] = "gaussian";
        kernel["center"] = gaussian->center;
        kernel["sigma"] = gaussian->sigma;
        kernel["amplitude"] = gaussian->amplitude;
      } else if (std::holds_alternative<TableKernel>(sid.kernel)) {
        if (sid.table_diag_path.empty() || sid.table_offdiag_path.empty()) {
          throw std::invalid_argument("table kernel has no recorded file paths");
        }
        kernel["family"] = "table";
        kernel["diag_file"] = sid.table_diag_path;
        kernel["offdiag_file"] = sid.table_offdiag_path;
      } else {
        throw std::invalid_argument("custom kernels have no file form");
      }
      Json section;
      section["kernel"] = kernel;
      section["n_omega"] = sid.n_omega;
      section["omega_max"] = sid.omega_max;
      section["hbar"] = sid.hbar;
      root["sid"] = section;
      break;
    }
    case Scenario::TwoTimes: {
      const TwoTimesScenario& tt = config.two_times;
      root["two_times"] = {{"gamma_se", tt.gamma_se},
                           {"gamma_e", tt.gamma_e},
                           {"weight_a", tt.weight_a},
                           {"weight_b", tt.weight_b},
                           {"hbar", tt.hbar}};
      break;
    }
    case Scenario::Verify: {
      root["verify"] = {{"sizes", config.verify.sizes},
                        {"trials", config.verify.trials},
                        {"tolerance", config.verify.tolerance}};
      break;
    }
  }
  return root.dump(2) + "\n";
}

namespace {

struct TableLine {
  std::size_t line_number;
  std::vector<double> fields;
};

std::vector<TableLine> read_table_lines(const std::string& path,
                                        std::size_t expected_fields) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read table file '" + path + "'");
  std::vector<TableLine> lines;
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    TableLine line;
    line.line_number = line_number;
    double value = 0.0;
    while (fields >> value) line.fields.push_back(value);
    if (line.fields.empty()) continue;  // blank or comment-only line
    if (line.fields.size() != expected_fields) {
      throw ConfigError(path + ":" + std::to_string(line_number) + ": expected " +
                        std::to_string(expected_fields) + " numeric fields, got " +
                        std::to_string(line.fields.size()));
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

TableKernel load_table_kernel(const std::string& diag_path,
                              const std::string& offdiag_path) {
  const std::vector<TableLine> diag_lines = read_table_lines(diag_path, 2);
  if (diag_lines.size() < 8) {
    throw ConfigError(diag_path + ": need at least 8 grid nodes, got " +
                      std::to_string(diag_lines.size()));
  }
  TableKernel table;
  for (const TableLine& line : diag_lines) {
    table.omega.push_back(line.fields[0]);
    table.diag.push_back(line.fields[1]);
  }
  const std::size_t n = table.omega.size();
  const double scale = std::max(1.0, std::abs(table.omega.back()));
  if (std::abs(table.omega.front()) > 1e-12 * scale) {
    throw ConfigError(diag_path + ": grid must start at omega = 0");
  }
  const double step = table.omega[1] - table.omega[0];
  if (!(step > 0.0)) {
    throw ConfigError(diag_path + ": grid nodes must be strictly ascending");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(table.omega[i] - double(i) * step) > 1e-9 * scale) {
      throw ConfigError(diag_path + ": grid nodes must be uniformly spaced");
    }
  }

  const std::vector<TableLine> offdiag_lines = read_table_lines(offdiag_path, 4);
  std::map<std::pair<std::size_t, std::size_t>, Complex> given;
  for (const TableLine& line : offdiag_lines) {
    const std::string where = offdiag_path + ":" + std::to_string(line.line_number);
    const auto to_index = [&](double omega) -> std::size_t {
      const double exact = omega / step;
      const double rounded = std::round(exact);
      if (std::abs(exact - rounded) > 1e-6 || rounded < 0.0 ||
          rounded >= double(n)) {
        throw ConfigError(where + ": node " + std::to_string(omega) +
                          " is not on the diagonal file's grid");
      }
      return std::size_t(rounded);
    };
    const std::size_t i = to_index(line.fields[0]);
    const std::size_t j = to_index(line.fields[1]);
    const Complex value{line.fields[2], line.fields[3]};
    if (given.count({i, j})) {
      throw ConfigError(where + ": duplicate entry for nodes (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
    }
    if (i == j && std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value.real()))) {
      throw ConfigError(where + ": entries with omega = omega_prime must be real");
    }
    const auto mirror = given.find({j, i});
    if (mirror != given.end()) {
      const Complex expected = std::conj(mirror->second);
      if (std::abs(value - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
        throw ConfigError(where + ": conflicts with the mirrored entry (" +
                          std::to_string(j) + ", " + std::to_string(i) + ")");
      }
    }
    given.emplace(std::make_pair(i, j), value);
  }
  table.offdiag.assign(n, std::vector<Complex>(n, Complex{0.0, 0.0}));
  for (const auto& [index, value] : given) {
    table.offdiag[index.first][index.second] = value;
    if (!given.count({index.second, index.first})) {
      table.offdiag[index.second][index.first] = std::conj(value);
    }
  }
  return table;
}

SpinBathConfig realize_spin_bath(const SpinBathRunConfig& config, std::uint64_t seed) {
  SpinBathConfig out;
  out.a = config.a;
  out.b = config.b;
  out.hbar = config.hbar;
  out.spins = config.spins.empty()
                  ? sample_environment(config.n_env, seed, config.g_max)
                  : config.spins;
  return out;
}

ObservableSpec realize_observable(const ObservableConfig& config, std::size_t n_env) {
  switch (config.kind) {
    case ObservableKind::SystemOnly:
      return observable_system_only(config.system, n_env);
    case ObservableKind::SingleEnvSpin:
      return observable_single_env(config.env_index, config.env, n_env);
    case ObservableKind::Full:
      break;
  }
  return make_full_observable(config.system,
                              std::vector<HermitianBlock2>(n_env, config.env));
}

}  // namespace decolab

#include "spinex/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spinex/constants.hpp"

namespace spinex {

using nlohmann::json;

ScanGrid ScanGrid::linspace(double start, double stop, int count) {
  if (count < 1) throw ConfigError("grid count must be >= 1");
  ScanGrid g;
  g.values.resize(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    g.values[static_cast<size_t>(i)] =
        count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return g;
}

ScanGrid ScanGrid::logspace(double start, double stop, int count) {
  if (!(start > 0.0) || !(stop > 0.0)) {
    throw ConfigError("log grid endpoints must be positive");
  }
  ScanGrid g = linspace(std::log(start), std::log(stop), count);
  for (double& v : g.values) v = std::exp(v);
  return g;
}

void ExperimentConfig::check() const {
  trap.check();
  ramp.check();
  error_model.check();
  dephasing.check();
  if (sampling.shots_per_point < 0) {
    throw ConfigError("sampling.shots_per_point must be >= 0");
  }
  if (exchange_times_s.empty() || gradient_times_s.empty() ||
      depths_hz.empty()) {
    throw ConfigError("scan grids must be non-empty");
  }
  if (parity.exchange_quarter_periods < 0) {
    throw ConfigError("parity.exchange_quarter_periods must be >= 0");
  }
  if (parity.target_contrast &&
      (*parity.target_contrast < 0.0 || *parity.target_contrast > 2.0)) {
    throw ConfigError("parity.target_contrast must lie in [0, 2]");
  }
}

ExperimentConfig ExperimentConfig::paper_defaults() {
  ExperimentConfig c;
  c.trap = TweezerParams{91e3, 710e-9, 852e-9, kRb87MassKg, 5.24e-9};
  c.ramp = ApRamp{-2200.0, 2200.0, 12e-3, 165.0, 0.0};
  c.ramp_u_eg_auto = true;
  c.gradient = GradientParams{60.0};
  c.pulse = PulseParams{1.5707963267948966, 0.0};
  c.error_model = ErrorModel{0.071, 0.016, 0.90, 0.81, 0.963};
  c.uncertainty = ErrorModelUncertainty{0.014, 0.005, 0.04};
  c.dephasing = DephasingParams{0.0};
  c.sampling = SamplingConfig{300, 20150901};
  // Two beat periods of the shipped trap's exchange frequency (~177 Hz).
  c.exchange_times_s = ScanGrid::linspace(0.0, 11.3e-3, 25);
  // Two periods of the 60 Hz gradient.
  c.gradient_times_s = ScanGrid::linspace(0.0, 33.4e-3, 25);
  c.depths_hz = ScanGrid::logspace(50e3, 500e3, 12);
  return c;
}

ExperimentConfig ExperimentConfig::paper_parity() {
  ExperimentConfig c = paper_defaults();
  c.error_model.ap_success_f = 0.69;
  c.uncertainty.ap_success_f_err = 0.02;
  c.parity.target_contrast = 0.49;
  return c;
}

namespace {

[[noreturn]] void missing(const std::string& field) {
  throw ConfigError("missing required field: " + field);
}

double number_at(const json& j, const std::string& key,
                 const std::string& context) {
  if (!j.contains(key)) missing(context + key);
  if (!j.at(key).is_number()) {
    throw ConfigError("field " + context + key + " must be a number");
  }
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number()) {
    throw ConfigError("field " + key + " must be a number");
  }
  return j.at(key).get<double>();
}

bool is_note_key(const std::string& key) {
  return key == "note" || key == "notes" ||
         (key.size() >= 5 && key.compare(key.size() - 5, 5, "_note") == 0);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& context) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (is_note_key(it.key())) continue;
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError("unknown field: " + context + it.key());
  }
}

ScanGrid parse_grid(const json& j, const std::string& context,
                    const ScanGrid& fallback) {
  if (j.is_null()) return fallback;
  ScanGrid g;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) {
        throw ConfigError("grid " + context + " must contain numbers");
      }
      g.values.push_back(v.get<double>());
    }
    if (g.empty()) throw ConfigError("grid " + context + " is empty");
    return g;
  }
  if (!j.is_object()) {
    throw ConfigError("grid " + context +
                      " must be an array or {start, stop, count}");
  }
  reject_unknown(j, {"start", "stop", "count", "log"}, context + ".");
  const double start = number_at(j, "start", context + ".");
  const double stop = number_at(j, "stop", context + ".");
  const int count = static_cast<int>(number_at(j, "count", context + "."));
  const bool log = j.value("log", false);
  return log ? ScanGrid::logspace(start, stop, count)
             : ScanGrid::linspace(start, stop, count);
}

json grid_to_json(const ScanGrid& g) { return json(g.values); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, /*cb=*/nullptr, /*allow_exceptions=*/true,
                    /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = paper_defaults();
  reject_unknown(j,
                 {"trap", "ramp", "gradient", "pulse", "error_model",
                  "dephasing", "sampling", "scans", "parity"},
                 "");
  if (j.contains("trap")) {
    const json& t = j.at("trap");
    reject_unknown(t,
                   {"depth_hz", "waist_m", "wavelength_m", "mass_kg",
                    "a_s_m"},
                   "trap.");
    c.trap.depth_hz = number_or(t, "depth_hz", c.trap.depth_hz);
    c.trap.waist_m = number_or(t, "waist_m", c.trap.waist_m);
    c.trap.wavelength_m = number_or(t, "wavelength_m", c.trap.wavelength_m);
    c.trap.mass_kg = number_or(t, "mass_kg", c.trap.mass_kg);
    c.trap.a_s_m = number_or(t, "a_s_m", c.trap.a_s_m);
  }
  if (j.contains("ramp")) {
    const json& r = j.at("ramp");
    reject_unknown(r,
                   {"delta_start_hz", "delta_end_hz", "duration_s",
                    "j_eg_hz", "u_eg_hz"},
                   "ramp.");
    c.ramp.delta_start_hz =
        number_or(r, "delta_start_hz", c.ramp.delta_start_hz);
    c.ramp.delta_end_hz = number_or(r, "delta_end_hz", c.ramp.delta_end_hz);
    c.ramp.duration_s = number_or(r, "duration_s", c.ramp.duration_s);
    c.ramp.j_eg_hz = number_or(r, "j_eg_hz", c.ramp.j_eg_hz);
    if (r.contains("u_eg_hz") && !r.at("u_eg_hz").is_null()) {
      c.ramp.u_eg_hz = number_at(r, "u_eg_hz", "ramp.");
      c.ramp_u_eg_auto = false;
    }
  }
  if (j.contains("gradient")) {
    reject_unknown(j.at("gradient"), {"delta_hz"}, "gradient.");
    c.gradient.delta_hz =
        number_or(j.at("gradient"), "delta_hz", c.gradient.delta_hz);
  }
  if (j.contains("pulse")) {
    reject_unknown(j.at("pulse"), {"area_rad", "phase_rad"}, "pulse.");
    c.pulse.area_rad = number_or(j.at("pulse"), "area_rad", c.pulse.area_rad);
    c.pulse.phase_rad =
        number_or(j.at("pulse"), "phase_rad", c.pulse.phase_rad);
  }
  if (j.contains("error_model")) {
    const json& e = j.at("error_model");
    reject_unknown(e,
                   {"p_upup", "p_upup_err", "p_dndn", "p_dndn_err",
                    "ground_fraction", "ap_success_f", "ap_success_f_err",
                    "survival"},
                   "error_model.");
    c.error_model.p_upup = number_or(e, "p_upup", c.error_model.p_upup);
    c.error_model.p_dndn = number_or(e, "p_dndn", c.error_model.p_dndn);
    c.error_model.ground_fraction =
        number_or(e, "ground_fraction", c.error_model.ground_fraction);
    c.error_model.ap_success_f =
        number_or(e, "ap_success_f", c.error_model.ap_success_f);
    c.error_model.survival = number_or(e, "survival", c.error_model.survival);
    c.uncertainty.p_upup_err =
        number_or(e, "p_upup_err", c.uncertainty.p_upup_err);
    c.uncertainty.p_dndn_err =
        number_or(e, "p_dndn_err", c.uncertainty.p_dndn_err);
    c.uncertainty.ap_success_f_err =
        number_or(e, "ap_success_f_err", c.uncertainty.ap_success_f_err);
  }
  if (j.contains("dephasing")) {
    reject_unknown(j.at("dephasing"), {"sigma_rad"}, "dephasing.");
    c.dephasing.sigma_rad =
        number_or(j.at("dephasing"), "sigma_rad", c.dephasing.sigma_rad);
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    reject_unknown(s, {"shots_per_point", "seed"}, "sampling.");
    c.sampling.shots_per_point = static_cast<std::int64_t>(
        number_or(s, "shots_per_point",
                  static_cast<double>(c.sampling.shots_per_point)));
    c.sampling.seed = static_cast<std::uint64_t>(
        number_or(s, "seed", static_cast<double>(c.sampling.seed)));
  }
  if (j.contains("scans")) {
    const json& s = j.at("scans");
    reject_unknown(
        s, {"exchange_times_s", "gradient_times_s", "depths_hz"}, "scans.");
    c.exchange_times_s =
        parse_grid(s.value("exchange_times_s", json()),
                   "scans.exchange_times_s", c.exchange_times_s);
    c.gradient_times_s =
        parse_grid(s.value("gradient_times_s", json()),
                   "scans.gradient_times_s", c.gradient_times_s);
    c.depths_hz = parse_grid(s.value("depths_hz", json()), "scans.depths_hz",
                             c.depths_hz);
  }
  if (j.contains("parity")) {
    const json& p = j.at("parity");
    reject_unknown(p,
                   {"target_contrast", "exchange_quarter_periods",
                    "apply_ap_phase", "include_loss_as_even"},
                   "parity.");
    if (p.contains("target_contrast") &&
        !p.at("target_contrast").is_null()) {
      c.parity.target_contrast = number_at(p, "target_contrast", "parity.");
    }
    c.parity.exchange_quarter_periods = static_cast<int>(
        number_or(p, "exchange_quarter_periods",
                  c.parity.exchange_quarter_periods));
    c.parity.apply_ap_phase =
        p.value("apply_ap_phase", c.parity.apply_ap_phase);
    c.parity.include_loss_as_even =
        p.value("include_loss_as_even", c.parity.include_loss_as_even);
  }
  try {
    c.check();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_json_text(os.str());
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["trap"] = {{"depth_hz", trap.depth_hz},
               {"waist_m", trap.waist_m},
               {"wavelength_m", trap.wavelength_m},
               {"mass_kg", trap.mass_kg},
               {"a_s_m", trap.a_s_m}};
  j["ramp"] = {{"delta_start_hz", ramp.delta_start_hz},
               {"delta_end_hz", ramp.delta_end_hz},
               {"duration_s", ramp.duration_s},
               {"j_eg_hz", ramp.j_eg_hz}};
  j["ramp"]["u_eg_hz"] = ramp_u_eg_auto ? json() : json(ramp.u_eg_hz);
  j["gradient"] = {{"delta_hz", gradient.delta_hz}};
  j["pulse"] = {{"area_rad", pulse.area_rad}, {"phase_rad", pulse.phase_rad}};
  j["error_model"] = {{"p_upup", error_model.p_upup},
                      {"p_upup_err", uncertainty.p_upup_err},
                      {"p_dndn", error_model.p_dndn},
                      {"p_dndn_err", uncertainty.p_dndn_err},
                      {"ground_fraction", error_model.ground_fraction},
                      {"ap_success_f", error_model.ap_success_f},
                      {"ap_success_f_err", uncertainty.ap_success_f_err},
                      {"survival", error_model.survival}};
  j["dephasing"] = {{"sigma_rad", dephasing.sigma_rad}};
  j["sampling"] = {{"shots_per_point", sampling.shots_per_point},
                   {"seed", sampling.seed}};
  j["scans"] = {{"exchange_times_s", grid_to_json(exchange_times_s)},
                {"gradient_times_s", grid_to_json(gradient_times_s)},
                {"depths_hz", grid_to_json(depths_hz)}};
  j["parity"] = {
      {"target_contrast",
       parity.target_contrast ? json(*parity.target_contrast) : json()},
      {"exchange_quarter_periods", parity.exchange_quarter_periods},
      {"apply_ap_phase", parity.apply_ap_phase},
      {"include_loss_as_even", parity.include_loss_as_even}};
  return j.dump(2);
}

CertifyFile CertifyFile::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("certify input is not valid JSON: ") +
                      e.what());
  }
  reject_unknown(j,
                 {"contrast", "contrast_err", "p_upup", "p_upup_err",
                  "p_dndn", "p_dndn_err", "ap_success_f", "ap_success_f_err"},
                 "");
  CertifyFile f;
  f.contrast = number_at(j, "contrast", "");
  f.contrast_err = number_at(j, "contrast_err", "");
  f.p_upup = number_at(j, "p_upup", "");
  f.p_upup_err = number_at(j, "p_upup_err", "");
  f.p_dndn = number_at(j, "p_dndn", "");
  f.p_dndn_err = number_at(j, "p_dndn_err", "");
  if (j.contains("ap_success_f") && !j.at("ap_success_f").is_null()) {
    f.ap_success_f = number_at(j, "ap_success_f", "");
    f.ap_success_f_err = number_or(j, "ap_success_f_err", 0.0);
  }
  return f;
}

CertifyFile CertifyFile::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open certify input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_json_text(os.str());
}

}  // namespace spinex

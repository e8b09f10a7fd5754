// spinex — batch front-end for the two-atom spin-exchange simulator.
// Subcommands: exchange-scan, depth-sweep, parity-scan,
// parity-vs-exchange, certify, jex, config.
// Exit codes: 0 success; 1 usage/config error; 3 not certified (only
// under --fail-on-separable).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinex/pipelines.hpp"

namespace {

using namespace spinex;

struct CommonOpts {
  std::string config_path;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path,
                  "experiment config JSON (defaults used when omitted)");
  cmd->add_option("--shots", o.shots, "override sampling.shots_per_point");
  cmd->add_option("--seed", o.seed, "override sampling.seed");
  cmd->add_option("--out", o.out_path, "write CSV here instead of stdout");
}

ExperimentConfig load_config(const CommonOpts& o) {
  ExperimentConfig cfg = o.config_path.empty()
                             ? ExperimentConfig::paper_defaults()
                             : ExperimentConfig::from_json_file(o.config_path);
  if (o.shots) cfg.sampling.shots_per_point = *o.shots;
  if (o.seed) cfg.sampling.seed = *o.seed;
  return cfg;
}

void emit_table(const CurveOutput& table, const CommonOpts& o) {
  if (o.out_path.empty()) {
    std::cout << to_csv(table);
  } else {
    write_csv(table, o.out_path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << o.out_path
              << "\n";
  }
}

void report_ap(const ApDiagnostics& ap) {
  std::fprintf(stderr,
               "# adiabatic passage: forward transfer %.6f (LZ oracle "
               "%.6f), two-pass return %.6f, channel phase %.6f rad\n",
               ap.forward_transfer, ap.lz_transfer, ap.two_pass_return,
               ap.channel_phase_rad);
}

void report_certification(std::ostream& os, const CertificationResult& r,
                          const MonteCarloCertification* mc) {
  os << "separability bound C_bnd = " << r.c_bound << " +- " << r.c_bound_err
     << "\n";
  os << "separation = " << r.sigma_separation << " sigma\n";
  os << "verdict = " << (r.entangled ? "entangled" : "not certified") << "\n";
  os << "fidelity (from measured contrast) = " << r.fidelity
     << (r.fidelity_witness ? "  [> 1/2]" : "  [<= 1/2]") << "\n";
  os << "concurrence lower bound = " << r.concurrence_lower << "\n";
  if (r.f_succ) {
    os << "success-projected fidelity F_succ = " << *r.f_succ << " +- "
       << r.f_succ_err << "\n";
  }
  if (mc) {
    os << "resampled margin: median " << mc->margin_median << ", 95% ["
       << mc->margin_p2_5 << ", " << mc->margin_p97_5
       << "], p(not entangled) = " << mc->p_not_entangled << "\n";
  }
}

void write_certification_kv(const std::string& path,
                            const CertificationResult& r,
                            const MonteCarloCertification& mc) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file: " + path);
  char buf[64];
  auto kv = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    f << k << "=" << buf << "\n";
  };
  kv("c_bound", r.c_bound);
  kv("c_bound_err", r.c_bound_err);
  f << "entangled=" << (r.entangled ? 1 : 0) << "\n";
  kv("sigma_separation", r.sigma_separation);
  kv("fidelity", r.fidelity);
  kv("concurrence_lower", r.concurrence_lower);
  if (r.f_succ) {
    kv("f_succ", *r.f_succ);
    kv("f_succ_err", r.f_succ_err);
  }
  kv("mc_p_not_entangled", mc.p_not_entangled);
  kv("mc_margin_median", mc.margin_median);
}

int run(int argc, char** argv) {
  CLI::App app{"Two-atom spin-exchange entanglement simulator"};
  app.require_subcommand(1);

  CommonOpts exchange_opts, depth_opts, parity_opts, pve_opts, jex_opts;

  auto* exchange = app.add_subcommand(
      "exchange-scan", "anti-aligned population curves vs exchange time");
  add_common(exchange, exchange_opts);

  auto* depth = app.add_subcommand(
      "depth-sweep", "exchange frequency vs trap depth");
  add_common(depth, depth_opts);
  bool depth_no_fit = false;
  depth->add_flag("--no-fit", depth_no_fit,
                  "skip the per-depth simulated frequency fit");

  auto* parity = app.add_subcommand(
      "parity-scan", "parity vs gradient time, with certification");
  add_common(parity, parity_opts);
  bool parity_fail_on_separable = false;
  parity->add_flag("--fail-on-separable", parity_fail_on_separable,
                   "exit 3 when the scan does not certify entanglement");

  auto* pve = app.add_subcommand("parity-vs-exchange",
                                 "parity vs exchange time at fixed t_g");
  add_common(pve, pve_opts);

  auto* jex_cmd =
      app.add_subcommand("jex", "one-shot exchange-frequency calculator");
  add_common(jex_cmd, jex_opts);
  bool jex_no_numeric = false;
  jex_cmd->add_flag("--no-numeric", jex_no_numeric,
                    "skip the finite-difference cross-check");

  auto* certify_cmd = app.add_subcommand(
      "certify", "entanglement certification from measured numbers");
  std::string certify_input, certify_out;
  bool fail_on_separable = false;
  certify_cmd
      ->add_option("input", certify_input,
                   "JSON file with contrast, populations and errors")
      ->required();
  certify_cmd->add_option("--out", certify_out,
                          "write machine-readable key=value results here");
  certify_cmd->add_flag("--fail-on-separable", fail_on_separable,
                        "exit 3 when not certified");

  auto* config_cmd =
      app.add_subcommand("config", "print a starter config JSON");
  bool config_parity = false;
  config_cmd->add_flag(
      "--parity", config_parity,
      "use the parity-data calibration (f = 0.69, target contrast 0.49)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
  }

  if (*exchange) {
    const ExchangeScanResult res =
        pipeline_exchange_scan(load_config(exchange_opts));
    report_ap(res.ap);
    std::fprintf(stderr,
                 "# J_ex = %.6f Hz; fitted updn contrast %.4f +- %.4f\n",
                 res.j_ex_hz, res.updn_fit.contrast,
                 res.updn_fit.contrast_se);
    emit_table(res.table, exchange_opts);
    return 0;
  }
  if (*depth) {
    const DepthSweepResult res =
        pipeline_depth_sweep(load_config(depth_opts), !depth_no_fit);
    emit_table(res.table, depth_opts);
    return 0;
  }
  if (*parity) {
    const ParityScanResult res =
        pipeline_parity_scan(load_config(parity_opts));
    report_ap(res.ap);
    std::fprintf(stderr,
                 "# J_ex = %.6f Hz, exchange hold %.6g s, coherence scale "
                 "%.4f\n# fitted contrast C = %.4f +- %.4f, offset %.4f\n",
                 res.j_ex_hz, res.exchange_time_s, res.coherence_scale,
                 res.fit.contrast, res.fit.contrast_se, res.fit.offset);
    report_certification(std::cerr, res.certification,
                         &res.mc_certification);
    emit_table(res.table, parity_opts);
    if (parity_fail_on_separable && !res.certification.entangled) return 3;
    return 0;
  }
  if (*pve) {
    const ParityVsExchangeResult res =
        pipeline_parity_vs_exchange(load_config(pve_opts));
    report_ap(res.ap);
    std::fprintf(stderr,
                 "# J_ex = %.6f Hz, t_g = %.6g s; fitted frequency %.6f +- "
                 "%.6f Hz\n",
                 res.j_ex_hz, res.t_g_s, res.frequency_fit.frequency_hz,
                 res.frequency_fit.frequency_se_hz);
    emit_table(res.table, pve_opts);
    return 0;
  }
  if (*jex_cmd) {
    const JexReport r =
        compute_jex(load_config(jex_opts), !jex_no_numeric);
    std::printf("radial frequency = %.17g Hz\n", r.modes.omega[0] / 6.283185307179586);
    std::printf("axial frequency = %.17g Hz\n", r.modes.omega[2] / 6.283185307179586);
    std::printf("u_eg_hz = %.17g\n", r.u_eg_hz);
    std::printf("j_ex_hz = %.17g\n", r.j_ex_hz);
    if (!jex_no_numeric) {
      if (r.numeric_ok) {
        std::printf("j_ex_numeric_hz = %.17g\n", 2.0 * r.u_eg_numeric_hz);
      } else {
        std::printf("j_ex_numeric_hz = nan\n");
      }
    }
    return 0;
  }
  if (*certify_cmd) {
    const CertifyFile f = CertifyFile::from_json_file(certify_input);
    CertificationInput inp;
    inp.contrast = f.contrast;
    inp.contrast_err = f.contrast_err;
    inp.p_upup = f.p_upup;
    inp.p_upup_err = f.p_upup_err;
    inp.p_dndn = f.p_dndn;
    inp.p_dndn_err = f.p_dndn_err;
    inp.ap_success_f = f.ap_success_f;
    inp.ap_success_f_err = f.ap_success_f_err;
    const CertificationResult r = certify(inp);
    const MonteCarloCertification mc = certify_montecarlo(inp);
    std::cout << "contrast C = " << inp.contrast << " +- "
              << inp.contrast_err << "\n";
    report_certification(std::cout, r, &mc);
    if (!certify_out.empty()) write_certification_kv(certify_out, r, mc);
    if (fail_on_separable && !r.entangled) return 3;
    return 0;
  }
  if (*config_cmd) {
    const ExperimentConfig cfg = config_parity
                                     ? ExperimentConfig::paper_parity()
                                     : ExperimentConfig::paper_defaults();
    std::cout << cfg.to_json_text() << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

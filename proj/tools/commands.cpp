#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "nmrdiscord/correlations.hpp"
#include "nmrdiscord/errors.hpp"
#include "nmrdiscord/io.hpp"
#include "nmrdiscord/nmrsim.hpp"
#include "nmrdiscord/relaxmodel.hpp"

#ifndef NMRDISCORD_VERSION
#define NMRDISCORD_VERSION "dev"
#endif

namespace nmrdiscord::cli {

using nlohmann::json;

namespace {

double round12(double v) { return std::strtod(fmt(v).c_str(), nullptr); }

std::string header(const char* command, const json& config) {
  return std::string("# nmrdiscord ") + NMRDISCORD_VERSION + " " + command + " " + config.dump() +
         "\n";
}

std::string row(std::initializer_list<double> values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ',';
    s += fmt(v);
  }
  return s + "\n";
}

json versioned(const char* command, const json& config, json body) {
  body["command"] = command;
  body["version"] = NMRDISCORD_VERSION;
  body["config"] = config;
  return body;
}

json to_json(const WernerCurvesArgs& a) {
  return {{"eps_min", a.eps_min}, {"eps_max", a.eps_max}, {"steps", a.steps}};
}
json to_json(const PrepScanArgs& a) {
  return {{"theta_steps", a.theta_steps}, {"xi", a.xi}, {"j_hz", a.j_hz}};
}
json to_json(const DdArgs& a) {
  return {{"scheme", a.scheme},         {"total_ms", a.total_ms},
          {"spacing_ms", a.spacing_ms}, {"sample_ms", a.sample_ms},
          {"ou_sigma", a.ou_sigma},     {"tau_c_ms", a.tau_c_ms},
          {"t1_channel", a.t1_channel}, {"ensemble", a.ensemble},
          {"seed", a.seed},             {"xi", a.xi},
          {"j_hz", a.j_hz},             {"offset_a_hz", a.offset_a_hz},
          {"offset_b_hz", a.offset_b_hz}};
}
json to_json(const SpinlockArgs& a) {
  return {{"xi", a.xi},
          {"lambda1_inv_ms", a.lambda1_inv_ms},
          {"lambda2_inv_s", a.lambda2_inv_s},
          {"artifact", a.artifact},
          {"n_cos_theta", a.n_cos_theta},
          {"n_phi", a.n_phi}};
}
json to_json(const DiscordArgs& a) {
  return {{"input", a.input},         {"method", a.method}, {"n_cos_theta", a.n_cos_theta},
          {"n_phi", a.n_phi},         {"refine", a.refine}, {"tol", a.tol}};
}
json to_json(const FitArgs& a) {
  return {{"input", a.input},
          {"kind", a.kind},
          {"companion", a.companion},
          {"xi", a.xi},
          {"noise_floor", a.noise_floor}};
}

SeriesKind parse_kind(const std::string& s) {
  if (s == "attenuated") return SeriesKind::Attenuated;
  if (s == "fidelity") return SeriesKind::Fidelity;
  throw PreconditionError("fit: kind must be attenuated or fidelity, got '" + s + "'");
}

DdScheme parse_scheme(const std::string& s) {
  if (s == "none") return DdScheme::None;
  if (s == "cpmg") return DdScheme::Cpmg;
  if (s == "udd") return DdScheme::Udd;
  throw PreconditionError("dd: scheme must be none, cpmg or udd, got '" + s + "'");
}

// Options shared by every subcommand.
struct Common {
  std::string out;
  std::string config;
};

struct Parsed {
  std::unique_ptr<CLI::App> app;
  Common common;
  WernerCurvesArgs werner;
  PrepScanArgs prep;
  DdArgs dd;
  SpinlockArgs spin;
  DiscordArgs disc;
  FitArgs fit;
  std::vector<CLI::App*> subs;
};

std::unique_ptr<Parsed> make_app() {
  auto p = std::make_unique<Parsed>();
  p->app = std::make_unique<CLI::App>("Two-qubit quantum discord and NMR relaxation toolkit",
                                      "nmrdiscord");
  CLI::App& app = *p->app;
  app.option_defaults()->take_last();
  app.require_subcommand(1);
  app.set_version_flag("--version", NMRDISCORD_VERSION);

  const auto common = [&](CLI::App* s) {
    s->add_option("--out", p->common.out, "Output file (default stdout)");
    s->add_option("--config", p->common.config,
                  "JSON file of flag values (keys are flag names without dashes); overrides flags");
    p->subs.push_back(s);
  };

  auto* wc = app.add_subcommand("werner-curves", "Correlations of Werner states versus purity");
  wc->add_option("--eps-min", p->werner.eps_min, "Smallest purity")->capture_default_str();
  wc->add_option("--eps-max", p->werner.eps_max, "Largest purity")->capture_default_str();
  wc->add_option("--steps", p->werner.steps, "Number of rows")->capture_default_str();
  common(wc);

  auto* ps = app.add_subcommand("prep-scan", "Simulated Werner preparation versus coupling angle");
  ps->add_option("--theta-steps", p->prep.theta_steps, "Points in [0, 2 pi]")->capture_default_str();
  ps->add_option("--xi", p->prep.xi, "Thermal polarization")->capture_default_str();
  ps->add_option("--j-hz", p->prep.j_hz, "Scalar coupling [Hz]")->capture_default_str();
  common(ps);

  auto* dd = app.add_subcommand("dd", "Dynamical decoupling of a Werner state under noise");
  dd->add_option("--scheme", p->dd.scheme, "none, cpmg or udd")->capture_default_str();
  dd->add_option("--total-ms", p->dd.total_ms, "Evolution time [ms]")->capture_default_str();
  dd->add_option("--spacing-ms", p->dd.spacing_ms, "CPMG pulse spacing [ms]")->capture_default_str();
  dd->add_option("--sample-ms", p->dd.sample_ms, "Sampling interval [ms]")->capture_default_str();
  dd->add_option("--ou-sigma", p->dd.ou_sigma, "OU frequency noise per spin [rad/s]")
      ->capture_default_str();
  dd->add_option("--tau-c-ms", p->dd.tau_c_ms, "OU correlation time [ms]")->capture_default_str();
  dd->add_option("--t1-channel", p->dd.t1_channel, "Apply T1 relaxation (true/false)")
      ->capture_default_str();
  dd->add_option("--ensemble", p->dd.ensemble, "Ensemble size")->capture_default_str();
  dd->add_option("--seed", p->dd.seed, "Master seed")->capture_default_str();
  dd->add_option("--xi", p->dd.xi, "Thermal polarization")->capture_default_str();
  dd->add_option("--j-hz", p->dd.j_hz, "Scalar coupling [Hz]")->capture_default_str();
  dd->add_option("--offset-a-hz", p->dd.offset_a_hz, "Residual offset of spin A [Hz]")
      ->capture_default_str();
  dd->add_option("--offset-b-hz", p->dd.offset_b_hz, "Residual offset of spin B [Hz]")
      ->capture_default_str();
  common(dd);

  auto* sl = app.add_subcommand("spinlock", "Relaxation-model series at tau = 2^n ms");
  sl->add_option("--xi", p->spin.xi, "Polarization of the prepared state")->capture_default_str();
  sl->add_option("--lambda1-inv-ms", p->spin.lambda1_inv_ms, "1/lambda1 [ms]")->capture_default_str();
  sl->add_option("--lambda2-inv-s", p->spin.lambda2_inv_s, "1/lambda2 [s]")->capture_default_str();
  sl->add_option("--artifact", p->spin.artifact, "Injected coherence artifact [units of xi]")
      ->capture_default_str();
  sl->add_option("--n-cos-theta", p->spin.n_cos_theta, "Grid points in cos(theta)")
      ->capture_default_str();
  sl->add_option("--n-phi", p->spin.n_phi, "Grid points in phi")->capture_default_str();
  common(sl);

  auto* dc = app.add_subcommand("discord", "Correlation measures of a state file");
  dc->add_option("--input", p->disc.input, "State file (JSON)")->required();
  dc->add_option("--method", p->disc.method, "grid, bd or geometric")->capture_default_str();
  dc->add_option("--n-cos-theta", p->disc.n_cos_theta, "Grid points in cos(theta)")
      ->capture_default_str();
  dc->add_option("--n-phi", p->disc.n_phi, "Grid points in phi")->capture_default_str();
  dc->add_option("--refine", p->disc.refine, "Refine the grid optimum (true/false)")
      ->capture_default_str();
  dc->add_option("--tol", p->disc.tol, "Validation tolerance")->capture_default_str();
  common(dc);

  auto* ft = app.add_subcommand("fit", "Fit the two relaxation rates to fidelity data");
  ft->add_option("--input", p->fit.input, "CSV with header t_seconds,value")->required();
  ft->add_option("--kind", p->fit.kind, "attenuated or fidelity")->capture_default_str();
  ft->add_option("--companion", p->fit.companion, "Optional plain-fidelity CSV fitted jointly");
  ft->add_option("--xi", p->fit.xi, "Polarization")->capture_default_str();
  ft->add_option("--noise-floor", p->fit.noise_floor, "Acceptable residual RMS")
      ->capture_default_str();
  common(ft);
  return p;
}

CLI::App* chosen(const Parsed& p) {
  for (CLI::App* s : p.subs) {
    if (s->parsed()) return s;
  }
  return nullptr;
}

std::string config_value(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw PreconditionError("config: value of '" + key + "' must be a string, number or boolean");
}

std::string execute(const Parsed& p, const std::string& name) {
  if (name == "werner-curves") return werner_curves(p.werner);
  if (name == "prep-scan") return prep_scan(p.prep);
  if (name == "dd") return dd(p.dd);
  if (name == "spinlock") return spinlock(p.spin);
  if (name == "discord") return discord(p.disc);
  return fit(p.fit);
}

}  // namespace

std::string fmt(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string werner_curves(const WernerCurvesArgs& a) {
  if (!(a.eps_min >= 0.0 && a.eps_min < a.eps_max && a.eps_max <= 1.0) || a.steps < 2) {
    throw PreconditionError("werner-curves: need 0 <= eps_min < eps_max <= 1 and steps >= 2");
  }
  std::string out = header("werner-curves", to_json(a)) + "eps,I,J_max,D,DG\n";
  for (int i = 0; i < a.steps; ++i) {
    const double eps =
        i + 1 == a.steps ? a.eps_max : a.eps_min + (a.eps_max - a.eps_min) * i / (a.steps - 1);
    const DensityMatrix rho = werner(eps);
    const double mi = mutual_information(rho);
    const double d = werner_discord_analytic(eps);
    out += row({eps, mi, mi - d, d, geometric_discord(rho)});
  }
  return out;
}

std::string prep_scan(const PrepScanArgs& a) {
  if (a.theta_steps < 2) throw PreconditionError("prep-scan: theta_steps must be >= 2");
  SpinSystem sys = SpinSystem::chloroform();
  sys.j_hz = a.j_hz;
  const double eps = a.xi / 8.0;
  json cfg = to_json(a);
  cfg["eps_ref"] = eps;
  std::string out = header("prep-scan", cfg) + "theta_rad,fidelity,discord_units\n";
  const DensityMatrix pp = prepare_pseudopure(a.xi, sys);
  const DensityMatrix target = werner(eps);
  const double unit = eps * eps / std::numbers::ln2;
  for (int k = 0; k < a.theta_steps; ++k) {
    const double theta =
        k + 1 == a.theta_steps ? 2.0 * std::numbers::pi : 2.0 * std::numbers::pi * k / (a.theta_steps - 1);
    const DensityMatrix rho = prepare_werner(pp, theta, sys);
    out += row({theta, fidelity(rho, target), discord_grid(rho).discord / unit});
  }
  return out;
}

std::string dd(const DdArgs& a) {
  const DdScheme scheme = parse_scheme(a.scheme);
  if (!(a.sample_ms > 0.0) || !(a.total_ms >= 0.0) || !(a.tau_c_ms > 0.0)) {
    throw PreconditionError("dd: need positive sample interval and correlation time");
  }
  SpinSystem prep_sys = SpinSystem::chloroform();
  prep_sys.j_hz = a.j_hz;
  SpinSystem sys = prep_sys;
  sys.offset_a_hz = a.offset_a_hz;
  sys.offset_b_hz = a.offset_b_hz;

  const double eps = a.xi / 8.0;
  const DensityMatrix rho0 =
      prepare_werner(prepare_pseudopure(a.xi, prep_sys), std::numbers::pi / 2.0, prep_sys);
  DdRequest req;
  req.scheme = scheme;
  req.total_time = a.total_ms * 1e-3;
  req.cpmg_spacing = a.spacing_ms * 1e-3;
  req.thermal_xi = a.xi;
  const int n_samples = static_cast<int>(std::floor(a.total_ms / a.sample_ms + 1e-9));
  for (int i = 0; i <= n_samples; ++i) req.sample_times.push_back(i * a.sample_ms * 1e-3);

  NoiseModel noise;
  noise.ou_sigma = a.ou_sigma;
  noise.ou_tau_c = a.tau_c_ms * 1e-3;
  noise.t1_channel = a.t1_channel;
  noise.ensemble_size = a.ensemble;
  noise.seed = a.seed;

  const PulseSchedule sched = dd_schedule(scheme, req.total_time, req.cpmg_spacing);
  const auto traj = simulate_dd(rho0, req, sys, noise);

  json cfg = to_json(a);
  cfg["eps_ref"] = eps;
  std::string out = header("dd", cfg);
  out += "# pulse_times_ms:";
  for (double t : sched.times) out += " " + fmt(t * 1e3);
  out += "\nt_seconds,fidelity,discord_units,purity\n";
  const DensityMatrix target = werner(eps);
  const double unit = eps * eps / std::numbers::ln2;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double purity = traj[i].mat().squaredNorm();
    out += row({req.sample_times[i], fidelity(traj[i], target), discord_grid(traj[i]).discord / unit,
                purity});
  }
  return out;
}

std::string spinlock(const SpinlockArgs& a) {
  if (!(a.lambda1_inv_ms > 0.0) || !(a.lambda2_inv_s > 0.0) || !(a.xi > 0.0)) {
    throw PreconditionError("spinlock: xi and both time constants must be positive");
  }
  RelaxModelParams p;
  p.xi = a.xi;
  p.lambda1 = 1.0 / (a.lambda1_inv_ms * 1e-3);
  p.lambda2 = 1.0 / a.lambda2_inv_s;
  const double eps = a.xi / 3.0;

  ComplexMatrix m = singlet_triplet_initial(a.xi).mat();
  if (a.artifact != 0.0) {
    const ComplexMatrix c = spin_op(Subsystem::A, 1) * spin_op(Subsystem::B, 3) +
                            spin_op(Subsystem::A, 3) * spin_op(Subsystem::B, 1);
    m += a.artifact * a.xi * c;
  }
  const DensityMatrix rho0 = validate_density(m);
  const DensityMatrix target = lls_state(a.xi);
  const GridSpec grid{a.n_cos_theta, a.n_phi, false};

  json cfg = to_json(a);
  cfg["eps_ref"] = eps;
  std::string out =
      header("spinlock", cfg) + "tau_seconds,F,F_a,D_grid_units,D_bd_units,DG_units\n";
  const double d_unit = eps * eps / std::numbers::ln2;
  const double g_unit = eps * eps / 2.0;
  for (int n = 0; n <= 16; ++n) {
    const double tau = std::ldexp(1e-3, n);
    const DensityMatrix rho = simulate_spinlock(rho0, tau, p);
    out += row({tau, fidelity(rho, target), attenuated_fidelity(rho, rho0, target),
                discord_grid(rho, grid).discord / d_unit, discord_bd(bd_project(rho).r) / d_unit,
                geometric_discord(rho) / g_unit});
  }
  return out;
}

std::string discord(const DiscordArgs& a) {
  const DensityMatrix rho = load_state(a.input, a.tol);
  json body;
  body["method"] = a.method;
  if (a.method == "grid") {
    const DiscordReport r = discord_grid(rho, GridSpec{a.n_cos_theta, a.n_phi, a.refine});
    body["mutual_info"] = round12(r.mutual_info);
    body["j_max"] = round12(r.j_max);
    body["j_min"] = round12(r.j_min);
    body["discord"] = round12(r.discord);
    body["argmax_theta"] = round12(r.argmax_basis.theta);
    body["argmax_phi"] = round12(r.argmax_basis.phi);
    body["j_spread"] = round12(r.j_max - r.j_min);
    body["j_spread_relative"] = r.j_max > 0.0 ? round12((r.j_max - r.j_min) / r.j_max) : 0.0;
  } else if (a.method == "bd") {
    const BdProjection proj = bd_project(rho);
    body["discord"] = round12(discord_bd(proj.r));
    body["r"] = {round12(proj.r.r1), round12(proj.r.r2), round12(proj.r.r3)};
    body["discarded_norm"] = round12(proj.discarded_norm);
    if (proj.discarded_norm > 1e-9) {
      body["warning"] = "state is not Bell-diagonal; the projection discards norm " +
                        fmt(proj.discarded_norm);
    }
  } else if (a.method == "geometric") {
    body["geometric_discord"] = round12(geometric_discord(rho));
  } else {
    throw PreconditionError("discord: method must be grid, bd or geometric, got '" + a.method + "'");
  }
  return versioned("discord", to_json(a), body).dump(2) + "\n";
}

std::string fit(const FitArgs& a) {
  std::vector<FidelitySeries> data{read_fidelity_csv(a.input, parse_kind(a.kind))};
  if (!a.companion.empty()) data.push_back(read_fidelity_csv(a.companion, SeriesKind::Fidelity));
  FitOptions opt;
  opt.noise_floor = a.noise_floor;
  const FitResult r = data.size() == 1 && data[0].kind == SeriesKind::Attenuated
                          ? fit_lambdas(data[0], a.xi, opt)
                          : fit_lambdas(std::span<const FidelitySeries>(data), a.xi, opt);
  json body;
  body["lambda1"] = round12(r.lambda1);
  body["lambda2"] = round12(r.lambda2);
  body["lambda1_inv_ms"] = round12(1e3 / r.lambda1);
  body["lambda2_inv_s"] = round12(1.0 / r.lambda2);
  body["residual"] = round12(r.residual);
  body["rms"] = round12(r.rms);
  body["lambda1_at_boundary"] = r.lambda1_at_boundary;
  body["lambda2_at_boundary"] = r.lambda2_at_boundary;
  body["lambda1_identifiable"] = r.lambda1_identifiable;
  body["lambda2_identifiable"] = r.lambda2_identifiable;
  json points = json::array();
  std::size_t k = 0;
  for (const auto& s : data) {
    for (const auto& pt : s.points) {
      points.push_back({{"series", s.kind == SeriesKind::Fidelity ? "fidelity" : "attenuated"},
                        {"t_seconds", round12(pt.t)},
                        {"value", round12(pt.value)},
                        {"model", round12(r.model_values[k])},
                        {"residual", round12(r.point_residuals[k])}});
      ++k;
    }
  }
  body["points"] = points;
  return versioned("fit", to_json(a), body).dump(2) + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  auto parse = [&](Parsed& p, std::vector<std::string> a) {
    std::reverse(a.begin(), a.end());  // CLI11 consumes a reversed vector
    p.app->parse(a);
  };

  try {
    auto p = make_app();
    try {
      parse(*p, args);
      CLI::App* sub = chosen(*p);
      if (sub != nullptr && !p->common.config.empty()) {
        json cfg;
        try {
          cfg = json::parse(read_text_file(p->common.config));
        } catch (const json::parse_error& e) {
          throw ParseError("ParseError: " + p->common.config + ": " + e.what());
        }
        if (!cfg.is_object()) throw ParseError("ParseError: config must be a JSON object");
        std::vector<std::string> extended = args;
        for (const auto& item : cfg.items()) {
          const std::string flag = "--" + item.key();
          if (item.key() == "config" || sub->get_option_no_throw(flag) == nullptr) {
            throw PreconditionError("config: unknown key '" + item.key() + "' for " +
                                    sub->get_name());
          }
          extended.push_back(flag);
          extended.push_back(config_value(item.key(), item.value()));
        }
        p = make_app();
        parse(*p, extended);
        sub = chosen(*p);
      }
      const std::string text = execute(*p, sub->get_name());
      if (p->common.out.empty()) {
        out << text;
      } else {
        std::ofstream f(p->common.out, std::ios::binary);
        if (!f) throw PreconditionError("cannot write " + p->common.out);
        f << text;
      }
      return 0;
    } catch (const CLI::ParseError& e) {
      const int code = p->app->exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace nmrdiscord::cli

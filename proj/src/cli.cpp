#include "fkqsd/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "fkqsd/config.hpp"
#include "fkqsd/errors.hpp"
#include "fkqsd/oracle.hpp"
#include "fkqsd/parallel.hpp"
#include "fkqsd/particle.hpp"

namespace fkqsd {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Comma-separated output with a header row.
class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

/// Ordered key = value headline numbers; the standard keys default to "na".
class Summary {
 public:
  explicit Summary(const ExperimentConfig& c) {
    set("theorem_case", to_string(c.theorem_case));
    for (const char* k : {"lambda_hat", "lambda_se", "inf_V", "qsd_tv_check", "decay_slope", "decay_r2"}) set(k, "na");
  }
  void set(const std::string& key, const std::string& value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key] = value;
  }
  void set(const std::string& key, double value) { set(key, num(value)); }
  void write(const fs::path& path, const std::string& resolved) const {
    std::ofstream out(path);
    for (const auto& k : order_) out << k << " = " << values_.at(k) << "\n";
    out << "\n# resolved config\n" << resolved;
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
};

struct Context {
  ExperimentConfig config;
  FeynmanKacModel model;
  fs::path out;
  unsigned workers;
  Summary summary;
};

SmcConfig smc_config(const Context& ctx, bool with_histogram) {
  const auto& p = ctx.config.particles;
  SmcConfig s;
  s.n_particles = p.n;
  s.delta = p.delta;
  s.dt = ctx.config.dt;
  s.epochs = p.epochs;
  s.burn_in_fraction = p.burn_in;
  s.seed = ctx.config.seed;
  s.workers = ctx.workers;
  if (with_histogram) {
    s.histogram = histogram_spec(ctx.config);
    if (!s.histogram) throw ValidationError("config: this subcommand needs [particles] box_lower / box_upper");
  }
  return s;
}

void report_lambda(Context& ctx, const SmcRun& run) {
  Csv trace(ctx.out / "lambda_trace.csv", {"epoch", "log_m", "ess"});
  const auto& e = run.ensemble;
  for (std::size_t k = 0; k < e.log_norm_trace.size(); ++k)
    trace.row({std::to_string(k), num(e.log_norm_trace[k]), num(e.ess_trace[k])});
  if (run.ensemble.extinct)
    throw ExtinctionError("particle system went extinct at epoch " + std::to_string(e.log_norm_trace.size()));
  if (!run.lambda) throw ValidationError("particles: too few post-burn-in epochs for a lambda estimate");
  Csv s(ctx.out / "lambda_summary.csv", {"lambda_hat", "se", "n_epochs", "burn_in"});
  s.row({num(run.lambda->lambda), num(run.lambda->standard_error), std::to_string(e.log_norm_trace.size()),
         num(ctx.config.particles.burn_in)});
  ctx.summary.set("lambda_hat", run.lambda->lambda);
  ctx.summary.set("lambda_se", run.lambda->standard_error);
}

void write_histogram(const fs::path& path, const Histogram& h) {
  std::vector<std::string> header;
  for (std::size_t a = 0; a < h.axes(); ++a) header.push_back("bin_center_" + std::to_string(a));
  header.push_back("mass");
  Csv csv(path, header);
  for (std::size_t b = 0; b < h.bin_count(); ++b) {
    std::vector<std::string> row;
    for (double c : h.bin_center(b)) row.push_back(num(c));
    row.push_back(num(h.masses()[b]));
    csv.row(row);
  }
}

SmcRun run_particles(Context& ctx, bool with_histogram) {
  const ModelState start = start_state(ctx.config, ctx.model);
  return run_particle_system(ctx.model, make_ensemble(ctx.model, start, ctx.config.particles.n),
                             smc_config(ctx, with_histogram));
}

void cmd_simulate(Context& ctx) {
  const ModelState start = start_state(ctx.config, ctx.model);
  const std::size_t n_steps = steps_for(ctx.config.particles.horizon, ctx.config.dt);
  const auto paths = simulate_paths(ctx.model, start, ctx.config.dt, n_steps, ctx.config.particles.n_paths,
                                    ctx.config.seed, ctx.workers);
  std::vector<std::string> header{"path_id", "alive", "exit_step", "log_weight", "min_dist"};
  for (std::size_t i = 0; i < start.coords.size(); ++i) header.push_back("endpoint_" + std::to_string(i));
  Csv csv(ctx.out / "paths.csv", header);
  std::size_t alive = 0;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    const auto& p = paths[j];
    alive += p.alive ? 1 : 0;
    std::vector<std::string> row{std::to_string(j), p.alive ? "1" : "0",
                                 p.exit_step ? std::to_string(*p.exit_step) : "", num(p.log_weight),
                                 num(p.min_singularity_distance)};
    for (double c : p.endpoint.coords) row.push_back(num(c));
    csv.row(row);
  }
  ctx.summary.set("paths", std::to_string(paths.size()));
  ctx.summary.set("alive", std::to_string(alive));
}

void cmd_lambda(Context& ctx) { report_lambda(ctx, run_particles(ctx, false)); }

QsdCheck check_qsd(Context& ctx, const Histogram& rho) {
  return quasi_stationarity_check(rho, ctx.model, ctx.config.particles.delta, ctx.config.dt,
                                  ctx.config.particles.check_particles,
                                  derive_seed(ctx.config.seed, StreamPurpose::qsd_check, 0, 0), ctx.workers);
}

void cmd_qsd(Context& ctx) {
  const SmcRun run = run_particles(ctx, true);
  report_lambda(ctx, run);
  write_histogram(ctx.out / "qsd.csv", *run.qsd);
  ctx.summary.set("qsd_overflow", run.qsd->overflow());
  if (!ctx.model.process().is_kinetic()) {
    const QsdCheck q = check_qsd(ctx, *run.qsd);
    if (q.extinct) throw ExtinctionError("q.s.d. check: the fresh ensemble went extinct");
    ctx.summary.set("qsd_tv_check", q.tv);
    ctx.summary.set("qsd_control_tv", q.control_tv);
  }
}

void cmd_convergence(Context& ctx) {
  if (ctx.model.process().is_kinetic())
    throw ValidationError("convergence: the histogram covers positions only; not available for the kinetic model");
  const SmcRun run = run_particles(ctx, true);
  report_lambda(ctx, run);
  const Histogram& rho = *run.qsd;
  const QsdCheck q = check_qsd(ctx, rho);
  if (q.extinct) throw ExtinctionError("q.s.d. check: the fresh ensemble went extinct");
  ctx.summary.set("qsd_tv_check", q.tv);
  const auto& p = ctx.config.particles;
  const double floor = p.noise_floor > 0.0 ? p.noise_floor : 2.0 * q.control_tv;

  ExperimentConfig point = ctx.config;
  if (!p.convergence_start.empty()) point.particles.start = p.convergence_start;
  const ModelState x0 = start_state(point, ctx.model);
  const auto trace =
      convergence_trace(ctx.model, make_ensemble(ctx.model, x0, p.n), rho, p.delta, ctx.config.dt,
                        p.convergence_epochs, derive_seed(ctx.config.seed, StreamPurpose::qsd_check, 2, 0), ctx.workers);
  Csv csv(ctx.out / "convergence.csv", {"t", "tv"});
  for (const auto& pt : trace.points) csv.row({num(pt.t), num(pt.tv)});
  if (trace.extinct) throw ExtinctionError("convergence trace went extinct");
  Csv fit_csv(ctx.out / "decay_fit.csv", {"slope", "intercept", "r2", "n_used", "noise_floor"});
  try {
    const DecayFit fit = fit_decay_rate(trace.points, floor);
    fit_csv.row({num(fit.slope), num(fit.intercept), num(fit.r_squared), std::to_string(fit.n_used), num(floor)});
    ctx.summary.set("decay_slope", fit.slope);
    ctx.summary.set("decay_r2", fit.r_squared);
  } catch (const ValidationError& e) {
    fit_csv.row({"na", "na", "na", "0", num(floor)});
    ctx.summary.set("decay_fit_error", e.what());
  }
  ctx.summary.set("noise_floor", floor);
}

void cmd_lyapunov(Context& ctx) {
  const auto& l = ctx.config.lyapunov;
  const LyapunovSpec spec(l.spec);
  const auto curves = default_scan_curves(ctx.model, l.scan_min, l.scan_max, l.scan_points);
  ScanOptions opt;
  opt.threshold = l.threshold;
  opt.r0 = l.r0;
  const LyapunovReport report = drift_scan(ctx.model, spec, l.p_list, curves, opt);
  Csv rows(ctx.out / "lyapunov.csv", {"curve", "scan_coordinate", "p", "ratio", "ratio_minus_pV"});
  for (const auto& r : report.rows) rows.row({r.curve, num(r.coordinate), num(r.p), num(r.ratio), num(r.value)});
  Csv sums(ctx.out / "lyapunov_summary.csv",
           {"curve", "p", "low_end", "high_end", "low_below", "high_below", "low_monotone", "high_monotone",
            "max_outside_core", "m0", "level_set_compact", "passed"});
  const auto b = [](bool v) { return std::string(v ? "1" : "0"); };
  for (const auto& s : report.summaries)
    sums.row({s.curve, num(s.p), num(s.low_end), num(s.high_end), b(s.low_below), b(s.high_below),
              b(s.low_monotone), b(s.high_monotone), num(s.max_outside_core), num(s.m0), b(s.level_set_compact),
              b(s.passed)});
  ctx.summary.set("lyapunov_spec", report.spec_name);
  ctx.summary.set("lyapunov_passed", report.passed() ? "1" : "0");
}

void cmd_sampler_test(Context& ctx) {
  const LevySpec* spec = nullptr;
  if (const auto* lm = std::get_if<LevyModel>(&ctx.config.process)) spec = &lm->levy;
  if (const auto* im = std::get_if<InteractingModel>(&ctx.config.process)) spec = &im->levy;
  if (spec == nullptr) throw ValidationError("sampler-test: needs a Levy or interacting process");
  const auto& s = ctx.config.sampler;
  if (s.samples < 2 || s.frequencies < 1) throw ValidationError("sampler-test: need samples >= 2 and frequencies >= 1");
  const auto d = static_cast<std::size_t>(spec->dimension);

  std::vector<std::string> header{"dt", "u_norm"};
  for (std::size_t i = 0; i < d; ++i) header.push_back("u_" + std::to_string(i));
  for (const char* h : {"empirical_re", "empirical_im", "target", "abs_error"}) header.emplace_back(h);
  Csv csv(ctx.out / "charfun.csv", header);

  double sup = 0.0;
  for (std::size_t k = 0; k < s.dt.size(); ++k) {
    std::vector<std::vector<double>> draws(s.samples);
    parallel_for(s.samples, ctx.workers, [&](std::size_t j) {
      RandomStream rng(derive_seed(ctx.config.seed, StreamPurpose::sampler_test, k, j));
      draws[j] = levy_increment(*spec, s.dt[k], rng);
    });
    for (std::size_t f = 0; f < s.frequencies; ++f) {
      const double norm = s.u_max * static_cast<double>(f + 1) / static_cast<double>(s.frequencies);
      // Directions spread by the golden angle in the first coordinate plane.
      std::vector<double> u(d, 0.0);
      const double angle = static_cast<double>(f) * std::numbers::pi * (3.0 - std::sqrt(5.0));
      u[0] = norm * std::cos(angle);
      if (d > 1) u[1] = norm * std::sin(angle);
      const auto phi = empirical_char_function(draws, u);
      const double target = std::exp(-s.dt[k] * characteristic_exponent(*spec, norm));
      const double err = std::abs(phi - std::complex<double>(target, 0.0));
      sup = std::max(sup, err);
      std::vector<std::string> row{num(s.dt[k]), num(norm)};
      for (double c : u) row.push_back(num(c));
      row.insert(row.end(), {num(phi.real()), num(phi.imag()), num(target), num(err)});
      csv.row(row);
    }
  }
  const double bound = 4.0 / std::sqrt(static_cast<double>(s.samples)) + 0.01;
  ctx.summary.set("charfun_sup_error", sup);
  ctx.summary.set("charfun_bound", bound);
  ctx.summary.set("charfun_passed", sup <= bound ? "1" : "0");
}

void cmd_oracle(Context& ctx) {
  const std::size_t n = ctx.config.oracle.grid_n;
  Csv csv(ctx.out / "oracle.csv", {"lambda_ref", "grid_n", "extrapolated", "error_bar"});
  const auto& pot = ctx.model.potential().variant();
  if (const auto* u = std::get_if<InteractionPotential>(&pot)) {
    const auto& im = std::get<InteractingModel>(ctx.config.process);
    if (im.levy.family != LevyFamily::brownian_standard)
      throw ValidationError("oracle: the two-particle reduction needs standard Brownian particles");
    const TwoParticleReference ref = two_particle_reduction(u->spec(), n);
    csv.row({num(ref.total), std::to_string(n), num(ref.total), num(ref.error_bar)});
    ctx.summary.set("lambda_ref", ref.total);
    ctx.summary.set("lambda_cm", ref.lambda_cm);
    ctx.summary.set("lambda_rel", ref.lambda_rel);
    return;
  }
  const auto* v = std::get_if<SchrodingerPotential>(&pot);
  const auto* od = std::get_if<OverdampedModel>(&ctx.config.process);
  const auto* lm = std::get_if<LevyModel>(&ctx.config.process);
  const bool brownian = (od && od->drift.spec().kind == DriftKind::zero) ||
                        (lm && lm->levy.family == LevyFamily::brownian_standard);
  if (v == nullptr || !brownian)
    throw ValidationError("oracle: available for standard Brownian motion with a radial potential, or two particles");
  const int d = ctx.model.process().position_dimension();
  RadialProblem problem;
  problem.dimension = d;
  problem.potential = [v](double r) {
    const ExtendedReal e = v->radial_without_offset(r);
    return e.as_double() + v->offset();
  };
  double radius = 0.0;
  const auto& shape = ctx.config.domain;
  if (const auto* b = std::get_if<Ball>(&shape)) {
    for (double c : b->center)
      if (c != 0.0) throw ValidationError("oracle: the ball must be centred at the origin");
    radius = b->radius;
  } else if (std::holds_alternative<FullSpace>(shape)) {
    radius = ctx.config.oracle.r_max > 0.0 ? ctx.config.oracle.r_max : truncation_radius(problem.potential);
  } else {
    throw ValidationError("oracle: the domain must be the whole space or a centred ball");
  }
  if (d == 1) {
    problem.interval = true;
    problem.lower = -radius;
  }
  problem.upper = radius;
  problem.n = n;
  const EigenReference ref = richardson_ground_eigen(problem);
  for (std::size_t i = 0; i < ref.grid_n.size(); ++i)
    csv.row({num(ref.lambda[i]), std::to_string(ref.grid_n[i]), num(ref.extrapolated), num(ref.error_bar)});
  ctx.summary.set("lambda_ref", ref.extrapolated);
  ctx.summary.set("lambda_ref_error", ref.error_bar);
  ctx.summary.set("truncation_radius", radius);
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
    else if (c == '"') c = '\'';
  return s;
}

}  // namespace

int run(const RunOptions& options, std::ostream& err) {
  std::optional<fs::path> out;
  const auto fail = [&](int code, const char* kind, const std::string& reason) {
    const std::string line = std::string("error kind=") + kind + " reason=\"" + one_line(reason) + "\"";
    err << line << "\n";
    if (out) {
      std::error_code ec;
      fs::create_directories(*out, ec);
      std::ofstream(*out / "error.txt") << line << "\n";
    }
    return code;
  };
  try {
    ExperimentConfig config = load_config(options.config_path);
    if (options.seed) config.seed = *options.seed;
    if (options.out) config.output_directory = *options.out;
    out = fs::path(config.output_directory);
    if (options.workers < 1) throw ValidationError("--workers must be >= 1");
    FeynmanKacModel model = build_model(config);
    fs::create_directories(*out);
    Context ctx{config, std::move(model), *out, options.workers, Summary(config)};
    ctx.summary.set("inf_V", ctx.model.potential().infimum());

    static const std::map<std::string, void (*)(Context&)> commands{
        {"simulate", cmd_simulate},       {"lambda", cmd_lambda},
        {"qsd", cmd_qsd},                 {"convergence", cmd_convergence},
        {"lyapunov", cmd_lyapunov},       {"sampler-test", cmd_sampler_test},
        {"oracle", cmd_oracle},
    };
    const auto it = commands.find(options.subcommand);
    if (it == commands.end()) throw ValidationError("unknown subcommand '" + options.subcommand + "'");
    const std::string resolved = resolved_config_text(ctx.config);
    std::ofstream(*out / "resolved_config.ini") << resolved;
    try {
      it->second(ctx);
    } catch (...) {
      ctx.summary.write(*out / "summary.txt", resolved);
      throw;
    }
    ctx.summary.write(*out / "summary.txt", resolved);
    return exit_ok;
  } catch (const ValidationError& e) {
    return fail(exit_validation, "validation", e.what());
  } catch (const ExtinctionError& e) {
    return fail(exit_extinction, "extinction", e.what());
  } catch (const NonConvergenceError& e) {
    return fail(exit_nonconvergence, "nonconvergence", e.what());
  } catch (const std::exception& e) {
    return fail(exit_error, "error", e.what());
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Killed Feynman-Kac semigroups: particle estimates of lambda, the q.s.d. and drift conditions"};
  app.require_subcommand(1);
  RunOptions options;
  std::uint64_t seed = 0;
  for (const char* name : {"simulate", "lambda", "qsd", "convergence", "lyapunov", "sampler-test", "oracle"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config_path, "experiment config file")->required();
    sub->add_option("--seed", seed, "master seed (overrides [output] seed)");
    sub->add_option("--workers", options.workers, "worker threads");
    sub->add_option("--out", options.out, "output directory (overrides [output] directory)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_validation;
  }
  for (auto* sub : app.get_subcommands()) {
    options.subcommand = sub->get_name();
    if (sub->count("--seed") > 0) options.seed = seed;
  }
  return run(options, std::cerr);
}

}  // namespace fkqsd

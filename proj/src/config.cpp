#include "fkqsd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fkqsd/errors.hpp"

namespace fkqsd {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front())
    out = out.substr(1, out.size() - 2);
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ValidationError("config: '" + key + "' is not a number: " + text);
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ValidationError("config: '" + key + "' is not a non-negative integer: " + text);
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') s.erase(0, 1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

/// Reads keys out of the parsed tree, remembering which were consumed.
class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    const pt::ptree* node = &tree_;
    if (!section.empty()) {
      const auto it = tree_.find(section);
      if (it == tree_.not_found()) return std::nullopt;
      node = &it->second;
    }
    const auto it = node->find(key);
    if (it == node->not_found()) return std::nullopt;
    used_.insert(section + "." + key);
    return trim(it->second.data());
  }

  std::string str(const std::string& section, const std::string& key, const std::string& fallback) {
    return raw(section, key).value_or(fallback);
  }
  double num(const std::string& section, const std::string& key, double fallback) {
    const auto r = raw(section, key);
    return r ? to_double(section + "." + key, *r) : fallback;
  }
  std::size_t count(const std::string& section, const std::string& key, std::size_t fallback) {
    const auto r = raw(section, key);
    return r ? static_cast<std::size_t>(to_u64(section + "." + key, *r)) : fallback;
  }
  std::vector<double> list(const std::string& section, const std::string& key, std::vector<double> fallback) {
    const auto r = raw(section, key);
    return r ? to_list(section + "." + key, *r) : std::move(fallback);
  }

  void reject_unknown() const {
    for (const auto& [name, node] : tree_) {
      if (node.empty()) {
        if (!used_.count("." + name)) throw ValidationError("config: unknown key '" + name + "'");
        continue;
      }
      for (const auto& [key, leaf] : node) {
        (void)leaf;
        if (!used_.count(name + "." + key)) throw ValidationError("config: unknown key '" + name + "." + key + "'");
      }
    }
  }

 private:
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

LevyFamily parse_family(const std::string& s) {
  static const std::map<std::string, LevyFamily> names{
      {"brownian_standard", LevyFamily::brownian_standard}, {"isotropic_stable", LevyFamily::isotropic_stable},
      {"relativistic_stable", LevyFamily::relativistic_stable}, {"variance_gamma", LevyFamily::variance_gamma},
      {"geometric_stable", LevyFamily::geometric_stable},   {"jump_diffusion", LevyFamily::jump_diffusion},
  };
  const auto it = names.find(s);
  if (it == names.end()) throw ValidationError("config: unknown Levy family '" + s + "'");
  return it->second;
}

DriftKind parse_drift(const std::string& s) {
  if (s == "zero") return DriftKind::zero;
  if (s == "linear") return DriftKind::linear;
  if (s == "gradient_power") return DriftKind::gradient_power;
  if (s == "double_well") return DriftKind::double_well;
  throw ValidationError("config: unknown drift '" + s + "'");
}

std::vector<int> to_ints(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) {
    if (x != static_cast<double>(static_cast<int>(x)) || x < 0.0)
      throw ValidationError("config: histogram coordinates must be non-negative integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<double> to_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

int position_dimension_of(const ModelVariant& m) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, OverdampedModel> || std::is_same_v<T, KineticModel>) return x.dimension;
        else if constexpr (std::is_same_v<T, LevyModel>) return x.levy.dimension;
        else return x.n * x.levy.dimension;
      },
      m);
}

}  // namespace

const char* to_string(TheoremCase c) noexcept {
  switch (c) {
    case TheoremCase::oL_case1: return "oL_case1";
    case TheoremCase::oL_case2: return "oL_case2";
    case TheoremCase::levy: return "levy";
    case TheoremCase::kinetic: return "kinetic";
    case TheoremCase::interacting: return "interacting";
    case TheoremCase::line_charge: return "line_charge";
    case TheoremCase::nonsingular: return "nonsingular";
  }
  return "?";
}

TheoremCase parse_theorem_case(const std::string& s) {
  for (auto c : {TheoremCase::oL_case1, TheoremCase::oL_case2, TheoremCase::levy, TheoremCase::kinetic,
                 TheoremCase::interacting, TheoremCase::line_charge, TheoremCase::nonsingular})
    if (s == to_string(c)) return c;
  throw ValidationError("config: unknown theorem_case '" + s + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  Reader r(tree);
  ExperimentConfig c;

  const auto tc = r.raw("", "theorem_case");
  if (!tc) throw ValidationError("config: theorem_case is required");
  c.theorem_case = parse_theorem_case(*tc);

  // [process]
  const std::string model = r.str("process", "model", "overdamped");
  const int dim = static_cast<int>(r.count("process", "dimension", 2));
  c.dt = r.num("process", "dt", 1e-3);
  const auto read_drift = [&] {
    DriftSpec d;
    d.kind = parse_drift(r.str("process", "drift", "zero"));
    if (d.kind == DriftKind::linear) d.kappa = r.num("process", "kappa", 1.0);
    if (d.kind == DriftKind::gradient_power || d.kind == DriftKind::double_well)
      d.coefficient = r.num("process", "drift_coefficient", 1.0);
    if (d.kind == DriftKind::gradient_power) d.exponent = r.num("process", "drift_exponent", 4.0);
    return Drift(d);
  };
  const auto read_levy = [&] {
    LevySpec l;
    l.family = parse_family(r.str("process", "family", "brownian_standard"));
    l.dimension = dim;
    if (l.family == LevyFamily::isotropic_stable || l.family == LevyFamily::relativistic_stable ||
        l.family == LevyFamily::geometric_stable || l.family == LevyFamily::jump_diffusion)
      l.alpha = r.num("process", "alpha", 1.5);
    if (l.family == LevyFamily::relativistic_stable) l.mass = r.num("process", "m", 1.0);
    return l;
  };
  if (model == "overdamped") {
    c.process = OverdampedModel{read_drift(), dim};
  } else if (model == "levy") {
    c.process = LevyModel{read_levy()};
  } else if (model == "kinetic") {
    Drift drift = read_drift();
    c.process = KineticModel{std::move(drift), r.num("process", "gamma", 1.0), dim};
  } else if (model == "interacting") {
    const int n = static_cast<int>(r.count("process", "n_particles_model4", 2));
    c.process = InteractingModel{n, read_levy()};
  } else {
    throw ValidationError("config: unknown process model '" + model + "'");
  }

  // [potential]
  const std::string type = r.str("potential", "type", "point");
  if (type == "point") c.potential.type = PotentialType::point;
  else if (type == "interaction") c.potential.type = PotentialType::interaction;
  else if (type == "line_charge") c.potential.type = PotentialType::line_charge;
  else throw ValidationError("config: unknown potential type '" + type + "'");
  const std::string sing = r.str("potential", "singular", "none");
  if (sing == "none") {
    c.potential.singular = std::monostate{};
  } else if (sing == "riesz") {
    c.potential.singular = Riesz{r.num("potential", "exponent", 1.0), r.num("potential", "coefficient", 1.0)};
  } else if (sing == "lennard_jones") {
    c.potential.singular =
        LennardJones{r.num("potential", "well_depth", 1.0), r.num("potential", "length_scale", 1.0)};
  } else if (sing == "log_singular") {
    c.potential.singular = LogSingular{r.num("potential", "coefficient", 1.0)};
  } else if (sing == "log_with_floor") {
    c.potential.singular = LogWithFloor{r.num("potential", "coefficient", 1.0), r.num("potential", "cutoff", 1.0)};
  } else {
    throw ValidationError("config: unknown singular kind '" + sing + "'");
  }
  const std::string conf = r.str("potential", "confining", "none");
  if (conf == "power") {
    c.potential.confining =
        PowerConfining{r.num("potential", "confining_exponent", 2.0), r.num("potential", "confining_coefficient", 1.0)};
  } else if (conf != "none") {
    throw ValidationError("config: unknown confining kind '" + conf + "'");
  }
  c.potential.offset = r.num("potential", "offset", 0.0);

  // [domain]
  const int pos_dim = position_dimension_of(c.process);
  const std::string kind = r.str("domain", "kind", "full");
  const auto center = [&] {
    auto v = r.list("domain", "center", std::vector<double>(static_cast<std::size_t>(pos_dim), 0.0));
    return v;
  };
  if (kind == "full") {
    c.domain = FullSpace{};
  } else if (kind == "ball") {
    auto ctr = center();
    c.domain = Ball{std::move(ctr), r.num("domain", "radius", 1.0)};
  } else if (kind == "annulus") {
    c.domain = Annulus{r.num("domain", "r_in", 0.5), r.num("domain", "r_out", 1.0)};
  } else if (kind == "ball_complement") {
    auto ctr = center();
    c.domain = BallComplement{std::move(ctr), r.num("domain", "radius", 1.0)};
  } else if (kind == "halfspace") {
    std::vector<double> e1(static_cast<std::size_t>(pos_dim), 0.0);
    e1[0] = 1.0;
    auto normal = r.list("domain", "normal", e1);
    c.domain = HalfSpace{std::move(normal), r.num("domain", "offset", 0.0)};
  } else {
    throw ValidationError("config: unknown domain kind '" + kind + "'");
  }

  // [particles]
  auto& p = c.particles;
  p.n = r.count("particles", "N", p.n);
  p.delta = r.num("particles", "delta", p.delta);
  p.epochs = r.count("particles", "epochs", p.epochs);
  p.burn_in = r.num("particles", "burn_in", p.burn_in);
  p.start = r.list("particles", "start", {});
  p.n_paths = r.count("particles", "n_paths", p.n_paths);
  p.horizon = r.num("particles", "horizon", p.horizon);
  p.box_lower = r.list("particles", "box_lower", {});
  p.box_upper = r.list("particles", "box_upper", {});
  p.bins = static_cast<int>(r.count("particles", "bins", static_cast<std::size_t>(p.bins)));
  p.coordinates = to_ints(r.list("particles", "coordinates", {}));
  p.check_particles = r.count("particles", "check_particles", p.check_particles);
  p.convergence_epochs = r.count("particles", "convergence_epochs", p.convergence_epochs);
  p.convergence_start = r.list("particles", "convergence_start", {});
  p.noise_floor = r.num("particles", "noise_floor", p.noise_floor);

  // [lyapunov]
  auto& l = c.lyapunov;
  const std::string spec = r.str("lyapunov", "spec", "unit");
  if (spec == "unit") l.spec = UnitW{};
  else if (spec == "exp_radial") l.spec = ExpRadialW{r.num("lyapunov", "epsilon", 0.1)};
  else if (spec == "power_radial") l.spec = PowerRadialW{r.num("lyapunov", "k", 4.0)};
  else if (spec == "kinetic") {
    const double gamma = std::holds_alternative<KineticModel>(c.process) ? std::get<KineticModel>(c.process).gamma : 1.0;
    l.spec = KineticW{r.num("lyapunov", "a", 1.0), r.num("lyapunov", "b", 0.2), gamma};
  } else {
    throw ValidationError("config: unknown Lyapunov spec '" + spec + "'");
  }
  (void)LyapunovSpec(l.spec);
  l.p_list = r.list("lyapunov", "p_list", l.p_list);
  l.scan_min = r.num("lyapunov", "scan_min", l.scan_min);
  l.scan_max = r.num("lyapunov", "scan_max", l.scan_max);
  l.scan_points = r.count("lyapunov", "scan_points", l.scan_points);
  l.threshold = r.num("lyapunov", "threshold", l.threshold);
  l.r0 = r.num("lyapunov", "r0", l.r0);

  // [sampler]
  c.sampler.samples = r.count("sampler", "samples", c.sampler.samples);
  c.sampler.dt = r.list("sampler", "dt", c.sampler.dt);
  c.sampler.u_max = r.num("sampler", "u_max", c.sampler.u_max);
  c.sampler.frequencies = r.count("sampler", "frequencies", c.sampler.frequencies);

  // [oracle]
  c.oracle.grid_n = r.count("oracle", "grid_n", c.oracle.grid_n);
  c.oracle.r_max = r.num("oracle", "r_max", c.oracle.r_max);

  // [output]
  c.output_directory = r.str("output", "directory", c.output_directory);
  const auto seed = r.raw("output", "seed");
  if (!seed) throw ValidationError("config: [output] seed is required");
  c.seed = to_u64("output.seed", *seed);

  r.reject_unknown();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  return parse_config(in);
}

std::string resolved_config_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "theorem_case = " << to_string(c.theorem_case) << "\n\n[process]\n";
  const auto drift_keys = [&](const Drift& d) {
    const auto& s = d.spec();
    o << "drift = " << to_string(s.kind) << "\n";
    if (s.kind == DriftKind::linear) o << "kappa = " << fmt(s.kappa) << "\n";
    if (s.kind == DriftKind::gradient_power || s.kind == DriftKind::double_well)
      o << "drift_coefficient = " << fmt(s.coefficient) << "\n";
    if (s.kind == DriftKind::gradient_power) o << "drift_exponent = " << fmt(s.exponent) << "\n";
  };
  const auto levy_keys = [&](const LevySpec& l) {
    o << "family = " << to_string(l.family) << "\n";
    if (l.family == LevyFamily::isotropic_stable || l.family == LevyFamily::relativistic_stable ||
        l.family == LevyFamily::geometric_stable || l.family == LevyFamily::jump_diffusion)
      o << "alpha = " << fmt(l.alpha) << "\n";
    if (l.family == LevyFamily::relativistic_stable) o << "m = " << fmt(l.mass) << "\n";
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, OverdampedModel>) {
          o << "model = overdamped\ndimension = " << m.dimension << "\n";
          drift_keys(m.drift);
        } else if constexpr (std::is_same_v<T, LevyModel>) {
          o << "model = levy\ndimension = " << m.levy.dimension << "\n";
          levy_keys(m.levy);
        } else if constexpr (std::is_same_v<T, KineticModel>) {
          o << "model = kinetic\ndimension = " << m.dimension << "\ngamma = " << fmt(m.gamma) << "\n";
          drift_keys(m.drift);
        } else {
          o << "model = interacting\ndimension = " << m.levy.dimension << "\nn_particles_model4 = " << m.n << "\n";
          levy_keys(m.levy);
        }
      },
      c.process);
  o << "dt = " << fmt(c.dt) << "\n\n[potential]\n";
  const auto& pot = c.potential;
  o << "type = "
    << (pot.type == PotentialType::point ? "point" : pot.type == PotentialType::interaction ? "interaction" : "line_charge")
    << "\n";
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          o << "singular = none\n";
        } else if constexpr (std::is_same_v<T, Riesz>) {
          o << "singular = riesz\nexponent = " << fmt(s.exponent) << "\ncoefficient = " << fmt(s.coefficient) << "\n";
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          o << "singular = lennard_jones\nwell_depth = " << fmt(s.well_depth) << "\nlength_scale = "
            << fmt(s.length_scale) << "\n";
        } else if constexpr (std::is_same_v<T, LogSingular>) {
          o << "singular = log_singular\ncoefficient = " << fmt(s.coefficient) << "\n";
        } else {
          o << "singular = log_with_floor\ncoefficient = " << fmt(s.coefficient) << "\ncutoff = " << fmt(s.cutoff)
            << "\n";
        }
      },
      pot.singular);
  if (pot.confining)
    o << "confining = power\nconfining_exponent = " << fmt(pot.confining->exponent)
      << "\nconfining_coefficient = " << fmt(pot.confining->coefficient) << "\n";
  else
    o << "confining = none\n";
  o << "offset = " << fmt(pot.offset) << "\n\n[domain]\n";
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FullSpace>) {
          o << "kind = full\n";
        } else if constexpr (std::is_same_v<T, Ball>) {
          o << "kind = ball\ncenter = " << fmt_list(s.center) << "\nradius = " << fmt(s.radius) << "\n";
        } else if constexpr (std::is_same_v<T, Annulus>) {
          o << "kind = annulus\nr_in = " << fmt(s.r_in) << "\nr_out = " << fmt(s.r_out) << "\n";
        } else if constexpr (std::is_same_v<T, BallComplement>) {
          o << "kind = ball_complement\ncenter = " << fmt_list(s.center) << "\nradius = " << fmt(s.radius) << "\n";
        } else {
          o << "kind = halfspace\nnormal = " << fmt_list(s.normal) << "\noffset = " << fmt(s.offset) << "\n";
        }
      },
      c.domain);
  const auto& p = c.particles;
  o << "\n[particles]\nN = " << p.n << "\ndelta = " << fmt(p.delta) << "\nepochs = " << p.epochs
    << "\nburn_in = " << fmt(p.burn_in) << "\nstart = " << fmt_list(p.start) << "\nn_paths = " << p.n_paths
    << "\nhorizon = " << fmt(p.horizon) << "\nbox_lower = " << fmt_list(p.box_lower)
    << "\nbox_upper = " << fmt_list(p.box_upper) << "\nbins = " << p.bins
    << "\ncoordinates = " << fmt_list(to_doubles(p.coordinates)) << "\ncheck_particles = " << p.check_particles
    << "\nconvergence_epochs = " << p.convergence_epochs
    << "\nconvergence_start = " << fmt_list(p.convergence_start) << "\nnoise_floor = " << fmt(p.noise_floor)
    << "\n\n[lyapunov]\n";
  const auto& l = c.lyapunov;
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, UnitW>) o << "spec = unit\n";
        else if constexpr (std::is_same_v<T, ExpRadialW>) o << "spec = exp_radial\nepsilon = " << fmt(w.epsilon) << "\n";
        else if constexpr (std::is_same_v<T, PowerRadialW>) o << "spec = power_radial\nk = " << fmt(w.exponent) << "\n";
        else o << "spec = kinetic\na = " << fmt(w.a) << "\nb = " << fmt(w.b) << "\n";
      },
      l.spec);
  o << "p_list = " << fmt_list(l.p_list) << "\nscan_min = " << fmt(l.scan_min) << "\nscan_max = " << fmt(l.scan_max)
    << "\nscan_points = " << l.scan_points << "\nthreshold = " << fmt(l.threshold) << "\nr0 = " << fmt(l.r0)
    << "\n\n[sampler]\nsamples = " << c.sampler.samples << "\ndt = " << fmt_list(c.sampler.dt)
    << "\nu_max = " << fmt(c.sampler.u_max) << "\nfrequencies = " << c.sampler.frequencies
    << "\n\n[oracle]\ngrid_n = " << c.oracle.grid_n << "\nr_max = " << fmt(c.oracle.r_max)
    << "\n\n[output]\ndirectory = " << c.output_directory << "\nseed = " << c.seed << "\n";
  return o.str();
}

FeynmanKacModel build_model(const ExperimentConfig& c) {
  ProcessModel process(c.process);
  const int pos = process.position_dimension();
  const auto& ps = c.potential;
  std::optional<PotentialField> field;
  switch (ps.type) {
    case PotentialType::point:
      field.emplace(SchrodingerPotential(PotentialSpec{ps.singular, ps.confining, ps.offset, pos}));
      break;
    case PotentialType::interaction: {
      const auto* im = std::get_if<InteractingModel>(&c.process);
      if (im == nullptr) throw ValidationError("config: an interaction potential needs the interacting model");
      if (!ps.confining) throw ValidationError("config: the interaction potential needs a confining V_inf");
      InteractionSpec spec{im->n, PotentialSpec{std::monostate{}, ps.confining, ps.offset, im->levy.dimension},
                           ps.singular};
      field.emplace(InteractionPotential(std::move(spec)));
      break;
    }
    case PotentialType::line_charge: {
      if (pos != 3) throw ValidationError("config: the line charge lives in three dimensions");
      LineChargeSpec spec{ps.singular, std::nullopt};
      if (ps.confining || ps.offset != 0.0)
        spec.confining = PotentialSpec{std::monostate{}, ps.confining, ps.offset, 3};
      field.emplace(LineChargePotential(std::move(spec)));
      break;
    }
  }
  FeynmanKacModel model(std::move(process), std::move(*field), Domain(DomainSpec{c.domain, pos}));
  validate_theorem_case(c.theorem_case, model);
  return model;
}

void validate_theorem_case(TheoremCase tc, const FeynmanKacModel& model) {
  const auto& proc = model.process().variant();
  const auto& pot = model.potential().variant();
  const auto* point = std::get_if<SchrodingerPotential>(&pot);
  const auto cls = point ? point->classification().kind : PotentialClass::Invalid;
  const bool singular_class = cls == PotentialClass::S1 || cls == PotentialClass::S2;
  const auto fail = [tc](const std::string& why) {
    throw ValidationError(std::string("theorem_case ") + to_string(tc) + ": " + why);
  };
  const auto* od = std::get_if<OverdampedModel>(&proc);
  const auto* lv = std::get_if<LevyModel>(&proc);
  const auto* kn = std::get_if<KineticModel>(&proc);
  const bool standard_brownian =
      (od && od->drift.spec().kind == DriftKind::zero) || (lv && lv->levy.family == LevyFamily::brownian_standard);

  switch (tc) {
    case TheoremCase::oL_case1:
      if (!od) fail("needs the overdamped model");
      if (!satisfies_c1(od->drift.growth_class())) fail("needs a c1 drift");
      if (!singular_class) fail("needs an S1 or S2 potential");
      break;
    case TheoremCase::oL_case2:
      if (!od) fail("needs the overdamped model");
      if (cls != PotentialClass::S2) fail("needs an S2 potential");
      break;
    case TheoremCase::levy:
      if (!lv) fail("needs a Levy model");
      if (cls != PotentialClass::S2) fail("needs an S2 potential");
      break;
    case TheoremCase::kinetic:
      if (!kn) fail("needs the kinetic model");
      if (!satisfies_c1(kn->drift.growth_class())) fail("needs -grad V_c of class c1");
      if (!singular_class) fail("needs an S1 or S2 potential");
      break;
    case TheoremCase::interacting:
      if (!std::holds_alternative<InteractingModel>(proc) || !std::holds_alternative<InteractionPotential>(pot))
        fail("needs the interacting model with an interaction potential");
      break;
    case TheoremCase::line_charge: {
      const auto* lc = std::get_if<LineChargePotential>(&pot);
      if (!lc) fail("needs the line-charge potential");
      if (!standard_brownian) fail("needs standard Brownian motion");
      if (!lc->spec().confining || !lc->spec().confining->confining) fail("needs a coercive V_inf");
      break;
    }
    case TheoremCase::nonsingular: {
      if (!(od || standard_brownian)) fail("needs the overdamped model or standard Brownian motion");
      if (!point || has_singularity(point->spec().singular)) fail("needs a non-singular potential");
      if (cls == PotentialClass::Coercive) break;
      const bool bounded_domain = std::holds_alternative<Ball>(model.domain().spec().shape) ||
                                  std::holds_alternative<Annulus>(model.domain().spec().shape);
      const bool c1 = od && satisfies_c1(od->drift.growth_class());
      if (cls == PotentialClass::Bounded && (c1 || bounded_domain)) break;
      fail("needs a coercive potential, or a bounded one with a c1 drift or a bounded domain");
    }
  }
}

ModelState start_state(const ExperimentConfig& c, const FeynmanKacModel& model) {
  const auto sdim = static_cast<std::size_t>(model.process().state_dimension());
  if (!c.particles.start.empty()) {
    ModelState s{c.particles.start};
    if (s.coords.size() != sdim) throw ValidationError("config: start has the wrong dimension");
    if (!model.contains(s)) throw ValidationError("config: start lies outside the domain or on the singular set");
    return s;
  }
  std::vector<ModelState> candidates;
  ModelState zero{std::vector<double>(sdim, 0.0)};
  if (const auto* im = std::get_if<InteractingModel>(&model.process().variant())) {
    ModelState s = zero;
    const auto d = static_cast<std::size_t>(im->levy.dimension);
    for (int j = 0; j < im->n; ++j) s.coords[static_cast<std::size_t>(j) * d] = j - (im->n - 1) / 2.0;
    candidates.push_back(s);
  }
  candidates.push_back(zero);
  ModelState e1 = zero;
  e1.coords[0] = 1.0;
  candidates.push_back(e1);
  if (const auto* b = std::get_if<Ball>(&c.domain)) {
    ModelState s = zero;
    std::copy(b->center.begin(), b->center.end(), s.coords.begin());
    candidates.push_back(s);
    s.coords[0] += b->radius / 2.0;
    candidates.push_back(s);
  }
  if (const auto* a = std::get_if<Annulus>(&c.domain)) {
    ModelState s = zero;
    s.coords[0] = (a->r_in + a->r_out) / 2.0;
    candidates.push_back(s);
  }
  for (const auto& s : candidates)
    if (model.contains(s)) return s;
  throw ValidationError("config: no default start inside the domain; set [particles] start");
}

std::optional<HistogramSpec> histogram_spec(const ExperimentConfig& c) {
  const auto& p = c.particles;
  if (p.box_lower.empty() && p.box_upper.empty()) return std::nullopt;
  if (p.box_lower.size() != p.box_upper.size()) throw ValidationError("config: box bounds differ in length");
  if (p.bins < 1) throw ValidationError("config: bins must be positive");
  return HistogramSpec{p.box_lower, p.box_upper, p.bins, p.coordinates};
}

}  // namespace fkqsd

#include "fkqsd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fkqsd/errors.hpp"

namespace fkqsd {

namespace {

/// Symmetric tridiagonal system B = M^{-1/2} K M^{-1/2} and the scaling sqrt(M).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> sqrt_m;
  std::vector<double> grid;
};

void validate(const RadialProblem& p) {
  if (p.n < 3) throw ValidationError("oracle: need at least 3 cells");
  if (!p.potential) throw ValidationError("oracle: missing potential");
  if (p.interval) {
    if (p.dimension != 1) throw ValidationError("oracle: interval problems are one-dimensional");
    if (!(p.upper > p.lower)) throw ValidationError("oracle: need lower < upper");
  } else {
    if (p.dimension < 1) throw ValidationError("oracle: dimension must be >= 1");
    if (!(p.upper > 0.0)) throw ValidationError("oracle: radius must be positive");
  }
}

Tridiagonal assemble(const RadialProblem& p) {
  validate(p);
  const std::size_t n = p.n;
  const double a = p.interval ? p.lower : 0.0;
  const double h = (p.upper - a) / static_cast<double>(n);
  const double k = static_cast<double>(p.dimension - 1);
  const auto weight = [&](double r) { return p.interval ? 1.0 : std::pow(r, k); };

  Tridiagonal t;
  t.grid.resize(n);
  std::vector<double> m(n);
  std::vector<double> face(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    t.grid[i] = a + (static_cast<double>(i) + 0.5) * h;
    m[i] = weight(t.grid[i]);
  }
  for (std::size_t i = 0; i <= n; ++i) face[i] = weight(a + static_cast<double>(i) * h);
  // Regular origin: no flux through r = 0.
  if (!p.interval) face[0] = 0.0;

  const double c = 0.5 / (h * h);
  t.diag.resize(n);
  t.off.resize(n - 1);
  t.sqrt_m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double flux = face[i] + face[i + 1];
    // Absorbing ends by the odd ghost value u_ghost = -u.
    if (i == n - 1) flux += face[n];
    if (p.interval && i == 0) flux += face[0];
    const double v = p.potential(t.grid[i]);
    if (!std::isfinite(v)) throw ValidationError("oracle: potential is not finite on the grid");
    t.diag[i] = c * flux / m[i] + v;
    t.sqrt_m[i] = std::sqrt(m[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) t.off[i] = -c * face[i + 1] / (t.sqrt_m[i] * t.sqrt_m[i + 1]);
  return t;
}

/// Number of eigenvalues below sigma (Sturm sequence via LDL^T pivots).
std::size_t count_below(const Tridiagonal& t, double sigma) {
  std::size_t count = 0;
  double q = t.diag[0] - sigma;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == t.diag.size()) break;
    q = t.diag[i + 1] - sigma - t.off[i] * t.off[i] / q;
  }
  return count;
}

/// Solves (B + shift I) x = rhs for tridiagonal B (Thomas algorithm).
std::vector<double> solve(const Tridiagonal& t, double scale, double shift, const std::vector<double>& rhs) {
  const std::size_t n = t.diag.size();
  std::vector<double> c(n);
  std::vector<double> d(n);
  double beta = scale * t.diag[0] + shift;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = scale * t.off[i - 1] / beta;
    beta = scale * t.diag[i] + shift - scale * t.off[i - 1] * c[i];
    d[i] = (rhs[i] - scale * t.off[i - 1] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i + 1] * d[i + 1];
  return d;
}

std::vector<double> multiply(const Tridiagonal& t, const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = t.diag[i] * y[i];
    if (i > 0) s += t.off[i - 1] * y[i - 1];
    if (i + 1 < n) s += t.off[i] * y[i + 1];
    out[i] = s;
  }
  return out;
}

double lowest_eigenvalue(const Tridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.off[i - 1]);
    if (i < t.off.size()) radius += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(t, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GroundState radial_ground_eigen(const RadialProblem& problem) {
  const Tridiagonal t = assemble(problem);
  const std::size_t n = t.diag.size();
  GroundState out;
  out.lambda = lowest_eigenvalue(t);
  out.grid = t.grid;

  // Inverse iteration just below the eigenvalue keeps B - mu I positive definite.
  const double mu = out.lambda - 1e-8 * std::max(1.0, std::abs(out.lambda));
  std::vector<double> y(n, 1.0);
  bool converged = false;
  for (int it = 0; it < 100 && !converged; ++it) {
    std::vector<double> z = solve(t, 1.0, -mu, y);
    double nz = 0.0;
    for (double v : z) nz += v * v;
    nz = std::sqrt(nz);
    for (double& v : z) v /= nz;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(z[i] - y[i]));
    y = std::move(z);
    converged = it > 0 && change < 1e-12;
  }
  if (!converged) throw NonConvergenceError("oracle: inverse iteration did not converge");

  // Residual check against the bisection value.
  const auto by = multiply(t, y);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(by[i] - out.lambda * y[i]));
  if (res > 1e-6 * std::max(1.0, std::abs(out.lambda)))
    throw NonConvergenceError("oracle: eigenvector residual too large");

  out.eigenfunction.resize(n);
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenfunction[i] = y[i] / t.sqrt_m[i];
    if (std::abs(out.eigenfunction[i]) > std::abs(top)) top = out.eigenfunction[i];
  }
  for (double& v : out.eigenfunction) v /= top;
  return out;
}

EigenReference richardson_ground_eigen(RadialProblem problem, std::vector<std::size_t> grid_n) {
  if (grid_n.empty()) grid_n = {problem.n, 2 * problem.n, 4 * problem.n};
  if (grid_n.size() < 2) throw ValidationError("oracle: Richardson needs at least two grids");
  EigenReference ref;
  ref.grid_n = grid_n;
  for (std::size_t n : grid_n) {
    problem.n = n;
    ref.lambda.push_back(radial_ground_eigen(problem).lambda);
  }
  const auto extrap = [&](std::size_t i) { return (4.0 * ref.lambda[i + 1] - ref.lambda[i]) / 3.0; };
  const std::size_t last = ref.lambda.size() - 2;
  ref.extrapolated = extrap(last);
  ref.error_bar = last > 0 ? std::abs(ref.extrapolated - extrap(last - 1))
                           : std::abs(ref.lambda[1] - ref.lambda[0]) / 3.0;
  return ref;
}

double radial_survival(const RadialProblem& problem, double t, double start, std::size_t time_steps) {
  if (!(t > 0.0)) throw ValidationError("oracle: survival needs t > 0");
  if (time_steps < 3) throw ValidationError("oracle: need at least 3 time steps");
  const double a = problem.interval ? problem.lower : 0.0;
  if (!(start >= a && start <= problem.upper)) throw ValidationError("oracle: start outside the problem domain");
  const Tridiagonal tri = assemble(problem);
  const std::size_t n = tri.diag.size();
  const double dt = t / static_cast<double>(time_steps);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = tri.sqrt_m[i];
  // Rannacher start-up: four backward-Euler half steps smooth the boundary mismatch.
  for (int k = 0; k < 4; ++k) y = solve(tri, 0.5 * dt, 1.0, y);
  for (std::size_t k = 2; k < time_steps; ++k) {
    const auto by = multiply(tri, y);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = y[i] - 0.5 * dt * by[i];
    y = solve(tri, 0.5 * dt, 1.0, rhs);
  }
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = y[i] / tri.sqrt_m[i];

  const auto& r = tri.grid;
  if (start <= r.front()) {
    if (problem.interval) return u.front() * (start - a) / (r.front() - a);
    // Even extension through the regular origin.
    return u[0] + (u[1] - u[0]) * (start * start - r[0] * r[0]) / (r[1] * r[1] - r[0] * r[0]);
  }
  if (start >= r.back()) return u.back() * (problem.upper - start) / (problem.upper - r.back());
  const auto it = std::upper_bound(r.begin(), r.end(), start);
  const auto j = static_cast<std::size_t>(it - r.begin());
  const double w = (start - r[j - 1]) / (r[j] - r[j - 1]);
  return (1.0 - w) * u[j - 1] + w * u[j];
}

double truncation_radius(const std::function<double(double)>& v, double margin, double start) {
  double lowest = std::numeric_limits<double>::infinity();
  double r = 0.0;
  const double step = start / 1000.0;
  for (std::size_t i = 1; i < 100000000; ++i) {
    r = static_cast<double>(i) * step;
    const double val = v(r);
    if (std::isfinite(val)) lowest = std::min(lowest, val);
    if (r >= start && val >= lowest + margin) return r;
    if (r > 1e6) break;
  }
  throw NonConvergenceError("oracle: the potential does not rise by the truncation margin");
}

TwoParticleReference two_particle_reduction(double c, const std::function<double(double)>& pair, int dimension,
                                            std::size_t n) {
  if (!(c > 0.0)) throw ValidationError("oracle: the reduction needs a positive quadratic coefficient");
  if (dimension < 1) throw ValidationError("oracle: dimension must be >= 1");
  TwoParticleReference out;

  const auto harmonic = [c](double x) { return c * x * x; };
  const double L = truncation_radius(harmonic);
  RadialProblem cm;
  cm.dimension = 1;
  cm.interval = true;
  cm.lower = -L;
  cm.upper = L;
  cm.potential = harmonic;
  cm.n = n;
  const EigenReference cm_ref = richardson_ground_eigen(cm);

  const auto rel_potential = [c, &pair](double r) { return c * r * r + pair(std::sqrt(2.0) * r); };
  RadialProblem rel;
  rel.dimension = dimension;
  rel.upper = truncation_radius(rel_potential);
  rel.potential = rel_potential;
  rel.n = n;
  const EigenReference rel_ref = richardson_ground_eigen(rel);

  const auto d = static_cast<double>(dimension);
  out.lambda_cm = d * cm_ref.extrapolated;
  out.lambda_rel = rel_ref.extrapolated;
  out.total = out.lambda_cm + out.lambda_rel;
  out.error_bar = d * cm_ref.error_bar + rel_ref.error_bar;
  return out;
}

TwoParticleReference two_particle_reduction(const InteractionSpec& spec, std::size_t n) {
  if (spec.n != 2) throw ValidationError("oracle: the reduction is for two particles");
  const auto& conf = spec.confining;
  if (has_singularity(conf.singular) || !conf.confining || conf.confining->exponent != 2.0)
    throw ValidationError("oracle: the reduction needs a quadratic V_inf");
  SingularProfile pair = spec.pair;
  TwoParticleReference out = two_particle_reduction(
      conf.confining->coefficient, [pair](double u) { return eval_profile(pair, u); }, conf.dimension, n);
  out.total += 2.0 * conf.offset;
  return out;
}

}  // namespace fkqsd

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fkqsd/potentials.hpp"

namespace fkqsd {

/// -1/2 (u'' + (d-1)/r u') + V u on a uniform cell-centred grid.
/// Radial mode: (0, upper), regular at 0, absorbing at `upper`.
/// Interval mode: (lower, upper) with absorbing ends and d = 1.
struct RadialProblem {
  int dimension = 1;
  double lower = 0.0;
  double upper = 1.0;
  std::function<double(double)> potential = [](double) { return 0.0; };
  std::size_t n = 400;
  bool interval = false;
};

struct GroundState {
  double lambda = 0.0;
  std::vector<double> grid;
  /// Positive, max 1.
  std::vector<double> eigenfunction;
};

/// Lowest eigenpair: Sturm-sequence bisection on the symmetrized tridiagonal
/// matrix, then inverse iteration. Throws NonConvergenceError if the vector does not settle.
GroundState radial_ground_eigen(const RadialProblem& problem);

struct EigenReference {
  /// Richardson extrapolant (4 lambda(2n) - lambda(n)) / 3 from the two finest grids.
  double extrapolated = 0.0;
  /// Difference between the last two extrapolants (or the last correction with two grids).
  double error_bar = 0.0;
  std::vector<std::size_t> grid_n;
  std::vector<double> lambda;
};

/// Solves on n, 2n, 4n (problem.n = n) unless explicit grid sizes are given.
EigenReference richardson_ground_eigen(RadialProblem problem, std::vector<std::size_t> grid_n = {});

/// u(t, start) for du/dt = 1/2 Lap u - V u, u(0) = 1, absorbing boundary:
/// Crank-Nicolson after four backward-Euler half steps.
double radial_survival(const RadialProblem& problem, double t, double start, std::size_t time_steps = 2000);

/// Smallest R >= start with V(R) >= min_{(0,R]} V + margin (V sampled on a fine grid).
double truncation_radius(const std::function<double(double)>& v, double margin = 40.0, double start = 1.0);

struct TwoParticleReference {
  double lambda_cm = 0.0;
  double lambda_rel = 0.0;
  double total = 0.0;
  double error_bar = 0.0;
};

/// Two Brownian particles (generator 1/2 Lap each) in R^d with V_inf = c |x|^2 and
/// pair potential v: centre-of-mass / difference coordinates split the problem
/// into a harmonic part (d one-dimensional solves) and a radial part with
/// c r^2 + v(sqrt(2) r).
TwoParticleReference two_particle_reduction(double quadratic_coefficient, const std::function<double(double)>& pair,
                                            int dimension, std::size_t n = 800);

/// Same, from a validated interaction spec; rejects n != 2 and non-quadratic V_inf.
TwoParticleReference two_particle_reduction(const InteractionSpec& spec, std::size_t n = 800);

}  // namespace fkqsd

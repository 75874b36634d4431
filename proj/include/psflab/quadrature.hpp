#pragma once
// Gauss-Legendre rules (cached nodes), panel-based adaptive integration for
// oscillatory smooth integrands, and a doubling driver for one-shot
// integrals. All deterministic.

#include <complex>
#include <functional>
#include <vector>

namespace psflab::quad {

struct Rule {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // positive, sum 2
};

// Cached; nodes by Newton iteration on the Legendre recurrence, converged to
// ~1 ulp. n in [1, 256].
const Rule& gauss_legendre(int n);

struct Result {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  bool converged = false;
  long evaluations = 0;
};

using Integrand = std::function<std::complex<double>(double)>;
using RealIntegrand = std::function<double(double)>;

// Single fixed-order panel.
std::complex<double> gl_panel(const Integrand& f, double a, double b, int n);
double gl_panel(const RealIntegrand& f, double a, double b, int n);

// Splits [a, b] into ceil((b-a)/max_panel) equal panels of a 16-point rule,
// then doubles the per-panel order until the whole-interval estimate moves
// by <= abs_tol (or max_order is hit; converged reports which).
Result integrate_panels(const Integrand& f, double a, double b,
                        double max_panel, double abs_tol, int max_order = 128);

// Doubles a single panel's order until successive estimates differ by
// <= rel_tol * max(1, |I|). For smooth non-oscillatory integrands.
Result integrate_doubling(const RealIntegrand& f, double a, double b,
                          double rel_tol, int max_order = 256);

}  // namespace psflab::quad

#include "psflab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace psflab::quad {

namespace {

Rule compute_rule(int n) {
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    // one clean derivative evaluation at the converged node
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pm = (n == 1) ? 1.0 : p0;
      const double pn = (n == 1) ? x : p1;
      dp = n * (x * pn - pm) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;  // ascending from the left
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) {
    // exact midpoint for odd orders
    rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }
  return rule;
}

std::mutex g_rule_mutex;
std::map<int, Rule>& rule_cache() {
  static std::map<int, Rule> cache;
  return cache;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1 || n > 256)
    throw std::invalid_argument("gauss_legendre: order must be in [1, 256]");
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto& cache = rule_cache();
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

std::complex<double> gl_panel(const Integrand& f, double a, double b, int n) {
  const Rule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double gl_panel(const RealIntegrand& f, double a, double b, int n) {
  const Rule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

Result integrate_panels(const Integrand& f, double a, double b, double max_panel,
                        double abs_tol, int max_order) {
  if (!(max_panel > 0.0)) throw std::invalid_argument("integrate_panels: max_panel <= 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_panels: abs_tol <= 0");
  Result res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  const double span = b - a;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_panel)));
  std::complex<double> prev{0.0, 0.0};
  bool have_prev = false;
  for (int order = 16; order <= max_order; order *= 2) {
    std::complex<double> total{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
      const double pa = a + span * (static_cast<double>(p) / panels);
      const double pb = a + span * (static_cast<double>(p + 1) / panels);
      total += gl_panel(f, pa, pb, order);
    }
    res.evaluations += static_cast<long>(panels) * order;
    if (have_prev) {
      res.error_estimate = std::abs(total - prev);
      if (res.error_estimate <= abs_tol) {
        res.value = total;
        res.converged = true;
        return res;
      }
    }
    prev = total;
    have_prev = true;
    res.value = total;
  }
  return res;  // converged == false
}

Result integrate_doubling(const RealIntegrand& f, double a, double b, double rel_tol,
                          int max_order) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate_doubling: rel_tol <= 0");
  Result res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  double prev = 0.0;
  bool have_prev = false;
  for (int order = 8; order <= max_order; order *= 2) {
    const double val = gl_panel(f, a, b, order);
    res.evaluations += order;
    if (have_prev) {
      res.error_estimate = std::abs(val - prev);
      if (res.error_estimate <= rel_tol * std::max(1.0, std::abs(val))) {
        res.value = val;
        res.converged = true;
        return res;
      }
    }
    prev = val;
    have_prev = true;
    res.value = val;
  }
  return res;
}

}  // namespace psflab::quad

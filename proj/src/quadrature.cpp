#include "pfspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace pfspec {

void QuadratureSpec::validate() const {
  if (n_rho < 2 || n_t < 2)
    throw std::invalid_argument("QuadratureSpec: n_rho, n_t must be >= 2");
  if (!(abs_tol > 0.0))
    throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
  if (max_refine < 0)
    throw std::invalid_argument("QuadratureSpec: max_refine must be >= 0");
}

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n, symmetric pairs filled from one half.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

namespace {

using Complex = std::complex<double>;

Complex panel_sum(const std::function<Complex(double)>& f, double a, double b,
                  const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

struct Panel {
  double a, b;
  Complex value;
  double err;
};

Panel make_panel(const std::function<Complex(double)>& f, double a, double b,
                 const GaussRule& lo, const GaussRule& hi) {
  const Complex coarse = panel_sum(f, a, b, lo);
  const Complex fine = panel_sum(f, a, b, hi);
  return Panel{a, b, fine, std::abs(fine - coarse)};
}

}  // namespace

AdaptiveResult integrate_adaptive(
    const std::function<Complex(double)>& f, double a, double b,
    double abs_tol, int panel_cap, int max_refine,
    std::span<const double> initial_breakpoints) {
  const GaussRule& lo = gauss_legendre(15);
  const GaussRule& hi = gauss_legendre(31);

  // Seed panels; breakpoints outside (a, b) are ignored.
  std::vector<double> pts{a, b};
  for (double x : initial_breakpoints)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto worse = [](const Panel& x, const Panel& y) {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;  // deterministic tie break
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    queue.push(make_panel(f, pts[i], pts[i + 1], lo, hi));

  double total_err = 0.0;
  {
    auto copy = queue;
    while (!copy.empty()) {
      total_err += copy.top().err;
      copy.pop();
    }
  }

  int rounds = 0;
  while (total_err > abs_tol && static_cast<int>(queue.size()) < panel_cap &&
         rounds < max_refine) {
    Panel worst = queue.top();
    queue.pop();
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel narrower than representable; keep as is.
      queue.push(worst);
      break;
    }
    Panel left = make_panel(f, worst.a, mid, lo, hi);
    Panel right = make_panel(f, mid, worst.b, lo, hi);
    total_err += left.err + right.err;
    queue.push(left);
    queue.push(right);
    ++rounds;
  }

  // Deterministic accumulation: sum panels in position order.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });

  AdaptiveResult res;
  double err = 0.0;
  for (const Panel& p : panels) {
    res.value += p.value;
    err += p.err;
  }
  res.est_error = err;
  res.converged = err <= abs_tol;
  res.panels = static_cast<int>(panels.size());
  return res;
}

}  // namespace pfspec

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace rmp::quad {

/// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
namespace gk15 {
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

template <std::size_t N>
using Values = std::array<double, N>;

template <std::size_t N>
struct Result {
  Values<N> value{};
  Values<N> error{};
  int evaluations = 0;
  bool converged = false;
};

template <std::size_t N>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  Values<N> value{};
  Values<N> error{};
  double priority = 0.0;  // largest per-component error
  bool operator<(const Panel& other) const { return priority < other.priority; }
};

/// One Gauss-Kronrod panel for a vector integrand f: double -> Values<N>.
template <std::size_t N, class F>
Panel<N> gk15_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Values<N> kronrod{};
  Values<N> gauss{};
  const Values<N> fc = f(center);
  for (std::size_t c = 0; c < N; ++c) {
    kronrod[c] = fc[c] * gk15::kKronrod[7];
    gauss[c] = fc[c] * gk15::kGauss[3];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * gk15::kNodes[j];
    const Values<N> f1 = f(center - dx);
    const Values<N> f2 = f(center + dx);
    for (std::size_t c = 0; c < N; ++c) {
      const double sum = f1[c] + f2[c];
      kronrod[c] += gk15::kKronrod[j] * sum;
      if (j % 2 == 1) gauss[c] += gk15::kGauss[j / 2] * sum;
    }
  }
  Panel<N> p;
  p.a = a;
  p.b = b;
  for (std::size_t c = 0; c < N; ++c) {
    p.value[c] = kronrod[c] * half;
    p.error[c] = std::abs((kronrod[c] - gauss[c]) * half);
    p.priority = std::max(p.priority, p.error[c]);
  }
  return p;
}

/// Globally adaptive integration over consecutive intervals given by
/// `breakpoints` (sorted, at least two). The panel with the largest error is
/// bisected until every component satisfies
/// error <= max(abs_tol, rel_tol * |value|) or max_panels is reached.
template <std::size_t N, class F>
Result<N> integrate(F&& f, std::span<const double> breakpoints, double rel_tol,
                    double abs_tol = 0.0, int max_panels = 4000) {
  std::priority_queue<Panel<N>> heap;
  Result<N> out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    heap.push(gk15_panel<N>(f, breakpoints[i], breakpoints[i + 1]));
    out.evaluations += 15;
  }
  auto totals = [&heap] {
    Values<N> value{};
    Values<N> error{};
    auto copy = heap;
    while (!copy.empty()) {
      for (std::size_t c = 0; c < N; ++c) {
        value[c] += copy.top().value[c];
        error[c] += copy.top().error[c];
      }
      copy.pop();
    }
    return std::pair{value, error};
  };
  auto done = [&](const Values<N>& value, const Values<N>& error) {
    for (std::size_t c = 0; c < N; ++c)
      if (error[c] > std::max(abs_tol, rel_tol * std::abs(value[c]))) return false;
    return true;
  };

  // Running sums avoid rescanning the heap on every step; they are rebuilt
  // from scratch before the final answer to drop accumulated rounding.
  auto [value, error] = totals();
  while (!heap.empty() && !done(value, error) &&
         static_cast<int>(heap.size()) < max_panels) {
    const Panel<N> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const Panel<N> left = gk15_panel<N>(f, worst.a, mid);
    const Panel<N> right = gk15_panel<N>(f, mid, worst.b);
    out.evaluations += 30;
    for (std::size_t c = 0; c < N; ++c) {
      value[c] += left.value[c] + right.value[c] - worst.value[c];
      error[c] += left.error[c] + right.error[c] - worst.error[c];
    }
    heap.push(left);
    heap.push(right);
  }
  std::tie(out.value, out.error) = totals();
  out.converged = done(out.value, out.error);
  return out;
}

/// Scalar convenience wrapper.
template <class F>
Result<1> integrate_scalar(F&& f, std::span<const double> breakpoints,
                           double rel_tol, double abs_tol = 0.0,
                           int max_panels = 4000) {
  auto wrapped = [&f](double x) { return Values<1>{f(x)}; };
  return integrate<1>(wrapped, breakpoints, rel_tol, abs_tol, max_panels);
}

/// Breakpoints a, a + s, a + s r, a + s r^2, ..., b: panels that grow
/// geometrically away from a, for integrands varying on scale s near a.
inline std::vector<double> geometric_breakpoints(double a, double b, double scale,
                                                 double ratio = 4.0) {
  std::vector<double> pts{a};
  const double width = b - a;
  scale = std::clamp(scale, width * 1e-15, width);
  for (double step = scale; a + step < b; step *= ratio) pts.push_back(a + step);
  pts.push_back(b);
  return pts;
}

}  // namespace rmp::quad

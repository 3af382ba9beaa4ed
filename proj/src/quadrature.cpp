#include "cwl/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "cwl/errors.hpp"

namespace cwl {

void QuadRule::append(const QuadRule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

QuadRule compute_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess followed by Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
  static std::mutex lock;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre(double a, double b, int order) {
  const QuadRule& ref = gauss_legendre(order);
  QuadRule out;
  out.nodes.resize(ref.size());
  out.weights.resize(ref.size());
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    out.nodes[i] = mid + half * ref.nodes[i];
    out.weights[i] = half * ref.weights[i];
  }
  return out;
}

QuadRule composite_gauss(double a, double b, double panel_length, int order) {
  if (!(b > a) || !(panel_length > 0)) throw DomainError("composite_gauss: empty interval");
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_length - 1e-12)));
  const double h = (b - a) / panels;
  QuadRule out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * order);
  out.weights.reserve(static_cast<std::size_t>(panels) * order);
  for (int p = 0; p < panels; ++p) out.append(gauss_legendre(a + p * h, a + (p + 1) * h, order));
  return out;
}

QuadRule graded_gauss(double b, double panel_length, int order, int levels) {
  if (!(b > 0)) throw DomainError("graded_gauss: empty interval");
  const int panels = std::max(1, static_cast<int>(std::ceil(b / panel_length - 1e-12)));
  const double h = b / panels;
  QuadRule out;
  double lo = h / std::ldexp(1.0, levels);
  out.append(gauss_legendre(0.0, lo, order));
  for (int l = levels; l > 0; --l) {
    const double hi = 2.0 * lo;
    out.append(gauss_legendre(lo, hi, order));
    lo = hi;
  }
  if (panels > 1) out.append(composite_gauss(h, b, h, order));
  return out;
}

cplx filon_legendre(double a, double b, std::span<const cplx> values, double omega) {
  const int n = static_cast<int>(values.size());
  const QuadRule& ref = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double kappa = omega * half;
  // Legendre coefficients c_j = (2j+1)/2 sum_i w_i F(s_i) P_j(s_i), exact for
  // polynomial F of degree < n.
  std::vector<cplx> coeff(n, cplx{});
  for (int i = 0; i < n; ++i) {
    const double s = ref.nodes[i];
    double p0 = 1.0, p1 = s;
    for (int j = 0; j < n; ++j) {
      double pj;
      if (j == 0) {
        pj = p0;
      } else if (j == 1) {
        pj = p1;
      } else {
        const double p2 = ((2.0 * j - 1.0) * s * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
        pj = p2;
      }
      coeff[j] += ref.weights[i] * values[i] * pj;
    }
  }
  cplx total{};
  cplx ipow{1.0, 0.0};
  for (int j = 0; j < n; ++j) {
    coeff[j] *= (2.0 * j + 1.0) / 2.0;
    const double jn = std::sph_bessel(static_cast<unsigned>(j), std::abs(kappa));
    // j_n is even/odd with n; kappa < 0 flips odd orders.
    const double signed_jn = (kappa < 0 && j % 2 == 1) ? -jn : jn;
    total += coeff[j] * 2.0 * ipow * signed_jn;
    ipow *= cplx{0.0, 1.0};
  }
  return half * std::exp(cplx{0.0, omega * mid}) * total;
}

}  // namespace cwl

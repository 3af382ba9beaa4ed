#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cwl {

using cplx = std::complex<double>;

// Nodes and weights of a quadrature rule on some interval.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  void append(const QuadRule& other);
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are computed once per n and
// cached; the returned reference stays valid for the program's lifetime.
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre rule of `order` points mapped to [a, b].
QuadRule gauss_legendre(double a, double b, int order);

// Composite rule on [a, b]: equal panels no longer than `panel_length`, each
// carrying an `order`-point Gauss-Legendre rule.
QuadRule composite_gauss(double a, double b, double panel_length, int order);

// Composite rule on [0, b] whose first panel [0, b/2^levels] is split
// geometrically toward 0 (`levels` halvings), remainder as composite_gauss.
// Used where the weight behaves like |x|^{2k} at the origin.
QuadRule graded_gauss(double b, double panel_length, int order, int levels);

// Neumaier compensated accumulator. Summation order is the caller's, so the
// result is reproducible whenever the order is fixed.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    comp_ += absval(sum_) >= absval(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double absval(double v) { return v < 0 ? -v : v; }
  static double absval(cplx v) { return std::abs(v.real()) + std::abs(v.imag()); }
  T sum_{};
  T comp_{};
};

// Product-rule (Filon-type) integral of e^{i omega r} F(r) over [a, b].
// F is given by its samples at the `values.size()`-point Gauss-Legendre
// nodes mapped to [a, b]; F is expanded in Legendre polynomials and each
// moment integrated exactly as 2 i^n j_n(kappa).
cplx filon_legendre(double a, double b, std::span<const cplx> values, double omega);

}  // namespace cwl

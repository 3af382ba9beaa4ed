#include "cwl/root_system.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "cwl/errors.hpp"

namespace cwl {

namespace {

constexpr double kDedupTol = 1e-12;

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

bool same_matrix(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff() < kDedupTol; }

// Adds ±v with the given orbit label.
void add_pair(std::vector<Root>& roots, const Vec& v, int orbit) {
  roots.push_back(Root{v, orbit});
  roots.push_back(Root{-v, orbit});
}

}  // namespace

FamilySpec parse_family(std::string_view text) {
  FamilySpec spec;
  if (text == "A1") return spec;
  if (text == "BC1") return {Family::BC1, 1};
  if (text == "A2") return {Family::A2, 2};
  if (text == "B2") return {Family::B2, 2};
  if (text == "BC2") return {Family::BC2, 2};
  if (text.starts_with("A1^")) {
    const std::string digits(text.substr(3));
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(digits, &used);
      if (used != digits.size()) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 1 || n > 8) throw DomainError("unsupported product rank in family '" + std::string(text) + "'");
    return {Family::A1Product, n};
  }
  throw DomainError("unsupported root-system family '" + std::string(text) + "'");
}

std::string family_name(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::A1: return "A1";
    case Family::A1Product: return "A1^" + std::to_string(spec.rank);
    case Family::BC1: return "BC1";
    case Family::A2: return "A2";
    case Family::B2: return "B2";
    case Family::BC2: return "BC2";
  }
  return "?";
}

int orbit_count(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::A1: return 1;
    case Family::A1Product: return spec.rank;
    case Family::BC1: return 2;
    case Family::A2: return 1;
    case Family::B2: return 2;
    case Family::BC2: return 3;
  }
  return 0;
}

Vec reflect(const Vec& x, const Vec& alpha) { return x - 2.0 * alpha.dot(x) / alpha.squaredNorm() * alpha; }

Mat reflection_matrix(const Vec& alpha) {
  const auto d = alpha.size();
  return Mat::Identity(d, d) - 2.0 / alpha.squaredNorm() * alpha * alpha.transpose();
}

RootSystem RootSystem::build(const FamilySpec& spec, std::span<const double> multiplicities) {
  RootSystem rs;
  rs.spec_ = spec;
  const int orbits = orbit_count(spec);
  std::vector<double> k(multiplicities.begin(), multiplicities.end());
  if (spec.family == Family::A1Product && k.size() == 1) k.assign(orbits, k.front());
  if (static_cast<int>(k.size()) != orbits) {
    std::ostringstream msg;
    msg << family_name(spec) << " takes " << orbits << " multiplicity value(s), got " << multiplicities.size();
    throw DomainError(msg.str());
  }
  for (double v : k)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("multiplicities must be finite and >= 0");
  rs.orbit_k_ = k;

  const double s2 = std::sqrt(2.0);
  std::vector<Root>& roots = rs.roots_;
  switch (spec.family) {
    case Family::A1: {
      rs.dim_ = 1;
      add_pair(roots, Vec::Constant(1, s2), 0);
      break;
    }
    case Family::A1Product: {
      rs.dim_ = spec.rank;
      for (int j = 0; j < spec.rank; ++j) add_pair(roots, s2 * Vec::Unit(spec.rank, j), j);
      break;
    }
    case Family::BC1: {
      rs.dim_ = 1;
      add_pair(roots, Vec::Constant(1, 1.0), 0);
      add_pair(roots, Vec::Constant(1, 2.0), 1);
      break;
    }
    case Family::A2: {
      rs.dim_ = 2;
      const Vec a1 = vec2(s2, 0.0);
      const Vec a2 = vec2(-1.0 / s2, std::sqrt(1.5));
      add_pair(roots, a1, 0);
      add_pair(roots, a2, 0);
      add_pair(roots, a1 + a2, 0);
      break;
    }
    case Family::B2:
    case Family::BC2: {
      rs.dim_ = 2;
      add_pair(roots, vec2(1, 0), 0);
      add_pair(roots, vec2(0, 1), 0);
      add_pair(roots, vec2(1, 1), 1);
      add_pair(roots, vec2(1, -1), 1);
      if (spec.family == Family::BC2) {
        add_pair(roots, vec2(2, 0), 2);
        add_pair(roots, vec2(0, 2), 2);
      }
      break;
    }
  }

  // Positive system from a generic linear functional.
  Vec generic(rs.dim_);
  for (int i = 0; i < rs.dim_; ++i) generic[i] = 1.0 / (1.0 + 0.137 * i + 0.011 * i * i) + 0.0093 * i;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Root& r = roots[i];
    r.k = k[r.orbit];
    r.positive = r.vector.dot(generic) > 0.0;
    r.indivisible = rs.find_root(0.5 * r.vector) < 0;
    if (r.positive) rs.positive_.push_back(static_cast<int>(i));
    if (r.positive && r.indivisible) rs.indivisible_positive_.push_back(static_cast<int>(i));
  }
  // Simple roots: positive roots that are not a sum of two positive roots.
  for (int i : rs.positive_) {
    bool decomposable = false;
    for (int a : rs.positive_)
      for (int b : rs.positive_)
        if ((roots[a].vector + roots[b].vector - roots[i].vector).norm() < 1e-10) decomposable = true;
    if (!decomposable) rs.simple_.push_back(i);
  }

  // Weyl group: breadth-first closure over simple reflections.
  const int d = rs.dim_;
  std::vector<Mat> gens;
  for (int i : rs.simple_) gens.push_back(reflection_matrix(roots[i].vector));
  rs.weyl_.push_back(Mat::Identity(d, d));
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const Mat current = rs.weyl_[frontier.front()];
    frontier.pop_front();
    for (const Mat& g : gens) {
      Mat next = g * current;
      // Entries of the supported families are 0, ±1, ±1/2, ±sqrt(3)/2; snap
      // tiny round-off to zero so dedup is exact in practice.
      for (Eigen::Index a = 0; a < next.size(); ++a)
        if (std::abs(next.data()[a]) < 1e-14) next.data()[a] = 0.0;
      bool seen = false;
      for (const Mat& w : rs.weyl_)
        if (same_matrix(w, next)) {
          seen = true;
          break;
        }
      if (!seen) {
        rs.weyl_.push_back(next);
        frontier.push_back(rs.weyl_.size() - 1);
      }
    }
    if (rs.weyl_.size() > 4096) throw Error("Weyl group closure did not terminate");
  }

  // Longest element: the unique w with w R+ = -R+.
  bool found = false;
  for (std::size_t wi = 0; wi < rs.weyl_.size() && !found; ++wi) {
    bool ok = true;
    for (int p : rs.positive_) {
      const int img = rs.find_root(rs.weyl_[wi] * roots[p].vector);
      if (img < 0 || roots[img].positive) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rs.w0_index_ = wi;
      found = true;
    }
  }
  if (!found) throw Error("longest Weyl group element not found");

  rs.rho_ = Vec::Zero(d);
  for (int p : rs.positive_) rs.rho_ += 0.5 * roots[p].k * roots[p].vector;
  return rs;
}

Vec RootSystem::coroot(int i) const {
  const Vec& a = roots_.at(i).vector;
  return 2.0 / a.squaredNorm() * a;
}

double RootSystem::double_multiplicity(int i) const {
  const int j = find_root(2.0 * roots_.at(i).vector);
  return j < 0 ? 0.0 : roots_[j].k;
}

int RootSystem::find_root(const Vec& v, double tol) const {
  for (std::size_t i = 0; i < roots_.size(); ++i)
    if (roots_[i].vector.size() == v.size() && (roots_[i].vector - v).norm() < tol) return static_cast<int>(i);
  return -1;
}

double RootSystem::total_multiplicity() const {
  double s = 0.0;
  for (int p : positive_) s += roots_[p].k;
  return s;
}

bool RootSystem::integer_multiplicities() const {
  for (double v : orbit_k_)
    if (std::abs(v - std::round(v)) > 1e-12) return false;
  return true;
}

bool RootSystem::zero_multiplicities() const {
  for (double v : orbit_k_)
    if (v != 0.0) return false;
  return true;
}

Vec RootSystem::reflect(const Vec& x, const Vec& alpha) const {
  if (find_root(alpha) < 0) throw DomainError("reflect: vector is not a root of " + name());
  return cwl::reflect(x, alpha);
}

double RootSystem::weight(const Vec& x) const {
  double mu = 1.0;
  for (int p : positive_) {
    const Root& r = roots_[p];
    if (r.k == 0.0) continue;
    const double s = std::abs(2.0 * std::sinh(0.5 * r.vector.dot(x)));
    mu *= std::pow(s, 2.0 * r.k);
  }
  return mu;
}

}  // namespace cwl

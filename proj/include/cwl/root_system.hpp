#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cwl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

// Supported root-system families and their fixed normalizations:
//   A1        d=1, roots ±sqrt(2)
//   A1Product d=n, roots ±sqrt(2) e_j (n independent orbits)
//   BC1       d=1, roots ±1, ±2
//   A2        d=2, roots of length sqrt(2) in the plane, simple roots
//             (sqrt 2, 0) and (-1/sqrt 2, sqrt(3/2))
//   B2        d=2, short ±e_i, long ±e_1±e_2
//   BC2       d=2, B2 plus ±2e_i
enum class Family { A1, A1Product, BC1, A2, B2, BC2 };

struct FamilySpec {
  Family family = Family::A1;
  int rank = 1;  // only meaningful for A1Product
};

// Parses "A1", "A1^3", "BC1", "A2", "B2", "BC2".
FamilySpec parse_family(std::string_view text);
std::string family_name(const FamilySpec& spec);

// Number of Weyl orbits on the roots, i.e. how many multiplicity values a
// family takes. Orbits are ordered: BC1 (k_alpha, k_2alpha); B2 (short, long);
// BC2 (short, middle ±e1±e2, double ±2e_i); A1^n (factor 1..n).
int orbit_count(const FamilySpec& spec);

struct Root {
  Vec vector;
  int orbit = 0;
  bool positive = false;
  bool indivisible = true;  // alpha/2 is not a root
  double k = 0.0;
};

// Immutable root-system data: roots, positive and indivisible subsets, Weyl
// group, longest element, multiplicities and rho.
class RootSystem {
 public:
  // Multiplicities are given per orbit. A1^n also accepts a single value,
  // applied to every factor.
  static RootSystem build(const FamilySpec& spec, std::span<const double> multiplicities);

  const FamilySpec& spec() const { return spec_; }
  std::string name() const { return family_name(spec_); }
  int dim() const { return dim_; }

  const std::vector<Root>& roots() const { return roots_; }
  const std::vector<int>& positive() const { return positive_; }
  const std::vector<int>& indivisible_positive() const { return indivisible_positive_; }
  const std::vector<int>& simple() const { return simple_; }

  Vec coroot(int i) const;
  // k_{2 alpha} for root i, zero when 2 alpha is not a root.
  double double_multiplicity(int i) const;
  // Index of the root equal to v within tol, -1 if none.
  int find_root(const Vec& v, double tol = 1e-10) const;

  const std::vector<Mat>& weyl_group() const { return weyl_; }
  const Mat& longest_element() const { return weyl_[w0_index_]; }
  const Vec& rho() const { return rho_; }

  const std::vector<double>& orbit_multiplicities() const { return orbit_k_; }
  // |k| = sum of k over positive roots.
  double total_multiplicity() const;
  bool integer_multiplicities() const;
  bool zero_multiplicities() const;

  // r_alpha(x); alpha must be a root of this system.
  Vec reflect(const Vec& x, const Vec& alpha) const;

  // mu(x) = prod_{alpha in R+} |2 sinh(<alpha,x>/2)|^{2 k_alpha}.
  double weight(const Vec& x) const;

 private:
  FamilySpec spec_;
  int dim_ = 1;
  std::vector<Root> roots_;
  std::vector<int> positive_, indivisible_positive_, simple_;
  std::vector<Mat> weyl_;
  std::size_t w0_index_ = 0;
  Vec rho_;
  std::vector<double> orbit_k_;
};

// r_alpha(x) = x - 2<alpha,x>/|alpha|^2 alpha, no membership check.
Vec reflect(const Vec& x, const Vec& alpha);

// Reflection matrix of r_alpha.
Mat reflection_matrix(const Vec& alpha);

inline double eval_weight(const RootSystem& rs, const Vec& x) { return rs.weight(x); }

}  // namespace cwl

#pragma once

#include <Eigen/Core>

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snewton/series.hpp"

namespace snewton {

using Complex = std::complex<double>;

/// coeff * t^t_exp * x_1^x_exps[0] * ... * x_n^x_exps[n-1]
struct Monomial {
  Complex coeff;
  int t_exp = 0;
  std::vector<int> x_exps;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// A sum of monomials over a fixed variable count. Canonical form: terms
/// sorted by (t_exp, x_exps), like terms merged, exact zeros dropped.
struct Polynomial {
  int nvars = 0;
  std::vector<Monomial> terms;

  Polynomial() = default;
  explicit Polynomial(int n) : nvars(n) {}

  static Polynomial constant(int n, Complex c);
  static Polynomial variable(int n, int j);  // x_j
  static Polynomial parameter(int n);        // t

  bool is_zero() const { return terms.empty(); }
  int total_degree() const;  // in x only
  int max_t_exp() const;
  int max_exp(int j) const;
  void canonicalize();

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Complex s, const Polynomial& a);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

Polynomial pow(const Polynomial& p, int e);

/// Polynomials f_1..f_m in C[t, x_1..x_n].
struct PolySystem {
  int n = 0;
  std::vector<Polynomial> polys;
  std::vector<std::string> var_names;
  std::string t_name = "t";

  int m() const { return static_cast<int>(polys.size()); }
  int var_index(std::string_view name) const;  // -1 if absent

  friend bool operator==(const PolySystem&, const PolySystem&) = default;
};

/// Integer change of coordinates x = z^M, i.e. x_i = prod_j z_j^M(j, i).
class UnimodularTransform {
 public:
  using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

  /// Throws NonUnimodular unless |det M| = 1.
  explicit UnimodularTransform(IntMatrix m);

  const IntMatrix& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  UnimodularTransform inverse() const;

  /// Exact integer determinant (fraction-free elimination).
  static long long determinant(const IntMatrix& m);

 private:
  IntMatrix m_;
};

// parsing and printing

/// Parses one polynomial expression over the given variables and parameter.
/// With allow_laurent_t, negative integer powers of the parameter are
/// accepted (used for series starts only).
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                            const std::string& t_name = "t", bool allow_laurent_t = false);

/// Parses `;`-separated polynomials, e.g. "x1^2 + t - 1; x2 - x1;".
PolySystem parse_system(std::string_view text, const std::vector<std::string>& vars,
                        const std::string& t_name = "t");

/// 17 significant digits, re-parsable by parse_polynomial.
std::string to_string(const Polynomial& p, const std::vector<std::string>& vars, const std::string& t_name = "t");
std::string to_string(const PolySystem& f);

// evaluation

Series evaluate(const Polynomial& p, std::span<const Series> z, int order);

/// f_i(t, z(t)) truncated at `order`.
std::vector<Series> evaluate(const PolySystem& f, std::span<const Series> z, int order);

Complex evaluate_point(const Polynomial& p, Complex t, std::span<const Complex> x);

/// d/dx_j for j >= 0, d/dt for j == -1.
Polynomial derivative(const Polynomial& p, int j);

using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// m x n matrix of partial derivatives with respect to x (t is a coefficient).
PolyMatrix jacobian(const PolySystem& f);

/// Jacobian of (t, f_1..f_m) with respect to (t, x_1..x_n) at p = (t, x_1..x_n).
Eigen::MatrixXcd jacobian_aug(const PolySystem& f, std::span<const Complex> p);

// transformations

/// t -> t^N.
PolySystem ramify(const PolySystem& f, int N);

/// x_j -> g(t) where g[k] is the coefficient of t^k; removes x_j.
PolySystem substitute_var(const PolySystem& f, int j, std::span<const Complex> g);

struct UnimodularResult {
  PolySystem system;
  /// clearing[i][j]: power of z_j multiplied into polynomial i.
  std::vector<std::vector<int>> clearing;
};

/// Rewrites f in z with x = z^M; negative z-exponents are cleared per
/// polynomial by a monomial factor, which is recorded.
UnimodularResult apply_unimodular(const PolySystem& f, const UnimodularTransform& M,
                                  std::vector<std::string> new_names = {});

}  // namespace snewton

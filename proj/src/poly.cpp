#include "snewton/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "lexer.hpp"

namespace snewton {

// Polynomial ---------------------------------------------------------------

Polynomial Polynomial::constant(int n, Complex c) {
  Polynomial p(n);
  p.terms.push_back({c, 0, std::vector<int>(static_cast<std::size_t>(n), 0)});
  p.canonicalize();
  return p;
}

Polynomial Polynomial::variable(int n, int j) {
  Polynomial p(n);
  Monomial m{Complex(1), 0, std::vector<int>(static_cast<std::size_t>(n), 0)};
  m.x_exps[static_cast<std::size_t>(j)] = 1;
  p.terms.push_back(std::move(m));
  return p;
}

Polynomial Polynomial::parameter(int n) {
  Polynomial p(n);
  p.terms.push_back({Complex(1), 1, std::vector<int>(static_cast<std::size_t>(n), 0)});
  return p;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& m : terms) {
    int s = 0;
    for (int e : m.x_exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::max_t_exp() const {
  int d = 0;
  for (const auto& m : terms) d = std::max(d, m.t_exp);
  return d;
}

int Polynomial::max_exp(int j) const {
  int d = 0;
  for (const auto& m : terms) d = std::max(d, m.x_exps[static_cast<std::size_t>(j)]);
  return d;
}

void Polynomial::canonicalize() {
  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    if (a.t_exp != b.t_exp) return a.t_exp < b.t_exp;
    return a.x_exps < b.x_exps;
  });
  std::vector<Monomial> merged;
  merged.reserve(terms.size());
  for (auto& m : terms) {
    if (!merged.empty() && merged.back().t_exp == m.t_exp && merged.back().x_exps == m.x_exps) {
      merged.back().coeff += m.coeff;
    } else {
      merged.push_back(std::move(m));
    }
  }
  std::erase_if(merged, [](const Monomial& m) { return m.coeff == Complex(0); });
  terms = std::move(merged);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& m : r.terms) m.coeff = -m.coeff;
  return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.nvars);
  r.terms = a.terms;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  r.canonicalize();
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(a.nvars);
  r.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& u : a.terms) {
    for (const auto& v : b.terms) {
      Monomial m{u.coeff * v.coeff, u.t_exp + v.t_exp, u.x_exps};
      for (std::size_t j = 0; j < m.x_exps.size(); ++j) m.x_exps[j] += v.x_exps[j];
      r.terms.push_back(std::move(m));
    }
  }
  r.canonicalize();
  return r;
}

Polynomial operator*(Complex s, const Polynomial& a) {
  Polynomial r = a;
  for (auto& m : r.terms) m.coeff *= s;
  r.canonicalize();
  return r;
}

Polynomial pow(const Polynomial& p, int e) {
  Polynomial r = Polynomial::constant(p.nvars, Complex(1));
  for (int k = 0; k < e; ++k) r = r * p;
  return r;
}

int PolySystem::var_index(std::string_view name) const {
  for (int j = 0; j < n; ++j) {
    if (var_names[static_cast<std::size_t>(j)] == name) return j;
  }
  return -1;
}

// UnimodularTransform --------------------------------------------------------

long long UnimodularTransform::determinant(const IntMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw DimensionMismatch("transform matrix must be square");
  if (n == 0) return 1;
  // Bareiss fraction-free elimination; every intermediate is a minor.
  std::vector<std::vector<__int128>> a(static_cast<std::size_t>(n), std::vector<__int128>(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  int sign = 1;
  __int128 prev = 1;
  const auto N = static_cast<std::size_t>(n);
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < N && a[p][k] == 0) ++p;
      if (p == N) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      for (std::size_t j = k + 1; j < N; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return static_cast<long long>(sign * a[N - 1][N - 1]);
}

UnimodularTransform::UnimodularTransform(IntMatrix m) : m_(std::move(m)) {
  const long long det = determinant(m_);
  if (det != 1 && det != -1) throw NonUnimodular(det);
}

UnimodularTransform UnimodularTransform::inverse() const {
  const Eigen::Index n = m_.rows();
  const long long det = determinant(m_);
  IntMatrix inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // inv(i, j) = cofactor(j, i) / det
      IntMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m_(r, c);
        }
        ++rr;
      }
      const long long cof = ((i + j) % 2 == 0 ? 1 : -1) * determinant(minor);
      inv(i, j) = cof * det;  // det is +-1
    }
  }
  return UnimodularTransform(std::move(inv));
}

// parsing and printing -------------------------------------------------------

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars, const std::string& t_name,
                            bool allow_laurent_t) {
  const auto toks = detail::tokenize(text);
  std::size_t pos = 0;
  detail::ExprParser parser(toks, pos, vars, t_name, allow_laurent_t);
  Polynomial p = parser.parse_expr();
  if (toks[pos].kind != detail::Token::Kind::End) detail::fail(toks[pos], "unexpected '" + toks[pos].text + "'");
  return p;
}

PolySystem parse_system(std::string_view text, const std::vector<std::string>& vars, const std::string& t_name) {
  if (vars.empty()) throw DimensionMismatch("a system needs at least one variable");
  PolySystem f;
  f.n = static_cast<int>(vars.size());
  f.var_names = vars;
  f.t_name = t_name;
  const auto toks = detail::tokenize(text);
  std::size_t pos = 0;
  while (toks[pos].kind != detail::Token::Kind::End) {
    if (toks[pos].is(';')) {
      ++pos;
      continue;
    }
    detail::ExprParser parser(toks, pos, f.var_names, f.t_name, false);
    f.polys.push_back(parser.parse_expr());
    if (!toks[pos].is(';') && toks[pos].kind != detail::Token::Kind::End) {
      detail::fail(toks[pos], "expected ';' after polynomial");
    }
  }
  if (f.polys.empty()) throw DimensionMismatch("a system needs at least one polynomial");
  return f;
}

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(const Polynomial& p, const std::vector<std::string>& vars, const std::string& t_name) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& m : p.terms) {
    if (!out.empty()) out += " + ";
    out += "(" + num17(m.coeff.real());
    out += std::signbit(m.coeff.imag()) ? " - " : " + ";
    out += num17(std::abs(m.coeff.imag())) + "*i)";
    if (m.t_exp != 0) out += "*" + t_name + "^" + std::to_string(m.t_exp);
    for (std::size_t j = 0; j < m.x_exps.size(); ++j) {
      if (m.x_exps[j] != 0) out += "*" + vars[j] + "^" + std::to_string(m.x_exps[j]);
    }
  }
  return out;
}

std::string to_string(const PolySystem& f) {
  std::string out;
  for (const auto& p : f.polys) out += to_string(p, f.var_names, f.t_name) + ";\n";
  return out;
}

// evaluation -----------------------------------------------------------------

Series evaluate(const Polynomial& p, std::span<const Series> z, int order) {
  if (static_cast<int>(z.size()) != p.nvars) throw DimensionMismatch("series vector length differs from variable count");
  std::vector<std::vector<Series>> powers(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const int emax = p.max_exp(static_cast<int>(j));
    powers[j].reserve(static_cast<std::size_t>(emax + 1));
    powers[j].push_back(Series::constant(Complex(1), order));
    for (int e = 1; e <= emax; ++e) powers[j].push_back((powers[j].back() * z[j]).truncated(order));
  }
  Series acc = Series::zero(order);
  for (const auto& m : p.terms) {
    Series term = Series::monomial(m.coeff, m.t_exp, order);
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (m.x_exps[j] > 0) term = (term * powers[j][static_cast<std::size_t>(m.x_exps[j])]).truncated(order);
    }
    acc = acc + term;
  }
  return acc;
}

std::vector<Series> evaluate(const PolySystem& f, std::span<const Series> z, int order) {
  if (static_cast<int>(z.size()) != f.n) throw DimensionMismatch("series vector length differs from variable count");
  std::vector<Series> out;
  out.reserve(f.polys.size());
  for (const auto& p : f.polys) out.push_back(evaluate(p, z, order));
  return out;
}

Complex evaluate_point(const Polynomial& p, Complex t, std::span<const Complex> x) {
  if (static_cast<int>(x.size()) != p.nvars) throw DimensionMismatch("point length differs from variable count");
  Complex acc(0);
  for (const auto& m : p.terms) {
    Complex v = m.coeff * detail::ipow(t, m.t_exp);
    for (std::size_t j = 0; j < x.size(); ++j) v *= detail::ipow(x[j], m.x_exps[j]);
    acc += v;
  }
  return acc;
}

Polynomial derivative(const Polynomial& p, int j) {
  Polynomial r(p.nvars);
  for (const auto& m : p.terms) {
    const int e = j < 0 ? m.t_exp : m.x_exps[static_cast<std::size_t>(j)];
    if (e == 0) continue;
    Monomial d = m;
    d.coeff *= static_cast<double>(e);
    if (j < 0) {
      d.t_exp -= 1;
    } else {
      d.x_exps[static_cast<std::size_t>(j)] -= 1;
    }
    r.terms.push_back(std::move(d));
  }
  r.canonicalize();
  return r;
}

PolyMatrix jacobian(const PolySystem& f) {
  PolyMatrix J(f.polys.size());
  for (std::size_t i = 0; i < f.polys.size(); ++i) {
    J[i].reserve(static_cast<std::size_t>(f.n));
    for (int j = 0; j < f.n; ++j) J[i].push_back(derivative(f.polys[i], j));
  }
  return J;
}

Eigen::MatrixXcd jacobian_aug(const PolySystem& f, std::span<const Complex> p) {
  if (static_cast<int>(p.size()) != f.n + 1) throw DimensionMismatch("augmented point needs t followed by n coordinates");
  const Complex t = p[0];
  const auto x = p.subspan(1);
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(f.m() + 1, f.n + 1);
  J(0, 0) = 1.0;
  for (int i = 0; i < f.m(); ++i) {
    const auto& fi = f.polys[static_cast<std::size_t>(i)];
    for (int j = -1; j < f.n; ++j) J(i + 1, j + 1) = evaluate_point(derivative(fi, j), t, x);
  }
  return J;
}

// transformations ------------------------------------------------------------

PolySystem ramify(const PolySystem& f, int N) {
  if (N < 1) throw DimensionMismatch("ramification index must be positive");
  PolySystem g = f;
  for (auto& p : g.polys) {
    for (auto& m : p.terms) m.t_exp *= N;
  }
  return g;
}

PolySystem substitute_var(const PolySystem& f, int j, std::span<const Complex> g) {
  if (j < 0 || j >= f.n) throw IndexOutOfRange("variable index " + std::to_string(j) + " out of range");
  PolySystem out;
  out.n = f.n - 1;
  out.var_names = f.var_names;
  out.var_names.erase(out.var_names.begin() + j);
  out.t_name = f.t_name;
  // g^e as dense coefficient vectors, built on demand
  std::vector<std::vector<Complex>> gpow{{Complex(1)}};
  auto power = [&](int e) -> const std::vector<Complex>& {
    while (static_cast<int>(gpow.size()) <= e) {
      const auto& prev = gpow.back();
      std::vector<Complex> next(prev.size() + g.size() - 1, Complex(0));
      for (std::size_t a = 0; a < prev.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) next[a + b] += prev[a] * g[b];
      gpow.push_back(std::move(next));
    }
    return gpow[static_cast<std::size_t>(e)];
  };
  for (const auto& p : f.polys) {
    Polynomial q(out.n);
    for (const auto& m : p.terms) {
      const int e = m.x_exps[static_cast<std::size_t>(j)];
      std::vector<int> rest = m.x_exps;
      rest.erase(rest.begin() + j);
      if (g.empty()) {
        if (e == 0) q.terms.push_back({m.coeff, m.t_exp, rest});
        continue;
      }
      const auto& ge = power(e);
      for (std::size_t k = 0; k < ge.size(); ++k) {
        if (ge[k] == Complex(0)) continue;
        q.terms.push_back({m.coeff * ge[k], m.t_exp + static_cast<int>(k), rest});
      }
    }
    q.canonicalize();
    out.polys.push_back(std::move(q));
  }
  return out;
}

UnimodularResult apply_unimodular(const PolySystem& f, const UnimodularTransform& M, std::vector<std::string> new_names) {
  if (M.size() != f.n) throw DimensionMismatch("transform size differs from variable count");
  if (new_names.empty()) new_names = f.var_names;
  if (static_cast<int>(new_names.size()) != f.n) throw DimensionMismatch("wrong number of transformed variable names");
  const auto& A = M.matrix();
  UnimodularResult res;
  res.system.n = f.n;
  res.system.var_names = std::move(new_names);
  res.system.t_name = f.t_name;
  for (const auto& p : f.polys) {
    Polynomial q(f.n);
    std::vector<int> low(static_cast<std::size_t>(f.n), 0);
    bool first = true;
    for (const auto& m : p.terms) {
      Monomial zm{m.coeff, m.t_exp, std::vector<int>(static_cast<std::size_t>(f.n), 0)};
      for (int r = 0; r < f.n; ++r) {
        long long s = 0;
        for (int c = 0; c < f.n; ++c) s += A(r, c) * m.x_exps[static_cast<std::size_t>(c)];
        zm.x_exps[static_cast<std::size_t>(r)] = static_cast<int>(s);
      }
      for (std::size_t r = 0; r < low.size(); ++r) low[r] = first ? zm.x_exps[r] : std::min(low[r], zm.x_exps[r]);
      first = false;
      q.terms.push_back(std::move(zm));
    }
    std::vector<int> clear(low.size(), 0);
    for (std::size_t r = 0; r < low.size(); ++r) clear[r] = std::max(0, -low[r]);
    for (auto& m : q.terms)
      for (std::size_t r = 0; r < clear.size(); ++r) m.x_exps[r] += clear[r];
    q.canonicalize();
    res.system.polys.push_back(std::move(q));
    res.clearing.push_back(std::move(clear));
  }
  return res;
}

}  // namespace snewton

#include "snewton/job.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"

namespace snewton {

namespace {

using detail::fail;
using detail::Token;

class JobParser {
 public:
  explicit JobParser(std::string_view text) : toks_(detail::tokenize(text)) {}

  JobSpec parse() {
    job_.system.t_name = "t";
    while (peek().kind != Token::Kind::End) statement();
    if (job_.system.var_names.empty()) fail(peek(), "missing 'vars' declaration");
    if (job_.system.polys.empty()) fail(peek(), "no 'poly' statements");
    return std::move(job_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }

  void expect(char c) {
    if (!peek().is(c)) fail(peek(), std::string("expected '") + c + "'");
    next();
  }

  std::string ident(const char* what) {
    const Token& t = next();
    if (t.kind != Token::Kind::Ident) fail(t, std::string("expected ") + what);
    return t.text;
  }

  long long integer() {
    bool neg = false;
    if (peek().is('-')) {
      neg = true;
      next();
    }
    const Token& t = next();
    if (t.kind != Token::Kind::Number || t.value != std::floor(t.value) || std::abs(t.value) > 1e9) {
      fail(t, "expected an integer");
    }
    const auto v = static_cast<long long>(t.value);
    return neg ? -v : v;
  }

  Polynomial expr(const std::vector<std::string>& vars, bool laurent) {
    detail::ExprParser p(toks_, pos_, vars, job_.system.t_name, laurent);
    return p.parse_expr();
  }

  Complex constant() {
    const Token& at = peek();
    const Polynomial p = expr({}, false);
    for (const auto& m : p.terms)
      if (m.t_exp != 0) fail(at, "expected a constant");
    return p.is_zero() ? Complex(0) : p.terms[0].coeff;
  }

  void statement() {
    const Token& kw = next();
    if (kw.is(';')) return;
    if (kw.kind != Token::Kind::Ident) fail(kw, "expected a statement");
    const bool continues = in_series_;
    in_series_ = false;

    if (kw.text == "param") {
      if (!job_.system.var_names.empty()) fail(kw, "'param' must precede 'vars'");
      job_.system.t_name = ident("a parameter name");
      if (job_.system.t_name == "i") fail(kw, "'i' is the imaginary unit");
      expect(';');
    } else if (kw.text == "vars") {
      if (!job_.system.var_names.empty()) fail(kw, "variables declared twice");
      std::set<std::string> seen;
      do {
        const Token& at = peek();
        std::string name = ident("a variable name");
        if (name == job_.system.t_name || name == "i") fail(at, "'" + name + "' cannot be a variable name");
        if (!seen.insert(name).second) fail(at, "duplicate variable '" + name + "'");
        job_.system.var_names.push_back(std::move(name));
      } while (peek().is(',') && (next(), true));
      job_.system.n = static_cast<int>(job_.system.var_names.size());
      expect(';');
    } else if (kw.text == "poly") {
      if (job_.system.var_names.empty()) fail(kw, "'poly' before 'vars'");
      job_.system.polys.push_back(expr(job_.system.var_names, false));
      expect(';');
    } else if (kw.text == "start") {
      start(kw);
    } else if (kw.text == "transform") {
      transform(kw);
    } else if (kw.text == "solve") {
      Command c{Command::Kind::Solve};
      c.degree = static_cast<int>(integer());
      if (c.degree < 0 || c.degree > 4096) fail(kw, "solve degree out of range");
      job_.commands.push_back(c);
      expect(';');
    } else if (kw.text == "pade") {
      Command c{Command::Kind::Pade};
      c.L = static_cast<int>(integer());
      c.M = static_cast<int>(integer());
      if (c.L < 0 || c.M < 0 || c.L + c.M > 4096) fail(kw, "Pade degrees out of range");
      job_.commands.push_back(c);
      expect(';');
    } else if (kw.text == "residual" || kw.text == "classify") {
      job_.commands.push_back({kw.text == "residual" ? Command::Kind::Residual : Command::Kind::Classify});
      expect(';');
    } else if (continues && peek().is('=')) {
      series_entry(job_.series_starts.back(), kw);
    } else {
      fail(kw, "unknown statement '" + kw.text + "'");
    }
  }

  void series_entry(SeriesStart& s, const Token& name) {
    expect('=');
    if (std::find(s.names.begin(), s.names.end(), name.text) != s.names.end()) {
      fail(name, "'" + name.text + "' given twice in one start");
    }
    s.names.push_back(name.text);
    s.values.push_back(expr({}, true));
    expect(';');
    in_series_ = true;
  }

  void start(const Token& kw) {
    const std::string what = ident("'point', 'series' or 'none'");
    if (what == "point") {
      if (job_.point) fail(kw, "only one start point is allowed");
      std::vector<Complex> p;
      do {
        p.push_back(constant());
      } while (peek().is(',') && (next(), true));
      job_.point = std::move(p);
      expect(';');
    } else if (what == "series") {
      const Token& name = next();
      if (name.kind != Token::Kind::Ident) fail(name, "expected a variable name");
      job_.series_starts.push_back({});
      job_.series_starts.back().line = kw.line;
      series_entry(job_.series_starts.back(), name);
    } else if (what == "none") {
      job_.empty_augmented = true;
      expect(';');
    } else {
      fail(kw, "unknown start kind '" + what + "'");
    }
  }

  void transform(const Token& kw) {
    const std::string what = ident("'sub', 'ramify' or 'unimodular'");
    Transform t;
    t.line = kw.line;
    if (what == "sub") {
      t.kind = Transform::Kind::Substitute;
      t.var = ident("a variable name");
      expect('=');
      const Token& at = peek();
      const Polynomial g = expr({}, false);
      int deg = 0;
      for (const auto& m : g.terms) deg = std::max(deg, m.t_exp);
      if (deg > 4096) fail(at, "substitution degree out of range");
      t.g.assign(static_cast<std::size_t>(deg + 1), Complex(0));
      for (const auto& m : g.terms) t.g[static_cast<std::size_t>(m.t_exp)] += m.coeff;
    } else if (what == "ramify") {
      t.kind = Transform::Kind::Ramify;
      const Token& at = peek();
      const long long n = integer();
      if (n < 1 || n > 64) fail(at, "ramification index must be between 1 and 64");
      t.ramification = static_cast<int>(n);
    } else if (what == "unimodular") {
      t.kind = Transform::Kind::Unimodular;
      std::vector<std::vector<long long>> rows(1);
      for (;;) {
        rows.back().push_back(integer());
        if (peek().is(',')) {
          next();
        } else if (peek().is('/')) {
          next();
          rows.emplace_back();
        } else {
          break;
        }
      }
      const std::size_t n = rows.size();
      for (const auto& r : rows)
        if (r.size() != n) fail(kw, "unimodular matrix must be square");
      t.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      if (peek().is_ident("as")) {
        next();
        std::set<std::string> seen;
        do {
          const Token& at = peek();
          std::string name = ident("a variable name");
          if (name == job_.system.t_name || name == "i") fail(at, "'" + name + "' cannot be a variable name");
          if (!seen.insert(name).second) fail(at, "duplicate variable '" + name + "'");
          t.new_names.push_back(std::move(name));
        } while (peek().is(',') && (next(), true));
        if (t.new_names.size() != n) fail(kw, "need one new name per matrix row");
      }
    } else {
      fail(kw, "unknown transform '" + what + "'");
    }
    expect(';');
    job_.transforms.push_back(std::move(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  JobSpec job_;
  bool in_series_ = false;
};

Series to_series(const Polynomial& p, int order) {
  if (p.is_zero()) return Series::zero(order);
  int lo = p.terms.front().t_exp;
  int hi = lo;
  for (const auto& m : p.terms) {
    lo = std::min(lo, m.t_exp);
    hi = std::max(hi, m.t_exp);
  }
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1), Complex(0));
  for (const auto& m : p.terms) c[static_cast<std::size_t>(m.t_exp - lo)] += m.coeff;
  return Series(lo, std::move(c), order);
}

Series ramified(const Series& s, int N) {
  if (s.is_zero()) return Series::zero(s.order() * N + N - 1);
  const auto c = s.coeffs();
  std::vector<Complex> out((c.size() - 1) * static_cast<std::size_t>(N) + 1, Complex(0));
  for (std::size_t k = 0; k < c.size(); ++k) out[k * static_cast<std::size_t>(N)] = c[k];
  return Series(s.base() * N, std::move(out), s.order() * N + N - 1);
}

// x_i = prod_j z_j^{M(j,i)}
std::vector<Series> monomial_map(const UnimodularTransform::IntMatrix& M, const std::vector<Series>& z, int order) {
  std::vector<Series> x;
  for (Eigen::Index i = 0; i < M.cols(); ++i) {
    Series acc = Series::constant(Complex(1), order);
    for (Eigen::Index j = 0; j < M.rows(); ++j) {
      if (M(j, i) != 0) acc = (acc * series_pow(z[static_cast<std::size_t>(j)], static_cast<int>(M(j, i)), order)).truncated(order);
    }
    x.push_back(std::move(acc));
  }
  return x;
}

bool same_names(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::set<std::string>(a.begin(), a.end()) == std::set<std::string>(b.begin(), b.end()) && a.size() == b.size();
}

}  // namespace

JobSpec parse_job(std::string_view text) { return JobParser(text).parse(); }

Series series_pow(const Series& s, int e, int order) {
  if (e < 0) return series_pow(invert(s, std::max(order + s.base(), 0)), -e, order);
  Series r = Series::constant(Complex(1), order);
  Series b = s.truncated(order);
  while (e > 0) {
    if (e & 1) r = (r * b).truncated(order);
    e >>= 1;
    if (e > 0) b = (b * b).truncated(order);
  }
  return r;
}

PreparedJob prepare(const JobSpec& job) {
  PreparedJob p;
  p.original = job.system;
  PolySystem cur = job.system;
  int R = 1;
  for (const auto& t : job.transforms) {
    switch (t.kind) {
      case Transform::Kind::Substitute: {
        const int j = cur.var_index(t.var);
        if (j < 0) throw UnknownVariable(t.var);
        if (cur.n == 1) throw InputError("line " + std::to_string(t.line) + ": substitution would remove the last variable");
        cur = substitute_var(cur, j, t.g);
        break;
      }
      case Transform::Kind::Ramify:
        cur = ramify(cur, t.ramification);
        R *= t.ramification;
        break;
      case Transform::Kind::Unimodular: {
        if (t.matrix.rows() != cur.n) {
          throw DimensionMismatch("line " + std::to_string(t.line) + ": unimodular matrix has " +
                                  std::to_string(t.matrix.rows()) + " rows for " + std::to_string(cur.n) + " variables");
        }
        cur = apply_unimodular(cur, UnimodularTransform(t.matrix), t.new_names).system;
        break;
      }
    }
  }
  p.has_transforms = !job.transforms.empty();
  p.transformed = std::move(cur);
  p.check_system = ramify(job.system, R);
  return p;
}

std::vector<Series> start_series(const JobSpec& job, const PreparedJob& prep, const SeriesStart& s, int order) {
  bool laurent = false;
  for (const auto& v : s.values)
    for (const auto& m : v.terms) laurent = laurent || m.t_exp < 0;
  const bool reshapes = std::any_of(job.transforms.begin(), job.transforms.end(),
                                    [](const Transform& t) { return t.kind != Transform::Kind::Substitute; });
  if (laurent && !reshapes) {
    throw InputError("line " + std::to_string(s.line) +
                     ": a start with negative powers of the parameter needs a ramify or unimodular transform");
  }

  auto gather = [&](const std::vector<std::string>& names, int ord) {
    std::vector<Series> out;
    for (const auto& name : names) {
      const auto it = std::find(s.names.begin(), s.names.end(), name);
      out.push_back(to_series(s.values[static_cast<std::size_t>(it - s.names.begin())], ord));
    }
    return out;
  };

  std::vector<Series> z;
  if (same_names(s.names, prep.transformed.var_names)) {
    z = gather(prep.transformed.var_names, order);
  } else if (prep.has_transforms && same_names(s.names, prep.original.var_names)) {
    // carry the start through the transforms, with room for Laurent factors
    const int work = order + 32;
    std::vector<std::string> names = prep.original.var_names;
    z = gather(names, work);
    for (const auto& t : job.transforms) {
      switch (t.kind) {
        case Transform::Kind::Substitute: {
          const auto it = std::find(names.begin(), names.end(), t.var);
          z.erase(z.begin() + (it - names.begin()));
          names.erase(it);
          break;
        }
        case Transform::Kind::Ramify:
          for (auto& v : z) v = ramified(v, t.ramification).truncated(work);
          break;
        case Transform::Kind::Unimodular: {
          const UnimodularTransform T(t.matrix);
          z = monomial_map(T.inverse().matrix(), z, work);
          if (!t.new_names.empty()) names = t.new_names;
          break;
        }
      }
    }
  } else {
    std::string expected;
    for (const auto& n : prep.transformed.var_names) expected += (expected.empty() ? "" : ", ") + n;
    throw InputError("line " + std::to_string(s.line) + ": start series must give exactly the variables " + expected);
  }
  for (auto& v : z) {
    v = v.truncated(order);
    if (!v.is_zero() && v.base() < 0) {
      throw InputError("line " + std::to_string(s.line) + ": start keeps negative powers of the parameter after the transforms");
    }
  }
  return z;
}

std::vector<Series> to_original(const JobSpec& job, std::span<const Series> z, int order) {
  // variable names in force before each transform
  std::vector<std::vector<std::string>> names{job.system.var_names};
  for (const auto& t : job.transforms) {
    auto cur = names.back();
    if (t.kind == Transform::Kind::Substitute) {
      cur.erase(std::find(cur.begin(), cur.end(), t.var));
    } else if (t.kind == Transform::Kind::Unimodular && !t.new_names.empty()) {
      cur = t.new_names;
    }
    names.push_back(std::move(cur));
  }

  std::vector<Series> x(z.begin(), z.end());
  int R = 1;
  for (std::size_t k = job.transforms.size(); k-- > 0;) {
    const auto& t = job.transforms[k];
    switch (t.kind) {
      case Transform::Kind::Substitute: {
        const auto& before = names[k];
        const auto j = std::find(before.begin(), before.end(), t.var) - before.begin();
        std::vector<Complex> c((t.g.size() - 1) * static_cast<std::size_t>(R) + 1, Complex(0));
        for (std::size_t i = 0; i < t.g.size(); ++i) c[i * static_cast<std::size_t>(R)] = t.g[i];
        x.insert(x.begin() + j, Series(0, std::move(c), order));
        break;
      }
      case Transform::Kind::Ramify:
        R *= t.ramification;
        break;
      case Transform::Kind::Unimodular:
        x = monomial_map(t.matrix, x, order);
        break;
    }
  }
  return x;
}

}  // namespace snewton

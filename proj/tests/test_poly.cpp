#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "snewton/poly.hpp"

using namespace snewton;
using testing::C;
using testing::rand_complex;

namespace {

const std::vector<std::string> kXY{"x1", "x2"};

PolySystem example22() { return parse_system("2*t^2 + t*x1 - x2 + 1; x1^3 - 4*t^2 + t*x2 + 2*t - 1;", kXY); }

PolySystem viviani() { return parse_system("x1^2 + x2^2 + x3^2 - 4; (x1 - 1)^2 + x2^2 - 1;", {"x1", "x2", "x3"}); }

PolySystem apollonius() {
  return parse_system(
      "x1^2 + 3*x2^2 - r^2 - 2*r - 1;"
      "x1^2 + 3*x2^2 - r^2 - 4*x1 - 2*r + 3;"
      "3*t^2 + x1^2 - 6*t*x2 + 3*x2^2 - r^2 + 6*t - 2*x1 - 6*x2 + 2*r + 3;",
      {"x1", "x2", "r"});
}

PolySystem random_system(std::mt19937& rng, int n, int m, int terms, int maxdeg) {
  std::uniform_int_distribution<int> deg(0, maxdeg);
  PolySystem f;
  f.n = n;
  for (int j = 0; j < n; ++j) f.var_names.push_back("x" + std::to_string(j + 1));
  for (int i = 0; i < m; ++i) {
    Polynomial p(n);
    for (int k = 0; k < terms; ++k) {
      Monomial mono{rand_complex(rng), deg(rng), std::vector<int>(static_cast<std::size_t>(n))};
      for (auto& e : mono.x_exps) e = deg(rng);
      p.terms.push_back(std::move(mono));
    }
    p.canonicalize();
    f.polys.push_back(std::move(p));
  }
  return f;
}

// independent evaluation: expand each monomial with plain coefficient arrays
std::vector<C> naive_eval(const Polynomial& p, const std::vector<std::vector<C>>& z, int order) {
  std::vector<C> acc(static_cast<std::size_t>(order + 1), C(0));
  for (const auto& m : p.terms) {
    std::vector<C> term(static_cast<std::size_t>(order + 1), C(0));
    if (m.t_exp > order) continue;
    term[static_cast<std::size_t>(m.t_exp)] = m.coeff;
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (int e = 0; e < m.x_exps[j]; ++e) {
        std::vector<C> next(term.size(), C(0));
        for (std::size_t a = 0; a < term.size(); ++a)
          for (std::size_t b = 0; b < z[j].size() && a + b < term.size(); ++b) next[a + b] += term[a] * z[j][b];
        term = std::move(next);
      }
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += term[k];
  }
  return acc;
}

}  // namespace

TEST_CASE("parse the 2x2 example") {
  const PolySystem f = example22();
  REQUIRE(f.m() == 2);
  CHECK(f.n == 2);
  const auto& p = f.polys[0];
  // canonical order: (t_exp, x_exps)
  REQUIRE(p.terms.size() == 4);
  CHECK(p.terms[0].coeff == C(1));
  CHECK(p.terms[1].x_exps == std::vector<int>{0, 1});
  CHECK(p.terms[1].coeff == C(-1));
  CHECK(p.terms[2].t_exp == 1);
  CHECK(p.terms[2].x_exps == std::vector<int>{1, 0});
  CHECK(p.terms[3].t_exp == 2);
  CHECK(p.terms[3].coeff == C(2));
}

TEST_CASE("parse single monomials") {
  const PolySystem f = parse_system("x1;", {"x1"});
  REQUIRE(f.polys[0].terms.size() == 1);
  CHECK(f.polys[0].terms[0].coeff == C(1));

  const PolySystem g = parse_system("(1+2*i)*x1*t;", {"x1"});
  REQUIRE(g.polys[0].terms.size() == 1);
  CHECK(g.polys[0].terms[0].coeff == C(1, 2));
  CHECK(g.polys[0].terms[0].t_exp == 1);
  CHECK(g.polys[0].terms[0].x_exps == std::vector<int>{1});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_system("x1 + ;", {"x1"}), SyntaxError);
  CHECK_THROWS_AS(parse_system("x1 + y;", {"x1"}), UnknownVariable);
  CHECK_THROWS_AS(parse_system("sqrt(3)*x1;", {"x1"}), SyntaxError);
  CHECK_THROWS_AS(parse_system("x1/x1;", {"x1"}), SyntaxError);
  CHECK_THROWS_AS(parse_system("x1^-1;", {"x1"}), SyntaxError);
  CHECK_THROWS_AS(parse_system("x1^1.5;", {"x1"}), SyntaxError);
  CHECK_THROWS_AS(parse_system("", {"x1"}), DimensionMismatch);
  CHECK_THROWS_AS(parse_system("1;", {}), DimensionMismatch);
  try {
    parse_system("x1 +\n  * 2;", {"x1"});
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("parse decimals and division by constants") {
  const Polynomial p = parse_polynomial("0.25*x1 + 3/4 + 1e-3*t", {"x1"});
  CHECK(p.terms[0].coeff == C(0.75));
  CHECK(p.terms[1].coeff == C(0.25));
  CHECK(p.terms[2].coeff == C(1e-3));
}

TEST_CASE("laurent parameter powers only when allowed") {
  const Polynomial p = parse_polynomial("2*t^-1 + 1", {}, "t", true);
  CHECK(p.terms[0].t_exp == -1);
  CHECK(p.terms[0].coeff == C(2));
  CHECK_THROWS_AS(parse_polynomial("t^-1", {}, "t", false), SyntaxError);
}

TEST_CASE("print and parse round trip") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const PolySystem f = random_system(rng, 3, 2, 6, 3);
    const PolySystem g = parse_system(to_string(f), f.var_names);
    CHECK(g == f);
  }
}

TEST_CASE("evaluate the 2x2 example at (1, 1)") {
  const PolySystem f = example22();
  const std::vector<Series> z{Series::constant(1.0, 4), Series::constant(1.0, 4)};
  const auto v = evaluate(f, z, 4);
  CHECK(v[0].coeff(0) == C(0));
  CHECK(v[0].coeff(1) == C(1));
  CHECK(v[0].coeff(2) == C(2));
  CHECK(v[1].coeff(1) == C(3));
  CHECK(v[1].coeff(2) == C(-4));
}

TEST_CASE("evaluate the transformed viviani system") {
  // x1 = 2t^2, (x2, x3) = (2t - t^3, 2 - t^2)
  const PolySystem g = substitute_var(viviani(), 0, std::vector<C>{0.0, 0.0, 2.0});
  const std::vector<Series> z{Series(1, {2.0, 0.0, -1.0}, 10), Series(0, {2.0, 0.0, -1.0}, 10)};
  const auto v = evaluate(g, z, 10);
  // x1^6 + x1^4 and x1^6 with x1 = t^2 up to the scaling of x1
  CHECK(v[0].base() >= 4);
  CHECK(v[1].base() >= 4);
}

TEST_CASE("evaluate at t = 0 matches point evaluation") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const PolySystem f = random_system(rng, 3, 1, 5, 3);
    std::vector<C> x{rand_complex(rng), rand_complex(rng), rand_complex(rng)};
    std::vector<Series> z;
    for (auto c : x) z.push_back(Series::constant(c, 3));
    const auto v = evaluate(f, z, 3);
    CHECK(std::abs(v[0].coeff(0) - evaluate_point(f.polys[0], C(0), x)) < 1e-12);
  }
}

TEST_CASE("evaluate agrees with a naive expansion") {
  std::mt19937 rng(8);
  const int order = 6;
  for (int trial = 0; trial < 30; ++trial) {
    const PolySystem f = random_system(rng, 3, 1, 6, 3);
    std::vector<std::vector<C>> zc(3);
    std::vector<Series> z;
    for (auto& c : zc) {
      c.resize(order + 1);
      for (auto& v : c) v = rand_complex(rng);
      z.emplace_back(0, c, order);
    }
    const Series v = evaluate(f.polys[0], z, order);
    const auto ref = naive_eval(f.polys[0], zc, order);
    for (int k = 0; k <= order; ++k) CHECK(std::abs(v.coeff(k) - ref[static_cast<std::size_t>(k)]) < 1e-12 * (1 + std::abs(ref[static_cast<std::size_t>(k)])));
  }
}

TEST_CASE("evaluate checks the dimension") {
  const std::vector<Series> z{Series::constant(1.0, 2)};
  CHECK_THROWS_AS(evaluate(example22(), z, 2), DimensionMismatch);
}

TEST_CASE("jacobian of the 2x2 example") {
  const PolySystem f = example22();
  const PolyMatrix J = jacobian(f);
  const std::vector<Series> z{Series::constant(1.0, 3), Series::constant(1.0, 3)};
  auto entry = [&](int i, int j) { return evaluate(J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], z, 3); };
  CHECK(entry(0, 0) == Series::monomial(1.0, 1, 3));
  CHECK(entry(0, 1) == Series::constant(-1.0, 3));
  CHECK(entry(1, 0) == Series::constant(3.0, 3));
  CHECK(entry(1, 1) == Series::monomial(1.0, 1, 3));
}

TEST_CASE("jacobian of the transformed viviani system at (2t, 2)") {
  const PolySystem g = substitute_var(viviani(), 0, std::vector<C>{0.0, 0.0, 2.0});
  const PolyMatrix J = jacobian(g);
  const std::vector<Series> z{Series::monomial(2.0, 1, 4), Series::constant(2.0, 4)};
  CHECK(evaluate(J[0][0], z, 4) == Series::monomial(4.0, 1, 4));
  CHECK(evaluate(J[0][1], z, 4) == Series::constant(4.0, 4));
  CHECK(evaluate(J[1][0], z, 4) == Series::monomial(4.0, 1, 4));
  CHECK(evaluate(J[1][1], z, 4).is_zero());
}

TEST_CASE("jacobian of a linear system is constant") {
  const PolySystem f = parse_system("2*x1 - x2 + 3; x1 + 5*x2;", kXY);
  for (const auto& row : jacobian(f))
    for (const auto& p : row) CHECK(p.max_t_exp() == 0);
}

TEST_CASE("jacobian matches central differences") {
  std::mt19937 rng(13);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const PolySystem f = random_system(rng, 3, 2, 6, 3);
    const PolyMatrix J = jacobian(f);
    std::vector<C> x{rand_complex(rng), rand_complex(rng), rand_complex(rng)};
    const C t = rand_complex(rng, 0.5);
    for (int i = 0; i < f.m(); ++i) {
      for (int j = 0; j < f.n; ++j) {
        auto xp = x;
        auto xm = x;
        xp[static_cast<std::size_t>(j)] += h;
        xm[static_cast<std::size_t>(j)] -= h;
        const C fd = (evaluate_point(f.polys[static_cast<std::size_t>(i)], t, xp) - evaluate_point(f.polys[static_cast<std::size_t>(i)], t, xm)) / (2 * h);
        const C an = evaluate_point(J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], t, x);
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

TEST_CASE("augmented jacobian") {
  const std::vector<C> p{0.0, 0.0, 0.0, 2.0};
  const Eigen::MatrixXcd J = jacobian_aug(viviani(), p);
  Eigen::MatrixXcd ref(3, 4);
  ref << 1, 0, 0, 0,
         0, 0, 0, 4,
         0, -2, 0, 0;
  CHECK((J - ref).norm() == 0.0);

  const PolySystem only_t = parse_system("t;", {"x1"});
  const std::vector<C> q{0.0, 0.0};
  const Eigen::MatrixXcd K = jacobian_aug(only_t, q);
  CHECK(K(0, 0) == C(1));

  const std::vector<C> a{0.0, 1.0, 1.0, 1.0};
  const Eigen::MatrixXcd A = jacobian_aug(apollonius(), a);
  Eigen::MatrixXcd xblock(3, 3);
  xblock << 2, 6, -4,
           -2, 6, -4,
            0, 0, 0;
  CHECK((A.bottomRightCorner(3, 3) - xblock).norm() == 0.0);

  CHECK_THROWS_AS(jacobian_aug(viviani(), q), DimensionMismatch);
}

TEST_CASE("ramify") {
  const PolySystem f = parse_system("t*x1; 2*t + x1;", {"x1"});
  const PolySystem g = ramify(f, 2);
  CHECK(g.polys[0].terms[0].t_exp == 2);
  CHECK(ramify(f, 1) == f);
  const PolySystem h = ramify(f, 3);
  CHECK(h.polys[1] == parse_polynomial("2*t^3 + x1", {"x1"}));

  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const PolySystem r = random_system(rng, 2, 2, 5, 3);
    CHECK(ramify(ramify(r, 2), 3) == ramify(r, 6));
  }
}

TEST_CASE("substitute a variable") {
  const PolySystem f = parse_system("x1*x2; x1^2 + 1;", kXY);
  const PolySystem zero = substitute_var(f, 0, std::vector<C>{});
  CHECK(zero.n == 1);
  CHECK(zero.polys[0].is_zero());
  const PolySystem lin = substitute_var(f, 0, std::vector<C>{0.0, 1.0});
  CHECK(lin.polys[1] == parse_polynomial("t^2 + 1", {"x2"}));
  CHECK(lin.var_names == std::vector<std::string>{"x2"});
  CHECK_THROWS_AS(substitute_var(f, 2, std::vector<C>{1.0}), IndexOutOfRange);
}

TEST_CASE("unimodular determinant and inverse") {
  UnimodularTransform::IntMatrix M = UnimodularTransform::IntMatrix::Identity(8, 8);
  M.row(0) << 1, -1, 0, 1, 0, 0, -1, 0;
  CHECK(UnimodularTransform::determinant(M) == 1);
  const UnimodularTransform T(M);
  const auto P = (M * T.inverse().matrix()).eval();
  CHECK(P == UnimodularTransform::IntMatrix::Identity(8, 8));

  UnimodularTransform::IntMatrix B(2, 2);
  B << 2, 0, 0, 1;
  CHECK_THROWS_AS(UnimodularTransform{B}, NonUnimodular);
}

TEST_CASE("unimodular transform of cyclic monomials") {
  std::vector<std::string> x;
  for (int k = 0; k < 8; ++k) x.push_back("x" + std::to_string(k));
  UnimodularTransform::IntMatrix M = UnimodularTransform::IntMatrix::Identity(8, 8);
  M.row(0) << 1, -1, 0, 1, 0, 0, -1, 0;
  const PolySystem f = parse_system("x0*x1; x3; x0 + x1;", x);
  const auto res = apply_unimodular(f, UnimodularTransform(M));
  // x0 x1 -> z1
  REQUIRE(res.system.polys[0].terms.size() == 1);
  CHECK(res.system.polys[0].terms[0].x_exps == std::vector<int>{0, 1, 0, 0, 0, 0, 0, 0});
  // x3 -> z3 z0
  CHECK(res.system.polys[1].terms[0].x_exps == std::vector<int>{1, 0, 0, 1, 0, 0, 0, 0});
  // x0 + x1 -> z0 + z1 z0^-1, cleared by z0
  CHECK(res.clearing[2] == std::vector<int>{1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(res.system.polys[2] == parse_polynomial("x0^2 + x1", x));

  const PolySystem same = apply_unimodular(f, UnimodularTransform(UnimodularTransform::IntMatrix::Identity(8, 8))).system;
  CHECK(same == f);
}

TEST_CASE("unimodular there and back agrees up to monomial factors") {
  std::mt19937 rng(17);
  UnimodularTransform::IntMatrix M(3, 3);
  M << 1, 2, 0,
       0, 1, -1,
       1, 2, 1;
  REQUIRE(std::abs(UnimodularTransform::determinant(M)) == 1);
  const UnimodularTransform T(M);
  for (int trial = 0; trial < 5; ++trial) {
    const PolySystem f = random_system(rng, 3, 2, 5, 2);
    const PolySystem back = apply_unimodular(apply_unimodular(f, T).system, T.inverse()).system;
    for (int i = 0; i < f.m(); ++i) {
      std::vector<C> ratios;
      for (int k = 0; k < 50; ++k) {
        std::vector<C> x{std::polar(1.0, 0.3 * k + 0.1), std::polar(1.2, 0.7 * k + 0.2), std::polar(0.8, 1.1 * k + 0.3)};
        const C t = std::polar(0.5, 0.2 * k);
        const C a = evaluate_point(f.polys[static_cast<std::size_t>(i)], t, x);
        const C b = evaluate_point(back.polys[static_cast<std::size_t>(i)], t, x);
        // divide out the monomial factor x^e of the round trip
        C mono(1);
        for (std::size_t j = 0; j < 3; ++j) {
          const int e = back.polys[static_cast<std::size_t>(i)].terms[0].x_exps[j] - f.polys[static_cast<std::size_t>(i)].terms[0].x_exps[j];
          mono *= std::pow(x[j], e);
        }
        ratios.push_back(b / (a * mono));
      }
      for (const auto& r : ratios) CHECK(std::abs(r - ratios[0]) < 1e-10);
    }
  }
}

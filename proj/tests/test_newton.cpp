#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "snewton/errors.hpp"
#include "snewton/job.hpp"
#include "snewton/newton.hpp"

using namespace snewton;
using testing::C;
using testing::rand_complex;

namespace {

PolySystem example22() {
  return parse_system("2*t^2 + t*x1 - x2 + 1; x1^3 - 4*t^2 + t*x2 + 2*t - 1;", {"x1", "x2"});
}

PolySystem viviani() {
  return parse_system("x1^2 + x2^2 + x3^2 - 4; (x1 - 1)^2 + x2^2 - 1;", {"x1", "x2", "x3"});
}

// x1 replaced by 2 t^2
PolySystem viviani_sub() {
  return parse_system("4*t^4 + x2^2 + x3^2 - 4; (2*t^2 - 1)^2 + x2^2 - 1;", {"x2", "x3"});
}

std::vector<Series> constants(const std::vector<C>& v, int order) {
  std::vector<Series> z;
  for (const auto& c : v) z.push_back(Series::constant(c, order));
  return z;
}

struct Generated {
  PolySystem f;
  std::vector<C> x0;
};

// random quadratic system through (0, x0) with a dominant diagonal in the
// linear part, hence regular there
Generated raw_system(std::mt19937& rng, int n) {
  Generated g;
  g.f.n = n;
  for (int j = 0; j < n; ++j) g.f.var_names.push_back("x" + std::to_string(j));
  for (int j = 0; j < n; ++j) g.x0.push_back(rand_complex(rng));
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    auto add = [&](int te, std::vector<int> e, double scale) {
      p.terms.push_back(Monomial{rand_complex(rng, scale), te, std::move(e)});
    };
    for (int j = 0; j < n; ++j) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(j)] = 1;
      add(0, e, i == j ? 3.0 : 0.3);
      add(1, e, 0.3);
      for (int k = j; k < n; ++k) {
        auto q = e;
        ++q[static_cast<std::size_t>(k)];
        add(0, q, 0.3);
      }
    }
    add(1, std::vector<int>(static_cast<std::size_t>(n), 0), 0.3);
    add(2, std::vector<int>(static_cast<std::size_t>(n), 0), 0.3);
    p.canonicalize();
    p = p - Polynomial::constant(n, evaluate_point(p, 0.0, g.x0));
    g.f.polys.push_back(std::move(p));
  }
  return g;
}

std::vector<C> point_of(const Generated& g) {
  std::vector<C> p{0};
  p.insert(p.end(), g.x0.begin(), g.x0.end());
  return p;
}

// rescales t so the solution coefficients stay near unit size; otherwise
// geometric growth or decay hides orders behind the residual tolerance
Generated regular_system(std::mt19937& rng, int n) {
  Generated g = raw_system(rng, n);
  NewtonOptions o;
  o.target_degree = 20;
  const NewtonRun probe = run(g.f, constants(g.x0, 0), o);
  double rho = 0.0;
  for (const auto& s : probe.solution) {
    for (int k = 10; k <= 20; ++k) rho = std::max(rho, std::pow(std::abs(s.coeff(k)), 1.0 / k));
  }
  if (rho > 0.0) {
    for (auto& p : g.f.polys) {
      for (auto& m : p.terms) m.coeff *= std::pow(rho, -m.t_exp);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("classification of the examples") {
  const auto f = example22();
  const std::vector<C> p{0, 1, 1};
  const auto c = classify_start(f, p);
  CHECK(c.kind == StartKind::RegularStart);
  CHECK(c.rank == 3);

  const std::vector<C> q{0, 0, 0, 2};
  const auto v = classify_start(viviani(), q);
  CHECK(v.kind == StartKind::SingularStart);
  CHECK(v.rank == 3);

  const JobSpec apollonius = parse_job(testing::read_fixture("apollonius.sn"));
  const auto ac = classify_start(apollonius.system, *apollonius.point);
  CHECK(ac.kind == StartKind::SingularStart);
  CHECK(ac.rank < apollonius.system.n + 1);

  CHECK(to_string(StartKind::SingularStart) == std::string("SingularStart"));
}

TEST_CASE("points off the variety are refused") {
  const auto f = example22();
  const std::vector<C> off{0, 1, 2};
  CHECK_THROWS_AS(classify_start(f, off), NotOnVariety);
  const std::vector<C> moved{0.5, 1, 1};
  CHECK_THROWS_AS(classify_start(f, moved), NotOnVariety);
  const std::vector<C> short_point{0, 1};
  CHECK_THROWS_AS(classify_start(f, short_point), DimensionMismatch);
}

TEST_CASE("first newton step of the 2x2 example") {
  const auto f = example22();
  const auto z = constants({1, 1}, 1);
  const StepResult s = newton_step(f, z, 1);
  CHECK(s.path == SolvePath::Staggered);
  CHECK(s.a == 0);
  CHECK(s.b == 1);
  CHECK(s.leading_regular);
  CHECK(std::abs(s.dz[0].coeff(1) - C(-1)) < 1e-14);
  CHECK(std::abs(s.dz[1].coeff(1) - C(1)) < 1e-14);
  CHECK(std::abs(s.dz[0].coeff(0)) == 0.0);
}

TEST_CASE("first newton step on viviani after the substitution") {
  const auto f = viviani_sub();
  const std::vector<Series> z{Series::monomial(2.0, 1, 4), Series::constant(2.0, 4)};
  const StepResult s = newton_step(f, z, 4, {}, true);
  CHECK(s.path == SolvePath::Block);
  CHECK(s.exact);
  CHECK_FALSE(s.leading_regular);
  CHECK(s.b == 2);
  CHECK(testing::max_diff(s.dz[0], Series::monomial(-1.0, 3, 4)) < 1e-12);
  CHECK(testing::max_diff(s.dz[1], Series::monomial(-1.0, 2, 4)) < 1e-12);
  CHECK(s.block.rows() == s.rhs.size());
}

TEST_CASE("the 2x2 example is solved exactly") {
  NewtonOptions o;
  o.target_degree = 3;
  const NewtonRun r = run(example22(), constants({1, 1}, 0), o);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.residual_vanishes);
  CHECK(r.converged_order == 3);
  const C x1[] = {1, -1, 0, 0};
  const C x2[] = {1, 1, 1, 0};
  for (int k = 0; k <= 3; ++k) {
    CHECK(std::abs(r.solution[0].coeff(k) - x1[k]) < 1e-12);
    CHECK(std::abs(r.solution[1].coeff(k) - x2[k]) < 1e-12);
  }
}

TEST_CASE("hermite property on the polynomial solution") {
  // x(t) = (1 - t, 1 + t + t^2): x_k = x^(k)(0) / k!
  for (int d = 0; d <= 2; ++d) {
    NewtonOptions o;
    o.target_degree = d;
    const NewtonRun r = run(example22(), constants({1, 1}, 0), o);
    const C x1[] = {1, -1, 0};
    const C x2[] = {1, 1, 1};
    for (int k = 0; k <= d; ++k) {
      CHECK(r.solution[0].coeff(k) == x1[k]);
      CHECK(r.solution[1].coeff(k) == x2[k]);
    }
  }
}

TEST_CASE("viviani through degree 16") {
  NewtonOptions o;
  o.target_degree = 16;
  const std::vector<Series> z{Series::monomial(2.0, 1, 1), Series::constant(2.0, 1)};
  const NewtonRun r = run(viviani_sub(), z, o);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.residual_order >= 18);
  const double x2[] = {2, -1, -0.25, -0.125, -5.0 / 64, -7.0 / 128, -21.0 / 512, -33.0 / 1024};
  for (int k = 0; k < 8; ++k) {
    CHECK(std::abs(r.solution[0].coeff(2 * k + 1) - x2[k]) <= 1e-10 * std::abs(x2[k]));
    CHECK(std::abs(r.solution[0].coeff(2 * k)) < 1e-12);
  }
}

TEST_CASE("residual orders") {
  // exact series of the example: f vanishes identically
  const std::vector<Series> exact{Series(0, {1, -1}, 1), Series(0, {1, 1, 1}, 2)};
  const auto f = example22();
  CHECK(residual_order(f, exact) == evaluation_ceiling(f, exact) + 1);
  CHECK(residual_order(f, constants({1, 1}, 0)) == 1);

  std::vector<C> c2{0, 2, 0, -1, 0, -0.25, 0, -0.125, 0, -5.0 / 64, 0, -7.0 / 128, 0, -21.0 / 512, 0, -33.0 / 1024};
  std::vector<C> c3{2, 0, -1, 0, -0.25, 0, -0.125, 0, -5.0 / 64, 0, -7.0 / 128, 0, -21.0 / 512, 0, -33.0 / 1024, 0, -429.0 / 16384};
  const std::vector<Series> z{Series(0, c2, 16), Series(0, c3, 16)};
  CHECK(residual_order(viviani_sub(), z) >= 18);
}

TEST_CASE("quadratic growth of the residual order on regular starts") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = regular_system(rng, 2 + trial % 3);
    NewtonOptions o;
    o.target_degree = 40;
    o.max_steps = 20;
    const auto start = constants(g.x0, 0);
    REQUIRE(classify_start(g.f, point_of(g)).kind == StartKind::RegularStart);
    const NewtonRun r = run(g.f, start, o);
    CHECK(r.status == RunStatus::Converged);
    int prev = residual_order(g.f, start);
    for (const auto& s : r.steps) {
      CHECK((s.residual_order >= 2 * prev - 1 || s.residual_order > o.target_degree));
      prev = s.residual_order;
    }
    CHECK(r.steps.size() <= 6);
  }
}

TEST_CASE("classification agrees with the first step") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = raw_system(rng, 2 + trial % 3);
    if (trial >= 10) g.f.polys[0] = g.f.polys[0] * g.f.polys[0];
    const auto c = classify_start(g.f, point_of(g));
    CHECK(c.kind == (trial < 10 ? StartKind::RegularStart : StartKind::SingularStart));
    const StepResult s = newton_step(g.f, constants(g.x0, 0), 4);
    const bool regular_step = s.a == 0 && s.leading_regular;
    CHECK((c.kind == StartKind::RegularStart) == regular_step);
  }
}

TEST_CASE("a converged solution is a fixed point") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = regular_system(rng, 3);
    NewtonOptions o;
    o.target_degree = 12;
    const NewtonRun r = run(g.f, constants(g.x0, 0), o);
    REQUIRE(r.status == RunStatus::Converged);
    const NewtonRun again = run(g.f, r.solution, o);
    for (std::size_t j = 0; j < r.solution.size(); ++j) CHECK(testing::max_diff(again.solution[j], r.solution[j]) <= 1e-12);
    const StepResult s = newton_step(g.f, r.solution, 12);
    // what is left is below the residual tolerance
    for (const auto& d : s.dz) CHECK(d.truncated(12).max_abs() <= 1e-9);
  }
}

TEST_CASE("transforms commute with solving") {
  for (const char* name : {"viviani.sn", "four_spheres.sn"}) {
    const JobSpec job = parse_job(testing::read_fixture(name));
    const PreparedJob prep = prepare(job);
    NewtonOptions o;
    o.target_degree = job.commands.at(0).degree;
    const auto z = start_series(job, prep, job.series_starts.at(0), o.target_degree);
    const NewtonRun r = run(prep.transformed, z, o);
    REQUIRE(r.status == RunStatus::Converged);
    const auto x = to_original(job, r.solution, o.target_degree + 8);
    CHECK(residual_order(prep.check_system, x) == r.residual_order);
  }

  // a ramified problem: x^2 = t + t^2 turns into x^2 = t^2 + t^4
  const JobSpec job = parse_job("param t; vars x; poly x^2 - t - t^2; start point 0, 0; transform ramify 2; start series x = t; solve 9;");
  const PreparedJob prep = prepare(job);
  NewtonOptions o;
  o.target_degree = 9;
  const NewtonRun r = run(prep.transformed, start_series(job, prep, job.series_starts.at(0), 9), o);
  REQUIRE(r.status == RunStatus::Converged);
  // t sqrt(1 + t^2)
  const double c[] = {0, 1, 0, 0.5, 0, -0.125, 0, 0.0625, 0, -5.0 / 128};
  for (int k = 0; k <= 9; ++k) CHECK(std::abs(r.solution[0].coeff(k) - c[k]) < 1e-12);
  const auto x = to_original(job, r.solution, 17);
  CHECK(residual_order(prep.check_system, x) == r.residual_order);
}

TEST_CASE("solve path and status strings") {
  CHECK(std::string(to_string(SolvePath::Staggered)) == "staggered");
  CHECK(std::string(to_string(SolvePath::Block)) == "block");
  CHECK(std::string(to_string(RunStatus::Converged)) == "Converged");
}

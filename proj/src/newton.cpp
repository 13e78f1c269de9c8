#include "snewton/newton.hpp"

#include <algorithm>
#include <limits>

namespace snewton {

namespace {

// Large enough to never limit accuracy, small enough that order arithmetic
// cannot overflow.
constexpr int kExactOrder = 1 << 20;

std::vector<Series> as_exact(std::span<const Series> z, int degree) {
  std::vector<Series> out;
  out.reserve(z.size());
  for (const auto& s : z) out.push_back(s.truncated(degree).with_order(kExactOrder));
  return out;
}

SeriesMatrix evaluate(const PolyMatrix& J, std::span<const Series> z, int order) {
  SeriesMatrix out(J.size());
  for (std::size_t i = 0; i < J.size(); ++i) {
    out[i].reserve(J[i].size());
    for (const auto& p : J[i]) out[i].push_back(evaluate(p, z, order));
  }
  return out;
}

bool all_zero(const std::vector<Series>& v) {
  return std::all_of(v.begin(), v.end(), [](const Series& s) { return s.is_zero(); });
}

double max_abs(const std::vector<Eigen::VectorXcd>& v) {
  double m = 0.0;
  for (const auto& x : v)
    if (x.size() > 0) m = std::max(m, x.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

const char* to_string(StartKind k) {
  switch (k) {
    case StartKind::RegularStart: return "RegularStart";
    case StartKind::SingularStart: return "SingularStart";
    case StartKind::EmptyAugmented: return "EmptyAugmented";
  }
  return "?";
}

const char* to_string(SolvePath p) { return p == SolvePath::Staggered ? "staggered" : "block"; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::Stagnation: return "Stagnation";
    case RunStatus::MaxSteps: return "MaxSteps";
  }
  return "?";
}

StartClassification classify_start(const PolySystem& f, std::span<const Complex> p, double start_tol, double rank_tol) {
  if (static_cast<int>(p.size()) != f.n + 1) throw DimensionMismatch("start point needs the parameter value and one value per variable");
  if (std::abs(p[0]) > start_tol) throw NotOnVariety(std::abs(p[0]));
  const auto x = p.subspan(1);
  double worst = 0.0;
  for (const auto& poly : f.polys) worst = std::max(worst, std::abs(evaluate_point(poly, p[0], x)));
  if (worst > start_tol) throw NotOnVariety(worst);

  StartClassification c;
  c.rank = numeric_rank(jacobian_aug(f, p), rank_tol);
  c.kind = c.rank == f.n + 1 ? StartKind::RegularStart : StartKind::SingularStart;
  return c;
}

StepResult newton_step(const PolySystem& f, std::span<const Series> z, int work_order, const NewtonOptions& opts,
                       bool keep_block) {
  if (static_cast<int>(z.size()) != f.n) throw DimensionMismatch("series vector length differs from variable count");
  const auto zz = as_exact(z, work_order);
  StepResult out;

  std::vector<Series> rhs = evaluate(f, zz, work_order);
  for (auto& s : rhs) s = -s;

  const PolyMatrix J = jacobian(f);
  SeriesMatrix Jz = evaluate(J, zz, work_order);
  MatrixSeriesXcd A = linearize(Jz);
  if (A.coeffs.empty()) throw ZeroJacobian();
  out.a = A.base;

  auto zero_update = [&](int base) {
    out.dz.assign(z.size(), Series::zero(work_order));
    out.b = base;
    const Eigen::MatrixXcd& A0 = A.coeffs.front();
    out.leading_regular = A0.rows() >= A0.cols() && reciprocal_condition(A0) > opts.rcond_threshold;
    return out;
  };
  if (all_zero(rhs)) return zero_update(work_order + 1);
  const VectorSeriesXcd b = linearize(std::span<const Series>(rhs));
  out.b = b.base;
  const int d = work_order - b.base;
  if (d < 0) return zero_update(b.base);

  // A_0..A_d are needed, which reach past work_order when a > b
  if (A.base + d > work_order) {
    Jz = evaluate(J, zz, A.base + d);
    A = linearize(Jz);
  }

  const Eigen::MatrixXcd& A0 = A.coeffs.front();
  out.leading_regular = A0.rows() >= A0.cols() && reciprocal_condition(A0) > opts.rcond_threshold;

  VectorSeriesXcd x;
  if (out.leading_regular) {
    out.path = SolvePath::Staggered;
    x = staggered_solve(A, b, d, opts.rcond_threshold);
    if (A0.rows() > A0.cols()) {
      const VectorSeriesXcd Ax = multiply(A, x, d);
      double worst = 0.0;
      for (int k = 0; k <= d; ++k) worst = std::max(worst, (Ax.coeff(k) - b.coeff(k)).cwiseAbs().maxCoeff());
      double amax = 0.0;
      for (const auto& Ak : A.coeffs) amax = std::max(amax, Ak.cwiseAbs().maxCoeff());
      out.exact = worst <= 1e-9 * (amax * max_abs(x.coeffs) + max_abs(b.coeffs));
    }
  } else {
    out.path = SolvePath::Block;
    BlockSolveOptions bo;
    bo.use_structure = false;
    bo.rcond_threshold = opts.rcond_threshold;
    bo.mode = opts.mode;
    auto sol = block_solve(A, b, d, bo);
    x = std::move(sol.x);
    out.exact = sol.exact;
  }

  if (keep_block || opts.observer) {
    out.block = assemble_block(A, d);
    out.rhs = stack(b, d);
  }

  out.dz.reserve(z.size());
  for (Eigen::Index j = 0; j < x.size; ++j) out.dz.push_back(x.component(j, work_order - std::max(A.base, 0)));
  return out;
}

int evaluation_ceiling(const PolySystem& f, std::span<const Series> z) {
  int ceiling = std::numeric_limits<int>::min();
  for (const auto& p : f.polys) {
    for (const auto& m : p.terms) {
      int e = m.t_exp;
      bool vanishes = false;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const int k = m.x_exps[j];
        if (k == 0) continue;
        if (z[j].is_zero()) vanishes = true;
        e += k * z[j].degree();
      }
      if (!vanishes) ceiling = std::max(ceiling, e);
    }
  }
  return ceiling == std::numeric_limits<int>::min() ? 0 : ceiling;
}

int residual_order(const PolySystem& f, std::span<const Series> z, double tol) {
  if (static_cast<int>(z.size()) != f.n) throw DimensionMismatch("series vector length differs from variable count");
  const int ceiling = evaluation_ceiling(f, z);
  std::vector<Series> zz;
  zz.reserve(z.size());
  double scale = 1.0;
  for (const auto& s : z) {
    zz.push_back(s.with_order(kExactOrder));
    scale = std::max(scale, s.max_abs());
  }
  const double cut = tol * scale;
  int lowest = ceiling + 1;
  for (const auto& v : evaluate(f, zz, ceiling)) {
    if (v.is_zero()) continue;
    const auto c = v.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (std::abs(c[k]) > cut) {
        lowest = std::min(lowest, v.base() + static_cast<int>(k));
        break;
      }
    }
  }
  return lowest;
}

NewtonRun run(const PolySystem& f, std::span<const Series> start, const NewtonOptions& opts) {
  if (opts.target_degree < 0) throw InputError("target degree must be nonnegative");
  if (start.empty() || static_cast<int>(start.size()) != f.n) throw DimensionMismatch("start length differs from variable count");
  const int target = opts.target_degree;
  const int extra = std::max(opts.extra_order, 0);

  // the Jacobian base a delays the effect of coefficient k on the residual
  // to t^(k+a), so both the working orders and the stopping test shift by a
  int a = 0;
  int gap = 0;
  {
    std::vector<Series> z0;
    for (const auto& s : start) z0.push_back(s.truncated(target + extra));
    const auto zz = as_exact(z0, target + extra);
    const MatrixSeriesXcd A = linearize(evaluate(jacobian(f), zz, target + extra));
    if (!A.coeffs.empty()) a = std::max(A.base, 0);
    const std::vector<Series> fz = evaluate(f, zz, target + extra);
    if (!all_zero(fz)) gap = linearize(std::span<const Series>(fz)).base - a;
  }
  const int cap = target + extra + a;
  const int needed = target + a;

  std::vector<Series> z;
  for (const auto& s : start) z.push_back(s.truncated(cap).with_order(cap));

  NewtonRun r;
  auto finish = [&](RunStatus st, int res) {
    r.status = st;
    r.solution.clear();
    for (const auto& s : z) r.solution.push_back(s.truncated(target).with_order(target));
    r.residual_order = res;
    r.residual_vanishes = res > evaluation_ceiling(f, r.solution);
    r.converged_order = std::min(target, res - 1 - a);
    return r;
  };
  auto truncated_residual = [&]() {
    std::vector<Series> zt;
    for (const auto& s : z) zt.push_back(s.truncated(target));
    return residual_order(f, zt, opts.residual_tol);
  };

  int best = truncated_residual();
  if (best > needed) return finish(RunStatus::Converged, best);

  int work = std::min(std::max(4, 2 * gap + 2), cap);

  int stalled = 0;
  int res = best;
  for (int step = 0; step < opts.max_steps; ++step) {
    StepResult st = newton_step(f, z, work, opts, false);
    if (opts.observer) opts.observer(step, st.block, st.rhs);
    for (std::size_t j = 0; j < z.size(); ++j) {
      z[j] = z[j].truncated(work).with_order(work) + st.dz[j].truncated(work).with_order(work);
    }
    res = truncated_residual();
    r.steps.push_back({work, res, st.path, st.exact});
    if (res > needed) return finish(RunStatus::Converged, res);
    if (res <= best) {
      if (++stalled >= 2) return finish(RunStatus::Stagnation, res);
    } else {
      stalled = 0;
      best = res;
    }
    work = std::min(2 * work, cap);
  }
  return finish(RunStatus::MaxSteps, res);
}

}  // namespace snewton

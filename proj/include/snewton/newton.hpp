#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snewton/poly.hpp"
#include "snewton/series.hpp"
#include "snewton/serieslinalg.hpp"

namespace snewton {

enum class StartKind { RegularStart, SingularStart, EmptyAugmented };

struct StartClassification {
  StartKind kind = StartKind::RegularStart;
  int rank = 0;  // numeric rank of the augmented Jacobian, -1 when no point
};

const char* to_string(StartKind k);

enum class SolvePath { Staggered, Block };

const char* to_string(SolvePath p);

/// Called with the assembled block matrix and stacked right hand side of
/// every Newton step.
using BlockObserver = std::function<void(int step, const Eigen::MatrixXcd& block, const Eigen::VectorXcd& rhs)>;

struct NewtonOptions {
  int target_degree = 8;
  int max_steps = 12;
  /// Terms carried beyond target_degree during the iteration.
  int extra_order = 2;
  double rcond_threshold = 1e-8;
  double residual_tol = 1e-10;
  double rank_tol = 1e-8;
  double start_tol = 1e-8;
  EchelonMode mode = EchelonMode::Graded;
  BlockObserver observer;
};

struct StepResult {
  std::vector<Series> dz;
  bool exact = true;
  SolvePath path = SolvePath::Staggered;
  int a = 0;  // base of the Jacobian series
  int b = 0;  // base of the residual series
  bool leading_regular = false;
  Eigen::MatrixXcd block;  // filled only when requested
  Eigen::VectorXcd rhs;
};

struct StepRecord {
  int work_order = 0;
  int residual_order = 0;
  SolvePath path = SolvePath::Staggered;
  bool exact = true;
};

enum class RunStatus { Converged, Stagnation, MaxSteps };

const char* to_string(RunStatus s);

struct NewtonRun {
  std::vector<Series> solution;
  std::vector<StepRecord> steps;
  int converged_order = -1;
  int residual_order = 0;
  /// residual_order is past the exact evaluation degree of f(solution)
  bool residual_vanishes = false;
  RunStatus status = RunStatus::MaxSteps;
};

/// Decides between a regular and a singular start from the rank of the
/// Jacobian of (t, f) at p = (t, x_1..x_n). Throws NotOnVariety when p has a
/// nonzero t-coordinate or |f_i(p)| > start_tol.
StartClassification classify_start(const PolySystem& f, std::span<const Complex> p, double start_tol = 1e-8,
                                   double rank_tol = 1e-8);

/// One Newton update J(z) dz = -f(z) with z taken as exact and every
/// series known through t^work_order.
StepResult newton_step(const PolySystem& f, std::span<const Series> z, int work_order,
                       const NewtonOptions& opts = {}, bool keep_block = false);

/// Largest exponent that can occur in f(z) when z is read as polynomials.
int evaluation_ceiling(const PolySystem& f, std::span<const Series> z);

/// Lowest power of t in f(z) with a coefficient above
/// tol * max(1, max |z coefficient|), z read as polynomials; returns
/// evaluation_ceiling + 1 when f(z) vanishes identically.
int residual_order(const PolySystem& f, std::span<const Series> z, double tol = 1e-10);

NewtonRun run(const PolySystem& f, std::span<const Series> start, const NewtonOptions& opts);

}  // namespace snewton

#include "snewton/serieslinalg.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdio>
#include <limits>

namespace snewton {

MatrixSeriesXcd linearize(const SeriesMatrix& J) {
  if (J.empty() || J.front().empty()) throw EmptyMatrix();
  const auto rows = static_cast<Eigen::Index>(J.size());
  const auto cols = static_cast<Eigen::Index>(J.front().size());
  int base = std::numeric_limits<int>::max();
  int top = std::numeric_limits<int>::max();
  for (const auto& row : J) {
    if (static_cast<Eigen::Index>(row.size()) != cols) throw DimensionMismatch("ragged series matrix");
    for (const auto& s : row) {
      if (!s.is_zero()) base = std::min(base, s.base());
      top = std::min(top, s.order());
    }
  }
  MatrixSeriesXcd A;
  A.nrows = rows;
  A.ncols = cols;
  if (base == std::numeric_limits<int>::max()) {
    A.base = top + 1;
    return A;
  }
  A.base = base;
  for (int e = base; e <= top; ++e) {
    Eigen::MatrixXcd Ak(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) Ak(i, j) = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].coeff(e);
    A.coeffs.push_back(std::move(Ak));
  }
  return A;
}

VectorSeriesXcd linearize(std::span<const Series> v) {
  if (v.empty()) throw EmptyMatrix();
  int base = std::numeric_limits<int>::max();
  int top = std::numeric_limits<int>::max();
  for (const auto& s : v) {
    if (!s.is_zero()) base = std::min(base, s.base());
    top = std::min(top, s.order());
  }
  VectorSeriesXcd b;
  b.size = static_cast<Eigen::Index>(v.size());
  if (base == std::numeric_limits<int>::max()) {
    b.base = top + 1;
    return b;
  }
  b.base = base;
  for (int e = base; e <= top; ++e) {
    Eigen::VectorXcd bk(b.size);
    for (Eigen::Index i = 0; i < b.size; ++i) bk(i) = v[static_cast<std::size_t>(i)].coeff(e);
    b.coeffs.push_back(std::move(bk));
  }
  return b;
}

double reciprocal_condition(const Eigen::MatrixXcd& A) {
  if (A.size() == 0 || A.rows() < A.cols()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

int numeric_rank(const Eigen::MatrixXcd& A, double tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > tol * s(0)).count());
}

Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& A, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0) r = static_cast<int>((s.array() > tol * s(0)).count());
  return svd.matrixV().rightCols(A.cols() - r);
}

VectorSeriesXcd staggered_solve(const MatrixSeriesXcd& A, const VectorSeriesXcd& b, int d, double rcond_threshold) {
  if (A.coeffs.empty()) throw SingularLeadingBlock(0.0);
  if (A.rows() != b.size) throw DimensionMismatch("matrix and right hand side row counts differ");
  const Eigen::MatrixXcd& A0 = A.coeffs.front();
  const double rc = reciprocal_condition(A0);
  if (!(rc > rcond_threshold)) throw SingularLeadingBlock(rc);

  VectorSeriesXcd x;
  x.base = b.base - A.base;
  x.size = A.cols();
  x.coeffs.reserve(static_cast<std::size_t>(d + 1));

  auto rhs = [&](int k) {
    Eigen::VectorXcd r = b.coeff(k);
    for (int j = 1; j <= k && j <= A.degree(); ++j) r.noalias() -= A.coeffs[static_cast<std::size_t>(j)] * x.coeffs[static_cast<std::size_t>(k - j)];
    return r;
  };
  if (A0.rows() == A0.cols()) {
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A0);
    for (int k = 0; k <= d; ++k) x.coeffs.push_back(lu.solve(rhs(k)));
  } else {
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A0);
    for (int k = 0; k <= d; ++k) x.coeffs.push_back(qr.solve(rhs(k)));
  }
  return x;
}

Eigen::MatrixXcd assemble_block(const MatrixSeriesXcd& A, int d) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero((d + 1) * m, (d + 1) * n);
  for (int i = 0; i <= d; ++i) {
    for (int j = std::max(0, i - A.degree()); j <= i; ++j) {
      B.block(i * m, j * n, m, n) = A.coeffs[static_cast<std::size_t>(i - j)];
    }
  }
  return B;
}

Eigen::VectorXcd stack(const VectorSeriesXcd& b, int d) {
  Eigen::VectorXcd r(b.size * (d + 1));
  for (int k = 0; k <= d; ++k) r.segment(k * b.size, b.size) = b.coeff(k);
  return r;
}

// echelon form ---------------------------------------------------------------

Eigen::MatrixXcd EchelonDecomposition::reduce(const Eigen::MatrixXcd& M) const {
  Eigen::MatrixXcd W(M.rows(), M.cols());
  for (Eigen::Index i = 0; i < M.rows(); ++i) W.row(i) = M.row(row_perm[static_cast<std::size_t>(i)]);
  for (const auto& op : colops) {
    if (op.swapped_with != op.column) W.col(op.column).swap(W.col(op.swapped_with));
    for (Eigen::Index c = 0; c < op.multipliers.size(); ++c) {
      if (op.multipliers(c) != 0.0) W.col(op.column + 1 + c) -= op.multipliers(c) * W.col(op.column);
    }
  }
  return W;
}

Eigen::VectorXcd EchelonDecomposition::apply_column_ops(Eigen::VectorXcd y) const {
  for (auto it = colops.rbegin(); it != colops.rend(); ++it) {
    const auto& op = *it;
    const Eigen::Index tail = op.multipliers.size();
    if (tail > 0) y(op.column) -= op.multipliers.cwiseProduct(y.segment(op.column + 1, tail)).sum();
    if (op.swapped_with != op.column) std::swap(y(op.column), y(op.swapped_with));
  }
  return y;
}

EchelonDecomposition echelon_decompose(const Eigen::MatrixXcd& A, double zero_tol) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  EchelonDecomposition E;
  const double scale = A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
  const double tol = zero_tol * scale;

  // zero rows first, otherwise stable
  for (Eigen::Index i = 0; i < m; ++i)
    if (scale == 0.0 || A.row(i).cwiseAbs().maxCoeff() <= tol) E.row_perm.push_back(static_cast<int>(i));
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(scale == 0.0 || A.row(i).cwiseAbs().maxCoeff() <= tol)) E.row_perm.push_back(static_cast<int>(i));

  Eigen::MatrixXcd W(m, n);
  for (Eigen::Index i = 0; i < m; ++i) W.row(i) = A.row(E.row_perm[static_cast<std::size_t>(i)]);

  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m && k < n; ++i) {
    Eigen::Index best = k;
    double best_abs = std::abs(W(i, k));
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const double a = std::abs(W(i, j));
      if (a > best_abs) {  // ties keep the lowest column
        best = j;
        best_abs = a;
      }
    }
    if (best_abs <= tol) {
      W.row(i).tail(n - k).setZero();
      continue;
    }
    ColumnOp op;
    op.column = static_cast<int>(k);
    op.swapped_with = static_cast<int>(best);
    if (best != k) W.col(k).swap(W.col(best));
    op.multipliers = Eigen::VectorXcd::Zero(n - k - 1);
    const std::complex<double> pivot = W(i, k);
    for (Eigen::Index c = k + 1; c < n; ++c) {
      if (W(i, c) == 0.0) continue;
      const std::complex<double> mu = W(i, c) / pivot;
      op.multipliers(c - k - 1) = mu;
      W.col(c) -= mu * W.col(k);
      W(i, c) = 0.0;
    }
    E.colops.push_back(std::move(op));
    E.pivot_rows.push_back(static_cast<int>(i));
    ++k;
  }
  E.rank = static_cast<int>(k);
  E.L = std::move(W);
  return E;
}

EchelonSolution echelon_solve(const EchelonDecomposition& E, const Eigen::VectorXcd& rhs, EchelonMode mode) {
  const Eigen::Index m = E.L.rows();
  const Eigen::Index n = E.L.cols();
  if (rhs.size() != m) throw DimensionMismatch("right hand side length differs from row count");
  Eigen::VectorXcd r(m);
  for (Eigen::Index i = 0; i < m; ++i) r(i) = rhs(E.row_perm[static_cast<std::size_t>(i)]);

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  for (int c = 0; c < E.rank; ++c) {
    const int p = E.pivot_rows[static_cast<std::size_t>(c)];
    std::complex<double> acc = r(p);
    if (c > 0) acc -= E.L.row(p).head(c).transpose().cwiseProduct(y.head(c)).sum();
    y(c) = acc / E.L(p, c);
  }

  const Eigen::VectorXcd res = E.L * y - r;
  const double lmax = E.L.size() == 0 ? 0.0 : E.L.cwiseAbs().maxCoeff();
  const double ymax = y.size() == 0 ? 0.0 : y.cwiseAbs().maxCoeff();
  const double rmax = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
  const double bound = 1e-9 * (lmax * ymax + rmax);
  EchelonSolution sol;
  sol.exact = res.size() == 0 || res.cwiseAbs().maxCoeff() <= bound;

  if (!sol.exact && mode == EchelonMode::LeastSquares && E.rank > 0) {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(E.L.leftCols(E.rank));
    y.head(E.rank) = qr.solve(r);
  }
  sol.x = E.apply_column_ops(std::move(y));
  return sol;
}

BlockSolution block_solve(const MatrixSeriesXcd& A, const VectorSeriesXcd& b, int d, const BlockSolveOptions& opts) {
  if (A.rows() != b.size) throw DimensionMismatch("matrix and right hand side row counts differ");
  BlockSolution out;
  out.x.base = b.base - A.base;
  out.x.size = A.cols();
  if (A.coeffs.empty()) {
    out.x.coeffs.assign(static_cast<std::size_t>(d + 1), Eigen::VectorXcd::Zero(A.cols()));
    out.exact = b.coeffs.empty();
    return out;
  }
  const Eigen::MatrixXcd& A0 = A.coeffs.front();
  const bool structured = opts.use_structure && A0.rows() == A0.cols() && reciprocal_condition(A0) > opts.rcond_threshold;
  if (structured) {
    const EchelonDecomposition E0 = echelon_decompose(A0);
    out.x.coeffs.reserve(static_cast<std::size_t>(d + 1));
    for (int k = 0; k <= d; ++k) {
      Eigen::VectorXcd r = b.coeff(k);
      for (int j = 1; j <= k && j <= A.degree(); ++j) r.noalias() -= A.coeffs[static_cast<std::size_t>(j)] * out.x.coeffs[static_cast<std::size_t>(k - j)];
      auto sol = echelon_solve(E0, r, opts.mode);
      out.exact = out.exact && sol.exact;
      out.x.coeffs.push_back(std::move(sol.x));
    }
    return out;
  }
  const EchelonDecomposition E = echelon_decompose(assemble_block(A, d));
  auto sol = echelon_solve(E, stack(b, d), opts.mode);
  out.exact = sol.exact;
  for (int k = 0; k <= d; ++k) out.x.coeffs.push_back(sol.x.segment(k * A.cols(), A.cols()));
  return out;
}

std::string dump_grid(const Eigen::MatrixXcd& M) {
  std::string out;
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const auto v = M(i, j);
      if (v.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%12.5g", v.real());
      } else {
        std::snprintf(buf, sizeof buf, "%12.5g%+.5gi", v.real(), v.imag());
      }
      if (j > 0) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace snewton

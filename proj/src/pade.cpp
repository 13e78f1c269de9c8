#include "snewton/pade.hpp"

#include <Eigen/LU>

namespace snewton {

namespace {

std::complex<double> horner(const std::vector<std::complex<double>>& c, std::complex<double> t) {
  std::complex<double> acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace

PadeApproximant pade_from_series(const Series& s, int L, int M) {
  if (L < 0 || M < 0) throw InputError("Pade degrees must be nonnegative");
  if (!s.is_zero() && s.base() < 0) throw InputError("Pade approximant needs a series without negative powers");
  if (s.order() < L + M) throw InputError("series is not known through t^(L+M)");
  auto c = [&](int k) { return k < 0 ? std::complex<double>(0) : s.coeff(k); };

  PadeApproximant p;
  p.den.assign(static_cast<std::size_t>(M + 1), 0.0);
  p.den[0] = 1.0;
  if (M > 0) {
    // sum_{j=0..M} q_j c_{L+1+r-j} = 0 for r = 0..M-1
    Eigen::MatrixXcd T(M, M);
    Eigen::VectorXcd rhs(M);
    for (int r = 0; r < M; ++r) {
      for (int col = 0; col < M; ++col) T(r, col) = c(L + r - col);
      rhs(r) = -c(L + 1 + r);
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> check(T);
    check.setThreshold(1e-12);
    Eigen::VectorXcd q = Eigen::VectorXcd::Zero(M);
    if (check.rank() < M) {
      // a polynomial of degree <= L leaves q = 0 as the consistent answer
      double scale = 0.0;
      for (int k = 0; k <= L + M; ++k) scale = std::max(scale, std::abs(c(k)));
      if (rhs.cwiseAbs().maxCoeff() > 1e-14 * std::max(scale, 1.0)) throw DegenerateDenominator();
    } else {
      q = Eigen::PartialPivLU<Eigen::MatrixXcd>(T).solve(rhs);
    }
    for (int j = 0; j < M; ++j) p.den[static_cast<std::size_t>(j + 1)] = q(j);
  }
  p.num.assign(static_cast<std::size_t>(L + 1), 0.0);
  for (int i = 0; i <= L; ++i) {
    std::complex<double> acc(0);
    for (int j = 0; j <= std::min(i, M); ++j) acc += p.den[static_cast<std::size_t>(j)] * c(i - j);
    p.num[static_cast<std::size_t>(i)] = acc;
  }
  return p;
}

std::complex<double> eval_pade(const PadeApproximant& p, std::complex<double> t0) {
  const std::complex<double> den = horner(p.den, t0);
  if (std::abs(den) < 1e-14) throw PoleHit();
  return horner(p.num, t0) / den;
}

}  // namespace snewton

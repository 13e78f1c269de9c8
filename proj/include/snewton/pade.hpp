#pragma once

#include <complex>
#include <vector>

#include "snewton/series.hpp"

namespace snewton {

/// num(t) / den(t) with den[0] = 1.
struct PadeApproximant {
  std::vector<std::complex<double>> num;
  std::vector<std::complex<double>> den;
};

/// [L/M] approximant matching s through t^(L+M). Throws
/// DegenerateDenominator when the denominator system is singular.
PadeApproximant pade_from_series(const Series& s, int L, int M);

/// Throws PoleHit when |den(t0)| < 1e-14.
std::complex<double> eval_pade(const PadeApproximant& p, std::complex<double> t0);

}  // namespace snewton

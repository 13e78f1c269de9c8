#pragma once

#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <random>
#include <vector>

#include "snewton/series.hpp"

namespace testing {

using snewton::Series;
using C = std::complex<double>;

inline C rand_complex(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

inline Series rand_series(std::mt19937& rng, int base, int len, int order) {
  std::vector<C> c(static_cast<std::size_t>(len));
  for (auto& v : c) v = rand_complex(rng);
  return Series(base, std::move(c), order);
}

inline double max_diff(const Series& a, const Series& b) {
  const int lo = std::min(a.base(), b.base());
  const int hi = std::max(a.degree(), b.degree());
  double m = 0.0;
  for (int e = lo; e <= hi; ++e) m = std::max(m, std::abs(a.coeff(e) - b.coeff(e)));
  return m;
}

#ifdef SNEWTON_FIXTURES
inline std::string fixture_path(const std::string& name) { return std::string(SNEWTON_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

}  // namespace testing

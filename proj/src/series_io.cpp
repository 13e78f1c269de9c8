#include "snewton/series_io.hpp"

#include <cmath>
#include <cstdio>

namespace snewton {

namespace {

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

std::string format_complex(std::complex<double> c) {
  std::string out = "(" + sci(c.real());
  // print the imaginary part with an explicit sign, keeping -0.0 visible
  out += std::signbit(c.imag()) ? " - " : " + ";
  out += sci(std::abs(c.imag())) + "*i)";
  return out;
}

std::string to_string(const Series& s, std::string_view var) {
  if (s.is_zero()) return "0 + O(" + std::string(var) + "^" + std::to_string(s.order() + 1) + ")";
  std::string out;
  const auto c = s.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == std::complex<double>(0)) continue;
    const int e = s.base() + static_cast<int>(k);
    if (!out.empty()) out += " + ";
    out += format_complex(c[k]);
    if (e == 1) {
      out += "*" + std::string(var);
    } else if (e != 0) {
      out += "*" + std::string(var) + "^" + std::to_string(e);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

nlohmann::ordered_json to_json(const Series& s) {
  nlohmann::ordered_json j;
  j["base"] = s.base();
  j["order"] = s.order();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : s.coeffs()) arr.push_back({c.real(), c.imag()});
  j["coeffs"] = std::move(arr);
  return j;
}

Series series_from_json(const nlohmann::json& j) {
  std::vector<std::complex<double>> c;
  for (const auto& pair : j.at("coeffs")) c.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return Series(j.at("base").get<int>(), std::move(c), j.at("order").get<int>());
}

}  // namespace snewton

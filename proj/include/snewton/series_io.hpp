#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "snewton/series.hpp"

namespace snewton {

/// Renders terms in increasing exponent order, e.g.
/// `(-5.0000000000000000e-01 - 5.0000000000000000e-01*i)*t^2`.
std::string to_string(const Series& s, std::string_view var = "t");

/// `(re + im*i)` with 17 significant digits.
std::string format_complex(std::complex<double> c);

/// `{"base": b, "order": d, "coeffs": [[re, im], ...]}`
nlohmann::ordered_json to_json(const Series& s);
Series series_from_json(const nlohmann::json& j);

}  // namespace snewton

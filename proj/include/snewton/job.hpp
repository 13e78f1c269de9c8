#pragma once

// Job files: a polynomial system plus transforms, starting data and
// commands, e.g.
//
//   param t;
//   vars x1, x2, x3;
//   poly x1^2 + x2^2 + x3^2 - 4;
//   poly (x1 - 1)^2 + x2^2 - 1;
//   start point 0, 0, 0, 2;
//   transform sub x1 = 2*t^2;
//   start series x2 = 2*t; x3 = 2;
//   solve 16;

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snewton/poly.hpp"
#include "snewton/series.hpp"

namespace snewton {

struct Transform {
  enum class Kind { Substitute, Ramify, Unimodular };
  Kind kind = Kind::Substitute;
  std::string var;              // Substitute
  std::vector<Complex> g;       // Substitute: coefficients of t^0, t^1, ...
  int ramification = 1;         // Ramify
  UnimodularTransform::IntMatrix matrix;  // Unimodular
  std::vector<std::string> new_names;     // Unimodular, empty keeps the names
  int line = 0;
};

/// `start series x = ...; y = ...;` with each right hand side a Laurent
/// polynomial in the parameter.
struct SeriesStart {
  std::vector<std::string> names;
  std::vector<Polynomial> values;  // nvars == 0
  int line = 0;
};

struct Command {
  enum class Kind { Solve, Pade, Residual, Classify };
  Kind kind = Kind::Solve;
  int degree = 0;
  int L = 0;
  int M = 0;
};

struct JobSpec {
  PolySystem system;
  std::vector<Transform> transforms;
  std::optional<std::vector<Complex>> point;  // parameter value first
  bool empty_augmented = false;               // `start none;`
  std::vector<SeriesStart> series_starts;
  std::vector<Command> commands;
};

/// Throws SyntaxError, UnknownVariable or InputError.
JobSpec parse_job(std::string_view text);

/// The system after every transform, plus what is needed to move series
/// between the two coordinate systems.
struct PreparedJob {
  PolySystem original;
  PolySystem transformed;
  /// The original system with every ramification applied; series mapped
  /// back by to_original solve this one.
  PolySystem check_system;
  bool has_transforms = false;
};

PreparedJob prepare(const JobSpec& job);

/// Starting series in transformed coordinates, known through t^order.
/// Starts written in the original variables are carried through the
/// transforms. Laurent starts are refused unless a ramification or
/// unimodular transform is present, and must not keep negative powers
/// after the transforms.
std::vector<Series> start_series(const JobSpec& job, const PreparedJob& prep, const SeriesStart& s, int order);

/// Series in transformed coordinates rewritten in the original variables
/// (in the ramified parameter), known through t^order.
std::vector<Series> to_original(const JobSpec& job, std::span<const Series> z, int order);

/// s^e for any integer e; negative powers need a nonzero s.
Series series_pow(const Series& s, int e, int order);

}  // namespace snewton

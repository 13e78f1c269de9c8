#include "snewton/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "snewton/job.hpp"
#include "snewton/pade.hpp"
#include "snewton/series_io.hpp"

namespace snewton {

using json = nlohmann::ordered_json;

nlohmann::ordered_json residual_json(int order, bool vanishes) {
  if (vanishes) return "inf";
  return order;
}

nlohmann::ordered_json report_json(const NewtonRun& run, const std::vector<std::string>& names) {
  json j;
  j["status"] = to_string(run.status);
  j["residual_order"] = residual_json(run.residual_order, run.residual_vanishes);
  j["converged_order"] = run.converged_order;
  json sol = json::object();
  for (std::size_t k = 0; k < run.solution.size(); ++k) sol[names[k]] = to_json(run.solution[k]);
  j["solution"] = std::move(sol);
  json steps = json::array();
  for (const auto& s : run.steps) {
    json st;
    st["work_order"] = s.work_order;
    st["residual_order"] = s.residual_order;
    st["path"] = to_string(s.path);
    st["exact"] = s.exact;
    steps.push_back(std::move(st));
  }
  j["steps"] = std::move(steps);
  return j;
}

namespace {

struct Settings {
  std::string file;
  std::string solution_file;
  std::string series_text;
  std::string param = "t";
  std::vector<double> at;
  int degree = -1;
  int max_steps = 12;
  int L = 0;
  int M = 0;
  bool json_out = false;
  bool dump_blocks = false;
  double tol_rank = 1e-8;
  double tol_residual = 1e-10;
  double tol_start = 1e-8;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string residual_text(const json& r) { return r.is_string() ? std::string("inf") : std::to_string(r.get<int>()); }

json complex_array(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back({c.real(), c.imag()});
  return a;
}

std::string polynomial_text(const std::vector<Complex>& c, const std::string& t) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k > 0) out += " + ";
    out += format_complex(c[k]);
    if (k == 1) out += "*" + t;
    if (k > 1) out += "*" + t + "^" + std::to_string(k);
  }
  return out;
}

class Session {
 public:
  Session(const Settings& s, std::ostream& out, std::ostream& err) : s_(s), out_(out), err_(err), s_L_(s.L), s_M_(s.M) {}

  int classify() {
    load();
    json j = classification_json();
    j["steps"] = json::array();
    emit_classification(j);
    return kExitOk;
  }

  int solve(int degree) {
    load();
    const json j = solve_json(degree);
    if (s_.json_out) {
      out_ << j.dump(2) << "\n";
    } else {
      print_solve(j);
    }
    return solve_exit_;
  }

  int residual() {
    load();
    json j;
    json runs = json::array();
    if (!s_.solution_file.empty()) {
      const auto doc = nlohmann::json::parse(read_file(s_.solution_file));
      for (const auto& r : doc.at("runs")) {
        std::vector<Series> z;
        for (const auto& name : prep_.transformed.var_names) z.push_back(series_from_json(r.at("solution").at(name)));
        runs.push_back(residual_entry(z));
      }
    } else {
      for (const auto& z : starts(std::max(s_.degree, 0) + 8)) runs.push_back(residual_entry(z));
    }
    j["runs"] = std::move(runs);
    if (s_.json_out) {
      out_ << j.dump(2) << "\n";
    } else {
      int k = 1;
      for (const auto& r : j["runs"]) {
        out_ << "run " << k++ << ": residual order " << residual_text(r["residual_order"]);
        if (r.contains("original_residual_order")) out_ << ", in the original system " << residual_text(r["original_residual_order"]);
        out_ << "\n";
      }
    }
    return kExitOk;
  }

  int pade() {
    if (!s_.series_text.empty()) {
      const Polynomial p = parse_polynomial(s_.series_text, {}, s_.param, false);
      int deg = 0;
      for (const auto& m : p.terms) deg = std::max(deg, m.t_exp);
      std::vector<Complex> c(static_cast<std::size_t>(deg + 1), Complex(0));
      for (const auto& m : p.terms) c[static_cast<std::size_t>(m.t_exp)] += m.coeff;
      const Series x(0, std::move(c), std::max(deg, s_.L + s_.M));
      const json j = pade_json(x);
      if (s_.json_out) {
        out_ << j.dump(2) << "\n";
      } else {
        print_pade(j, "");
      }
      return kExitOk;
    }
    load();
    const int degree = std::max(s_.degree, s_.L + s_.M);
    const json sol = solve_json(degree);
    json j;
    json runs = json::array();
    for (const auto& r : sol["runs"]) {
      json entry = json::object();
      for (const auto& name : prep_.transformed.var_names) {
        entry[name] = pade_json(series_from_json(r["solution"][name]));
      }
      runs.push_back(std::move(entry));
    }
    j["runs"] = std::move(runs);
    if (s_.json_out) {
      out_ << j.dump(2) << "\n";
    } else {
      int k = 1;
      for (const auto& r : j["runs"]) {
        out_ << "run " << k++ << ":\n";
        for (const auto& [name, pj] : r.items()) print_pade(pj, name);
      }
    }
    return solve_exit_;
  }

  int run_commands() {
    load();
    if (job_.commands.empty()) throw InputError("the file lists no commands");
    json results = json::array();
    int code = kExitOk;
    std::optional<json> last_solve;
    for (const auto& c : job_.commands) {
      json r;
      switch (c.kind) {
        case Command::Kind::Classify:
          r = classification_json();
          r = json{{"command", "classify"}, {"classification", r["classification"]}, {"rank", r["rank"]}};
          break;
        case Command::Kind::Solve:
          last_solve = solve_json(c.degree);
          r = json{{"command", "solve"}, {"degree", c.degree}, {"runs", (*last_solve)["runs"]}};
          code = std::max(code, solve_exit_);
          break;
        case Command::Kind::Pade: {
          if (!last_solve) last_solve = solve_json(c.L + c.M);
          json runs = json::array();
          for (const auto& run : (*last_solve)["runs"]) {
            json entry = json::object();
            for (const auto& name : prep_.transformed.var_names) {
              const Series x = series_from_json(run["solution"][name]);
              s_L_ = c.L;
              s_M_ = c.M;
              entry[name] = pade_json(x);
            }
            runs.push_back(std::move(entry));
          }
          r = json{{"command", "pade"}, {"L", c.L}, {"M", c.M}, {"runs", std::move(runs)}};
          break;
        }
        case Command::Kind::Residual: {
          json runs = json::array();
          if (last_solve) {
            for (const auto& run : (*last_solve)["runs"]) {
              std::vector<Series> z;
              for (const auto& name : prep_.transformed.var_names) z.push_back(series_from_json(run["solution"][name]));
              runs.push_back(residual_entry(z));
            }
          } else {
            for (const auto& z : starts(8)) runs.push_back(residual_entry(z));
          }
          r = json{{"command", "residual"}, {"runs", std::move(runs)}};
          break;
        }
      }
      results.push_back(std::move(r));
    }
    json j{{"commands", std::move(results)}};
    out_ << j.dump(2) << "\n";
    return code;
  }

 private:
  void load() {
    job_ = parse_job(read_file(s_.file));
    prep_ = prepare(job_);
  }

  NewtonOptions options(int degree) const {
    NewtonOptions o;
    o.target_degree = degree;
    o.max_steps = s_.max_steps;
    o.rank_tol = s_.tol_rank;
    o.residual_tol = s_.tol_residual;
    o.start_tol = s_.tol_start;
    if (s_.dump_blocks) {
      std::ostream* err = &err_;
      o.observer = [err](int step, const Eigen::MatrixXcd& block, const Eigen::VectorXcd& rhs) {
        *err << "step " << step + 1 << " block " << block.rows() << "x" << block.cols() << "\n"
             << dump_grid(block) << "rhs\n"
             << dump_grid(rhs);
      };
    }
    return o;
  }

  int file_degree() const {
    for (const auto& c : job_.commands)
      if (c.kind == Command::Kind::Solve) return c.degree;
    return 8;
  }

  std::vector<std::vector<Series>> starts(int order) const {
    std::vector<std::vector<Series>> out;
    for (const auto& s : job_.series_starts) out.push_back(start_series(job_, prep_, s, order));
    if (out.empty() && job_.point) {
      const auto& p = *job_.point;
      if (static_cast<int>(p.size()) == prep_.transformed.n + 1 && p[0] == Complex(0)) {
        std::vector<Series> z;
        for (std::size_t k = 1; k < p.size(); ++k) z.push_back(Series::constant(p[k], order));
        out.push_back(std::move(z));
      }
    }
    if (out.empty()) throw InputError("no usable start: give 'start series' in the transformed variables");
    return out;
  }

  json classification_json() const {
    json j;
    if (job_.empty_augmented) {
      j["classification"] = to_string(StartKind::EmptyAugmented);
      j["rank"] = nullptr;
      return j;
    }
    std::vector<Complex> p;
    const PolySystem* f = &prep_.transformed;
    if (job_.point) {
      p = *job_.point;
      if (static_cast<int>(p.size()) == prep_.original.n + 1) {
        f = &prep_.original;
      } else if (static_cast<int>(p.size()) != prep_.transformed.n + 1) {
        throw DimensionMismatch("start point has " + std::to_string(p.size()) + " values, expected the parameter and " +
                                std::to_string(prep_.original.n) + " coordinates");
      }
    } else if (!job_.series_starts.empty()) {
      p = start_point(starts(0).front());
    } else {
      throw InputError("nothing to classify: give 'start point', 'start series' or 'start none'");
    }
    const auto c = classify_start(*f, p, s_.tol_start, s_.tol_rank);
    j["classification"] = to_string(c.kind);
    j["rank"] = c.rank;
    return j;
  }

  static std::vector<Complex> start_point(const std::vector<Series>& z) {
    std::vector<Complex> p{Complex(0)};
    for (const auto& s : z) p.push_back(s.coeff(0));
    return p;
  }

  void emit_classification(const json& j) {
    if (s_.json_out) {
      out_ << j.dump(2) << "\n";
    } else {
      out_ << j["classification"].get<std::string>() << "\n";
    }
  }

  json residual_entry(const std::vector<Series>& z) const {
    const int r = residual_order(prep_.transformed, z, s_.tol_residual);
    json e;
    e["residual_order"] = residual_json(r, r > evaluation_ceiling(prep_.transformed, z));
    if (prep_.has_transforms) {
      const int order = max_degree(z) + 8;
      const auto x = to_original(job_, z, order);
      const int ro = residual_order(prep_.check_system, x, s_.tol_residual);
      e["original_residual_order"] = residual_json(ro, ro > evaluation_ceiling(prep_.check_system, x));
    }
    return e;
  }

  static int max_degree(const std::vector<Series>& z) {
    int d = 0;
    for (const auto& s : z) d = std::max(d, s.degree());
    return d;
  }

  void failed_run(json& r, const std::string& what) {
    r["status"] = "Failed";
    r["error"] = what;
    r["steps"] = json::array();
    solve_exit_ = kExitNumeric;
  }

  json solve_json(int degree) {
    if (degree < 0) degree = file_degree();
    solve_exit_ = kExitOk;
    json j;
    j["variables"] = prep_.transformed.var_names;
    j["parameter"] = prep_.transformed.t_name;
    j["target_degree"] = degree;
    json runs = json::array();
    const NewtonOptions opts = options(degree);
    for (const auto& z0 : starts(degree + opts.extra_order)) {
      json r;
      try {
        const auto c = classify_start(prep_.transformed, start_point(z0), s_.tol_start, s_.tol_rank);
        r["classification"] = to_string(c.kind);
      } catch (const NotOnVariety&) {
        r["classification"] = "NotOnVariety";
      }
      NewtonRun run;
      try {
        run = snewton::run(prep_.transformed, z0, opts);
      } catch (const ZeroJacobian& e) {
        failed_run(r, e.what());
        runs.push_back(std::move(r));
        continue;
      } catch (const SingularLeadingBlock& e) {
        failed_run(r, e.what());
        runs.push_back(std::move(r));
        continue;
      }
      r.update(report_json(run, prep_.transformed.var_names));
      if (prep_.has_transforms) {
        const auto x = to_original(job_, run.solution, degree);
        std::vector<Series> xt;
        for (const auto& s : x) xt.push_back(s.truncated(degree));
        json orig = json::object();
        for (std::size_t k = 0; k < xt.size(); ++k) orig[prep_.original.var_names[k]] = to_json(xt[k]);
        r["original_parameter"] = prep_.check_system.t_name;
        r["original"] = std::move(orig);
        const int ro = residual_order(prep_.check_system, xt, s_.tol_residual);
        r["original_residual_order"] = residual_json(ro, ro > evaluation_ceiling(prep_.check_system, xt));
      }
      if (run.status != RunStatus::Converged) solve_exit_ = kExitNumeric;
      runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    return j;
  }

  void print_solve(const json& j) {
    const auto& names = prep_.transformed.var_names;
    int k = 1;
    for (const auto& r : j["runs"]) {
      out_ << "run " << k++ << ": " << r["classification"].get<std::string>() << ", " << r["status"].get<std::string>();
      if (r.contains("error")) {
        out_ << ": " << r["error"].get<std::string>() << "\n";
        continue;
      }
      out_ << ", residual order " << residual_text(r["residual_order"]) << "\n";
      int s = 1;
      for (const auto& st : r["steps"]) {
        out_ << "  step " << s++ << ": work order " << st["work_order"].get<int>() << ", residual order "
             << st["residual_order"].get<int>() << ", " << st["path"].get<std::string>()
             << (st["exact"].get<bool>() ? "" : " (inexact)") << "\n";
      }
      for (const auto& name : names) {
        out_ << "  " << name << " = " << to_string(series_from_json(r["solution"][name]), prep_.transformed.t_name) << "\n";
      }
      if (r.contains("original")) {
        for (const auto& [name, sj] : r["original"].items()) {
          out_ << "  " << name << " = " << to_string(series_from_json(sj), prep_.check_system.t_name) << "  (original)\n";
        }
      }
    }
  }

  json pade_json(const Series& x) const {
    const PadeApproximant p = pade_from_series(x, s_L_, s_M_);
    json j;
    j["num"] = complex_array(p.num);
    j["den"] = complex_array(p.den);
    if (!s_.at.empty()) {
      json vals = json::array();
      for (double t : s_.at) {
        json v;
        v["t"] = t;
        try {
          const Complex y = eval_pade(p, Complex(t));
          v["value"] = {y.real(), y.imag()};
        } catch (const PoleHit&) {
          v["value"] = nullptr;
        }
        vals.push_back(std::move(v));
      }
      j["values"] = std::move(vals);
    }
    return j;
  }

  void print_pade(const json& j, const std::string& name) {
    auto coeffs = [](const json& a) {
      std::vector<Complex> c;
      for (const auto& e : a) c.emplace_back(e[0].get<double>(), e[1].get<double>());
      return c;
    };
    const std::string pre = name.empty() ? "" : "  " + name + ": ";
    out_ << pre << "num = " << polynomial_text(coeffs(j["num"]), s_.param) << "\n";
    out_ << pre << "den = " << polynomial_text(coeffs(j["den"]), s_.param) << "\n";
    if (j.contains("values")) {
      for (const auto& v : j["values"]) {
        out_ << pre << "at " << v["t"].get<double>() << ": "
             << (v["value"].is_null() ? std::string("pole") : format_complex({v["value"][0].get<double>(), v["value"][1].get<double>()}))
             << "\n";
      }
    }
  }

  Settings s_;
  std::ostream& out_;
  std::ostream& err_;
  JobSpec job_;
  PreparedJob prep_;
  int s_L_ = 0;
  int s_M_ = 0;
  int solve_exit_ = kExitOk;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Power series solutions of polynomial homotopies by linearized Newton", "snewton"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", s.json_out, "Print JSON instead of text");
  app.add_option("--degree", s.degree, "Target degree of the series")->check(CLI::Range(0, 4096));
  app.add_option("--max-steps", s.max_steps, "Maximum number of Newton steps")->check(CLI::Range(1, 1000));
  app.add_option("--tol-rank", s.tol_rank, "Relative singular value cutoff for rank decisions")->check(CLI::PositiveNumber);
  app.add_option("--tol-residual", s.tol_residual, "Relative cutoff for residual coefficients")->check(CLI::PositiveNumber);
  app.add_option("--tol-start", s.tol_start, "Absolute residual allowed at the start point")->check(CLI::PositiveNumber);
  app.add_flag("--dump-blocks", s.dump_blocks, "Print every assembled block system to stderr");

  auto* classify = app.add_subcommand("classify", "Classify the start point");
  classify->add_option("file", s.file, "Job file")->required();
  auto* solve = app.add_subcommand("solve", "Compute series solutions from every start");
  solve->add_option("file", s.file, "Job file")->required();
  auto* residual = app.add_subcommand("residual", "Residual order of starts or of a stored solution");
  residual->add_option("file", s.file, "Job file")->required();
  residual->add_option("--solution", s.solution_file, "JSON written by 'solve --json'");
  auto* pade = app.add_subcommand("pade", "Pade approximants of computed or given series");
  pade->add_option("L", s.L, "Numerator degree")->required()->check(CLI::Range(0, 1024));
  pade->add_option("M", s.M, "Denominator degree")->required()->check(CLI::Range(0, 1024));
  pade->add_option("file", s.file, "Job file");
  pade->add_option("--series", s.series_text, "Series as a polynomial in the parameter");
  pade->add_option("--param", s.param, "Parameter name for --series");
  pade->add_option("--at", s.at, "Evaluation points");
  auto* runcmd = app.add_subcommand("run", "Execute the commands listed in the file");
  runcmd->add_option("file", s.file, "Job file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "snewton: " << e.what() << "\n";
    return kExitInput;
  }

  Session session(s, out, err);
  try {
    if (*classify) return session.classify();
    if (*solve) return session.solve(s.degree);
    if (*residual) return session.residual();
    if (*pade) {
      if (s.file.empty() == s.series_text.empty()) {
        err << "snewton: pade needs either a job file or --series\n";
        return kExitInput;
      }
      return session.pade();
    }
    if (*runcmd) return session.run_commands();
  } catch (const SyntaxError& e) {
    err << "snewton: " << s.file << ":" << e.what() << "\n";
    return kExitInput;
  } catch (const NotOnVariety& e) {
    err << "snewton: " << e.what() << "\n";
    return kExitInput;
  } catch (const SingularLeadingBlock& e) {
    err << "snewton: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ZeroJacobian& e) {
    err << "snewton: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegenerateDenominator& e) {
    err << "snewton: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "snewton: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "snewton: bad solution file: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::bad_alloc&) {
    err << "snewton: out of memory\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace snewton

#include "tqft/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqft/identities.hpp"
#include "tqft/integrator.hpp"
#include "tqft/triangulation.hpp"

namespace tqft {

namespace {

using nlohmann::json;

json complex_json(cd v) { return json::array({v.real(), v.imag()}); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

struct CommonFlags {
  std::string b;
  double tol = 1e-8;
  int grid = 16;
  int threads = 0;
  std::string out;
};

void validate(const CommonFlags& f) {
  if (!(f.tol > 0.0)) throw ValidationError("--tol must be positive");
  if (f.grid < 8 || (f.grid & (f.grid - 1)) != 0) {
    throw ValidationError("--grid must be a power of two >= 8");
  }
  if (f.threads < 0) throw ValidationError("--threads must be non-negative");
}

ModularParameter parameter_for(const std::string& flag, std::optional<cd> from_file) {
  const cd b = !flag.empty() ? parse_complex(flag) : from_file.value_or(cd(1.0));
  return normalized_parameter(b);
}

int cmd_eval(const std::string& file, const CommonFlags& f, const std::string& convergence,
             std::ostream& out, std::ostream& err) {
  validate(f);
  const Triangulation X = parse_triangulation(read_file(file));
  for (const auto& w : X.warnings()) err << "warning: " << w << "\n";
  const ModularParameter p = parameter_for(f.b, X.b);
  IntegratorOptions opt;
  opt.tol = f.tol;
  opt.grid_start = f.grid;
  opt.threads = f.threads;
  const IntegrationResult r = partition_function(X, p, opt);
  if (!convergence.empty()) {
    std::ostringstream csv;
    csv << "grid,re,im,abs_diff\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      const auto& [n, v] = r.history[i];
      csv << n << "," << v.real() << "," << v.imag() << ",";
      if (i > 0) csv << std::abs(v - r.history[i - 1].second);
      csv << "\n";
    }
    write_output(convergence, csv.str(), out);
  }
  write_output(f.out, r.to_json() + "\n", out);
  return kExitOk;
}

// "ID:rest" with ID a tetrahedron id, or its index when no id matches.
std::pair<int, std::string> split_target(const Triangulation& X, const std::string& target) {
  const auto colon = target.rfind(':');
  if (colon == std::string::npos) throw ValidationError("target must look like TET:SPEC");
  const std::string id = target.substr(0, colon);
  int t = X.tet_index(id);
  if (t < 0 && !id.empty() && std::all_of(id.begin(), id.end(), ::isdigit)) {
    t = std::stoi(id);
    if (t >= int(X.tetrahedra().size())) t = -1;
  }
  if (t < 0) throw ValidationError("no tetrahedron '" + id + "'");
  return {t, target.substr(colon + 1)};
}

int cmd_pachner(const std::string& file, const std::string& move, const std::string& target,
                const std::string& a0, const CommonFlags& f, std::ostream& out,
                std::ostream& err) {
  const Triangulation X = parse_triangulation(read_file(file));
  PachnerResult r;
  if (move == "23") {
    const auto [t, spec] = split_target(X, target);
    if (spec.size() != 1 || spec[0] < '0' || spec[0] > '3') {
      throw ValidationError("2-3 target must be TET:FACE with FACE in 0..3");
    }
    std::optional<cd> a;
    if (!a0.empty()) a = parse_complex(a0);
    r = pachner_23(X, FaceRef{t, spec[0] - '0'}, a);
  } else if (move == "32") {
    int e = -1;
    if (!target.empty() && std::all_of(target.begin(), target.end(), ::isdigit)) {
      e = std::stoi(target);
    } else {
      const auto [t, spec] = split_target(X, target);
      if (spec.size() != 2 || spec[0] < '0' || spec[0] > '3' || spec[1] < '0' ||
          spec[1] > '3' || spec[0] == spec[1]) {
        throw ValidationError("3-2 target must be an edge class index or TET:IJ");
      }
      e = X.edge_class(t, local_edge_index(spec[0] - '0', spec[1] - '0'));
    }
    r = pachner_32(X, e);
  } else {
    throw ValidationError("--move must be 23 or 32");
  }
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  json summary{{"move", move},
               {"new_edge", r.new_edge},
               {"P_e", complex_json(r.pe)},
               {"level", r.result.level()},
               {"tetrahedra", r.result.tetrahedra().size()}};
  err << summary.dump() << "\n";
  write_output(f.out, serialize_triangulation(r.result), out);
  return kExitOk;
}

int cmd_check(const std::string& suite, std::uint64_t seed, int samples, const CommonFlags& f,
              std::ostream& out) {
  const auto reports = run_suite(suite, seed, samples, f.threads);
  std::ostringstream lines;
  bool ok = true;
  for (const auto& r : reports) {
    lines << r.to_json() << "\n";
    ok = ok && r.pass;
  }
  write_output(f.out, lines.str(), out);
  return ok ? kExitOk : kExitFailure;
}

int cmd_phib(const std::string& z_text, const CommonFlags& f, std::ostream& out) {
  const cd b_in = f.b.empty() ? cd(1.0) : parse_complex(f.b);
  const ModularParameter p = normalized_parameter(b_in);
  const cd z = parse_complex(z_text);
  const cd v = phib(z, p);
  json j{{"b", complex_json(p.b)}, {"z", complex_json(z)}, {"value", complex_json(v)},
         {"abs", std::abs(v)}};
  if (p.b != b_in) j["b_input"] = complex_json(b_in);
  write_output(f.out, j.dump() + "\n", out);
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool integrator_flags) {
  cmd->add_option("--b", f.b, "coupling b, e.g. 1 or 1+0.2i");
  if (integrator_flags) {
    cmd->add_option("--tol", f.tol, "absolute tolerance of the grid doubling");
    cmd->add_option("--grid", f.grid, "initial grid size per dimension");
  }
  cmd->add_option("--threads", f.threads, "worker threads (default TQFT_THREADS or all)");
  cmd->add_option("--out", f.out, "write the result here instead of stdout");
}

}  // namespace

cd parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  static const std::regex num(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
  static const std::regex imag(R"(([+-]?)((\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?[ij])");
  static const std::regex both(
      R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?[ij])");
  std::smatch m;
  if (std::regex_match(s, m, num)) return {std::stod(s), 0.0};
  if (std::regex_match(s, m, imag)) {
    const double mag = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return {0.0, m[1].str() == "-" ? -mag : mag};
  }
  if (std::regex_match(s, m, both)) {
    const double mag = m[3].matched ? std::stod(m[3].str()) : 1.0;
    return {std::stod(m[1].str()), m[2].str() == "-" ? -mag : mag};
  }
  throw ValidationError("cannot parse complex number '" + text + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"State-integral partition functions, Pachner moves and identity checks"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string file, move, target, a0, suite, z, convergence;
  std::uint64_t seed = 1;
  int samples = 10;

  auto* eval = app.add_subcommand("eval", "evaluate the partition function of a triangulation");
  eval->add_option("file", file, "triangulation JSON")->required();
  eval->add_option("--convergence", convergence, "write grid size vs value as CSV");
  add_common(eval, f, true);

  auto* pachner = app.add_subcommand("pachner", "apply a shaped 2-3 or 3-2 move");
  pachner->add_option("file", file, "triangulation JSON")->required();
  pachner->add_option("--move", move, "23 or 32")->required();
  pachner->add_option("--target", target, "TET:FACE for 2-3; TET:IJ or edge index for 3-2")
      ->required();
  pachner->add_option("--a0", a0, "free shape parameter of the 2-3 move");
  pachner->add_option("--out", f.out, "write the result here instead of stdout");

  auto* check = app.add_subcommand("check", "run an identity suite, one JSON line per check");
  check->add_option("suite", suite, "qdilog, pentagon, appendix, symmetries or all")
      ->required();
  check->add_option("--seed", seed, "sampling seed");
  check->add_option("--samples", samples, "samples per identity");
  check->add_option("--threads", f.threads, "worker threads");
  check->add_option("--out", f.out, "write the report here instead of stdout");

  auto* phib_cmd = app.add_subcommand("phib", "evaluate Phi_b at one point");
  phib_cmd->add_option("--z", z, "argument, e.g. 0.3-0.1i")->required();
  add_common(phib_cmd, f, false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  try {
    if (*eval) return cmd_eval(file, f, convergence, out, err);
    if (*pachner) return cmd_pachner(file, move, target, a0, f, out, err);
    if (*check) return cmd_check(suite, seed, samples, f, out);
    if (*phib_cmd) return cmd_phib(z, f, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PoleError& e) {
    err << "domain error: " << e.what() << " (pole at " << e.pole().real() << ", "
        << e.pole().imag() << ")\n";
    return kExitDomain;
  } catch (const ZeroError& e) {
    err << "domain error: " << e.what() << " (zero at " << e.zero().real() << ", "
        << e.zero().imag() << ")\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const LadderOverflow& e) {
    err << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const Error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitFailure;
}

}  // namespace tqft

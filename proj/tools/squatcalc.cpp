// squatcalc: command-line front end for the quaternionic S-functional
// calculus library.  Loads operators and function specs from JSON, runs
// spectrum / resolvent / calculus / verification commands, and emits JSON
// with 17-significant-digit numbers (byte-identical for identical jobs).
//
// Exit codes (stable contract):
//   0  success
//   1  verification found residuals above contract
//   2  malformed input (JSON, flags, unknown fixture, invalid function)
//   3  solver failure (singular matrix, point on the S-spectrum)
//   4  contour infeasible or quadrature did not converge
//   5  no admissible real resolvent point k

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "squatcalc/squatcalc.hpp"

namespace {

using namespace squatcalc;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t default_seed_from_env() {
  if (const char* env = std::getenv("SQUATCALC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("SQUATCALC_SEED is not an integer");
    }
  }
  return kDefaultSeed;
}

// --input accepts either a path to a JSON matrix file or a fixture designator
// such as "diag-i", "real-scalar:t=2,n=3", "random:n=4,seed=1,norm=1",
// "derivative:n=8,h=0.1,seed=0".
QuatMatrix load_operator(const std::string& source, std::uint64_t seed) {
  {
    std::ifstream probe(source);
    if (probe.good()) return matrix_from_json(parse_json_file(source));
  }
  std::string name = source;
  std::map<std::string, double> params;
  if (const auto colon = source.find(':'); colon != std::string::npos) {
    name = source.substr(0, colon);
    std::stringstream rest(source.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad fixture parameter: " + item);
      params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  return make_fixture(name, params, seed);
}

SliceFunction load_function(const std::string& spec) {
  // Inline JSON when it parses; otherwise treat as a file path.
  if (!spec.empty() && (spec.front() == '{' || spec.front() == '[')) {
    return function_from_json(json::parse(spec));
  }
  return function_from_json(parse_json_file(spec));
}

Quaternion parse_quaternion_flag(const std::string& text) {
  std::stringstream ss(text);
  std::vector<double> parts;
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(std::stod(item));
  if (parts.size() != 4)
    throw std::invalid_argument("expected four comma-separated components: " + text);
  return {parts[0], parts[1], parts[2], parts[3]};
}

ImaginaryUnit parse_slice_flag(const std::string& text) {
  const Quaternion q = parse_quaternion_flag(text);
  if (q.w != 0.0) throw std::invalid_argument("--slice must be purely imaginary");
  return {q.x, q.y, q.z};
}

void emit(const json& j, const std::string& output_path) {
  const std::string text = dump17(j) + "\n";
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + output_path);
    out << text;
  }
}

// Applies a --radius override to an auto-built contour, then re-checks
// admissibility the same way build_contour does.
Contour override_radii(Contour contour, double radius, const SpectrumReport& rep,
                       const std::vector<SpectralSphere>& exclusions) {
  for (auto& c : contour.circles) c.radius = radius;
  const double margin = 1e-3 * (1.0 + rep.norm_bound);
  const auto pts = detail::sphere_plane_points(rep.spheres);
  const auto ex = detail::sphere_plane_points(exclusions);
  for (const auto& c : contour.circles) {
    int inside = 0;
    for (const auto& p : pts) {
      const double d = std::hypot(p.first - c.cx, p.second - c.cy);
      if (d <= c.radius - 0.5 * margin)
        ++inside;
      else if (d < c.radius + margin)
        throw ContourInfeasibleError("--radius override: circle approaches a spectral point");
    }
    if (inside == 0)
      throw ContourInfeasibleError("--radius override: a circle no longer encloses spectrum");
    for (const auto& e : ex)
      if (std::hypot(e.first - c.cx, e.second - c.cy) < c.radius + 0.5 * margin)
        throw ContourInfeasibleError("--radius override: circle approaches an exclusion");
  }
  return contour;
}

struct VerifyOutcome {
  json report;
  bool pass = true;
  std::vector<std::string> offenders;
};

// Seeded property suites behind `squatcalc verify`.  corrupt_sign is a test
// harness hook that flips the sign of the resolvent inside the resolvent-
// equation suite; it must make the suite fail (negative control).
VerifyOutcome run_verify(std::uint64_t seed, bool corrupt_sign) {
  VerifyOutcome out;

  {  // S-resolvent equation on random (T, s) pairs
    const int wanted = 100;
    const double bound_scale = 1e-10;
    int accepted = 0;
    std::uint64_t draw = 0;
    double worst = 0.0;
    double bound = 0.0;
    while (accepted < wanted && draw < 10000) {
      const QuatMatrix t = fixture_random(3, rng::at(seed, 2 * draw), 1.0);
      const Quaternion s = 2.0 * random_quaternion(rng::at(seed, 2 * draw + 1), 0);
      ++draw;
      const ResolventCertificate cert = in_resolvent_set(t, s);
      if (!cert.in_resolvent) continue;
      ++accepted;
      const QuatMatrix r = s_resolvent(t, s);
      const QuatMatrix r_used = corrupt_sign ? r * (-1.0) : r;
      QuatMatrix lhs = scal_r(r_used, s) - t * r_used;
      for (int d = 0; d < t.n(); ++d) lhs.at(d, d) -= Quaternion::one();
      const double resid = op_norm(lhs);
      const double b = bound_scale * (1.0 + op_norm(t));
      bound = std::max(bound, b);
      if (resid > worst) worst = resid;
      if (resid > b)
        out.offenders.push_back("resolvent_equation pair #" + std::to_string(accepted));
    }
    const bool ok = out.offenders.empty();
    out.report["resolvent_equation"] = json{{"pairs", accepted},
                                            {"max_residual", worst},
                                            {"bound", bound},
                                            {"pass", ok}};
    out.pass = out.pass && ok && accepted == wanted;
  }

  {  // scalar lemma identities on random (s, k)
    const int wanted = 1000;
    int skipped = 0;
    double worst = 0.0;
    int offenders_before = static_cast<int>(out.offenders.size());
    int accepted = 0;
    std::uint64_t draw = 0;
    while (accepted < wanted && draw < 100000) {
      const Quaternion s = 10.0 * random_quaternion(seed ^ 0x51ce51ceull, 2 * draw);
      const double k = 10.0 * rng::usym(seed ^ 0x51ce51ceull, 8 * draw + 7);
      ++draw;
      if ((s - Quaternion(k)).norm() < 0.1) continue;
      ++accepted;
      const LemmaResiduals r = lemma_identities_residual(s, k);
      if (r.annihilation_skipped) ++skipped;
      const double scaled =
          std::max({r.real_part / r.real_part_scale, r.modulus / r.modulus_scale,
                    r.inverse_square / r.inverse_square_scale,
                    r.annihilation_skipped ? 0.0 : r.annihilation / r.annihilation_scale});
      worst = std::max(worst, scaled);
      if (scaled > 1e-11)
        out.offenders.push_back("lemma_identities case #" + std::to_string(accepted));
    }
    const bool ok = static_cast<int>(out.offenders.size()) == offenders_before;
    out.report["lemma_identities"] = json{{"cases", accepted},
                                          {"skipped", skipped},
                                          {"max_scaled_residual", worst},
                                          {"bound", 1e-11},
                                          {"pass", ok}};
    out.pass = out.pass && ok && accepted == wanted;
  }

  {  // kernel transformation law on random (T, s, k) triples
    const int wanted = 100;
    double worst = 0.0;
    int offenders_before = static_cast<int>(out.offenders.size());
    int accepted = 0;
    std::uint64_t draw = 0;
    while (accepted < wanted && draw < 10000) {
      const QuatMatrix t = fixture_random(3, rng::at(seed ^ 0x7ab7ab7aull, 3 * draw), 1.0);
      const Quaternion s = 2.0 * random_quaternion(rng::at(seed ^ 0x7ab7ab7aull, 3 * draw + 1), 0);
      const double k = 2.0 + rng::u01(seed ^ 0x7ab7ab7aull, 3 * draw + 2);
      ++draw;
      if (!in_resolvent_set(t, s).in_resolvent) continue;
      if ((s - Quaternion(k)).norm() < 0.1) continue;
      ++accepted;
      const TransformIdentityResiduals r = transform_identity_residual(t, s, k);
      const double resid = std::max(r.primary, r.companion);
      worst = std::max(worst, resid);
      if (resid > 1e-9)
        out.offenders.push_back("transform_identity triple #" + std::to_string(accepted));
    }
    const bool ok = static_cast<int>(out.offenders.size()) == offenders_before;
    out.report["transform_identity"] = json{{"triples", accepted},
                                            {"max_residual", worst},
                                            {"bound", 1e-9},
                                            {"pass", ok}};
    out.pass = out.pass && ok && accepted == wanted;
  }

  out.report["pass"] = out.pass;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quaternionic S-functional calculus"};
  app.require_subcommand(1);

  std::string input, function_spec, output, slice_text, point_text, fixture_name;
  double tol = 1e-10;
  std::optional<double> k_flag;
  std::optional<double> radius_flag;
  std::optional<std::uint64_t> seed_flag;
  int n_max = 40;
  double axis_r = 100.0;
  int nodes = 0;  // 0 = module default
  bool corrupt_sign = false;
  std::map<std::string, double> fixture_params;
  double fx_n = -1, fx_h = -1, fx_t = std::numeric_limits<double>::quiet_NaN(), fx_norm = -1;

  auto add_common = [&](CLI::App* cmd, bool with_function) {
    cmd->add_option("--input", input, "operator: JSON file or fixture designator")->required();
    if (with_function)
      cmd->add_option("--function", function_spec, "function spec: JSON file or inline JSON")
          ->required();
    cmd->add_option("--tol", tol, "quadrature convergence tolerance");
    cmd->add_option("--slice", slice_text, "slice unit as w,x,y,z (w must be 0)");
    cmd->add_option("--seed", seed_flag, "seed for seeded fixtures/suites");
    cmd->add_option("--nodes", nodes, "initial quadrature nodes per circle");
    cmd->add_option("--radius", radius_flag, "override every contour radius");
    cmd->add_option("--output", output, "write JSON here instead of stdout");
  };

  CLI::App* c_spectrum = app.add_subcommand("spectrum", "S-spectrum of the operator");
  add_common(c_spectrum, false);

  CLI::App* c_resolve = app.add_subcommand("resolve", "S-resolvent at a point");
  add_common(c_resolve, false);
  c_resolve->add_option("--point", point_text, "s as w,x,y,z")->required();

  CLI::App* c_calc = app.add_subcommand("calc", "f(T) by contour quadrature");
  add_common(c_calc, true);

  CLI::App* c_unbounded =
      app.add_subcommand("calc-unbounded", "f(T) via A=(T-kI)^(-1), both routes");
  add_common(c_unbounded, true);
  c_unbounded->add_option("--k", k_flag, "real resolvent point (scanned when absent)");

  CLI::App* c_series = app.add_subcommand("fn-series", "inverse-power series of f(T)");
  add_common(c_series, true);
  c_series->add_option("--n-max", n_max, "series truncation order");
  c_series->add_option("--axis-R", axis_r, "imaginary-axis truncation");

  CLI::App* c_verify = app.add_subcommand("verify", "seeded property suites");
  c_verify->add_option("--seed", seed_flag, "suite seed");
  c_verify->add_option("--output", output, "write JSON here instead of stdout");
  c_verify->add_flag("--corrupt-sign", corrupt_sign)->group("");  // test harness hook

  CLI::App* c_fixture = app.add_subcommand("fixture", "emit a builtin operator as JSON");
  c_fixture->add_option("name", fixture_name, "diag-i | real-scalar | random | derivative")
      ->required();
  c_fixture->add_option("--n", fx_n, "dimension");
  c_fixture->add_option("--step", fx_h, "mesh width (derivative)");
  c_fixture->add_option("--t", fx_t, "scalar value (real-scalar)");
  c_fixture->add_option("--norm", fx_norm, "target operator norm (random)");
  c_fixture->add_option("--seed", seed_flag, "fixture seed");
  c_fixture->add_option("--output", output, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed_from_env();
    const ImaginaryUnit unit = slice_text.empty() ? ImaginaryUnit() : parse_slice_flag(slice_text);
    QuadratureOptions qopts;
    qopts.tol = tol;

    if (app.got_subcommand(c_spectrum)) {
      emit(spectrum_report_to_json(s_spectrum(load_operator(input, seed))), output);
      return 0;
    }

    if (app.got_subcommand(c_resolve)) {
      const QuatMatrix t = load_operator(input, seed);
      const Quaternion s = parse_quaternion_flag(point_text);
      json j{{"point", json::array({s.w, s.x, s.y, s.z})},
             {"value", matrix_to_json(s_resolvent(t, s))}};
      emit(j, output);
      return 0;
    }

    if (app.got_subcommand(c_calc)) {
      const QuatMatrix t = load_operator(input, seed);
      const SliceFunction f = load_function(function_spec);
      const SpectrumReport rep = s_spectrum(t);
      Contour contour = build_contour(rep, unit, f.poles());
      if (radius_flag) contour = override_radii(contour, *radius_flag, rep, f.poles());
      if (nodes > 0) contour.nodes_per_circle = nodes;
      emit(calculus_result_to_json(f_of_T(t, f, contour, qopts)), output);
      return 0;
    }

    if (app.got_subcommand(c_unbounded)) {
      const QuatMatrix t = load_operator(input, seed);
      const SliceFunction f = load_function(function_spec);
      try {
        emit(unbounded_result_to_json(
                 f_of_T_unbounded(t, f, k_flag ? std::optional<double>(*k_flag) : std::nullopt,
                                  unit, qopts)),
             output);
      } catch (const NotInResolventSetError&) {
        // For this command a rejected k means "no usable real resolvent
        // point", the dedicated failure mode.
        std::cerr << "calc-unbounded: k is not in the resolvent set\n";
        return 5;
      }
      return 0;
    }

    if (app.got_subcommand(c_series)) {
      const QuatMatrix t = load_operator(input, seed);
      const SliceFunction f = load_function(function_spec);
      const int series_nodes = nodes > 0 ? nodes : 4096;
      const InverseSeriesResult res = f_of_T_inverse_series(t, f, n_max, axis_r, series_nodes, unit);
      json j{{"value", matrix_to_json(res.value)},
             {"n_max", res.n_max},
             {"R", res.axis_bound},
             {"nodes", res.nodes}};
      emit(j, output);
      return 0;
    }

    if (app.got_subcommand(c_verify)) {
      const VerifyOutcome outcome = run_verify(seed, corrupt_sign);
      emit(outcome.report, output);
      if (!outcome.pass) {
        for (const auto& name : outcome.offenders) std::cerr << "FAIL " << name << "\n";
        return 1;
      }
      return 0;
    }

    if (app.got_subcommand(c_fixture)) {
      std::map<std::string, double> params;
      if (fx_n >= 0) params["n"] = fx_n;
      if (fx_h >= 0) params["h"] = fx_h;
      if (!std::isnan(fx_t)) params["t"] = fx_t;
      if (fx_norm >= 0) params["norm"] = fx_norm;
      if (seed_flag) params["seed"] = static_cast<double>(*seed_flag);
      emit(matrix_to_json(make_fixture(fixture_name, params, seed)), output);
      return 0;
    }

    std::cerr << "no subcommand\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotInvertibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NotInResolventSetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ContourInfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const QuadratureFailureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ResolventPointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

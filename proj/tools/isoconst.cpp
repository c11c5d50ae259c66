// isoconst: command-line front end.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric failure, 4 I/O error.

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isoconst/criticality.hpp"
#include "isoconst/io.hpp"
#include "isoconst/isotropy.hpp"
#include "isoconst/movements.hpp"
#include "isoconst/zonotopes.hpp"

namespace {

using namespace isoconst;
using io::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string input;
  std::string output;
  double tol = 1e-8;
  double grid_step = 0.0;
  int steps = kDefaultScanSteps;
  double t_min = std::numeric_limits<double>::quiet_NaN();
  double t_max = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 1;
  bool refine = false;
  int n = 2;
  int n_min = 2;
  int n_max = 4;
  int vertex = -1;
  int ridge = -1;
  bool odd = false;
  std::vector<double> zonotope;
  std::vector<int> pair{0, 1};
  long mc_samples = 0;
};

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty() || opt.output == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    io::write_file(opt.output, text);
  }
}

void emit_json(const Options& opt, const json& j) { emit(opt, j.dump(2) + "\n"); }

Polytope read_polytope(const Options& opt) {
  if (opt.input.empty()) throw io::ParseError("--input is required");
  return io::parse_polytope(io::read_file(opt.input), opt.input);
}

json ids_json(const std::vector<int>& ids) { return json(ids); }

int cmd_constants(const Options& opt) {
  if (opt.n_min < 2 || opt.n_max < opt.n_min || opt.n_max > 5) throw io::ParseError("need 2 <= n-min <= n-max <= 5");
  json rows = json::array();
  for (int n = opt.n_min; n <= opt.n_max; ++n) {
    const std::pair<ReferenceFamily, Polytope> cases[] = {
        {ReferenceFamily::Simplex, bodies::regular_simplex(n)},
        {ReferenceFamily::Cube, bodies::cube(n)},
        {ReferenceFamily::CrossPolytope, bodies::cross_polytope(n)},
        {ReferenceFamily::Q, bodies::q_body(n)},
    };
    for (const auto& [family, body] : cases) {
      const double computed = isotropic_constant(body).L;
      json row;
      row["family"] = std::string(to_string(family));
      row["n"] = n;
      if (family == ReferenceFamily::Q) {
        // no closed form in general; the hexagon value is known
        if (n == 2) {
          const double exact = std::pow(25.0 / 3888.0, 0.25);
          row["closed_form"] = exact;
          row["computed"] = computed;
          row["abs_diff"] = std::abs(exact - computed);
        } else {
          row["closed_form"] = nullptr;
          row["computed"] = computed;
          row["abs_diff"] = nullptr;
        }
      } else {
        const double exact = reference_constant(family, n);
        row["closed_form"] = exact;
        row["computed"] = computed;
        row["abs_diff"] = std::abs(exact - computed);
      }
      rows.push_back(row);
    }
  }
  emit_json(opt, json{{"rows", rows}});
  return 0;
}

int cmd_lk(const Options& opt) {
  const Polytope p = read_polytope(opt);
  const auto m = body_moments(p);
  const auto r = isotropic_constant(p);
  json out;
  out["L"] = r.L;
  out["volume"] = r.volume;
  out["det_cov"] = r.det_cov;
  out["mean"] = io::to_json(m.mean);
  out["covariance"] = io::to_json(m.covariance);
  out["num_vertices"] = p.num_vertices();
  out["num_facets"] = p.num_facets();
  if (opt.mc_samples > 0) {
    // rejection estimate of the volume from the bounding box
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector lo = p.vertex(0), hi = p.vertex(0);
    for (const auto& v : p.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    long hits = 0;
    Vector x(p.dim());
    for (long s = 0; s < opt.mc_samples; ++s) {
      for (int i = 0; i < p.dim(); ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
      bool in = true;
      for (const auto& f : p.facets())
        if (f.normal.dot(x) > f.offset) {
          in = false;
          break;
        }
      hits += in ? 1 : 0;
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(opt.mc_samples);
    const double box = (hi - lo).prod();
    out["monte_carlo"] = json{{"samples", opt.mc_samples},
                              {"seed", opt.seed},
                              {"volume", box * frac},
                              {"standard_error", box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(opt.mc_samples))}};
  }
  emit_json(opt, out);
  return 0;
}

int cmd_isotropize(const Options& opt) {
  const Polytope p = read_polytope(opt);
  const auto [q, report] = isotropize(p);
  json out = io::to_json(q);
  out["L"] = report.L;
  out["volume"] = report.volume;
  out["transform"] = io::to_json(report.transform);
  emit_json(opt, out);
  return 0;
}

int cmd_defects(const Options& opt) {
  const Polytope p = read_polytope(opt);
  json rows = json::array();
  double worst = 0.0;
  for (const auto& d : facet_defects(p)) {
    worst = std::max(worst, d.norm);
    rows.push_back(json{{"facet", d.facet_id},
                        {"vertices", ids_json(p.facet(d.facet_id).vertex_ids)},
                        {"defect", io::to_json(d.defect)},
                        {"norm", d.norm}});
  }
  emit_json(opt, json{{"defects", rows}, {"max_norm", worst}, {"tolerance", opt.tol}, {"zero_defect", worst <= opt.tol}});
  return 0;
}

int cmd_reflectors(const Options& opt) {
  const Polytope p = read_polytope(opt);
  json rows = json::array();
  for (int g = 0; g < p.num_ridges(); ++g) {
    const auto r = find_affine_reflector(p, g);
    json row{{"ridge", g},
             {"vertices", ids_json(p.ridge(g).vertex_ids)},
             {"facets", json::array({p.ridge(g).facets[0], p.ridge(g).facets[1]})},
             {"is_affine", r.is_affine},
             {"is_euclidean", r.is_euclidean}};
    row["map"] = r.map ? io::to_json(*r.map) : json(nullptr);
    rows.push_back(row);
  }
  json out{{"reflectors", rows}};
  // third-moment matrices need the lemma frame, which assumes isotropic position
  bool isotropic = true;
  try {
    require_isotropic(p);
  } catch (const GeometryError&) {
    isotropic = false;
  }
  if (isotropic) {
    json mats = json::array();
    for (int g = 0; g < p.num_ridges(); ++g)
      for (int f : p.ridge(g).facets) {
        const Matrix m = third_moment_matrix(p, f, g);
        mats.push_back(json{{"ridge", g},
                            {"facet", f},
                            {"min_eigenvalue", Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff()}});
      }
    out["third_moment_matrices"] = mats;
  }
  emit_json(opt, out);
  return 0;
}

std::string scan_csv(const MovementScan& s) {
  std::ostringstream os;
  os << "t,L,valid,volume\n";
  for (std::size_t k = 0; k < s.ts.size(); ++k)
    os << format_number(s.ts[k]) << ',' << format_number(s.Ls[k]) << ',' << (s.valid[k] ? 1 : 0) << ','
       << format_number(s.volumes[k]) << '\n';
  return os.str();
}

int cmd_rs_scan(const Options& opt) {
  MovementScan s;
  const bool has_t = !std::isnan(opt.t_min) && !std::isnan(opt.t_max);
  if (has_t && !(opt.t_min < opt.t_max)) throw io::ParseError("--t-min must be below --t-max");
  if (opt.steps < 2) throw io::ParseError("--steps must be at least 2");
  if (!opt.zonotope.empty()) {
    if (opt.pair.size() != 2) throw io::ParseError("--pair takes two indices");
    Vector z(static_cast<Eigen::Index>(opt.zonotope.size()));
    for (std::size_t i = 0; i < opt.zonotope.size(); ++i) z(static_cast<Eigen::Index>(i)) = opt.zonotope[i];
    const auto m = zonotope_move_field(z, opt.pair[0], opt.pair[1]);
    const double lo = has_t ? opt.t_min : m.a, hi = has_t ? opt.t_max : m.b;
    if (m.anchored_interior())
      s = scan(m.body, m.field, lo, hi, opt.steps);
    else
      s = scan_family(
          [&](double r) -> std::optional<Polytope> {
            if (r < m.a - 1e-12 || r > m.b + 1e-12) return std::nullopt;
            return m.at(r);
          },
          lo, hi, opt.steps);
  } else {
    const Polytope p = read_polytope(opt);
    if (opt.vertex < 0 || opt.ridge < 0) throw io::ParseError("rs-scan needs --vertex and --ridge, or --zonotope");
    if (opt.vertex >= p.num_vertices() || opt.ridge >= p.num_ridges()) throw io::ParseError("vertex or ridge out of range");
    const auto field = vertex_move_field(p, opt.vertex, opt.ridge, opt.odd);
    s = scan(p, field, has_t ? opt.t_min : -0.1, has_t ? opt.t_max : 0.1, opt.steps);
  }
  emit(opt, scan_csv(s));
  std::cerr << "convexity_certificate " << format_number(s.convexity_certificate) << "\nvalid_window " << s.valid_begin
            << ' ' << s.valid_end << '\n';
  return 0;
}

int cmd_zono_scan(const Options& opt) {
  const double step = opt.grid_step > 0.0 ? opt.grid_step : default_grid_step(opt.n);
  const auto r = extremal_search(opt.n, step, opt.refine);
  std::ostringstream os;
  for (int i = 0; i < opt.n; ++i) os << 'y' << (i + 1) << ',';
  os << "L\n";
  for (std::size_t k = 0; k < r.ys.size(); ++k) {
    for (int i = 0; i < opt.n; ++i) os << format_number(r.ys[k](i)) << ',';
    os << format_number(r.Ls[k]) << '\n';
  }
  emit(opt, os.str());
  std::cerr << "max_L " << format_number(r.max_L) << " attained at " << r.argmax.size() << " grid points\n"
            << "min_L " << format_number(r.min_L) << " at";
  for (int i = 0; i < opt.n; ++i) std::cerr << ' ' << format_number(r.argmin.front()(i));
  std::cerr << '\n';
  for (const auto& ref : r.refinements) {
    std::cerr << (ref.maximize ? "refine_max" : "refine_min");
    for (double l : ref.trajectory) std::cerr << ' ' << format_number(l);
    std::cerr << '\n';
  }
  return 0;
}

int cmd_canonicalize(const Options& opt) {
  if (opt.input.empty()) throw io::ParseError("--input is required");
  const Zonotope z = io::parse_zonotope(io::read_file(opt.input), opt.input);
  if (static_cast<int>(z.generators.size()) != z.dim + 1)
    throw GeometryError(ErrorKind::RankDeficient, "expected exactly n+1 generators");
  const auto cf = canonicalize_n_plus_1(z.generators, z.center);
  emit_json(opt, json{{"y", io::to_json(cf.y)},
                      {"L_input", isotropic_constant(to_polytope(z)).L},
                      {"L_canonical", L_of_y(cf.y)},
                      {"map", io::to_json(cf.map)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isotropic constants of polytopes"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", opt.input, "input JSON");
    if (needs_input) in->required();
    sub->add_option("--output", opt.output, "output file (default stdout)");
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
  };

  auto* constants = app.add_subcommand("constants", "reference constants, closed form against computed");
  common(constants, false);
  constants->add_option("--n-min", opt.n_min);
  constants->add_option("--n-max", opt.n_max);

  auto* lk = app.add_subcommand("lk", "isotropic constant of a polytope");
  common(lk, true);
  lk->add_option("--mc-samples", opt.mc_samples, "optional Monte Carlo volume check")->check(CLI::NonNegativeNumber);

  auto* iso = app.add_subcommand("isotropize", "move a polytope into isotropic position");
  common(iso, true);

  auto* defects = app.add_subcommand("defects", "facet defects of an isotropic polytope");
  common(defects, true);
  defects->add_option("--tol", opt.tol, "zero-defect tolerance")->check(CLI::PositiveNumber);

  auto* reflectors = app.add_subcommand("reflectors", "affine and Euclidean reflectors per ridge");
  common(reflectors, true);

  auto* rs = app.add_subcommand("rs-scan", "scan L along a movement");
  common(rs, false);
  rs->add_option("--vertex", opt.vertex);
  rs->add_option("--ridge", opt.ridge);
  rs->add_flag("--odd", opt.odd, "move the antipodal vertex oppositely");
  rs->add_option("--zonotope", opt.zonotope, "z for C_n + [-z, z]")->delimiter(',');
  rs->add_option("--pair", opt.pair, "coordinates i,j (0-based)")->delimiter(',');
  rs->add_option("--t-min", opt.t_min);
  rs->add_option("--t-max", opt.t_max);
  rs->add_option("--steps", opt.steps);

  auto* zs = app.add_subcommand("zono-scan", "grid scan of C_n + [-y, y]");
  common(zs, false);
  zs->add_option("--n", opt.n)->check(CLI::Range(2, 4));
  zs->add_option("--grid-step", opt.grid_step)->check(CLI::Range(0.0, 1.0));
  zs->add_flag("--refine", opt.refine);

  auto* canon = app.add_subcommand("canonicalize", "normal form of an (n+1)-generator zonotope");
  common(canon, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*constants) return cmd_constants(opt);
    if (*lk) return cmd_lk(opt);
    if (*iso) return cmd_isotropize(opt);
    if (*defects) return cmd_defects(opt);
    if (*reflectors) return cmd_reflectors(opt);
    if (*rs) return cmd_rs_scan(opt);
    if (*zs) return cmd_zono_scan(opt);
    if (*canon) return cmd_canonicalize(opt);
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation_error(e.kind()) ? kExitValidation : kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}

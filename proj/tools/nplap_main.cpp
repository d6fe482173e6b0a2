// Command-line front end: radial reference solutions, Dirichlet solves,
// viscosity verification, the overdetermined-problem decision engine,
// and the ellipse counterexample pipeline.
//
// Exit status: 0 success, 1 negative verdict / violations /
// non-convergence (machine-consumable), 2 usage or runtime errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nplap/expr.hpp"
#include "nplap/geometry.hpp"
#include "nplap/io.hpp"
#include "nplap/operators.hpp"
#include "nplap/radial.hpp"
#include "nplap/solver.hpp"
#include "nplap/verdict.hpp"
#include "nplap/viscosity.hpp"

using json = nlohmann::ordered_json;
using namespace nplap;

namespace {

PValue parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return PValue::infinity();
  try {
    return PValue::finite(std::stod(s));
  } catch (const std::invalid_argument&) {
    throw error("bad exponent '" + s + "' (number >= 1 or 'inf')");
  }
}

Vec parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw error("bad point '" + s + "' (want x,y)");
  return Vec(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

struct DomainSpec {
  std::string spec;
  std::string xbar;  // optional "x,y"
  std::string bbox;  // implicit only: "x0,y0,x1,y1"

  Domain build() const {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
      throw error("bad domain '" + spec + "' (want kind:params)");
    const std::string kind = spec.substr(0, colon);
    std::string params = spec.substr(colon + 1);

    std::optional<Vec> center;
    const auto at = params.find('@');
    if (at != std::string::npos) {
      center = parse_point(params.substr(at + 1));
      params = params.substr(0, at);
    }
    std::optional<Vec> xb;
    if (!xbar.empty()) xb = parse_point(xbar);

    if (kind == "ball") {
      const double R = std::stod(params);
      return Domain::ball(center.value_or(Vec(0.0, 0.0)), R, xb);
    }
    if (kind == "ellipse") {
      const auto comma = params.find(',');
      if (comma == std::string::npos)
        throw error("bad ellipse '" + params + "' (want a,b)");
      const double a = std::stod(params.substr(0, comma));
      const double b = std::stod(params.substr(comma + 1));
      return Domain::ellipse(center.value_or(Vec(0.0, 0.0)), a, b, xb);
    }
    if (kind == "implicit") {
      if (bbox.empty()) throw error("implicit domain needs --bbox x0,y0,x1,y1");
      double v[4];
      std::string rest = bbox;
      for (int k = 0; k < 4; ++k) {
        const auto comma = rest.find(',');
        v[k] = std::stod(rest.substr(0, comma));
        if (comma != std::string::npos) rest = rest.substr(comma + 1);
      }
      const Expr phi = Expr::parse(params, {"x", "y"});
      return Domain::implicit(
          [phi](double x, double y) { return phi.eval({x, y}); },
          BBox{v[0], v[1], v[2], v[3]}, xb.value_or(Vec(0.0, 0.0)));
    }
    throw error("unknown domain kind '" + kind + "'");
  }
};

ScalarField2 parse_field_expr(const std::string& src) {
  const Expr e = Expr::parse(src, {"x", "y"});
  return [e](double x, double y) { return e.eval({x, y}); };
}

void write_boundary_csv(const Domain& d, const std::string& path, int m) {
  CsvWriter csv(path, {"arc_parameter", "x", "y", "nx", "ny", "curvature"});
  for (const auto& bp : d.boundary_sample(m))
    csv.row({bp.arc_parameter, bp.location[0], bp.location[1],
             bp.outer_normal[0], bp.outer_normal[1], bp.curvature});
}

void write_field_csv(const GridField& f, const std::string& path) {
  CsvWriter csv(path, {"x", "y", "u"});
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      if (f.is_interior(i, j)) {
        const Vec x = f.node(i, j);
        csv.row({x[0], x[1], f.values[static_cast<size_t>(f.idx(i, j))]});
      }
}

void dump_json(const json& out, const std::string& path) {
  std::cout << out.dump(2) << "\n";
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw error("cannot open '" + path + "' for writing");
    f << out.dump(2) << "\n";
  }
}

json report_json(const PValue& p, double h, const SolveReport& rep) {
  json out;
  out["iterations"] = rep.iterations;
  out["residual"] = rep.final_residual;
  out["converged"] = rep.converged;
  out["p"] = p.is_infinity() ? json("inf") : json(p.value());
  out["h"] = h;
  out["existence_guard"] = rep.existence_note;
  out["tau"] = rep.tau;
  out["envelope_fallback_nodes"] = rep.envelope_fallback_nodes;
  return out;
}

json verdict_json(const Verdict& v) {
  json out;
  out["outcome"] = outcome_name(v.outcome);
  json fs = json::array();
  for (const auto& f : v.findings) {
    json fj;
    fj["clause"] = f.clause;
    fj["outcome"] = outcome_name(f.outcome);
    if (f.clause == 1) fj["ball_radius"] = f.ball_radius;
    fj["detail"] = f.detail;
    fs.push_back(fj);
  }
  out["findings"] = fs;
  json ev;
  ev["c_p"] = v.cp;
  ev["R1"] = v.R1;
  ev["R2"] = v.R2;
  json roots = json::array();
  for (const auto& r : v.scan.roots)
    roots.push_back({{"r", r.r},
                     {"sign_before", r.sign_before},
                     {"sign_after", r.sign_after}});
  ev["roots"] = roots;
  ev["identically_zero"] = v.scan.identically_zero;
  ev["monotone_margin"] = v.monotone_margin;
  out["evidence"] = ev;
  return out;
}

json inequalities_json(const InequalityReport& ir) {
  json out;
  out["R1"] = ir.R1;
  out["R2"] = ir.R2;
  out["c_p"] = ir.cp;
  out["q_R1"] = ir.q_R1;
  out["q_R2"] = ir.q_R2;
  out["ineq1_q_R1_minus_cp_R1"] = ir.ineq1;
  out["ineq2_q_R2_minus_cp_R2"] = ir.ineq2;
  out["ineq1_ok"] = ir.ineq1_ok;
  out["ineq2_ok"] = ir.ineq2_ok;
  out["dnu_P1"] = ir.dnu_P1;
  out["dnu_P2"] = ir.dnu_P2;
  out["resid_P1"] = ir.resid_P1;
  out["resid_P2"] = ir.resid_P2;
  out["flagged"] = ir.flagged;
  out["note"] = ir.note;
  return out;
}

int run_radial(const std::string& p_str, int n, double R, double h,
               const std::string& out_csv) {
  const PValue p = parse_p(p_str);
  RadialSolution s(p, n, R, Vec::zero(n));
  std::cout << "neumann = " << fmt17(radial_neumann(p, n, R)) << "\n";

  if (h <= 0) h = R / 32;
  const int m = static_cast<int>(std::floor(R / h));
  if (n == 2) {
    CsvWriter csv(out_csv, {"x", "y", "u"});
    for (int j = -m; j <= m; ++j)
      for (int i = -m; i <= m; ++i) {
        const Vec x(i * h, j * h);
        csv.row({x[0], x[1], radial_value(s, x)});
      }
  } else {
    CsvWriter csv(out_csv, {"x", "y", "z", "u"});
    for (int k = -m; k <= m; ++k)
      for (int j = -m; j <= m; ++j)
        for (int i = -m; i <= m; ++i) {
          const Vec x(i * h, j * h, k * h);
          csv.row({x[0], x[1], x[2], radial_value(s, x)});
        }
  }
  return 0;
}

int run_verify(const std::string& candidate, const std::string& p_str, int n,
               double R, const std::string& mode_str,
               const std::string& check, double f_const,
               const std::string& q_expr, double band, int samples,
               const std::string& out_path) {
  const PValue p = parse_p(p_str);
  Candidate cand;
  if (candidate == "radial") {
    cand = radial_candidate(RadialSolution(p, n, R, Vec::zero(n)));
  } else if (candidate == "zero") {
    cand = constant_candidate(n, 0.0);
  } else {
    throw error("unknown candidate '" + candidate + "'");
  }

  json out;
  int exit_code = 0;
  if (check == "interior") {
    CheckMode mode;
    if (mode_str == "sub") mode = CheckMode::sub;
    else if (mode_str == "super") mode = CheckMode::super;
    else if (mode_str == "solution") mode = CheckMode::solution;
    else throw error("unknown mode '" + mode_str + "'");

    std::vector<Vec> pts;
    if (n == 2) {
      auto dom = Domain::ball(Vec(0.0, 0.0), R);
      pts = halton_interior_points(dom, samples);
      const auto [t1, t2] = dom.touching_points();
      pts.push_back(t1.location);
      pts.push_back(t2.location);
    } else {
      std::mt19937 rng(2024u);
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::uniform_real_distribution<double> ur(0.0, 1.0);
      while (static_cast<int>(pts.size()) < samples) {
        Vec dir(gauss(rng), gauss(rng), gauss(rng));
        const double nn = dir.norm();
        if (nn < 1e-9) continue;
        pts.push_back(dir * (R * std::sqrt(ur(rng)) / nn));
      }
    }
    const auto rep = check_interior(
        cand, p, [f_const](const Vec&) { return f_const; }, pts, mode);
    out["mode"] = mode_name(rep.mode);
    json viols = json::array();
    for (const auto& v : rep.violations) {
      json vj;
      vj["x"] = {v.x[0], v.x[1]};
      if (cand.dim == 3) vj["x"].push_back(v.x[2]);
      vj["lhs"] = v.lhs;
      vj["rhs"] = v.rhs;
      vj["which"] = v.which;
      viols.push_back(vj);
    }
    out["checked"] = rep.checked;
    out["violations"] = viols;
    out["worst_residual"] = rep.worst_residual;
    exit_code = rep.pass() ? 0 : 1;
  } else if (check == "neumann") {
    if (n != 2) throw error("neumann check is 2-D");
    if (q_expr.empty()) throw error("neumann check needs --q");
    const Expr qe = Expr::parse(q_expr, {"r"});
    auto q = QProfile::closed_form([qe](double r) { return qe.eval({r}); });
    auto dom = Domain::ball(Vec(0.0, 0.0), R);
    const auto rep = check_neumann(cand, dom, q, p, std::max(16, samples / 4));
    out["mode"] = "neumann";
    out["samples"] = rep.samples;
    json viols = json::array();
    for (const auto& [r, resid] : rep.residuals)
      if (std::abs(resid) > 1e-9)
        viols.push_back({{"r", r}, {"residual", resid}});
    out["violations"] = viols;
    out["worst_residual"] = rep.max_abs_residual;
    out["barrier1_ok"] = rep.barrier1_ok;
    out["barrier2_ok"] = rep.barrier2_ok;
    exit_code =
        (rep.max_abs_residual <= 1e-9 && rep.barrier1_ok && rep.barrier2_ok)
            ? 0
            : 1;
  } else if (check == "degenerate") {
    std::vector<BandPoint> pts;
    if (n == 2) {
      auto dom = Domain::ball(Vec(0.0, 0.0), R);
      pts = boundary_band_points(dom, band);
    } else {
      pts = sphere_band_points(3, Vec::zero(3), R, band);
    }
    const auto rep = check_degenerate_relation(cand, pts);
    out["mode"] = "degenerate";
    out["checked"] = rep.checked;
    json viols = json::array();
    for (const auto& v : rep.violations)
      viols.push_back({{"lhs", v.lhs}, {"rhs", v.rhs}, {"which", v.which}});
    out["violations"] = viols;
    out["precondition_failures"] = rep.precondition_failures;
    out["worst_residual"] = rep.worst_residual;
    exit_code = rep.pass() ? 0 : 1;
  } else {
    throw error("unknown check '" + check + "'");
  }

  dump_json(out, out_path);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normalized p-Laplacian toolkit"};
  app.set_help_flag("--help", "print help");  // keep -h free for --h
  app.set_config("--config", "", "configuration file (key=value lines)");
  app.allow_config_extras(CLI::config_extras_mode::error);  // reject unknown keys
  app.require_subcommand(1);

  auto* radial = app.add_subcommand("radial", "radial reference solution");
  radial->set_help_flag("--help", "print help");
  radial->configurable();
  std::string r_p = "2";
  int r_n = 2;
  double r_R = 1.0, r_h = -1.0;
  std::string r_out = "radial.csv";
  radial->add_option("--p", r_p, "exponent p (>= 1 or 'inf')");
  radial->add_option("--n", r_n, "dimension")->check(CLI::Range(2, 3));
  radial->add_option("--R", r_R, "ball radius")->required();
  radial->add_option("--h", r_h, "grid spacing for the CSV dump");
  radial->add_option("--out", r_out, "field CSV path");

  auto* solve = app.add_subcommand("solve", "Dirichlet solve of -D_p^N u = f");
  solve->set_help_flag("--help", "print help");
  solve->configurable();
  std::string s_p = "2", s_f = "1", s_g = "0";
  DomainSpec s_dom;
  double s_h = 1.0 / 64, s_tol = 1e-8;
  std::string s_field, s_report, s_bcsv;
  int s_bsamples = 256;
  solve->add_option("--p", s_p, "exponent p (> 1 or 'inf')");
  solve->add_option("--domain", s_dom.spec,
                    "ball:R | ellipse:a,b | implicit:EXPR (append @cx,cy to "
                    "move the center)")
      ->required();
  solve->add_option("--xbar", s_dom.xbar, "interior reference point x,y");
  solve->add_option("--bbox", s_dom.bbox, "bounding box for implicit domains");
  solve->add_option("--f", s_f, "right-hand side, expression in x,y");
  solve->add_option("--g", s_g, "boundary datum, expression in x,y");
  solve->add_option("--h", s_h, "grid spacing");
  solve->add_option("--tol", s_tol, "residual tolerance");
  solve->add_option("--out-field", s_field, "field CSV path");
  solve->add_option("--out-report", s_report, "report JSON path");
  solve->add_option("--boundary-csv", s_bcsv, "boundary sample CSV path");
  solve->add_option("--boundary-samples", s_bsamples, "boundary sample count");

  auto* verify = app.add_subcommand("verify", "viscosity checks on candidates");
  verify->set_help_flag("--help", "print help");
  verify->configurable();
  std::string v_candidate = "radial", v_p = "2", v_mode = "solution";
  std::string v_check = "interior", v_q, v_out;
  int v_n = 2, v_samples = 1000;
  double v_R = 1.0, v_f = 1.0, v_band = 0.2;
  verify->add_option("--candidate", v_candidate, "radial | zero");
  verify->add_option("--p", v_p, "exponent");
  verify->add_option("--n", v_n, "dimension")->check(CLI::Range(2, 3));
  verify->add_option("--R", v_R, "radius of the radial candidate");
  verify->add_option("--mode", v_mode, "sub | super | solution");
  verify->add_option("--check", v_check, "interior | neumann | degenerate");
  verify->add_option("--f", v_f, "constant right-hand side");
  verify->add_option("--q", v_q, "Neumann datum, expression in r");
  verify->add_option("--band", v_band, "boundary band width");
  verify->add_option("--samples", v_samples, "sample count");
  verify->add_option("--out", v_out, "report JSON path");

  auto* decide = app.add_subcommand("decide", "overdetermined-problem verdict");
  decide->set_help_flag("--help", "print help");
  decide->configurable();
  std::string d_p = "2", d_q, d_qrh;
  DomainSpec d_dom;
  std::string d_out, d_bcsv;
  int d_bsamples = 256;
  decide->add_option("--p", d_p, "exponent");
  decide->add_option("--q", d_q, "Neumann datum, expression in r");
  decide->add_option("--q-rh", d_qrh,
                     "curvature-dependent datum, expression in r and h "
                     "(p = 1 problem)");
  decide->add_option("--domain", d_dom.spec, "domain spec")->required();
  decide->add_option("--xbar", d_dom.xbar, "interior reference point x,y");
  decide->add_option("--bbox", d_dom.bbox, "bounding box for implicit domains");
  decide->add_option("--out", d_out, "verdict JSON path");
  decide->add_option("--boundary-csv", d_bcsv, "boundary sample CSV path");
  decide->add_option("--boundary-samples", d_bsamples, "boundary sample count");

  auto* cx = app.add_subcommand(
      "counterexample",
      "solve on an ellipse, build the reflection-symmetric q, check the "
      "necessary inequalities");
  cx->set_help_flag("--help", "print help");
  cx->configurable();
  double c_a = 0.8, c_b = 1.2, c_h = 1.0 / 64, c_tol = 1e-8;
  std::string c_p_str = "3";
  std::string c_qcsv = "counterexample_q.csv", c_field, c_report;
  cx->add_option("--a", c_a, "semi-axis a");
  cx->add_option("--b", c_b, "semi-axis b (>= a)");
  cx->add_option("--p", c_p_str, "exponent (> 2, existence regime)");
  cx->add_option("--h", c_h, "grid spacing");
  cx->add_option("--tol", c_tol, "residual tolerance");
  cx->add_option("--q-csv", c_qcsv, "output CSV (r, q, spread)");
  cx->add_option("--field-csv", c_field, "field CSV path");
  cx->add_option("--report", c_report, "report JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (radial->parsed()) return run_radial(r_p, r_n, r_R, r_h, r_out);

    if (solve->parsed()) {
      const PValue p = parse_p(s_p);
      const Domain dom = s_dom.build();
      auto [field, rep] = solve_dirichlet(dom, p, parse_field_expr(s_f),
                                          parse_field_expr(s_g), s_h, s_tol);
      dump_json(report_json(p, s_h, rep), s_report);
      if (!s_field.empty()) write_field_csv(field, s_field);
      if (!s_bcsv.empty()) write_boundary_csv(dom, s_bcsv, s_bsamples);
      return rep.converged ? 0 : 1;
    }

    if (verify->parsed())
      return run_verify(v_candidate, v_p, v_n, v_R, v_mode, v_check, v_f, v_q,
                        v_band, v_samples, v_out);

    if (decide->parsed()) {
      const Domain dom = d_dom.build();
      Verdict v;
      if (!d_qrh.empty()) {
        if (!d_q.empty()) throw error("give either --q or --q-rh, not both");
        const Expr qe = Expr::parse(d_qrh, {"r", "h"});
        v = decide_theorem2(QProfile::curvature_form([qe](double r, double h) {
                              return qe.eval({r, h});
                            }),
                            2, dom);
      } else {
        if (d_q.empty()) throw error("decide needs --q or --q-rh");
        const PValue p = parse_p(d_p);
        const Expr qe = Expr::parse(d_q, {"r"});
        v = decide_theorem1(
            QProfile::closed_form([qe](double r) { return qe.eval({r}); }), p,
            2, dom);
      }
      dump_json(verdict_json(v), d_out);
      if (!d_bcsv.empty()) write_boundary_csv(dom, d_bcsv, d_bsamples);
      return v.no_solution_somewhere() ? 1 : 0;
    }

    if (cx->parsed()) {
      const PValue p = parse_p(c_p_str);
      if (!p.is_infinity() && p.value() <= 2.0)
        throw error("counterexample needs p > n = 2 (existence regime)");
      auto dom = Domain::ellipse(Vec(0.0, 0.0), c_a, c_b);
      auto [field, rep] = solve_dirichlet(
          dom, p, [](double, double) { return 1.0; },
          [](double, double) { return 0.0; }, c_h, c_tol);
      const auto sq = build_symmetric_q(field, dom);
      const auto ir =
          check_necessary_inequalities(field, sq.profile, p, 2, dom, 1e-6);

      CsvWriter csv(c_qcsv, {"r", "q", "spread"});
      for (const auto& s : sq.samples) csv.row({s.r, s.q, s.spread});
      if (!c_field.empty()) write_field_csv(field, c_field);

      json out;
      out["solve"] = report_json(p, c_h, rep);
      out["max_spread"] = sq.max_spread;
      out["spread_budget"] = sq.spread_budget;
      out["inequalities"] = inequalities_json(ir);
      dump_json(out, c_report);
      return (rep.converged && !ir.flagged) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

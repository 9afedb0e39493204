#include "evitherm/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evitherm/carnot.hpp"
#include "evitherm/core.hpp"
#include "evitherm/fisher.hpp"
#include "evitherm/numerics.hpp"
#include "evitherm/solvers.hpp"

namespace evitherm::cli {

namespace {

using nlohmann::ordered_json;

struct Common {
  double cv = 1.5;
  double r = 1.0;
  double tol = 1e-10;
  std::string side = "one";
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--cv", c.cv, "evidential heat capacity C_V");
  sub->add_option("--r", c.r, "evidential gas constant R");
  sub->add_option("--side", c.side, "volume convention: one or two sided")
      ->check(CLI::IsMember({"one", "two"}));
  sub->add_option("--tol", c.tol, "quadrature relative tolerance");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "write to PATH instead of stdout");
}

ModelConstants consts_of(const Common& c) {
  ModelConstants m;
  m.r = c.r;
  m.c_v = c.cv;
  m.side = c.side == "two" ? Side::two_sided : Side::one_sided;
  return m;
}

QuadratureConfig cfg_of(const Common& c) {
  QuadratureConfig q;
  q.rel_tol = c.tol;
  return q;
}

// stdout by default, a file when --out is given
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
      stream_ = &file_;
    }
  }
  std::ostream& out() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::string fmt(double v) { return format_number(v); }

void write_samples_csv(std::ostream& os, const std::vector<PathSample>& path) {
  csv_row(os, {"n", "x", "x_over_n", "log_V_E", "V_E", "P_E", "E", "S_E"});
  for (const PathSample& s : path)
    csv_row(os, {fmt(s.point.n), fmt(s.point.x), fmt(s.point.x / s.point.n),
                 fmt(s.log_v_e), fmt(std::exp(s.log_v_e)), fmt(s.p_e),
                 fmt(s.e), fmt(s.s_e)});
}

ordered_json samples_json(const std::vector<PathSample>& path) {
  ordered_json arr = ordered_json::array();
  for (const PathSample& s : path) {
    ordered_json row;
    row["n"] = s.point.n;
    row["x"] = s.point.x;
    row["x_over_n"] = s.point.x / s.point.n;
    row["log_V_E"] = s.log_v_e;
    row["V_E"] = std::exp(s.log_v_e);
    row["P_E"] = s.p_e;
    row["E"] = s.e;
    row["S_E"] = s.s_e;
    arr.push_back(row);
  }
  return arr;
}

int cmd_state(double n, double x, const Common& c, std::ostream& fallback) {
  ModelConstants consts = consts_of(c);
  QuadratureConfig cfg = cfg_of(c);
  EvidentialState st = make_state({n, x}, consts, cfg);
  TransitionPoint tp = transition_point(n, 1e-10, consts, cfg);
  std::string side = "at";
  if (std::abs(x - tp.x_star) > 1e-8 * std::max(1.0, n))
    side = x < tp.x_star ? "left" : "right";
  Sink sink(c.out, fallback);
  if (c.format == "json") {
    ordered_json j;
    j["n"] = n;
    j["x"] = x;
    j["x_over_n"] = x / n;
    j["S_E"] = st.s_e;
    j["log_V_E"] = st.log_v_e;
    j["V_E"] = st.v_e();
    j["E"] = st.e();
    j["P_E"] = st.p_e;
    j["trp_side"] = side;
    sink.out() << j.dump(2) << '\n';
  } else {
    csv_row(sink.out(),
            {"n", "x", "x_over_n", "S_E", "log_V_E", "V_E", "E", "P_E",
             "trp_side"});
    csv_row(sink.out(),
            {fmt(n), fmt(x), fmt(x / n), fmt(st.s_e), fmt(st.log_v_e),
             fmt(st.v_e()), fmt(st.e()), fmt(st.p_e), side});
  }
  return 0;
}

int cmd_trp(double n, const Common& c, std::ostream& fallback) {
  ModelConstants consts = consts_of(c);
  TransitionPoint tp = transition_point(n, 1e-10, consts, cfg_of(c));
  Sink sink(c.out, fallback);
  if (c.format == "json") {
    ordered_json j;
    j["n"] = tp.n;
    j["x_star"] = tp.x_star;
    j["x_star_over_n"] = tp.x_star / tp.n;
    j["e_min"] = tp.e_min;
    j["residual"] = tp.residual;
    sink.out() << j.dump(2) << '\n';
  } else {
    csv_row(sink.out(), {"n", "x_star", "x_star_over_n", "e_min", "residual"});
    csv_row(sink.out(), {fmt(tp.n), fmt(tp.x_star), fmt(tp.x_star / tp.n),
                         fmt(tp.e_min), fmt(tp.residual)});
  }
  return 0;
}

int cmd_curve(bool isotherm, double level, double n_lo, double n_hi,
              int samples, const Common& c, std::ostream& fallback) {
  ModelConstants consts = consts_of(c);
  QuadratureConfig cfg = cfg_of(c);
  std::vector<PathSample> path =
      isotherm ? trace_isotherm(level, n_lo, n_hi, samples, consts, cfg)
               : trace_adiabat(level, n_lo, n_hi, samples, consts, cfg);
  Sink sink(c.out, fallback);
  if (c.format == "json") {
    ordered_json j;
    j[isotherm ? "e_level" : "s_level"] = level;
    j["samples"] = samples_json(path);
    sink.out() << j.dump(2) << '\n';
  } else {
    write_samples_csv(sink.out(), path);
  }
  return 0;
}

ordered_json node_json(const EvidentialState& st) {
  ordered_json j;
  j["n"] = st.point.n;
  j["x"] = st.point.x;
  j["log_V_E"] = st.log_v_e;
  j["V_E"] = st.v_e();
  j["S_E"] = st.s_e;
  j["E"] = st.e();
  j["P_E"] = st.p_e;
  return j;
}

int cmd_carnot(double e1, double e2, double ratio, int samples,
               double start_n, double start_x, bool have_start,
               const Common& c, std::ostream& fallback) {
  ModelConstants consts = consts_of(c);
  QuadratureConfig cfg = cfg_of(c);
  EvidentialState start =
      have_start
          ? make_state({start_n, start_x}, consts, cfg)
          : solve_state(e2,
                        (0.1 - consts.c_v * std::log(e2)) / consts.r, 10.0,
                        Branch::right_of_trp, consts, cfg);
  CarnotCycle cyc = build_cycle(e1, e2, start, ratio, samples, consts, cfg);
  AuditReport rep = audit_cycle(cyc, consts);

  ordered_json j;
  j["e1"] = cyc.e1;
  j["e2"] = cyc.e2;
  j["expansion_ratio"] = ratio;
  j["path_samples"] = samples;
  static const char* labels[4] = {"A", "B", "C", "D"};
  ordered_json nodes;
  for (int i = 0; i < 4; ++i) nodes[labels[i]] = node_json(cyc.strokes[i].start);
  j["nodes"] = nodes;
  ordered_json strokes = ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    const Stroke& st = cyc.strokes[i];
    ordered_json s;
    s["name"] = labels[i];
    s["kind"] =
        st.kind == StrokeKind::isothermal ? "isothermal" : "adiabatic";
    s["w_analytic"] = st.w_analytic;
    s["w_numeric"] = st.w_numeric;
    strokes.push_back(s);
  }
  j["strokes"] = strokes;
  j["q2"] = cyc.q2;
  j["q1"] = cyc.q1;
  j["q1_over_q2"] = cyc.q1 / cyc.q2;
  j["efficiency"] = cyc.efficiency;
  j["closure_residual"] = cyc.closure_residual;
  ordered_json checks = ordered_json::array();
  for (const AuditEntry& e : rep.entries) {
    ordered_json a;
    a["name"] = e.name;
    a["residual"] = e.residual;
    a["tolerance"] = e.tolerance;
    a["pass"] = e.pass;
    checks.push_back(a);
  }
  j["audit"] = {{"all_pass", rep.all_pass}, {"checks", checks}};

  Sink sink(c.out, fallback);
  sink.out() << j.dump(2) << '\n';
  return rep.all_pass ? 0 : 1;
}

int cmd_fisher(double n, double rlo, double rhi, int rsamples, bool cv_given,
               const Common& c, std::ostream& fallback) {
  Common cc = c;
  if (!cv_given) cc.cv = 0.5 * cc.r;
  ModelConstants consts = consts_of(cc);
  QuadratureConfig cfg = cfg_of(cc);
  if (rsamples < 2) throw std::domain_error("fisher: need >= 2 ratio samples");
  std::vector<double> grid(rsamples);
  for (int i = 0; i < rsamples; ++i)
    grid[i] = rlo + (rhi - rlo) * i / (rsamples - 1);
  std::vector<FisherComparison> rows = compare_series(n, grid, consts, cfg);
  Sink sink(cc.out, fallback);
  if (cc.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const FisherComparison& r : rows) {
      ordered_json j;
      j["n"] = r.n;
      j["x"] = r.x;
      j["x_over_n"] = r.x / r.n;
      j["e_exact"] = r.e_exact;
      j["e_approx"] = r.e_approx;
      j["fi_over_2pi"] = r.fi_over_2pi;
      arr.push_back(j);
    }
    sink.out() << arr.dump(2) << '\n';
  } else {
    csv_row(sink.out(),
            {"n", "x", "x_over_n", "e_exact", "e_approx", "fi_over_2pi"});
    for (const FisherComparison& r : rows)
      csv_row(sink.out(), {fmt(r.n), fmt(r.x), fmt(r.x / r.n), fmt(r.e_exact),
                           fmt(r.e_approx), fmt(r.fi_over_2pi)});
  }
  return 0;
}

// ---- figure datasets ----
// Fixed parameter choices so repeated runs are byte-identical.

void figure_1a(std::ostream& os, const ModelConstants& consts,
               const QuadratureConfig& cfg) {
  csv_row(os, {"n", "x_over_n", "E"});
  for (double n : {10.0, 50.0, 100.0, 500.0, 1000.0})
    for (int i = 0; i <= 100; ++i) {
      double rho = 0.5 * i / 100.0;
      EvidentialState st = make_state({n, rho * n}, consts, cfg);
      csv_row(os, {fmt(n), fmt(rho), fmt(st.e())});
    }
}

void figure_1b(std::ostream& os, const ModelConstants& consts,
               const QuadratureConfig& cfg) {
  csv_row(os, {"n", "x_over_n_at_trp"});
  for (int i = 0; i <= 24; ++i) {
    double n = std::pow(10.0, 1.0 + 3.0 * i / 24.0);
    TransitionPoint tp = transition_point(n, 1e-10, consts, cfg);
    csv_row(os, {fmt(n), fmt(tp.x_star / n)});
  }
}

void figure_1c(std::ostream& os, const ModelConstants& consts,
               const QuadratureConfig& cfg) {
  csv_row(os, {"n", "x", "E"});
  for (int j = 1; j <= 50; ++j) {
    double n = 20.0 * j;
    for (int i = 0; i <= 50; ++i) {
      double x = 0.5 * n * i / 50.0;
      EvidentialState st = make_state({n, x}, consts, cfg);
      csv_row(os, {fmt(n), fmt(x), fmt(st.e())});
    }
  }
}

void figure_2ab(std::ostream& os, bool ratio_column,
                const ModelConstants& consts, const QuadratureConfig& cfg) {
  csv_row(os, {"e_level", "n", ratio_column ? "x_over_n" : "x"});
  for (double level : {2.25, 2.5, 3.0, 4.0}) {
    std::vector<PathSample> path =
        trace_isotherm(level, 1.0, 120.0, 241, consts, cfg);
    for (const PathSample& s : path)
      csv_row(os, {fmt(level), fmt(s.point.n),
                   fmt(ratio_column ? s.point.x / s.point.n : s.point.x)});
  }
}

void figure_2c(std::ostream& os, const ModelConstants& consts,
               const QuadratureConfig& cfg) {
  csv_row(os, {"V_E", "P_E"});
  std::vector<PathSample> path =
      trace_isotherm(2.25, 0.5, 12.0, 241, consts, cfg);
  for (const PathSample& s : path)
    csv_row(os, {fmt(std::exp(s.log_v_e)), fmt(s.p_e)});
}

void figure_3(std::ostream& os, std::ostream& summary,
              const ModelConstants& consts, const QuadratureConfig& cfg) {
  csv_row(os, {"cycle_id", "stroke", "V_E", "P_E"});
  csv_row(summary, {"cycle_id", "e1", "e2", "W_A", "W_B", "W_C", "W_D",
                    "q1_over_q2", "efficiency"});
  static const char* labels[4] = {"A", "B", "C", "D"};
  int id = 0;
  for (auto [e1, e2] : std::array<std::pair<double, double>, 2>{
           {{2.0, 4.0}, {4.0, 8.0}}}) {
    ++id;
    double lv = (0.1 - consts.c_v * std::log(e2)) / consts.r;
    EvidentialState start =
        solve_state(e2, lv, 10.0, Branch::right_of_trp, consts, cfg);
    CarnotCycle cyc = build_cycle(e1, e2, start, 2.0, 2048, consts, cfg);
    for (int i = 0; i < 4; ++i)
      for (const PathSample& s : cyc.strokes[i].path)
        csv_row(os, {std::to_string(id), labels[i],
                     fmt(std::exp(s.log_v_e)), fmt(s.p_e)});
    csv_row(summary,
            {std::to_string(id), fmt(e1), fmt(e2),
             fmt(cyc.strokes[0].w_analytic), fmt(cyc.strokes[1].w_analytic),
             fmt(cyc.strokes[2].w_analytic), fmt(cyc.strokes[3].w_analytic),
             fmt(cyc.q1 / cyc.q2), fmt(cyc.efficiency)});
  }
}

void figure_4(std::ostream& os, const ModelConstants& consts,
              const QuadratureConfig& cfg) {
  ModelConstants m = consts;
  m.c_v = 0.5 * m.r;  // the approximation derivation fixes c_v = r/2
  csv_row(os, {"panel_n", "x_over_n", "E", "E_approx", "fi_over_2pi"});
  std::vector<double> grid(100);
  for (int i = 1; i <= 100; ++i) grid[i - 1] = 0.005 * i;
  for (double n : {10.0, 20.0, 50.0, 100.0}) {
    std::vector<FisherComparison> rows = compare_series(n, grid, m, cfg);
    for (const FisherComparison& r : rows)
      csv_row(os, {fmt(n), fmt(r.x / r.n), fmt(r.e_exact), fmt(r.e_approx),
                   fmt(r.fi_over_2pi)});
  }
}

std::string summary_path_of(const std::string& base) {
  std::size_t dot = base.find_last_of('.');
  std::size_t slash = base.find_last_of("/\\");
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return base + "_summary";
  return base.substr(0, dot) + "_summary" + base.substr(dot);
}

int cmd_figure(const std::string& which, const Common& c,
               std::ostream& fallback, std::ostream& err) {
  static const std::array<const char*, 8> known = {
      "1a", "1b", "1c", "2a", "2b", "2c", "3", "4"};
  if (std::find_if(known.begin(), known.end(), [&](const char* k) {
        return which == k;
      }) == known.end())
    throw std::domain_error("unknown figure id: " + which);
  ModelConstants consts = consts_of(c);
  QuadratureConfig cfg = cfg_of(c);
  std::string base = c.out.empty() ? "figure_" + which + ".csv" : c.out;
  Sink sink(base, fallback);
  if (which == "1a") figure_1a(sink.out(), consts, cfg);
  else if (which == "1b") figure_1b(sink.out(), consts, cfg);
  else if (which == "1c") figure_1c(sink.out(), consts, cfg);
  else if (which == "2a") figure_2ab(sink.out(), false, consts, cfg);
  else if (which == "2b") figure_2ab(sink.out(), true, consts, cfg);
  else if (which == "2c") figure_2c(sink.out(), consts, cfg);
  else if (which == "3") {
    std::string spath = summary_path_of(base);
    Sink ssink(spath, fallback);
    figure_3(sink.out(), ssink.out(), consts, cfg);
    err << "wrote " << spath << '\n';
  } else if (which == "4") {
    figure_4(sink.out(), consts, cfg);
  } else {
    throw std::domain_error("unknown figure id: " + which);
  }
  err << "wrote " << base << '\n';
  return 0;
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"evidential thermodynamics of the one-sided binomial model"};
  app.require_subcommand(1);

  Common c_state, c_trp, c_iso, c_adi, c_car, c_fis, c_fig;
  double st_n = 0, st_x = 0, trp_n = 0;
  double iso_level = 0, iso_lo = 1.0, iso_hi = 100.0;
  int iso_samples = 200;
  double adi_level = 0, adi_lo = 1.0, adi_hi = 100.0;
  int adi_samples = 200;
  double car_e1 = 0, car_e2 = 0, car_ratio = 2.0;
  int car_samples = 2048;
  double car_start_n = 0, car_start_x = 0;
  double fis_n = 0, fis_rlo = 0.005, fis_rhi = 0.5;
  int fis_rsamples = 100;
  std::string fig_which;

  CLI::App* s_state = app.add_subcommand("state", "evaluate one (n, x) state");
  s_state->add_option("n", st_n, "toss count")->required();
  s_state->add_option("x", st_x, "success count")->required();
  add_common(s_state, c_state);

  CLI::App* s_trp = app.add_subcommand("trp", "transition point at fixed n");
  s_trp->add_option("n", trp_n, "toss count")->required();
  add_common(s_trp, c_trp);

  CLI::App* s_iso = app.add_subcommand("isotherm", "trace a constant-E curve");
  s_iso->add_option("e_level", iso_level, "evidence level")->required();
  s_iso->add_option("--n-lo", iso_lo, "lower toss count");
  s_iso->add_option("--n-hi", iso_hi, "upper toss count");
  s_iso->add_option("--samples", iso_samples, "grid size");
  add_common(s_iso, c_iso);

  CLI::App* s_adi = app.add_subcommand("adiabat", "trace a constant-S curve");
  s_adi->add_option("s_level", adi_level, "entropy level")->required();
  s_adi->add_option("--n-lo", adi_lo, "lower toss count");
  s_adi->add_option("--n-hi", adi_hi, "upper toss count");
  s_adi->add_option("--samples", adi_samples, "grid size");
  add_common(s_adi, c_adi);

  CLI::App* s_car = app.add_subcommand(
      "carnot", "build and audit a cycle between two evidence levels");
  s_car->add_option("e1", car_e1, "cold evidence level")->required();
  s_car->add_option("e2", car_e2, "hot evidence level")->required();
  s_car->add_option("--ratio", car_ratio, "isothermal expansion ratio");
  s_car->add_option("--samples", car_samples, "path samples per stroke");
  CLI::Option* opt_sn =
      s_car->add_option("--start-n", car_start_n, "start state toss count");
  CLI::Option* opt_sx =
      s_car->add_option("--start-x", car_start_x, "start state success count");
  opt_sn->needs(opt_sx);
  opt_sx->needs(opt_sn);
  add_common(s_car, c_car);

  CLI::App* s_fis = app.add_subcommand(
      "fisher", "compare exact evidence with its information closed forms");
  s_fis->add_option("n", fis_n, "toss count")->required();
  s_fis->add_option("--ratio-lo", fis_rlo, "smallest x/n");
  s_fis->add_option("--ratio-hi", fis_rhi, "largest x/n");
  s_fis->add_option("--ratio-samples", fis_rsamples, "grid size");
  add_common(s_fis, c_fis);

  CLI::App* s_fig = app.add_subcommand(
      "figure", "write a named dataset as CSV (1a 1b 1c 2a 2b 2c 3 4)");
  s_fig->add_option("which", fig_which, "dataset id")->required();
  add_common(s_fig, c_fig);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (s_state->parsed()) return cmd_state(st_n, st_x, c_state, out);
    if (s_trp->parsed()) return cmd_trp(trp_n, c_trp, out);
    if (s_iso->parsed())
      return cmd_curve(true, iso_level, iso_lo, iso_hi, iso_samples, c_iso,
                       out);
    if (s_adi->parsed())
      return cmd_curve(false, adi_level, adi_lo, adi_hi, adi_samples, c_adi,
                       out);
    if (s_car->parsed())
      return cmd_carnot(car_e1, car_e2, car_ratio, car_samples, car_start_n,
                        car_start_x, opt_sn->count() > 0, c_car, out);
    if (s_fis->parsed())
      return cmd_fisher(fis_n, fis_rlo, fis_rhi, fis_rsamples,
                        s_fis->get_option("--cv")->count() > 0, c_fis, out);
    if (s_fig->parsed()) return cmd_figure(fig_which, c_fig, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: no subcommand\n";
  return 1;
}

}  // namespace evitherm::cli

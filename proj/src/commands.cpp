#include "fvnsf/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fvnsf {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

namespace {

std::string fmt_rate(const std::optional<double>& r) { return r ? format_double(*r) : "nan"; }

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

const char* self_convergence_note =
    "Errors are measured against a finer-grid run of the same scheme restricted by exact\n"
    "cell averaging (self-convergence). This surrogate shows the rate trend only; it cannot\n"
    "certify the error constants relative to the strong solution.\n";

}  // namespace

void write_timeseries(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  out << kTimeseriesHeader << '\n';
  for (const auto& r : records) {
    out << r.step << ',' << format_double(r.t) << ',' << format_double(r.mass) << ','
        << format_double(r.e_kin) << ',' << format_double(r.e_int) << ','
        << format_double(r.e_tot) << ',' << format_double(r.diss_eps) << ','
        << format_double(r.diss_dt) << ',' << format_double(r.diss_up) << ','
        << format_double(r.diss_alpha) << ',' << format_double(r.energy_residual) << ','
        << format_double(r.entropy_prod) << ',' << format_double(r.rho_min) << ','
        << format_double(r.rho_max) << ',' << format_double(r.theta_min) << ','
        << format_double(r.theta_max) << ',' << r.picard_iters << '\n';
  }
}

void write_eoc(std::ostream& out, const StudyTable& table) {
  out << kEocHeader << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const StudyRow& r = table.rows[i];
    const ErrorReport& e = r.errors;
    std::optional<double> rr, ru, rt;
    if (i > 0) {
      rr = table.rate_rho[i - 1];
      ru = table.rate_u[i - 1];
      rt = table.rate_theta[i - 1];
    }
    out << r.n << ',' << format_double(r.h) << ',' << format_double(r.dt) << ','
        << format_double(e.err_rho) << ',' << format_double(e.err_u) << ','
        << format_double(e.err_theta) << ',' << format_double(e.err_gradu) << ','
        << format_double(e.err_gradtheta) << ',' << format_double(e.sup_relenergy) << ','
        << fmt_rate(rr) << ',' << fmt_rate(ru) << ',' << fmt_rate(rt) << ','
        << format_double(r.window.rho_min) << ',' << format_double(r.window.rho_max) << ','
        << format_double(r.window.theta_min) << ',' << format_double(r.window.theta_max)
        << '\n';
  }
}

SchemeParams scheme_params(const RunConfig& cfg) {
  SchemeParams p = cfg.params;
  p.dt = cfg.resolved_dt();
  return p;
}

State initial_state_for(const RunConfig& cfg, const GridPtr& grid) {
  const InitialData ic = make_preset(cfg.preset, cfg.dim, cfg.amplitudes);
  return initial_state(ic.rho, ic.u, ic.theta, grid, scheme_params(cfg));
}

int run_command(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  const SchemeParams p = scheme_params(cfg);
  GridPtr grid = build_grid(cfg.dim, cfg.n);
  const State s0 = initial_state_for(cfg, grid);

  std::vector<DiagnosticsRecord> records;
  StepObserver obs = [&](int k, const State& prev, const State& cur, const StepStats& st) {
    if (k % cfg.record_every == 0) records.push_back(record(prev, cur, p, st, k));
  };
  const RunResult res = run(s0, p, cfg.t_end, std::span<const StepObserver>(&obs, 1));

  fs::create_directories(out_dir);
  const fs::path path = out_dir / "timeseries.csv";
  std::ofstream out = open_output(path);
  write_timeseries(out, records);
  close_checked(out, path);

  const double m0 = total_mass(s0);
  log << "run: " << res.history.size() << " steps on " << cfg.dim << "D N=" << cfg.n
      << ", relative mass drift " << format_double((total_mass(res.final_state) - m0) / m0)
      << ", wrote " << path.string() << '\n';
  return 0;
}

int study_command(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  cfg.validate();
  StudyConfig sc;
  sc.dim = cfg.dim;
  sc.levels = cfg.study_levels;
  sc.reference = cfg.study_reference;
  sc.t_end = cfg.t_end;
  sc.dt_factor = cfg.dt_factor;
  sc.params = scheme_params(cfg);
  sc.initial = make_preset(cfg.preset, cfg.dim, cfg.amplitudes);
  const StudyTable table = run_study(sc);

  fs::create_directories(out_dir);
  const fs::path eoc_path = out_dir / "eoc.csv";
  std::ofstream out = open_output(eoc_path);
  write_eoc(out, table);
  close_checked(out, eoc_path);
  for (const StudyRow& row : table.rows) {
    const fs::path p = out_dir / ("timeseries_N" + std::to_string(row.n) + ".csv");
    std::ofstream ts = open_output(p);
    write_timeseries(ts, row.records);
    close_checked(ts, p);
  }

  const fs::path report_path = out_dir / "study_report.txt";
  std::ofstream rep = open_output(report_path);
  rep << self_convergence_note;
  rep << "reference N=" << sc.reference << ", t_end=" << format_double(sc.t_end)
      << ", dt = " << format_double(sc.dt_factor) << " h, eps=" << format_double(sc.params.eps)
      << ", alpha=" << (sc.params.alpha ? format_double(*sc.params.alpha) : "none") << '\n';
  rep << "reference (AS) window: rho in [" << format_double(table.reference_window.rho_min)
      << ", " << format_double(table.reference_window.rho_max) << "], theta in ["
      << format_double(table.reference_window.theta_min) << ", "
      << format_double(table.reference_window.theta_max) << "]\n";
  rep << "pair,rate_rho,rate_u,rate_theta,rate_gradu,rate_gradtheta\n";
  for (std::size_t i = 0; i < table.rate_rho.size(); ++i) {
    rep << table.rows[i].n << "->" << table.rows[i + 1].n << ',' << fmt_rate(table.rate_rho[i])
        << ',' << fmt_rate(table.rate_u[i]) << ',' << fmt_rate(table.rate_theta[i]) << ','
        << fmt_rate(table.rate_gradu[i]) << ',' << fmt_rate(table.rate_gradtheta[i]) << '\n';
  }
  rep << "N,mean_diss_alpha\n";
  for (const StudyRow& row : table.rows) {
    rep << row.n << ',' << format_double(row.mean_diss_alpha) << '\n';
  }
  close_checked(rep, report_path);

  log << "study: " << table.rows.size() << " levels against reference N=" << sc.reference
      << ", wrote " << eoc_path.string() << '\n';
  return 0;
}

int check_command(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log,
                  const OperatorTable& ops) {
  CheckConfig cc;
  cc.seed = cfg.seed;
  cc.trials = cfg.trials;
  const auto results = run_property_suite(cc, ops);
  bool all = true;
  std::ostringstream csv;
  csv << "property,passed,worst,threshold\n";
  for (const auto& r : results) {
    all = all && r.passed;
    log << (r.passed ? "PASS " : "FAIL ") << r.name << " worst=" << format_double(r.worst)
        << " threshold=" << format_double(r.threshold) << " (" << r.detail << ")\n";
    csv << r.name << ',' << (r.passed ? 1 : 0) << ',' << format_double(r.worst) << ','
        << format_double(r.threshold) << '\n';
  }
  fs::create_directories(out_dir);
  const fs::path path = out_dir / "check.csv";
  std::ofstream out = open_output(path);
  out << csv.str();
  close_checked(out, path);
  return all ? 0 : 1;
}

std::vector<ConsistencyRow> consistency_study(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ConsistencyRow> rows;
  const InitialData ic = make_preset(cfg.preset, cfg.dim, cfg.amplitudes);
  for (int n : cfg.consistency_levels) {
    GridPtr grid = build_grid(cfg.dim, n);
    SchemeParams p = cfg.params;
    p.dt = cfg.consistency_dt == "h2" ? grid->h() * grid->h() : cfg.dt_factor * grid->h();
    const int steps = step_count(cfg.consistency_tau, p.dt);
    State s = initial_state(ic.rho, ic.u, ic.theta, grid, p);
    ConsistencyAccumulator acc(builtin_test_functions(cfg.dim), p, s);
    for (int k = 1; k <= steps; ++k) {
      try {
        auto [next, stats] = step(s, p);
        next.t = k * p.dt;
        acc.add(s, next);
        s = std::move(next);
      } catch (const SolverError& e) {
        throw SolverError(e.kind(),
                          "level N=" + std::to_string(n) + ": step " + std::to_string(k) +
                              ": " + e.what(),
                          k);
      }
    }
    rows.push_back({n, acc.report()});
  }
  return rows;
}

int consistency_command(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto rows = consistency_study(cfg);
  fs::create_directories(out_dir);
  const fs::path path = out_dir / "consistency.csv";
  std::ofstream out = open_output(path);
  out << kConsistencyHeader << '\n';
  for (const auto& row : rows) {
    const ConsistencyReport& r = row.report;
    out << row.n << ',' << format_double(r.h) << ',' << format_double(r.dt) << ','
        << format_double(r.eps) << ',' << format_double(r.max_e_rho()) << ','
        << format_double(r.max_e_m()) << ',' << format_double(r.entropy_defect("one")) << '\n';
  }
  close_checked(out, path);

  const fs::path detail = out_dir / "consistency_detail.csv";
  std::ofstream det = open_output(detail);
  det << "N,test_function,e_rho,e_m_norm,e_s_signed\n";
  for (const auto& row : rows) {
    for (const auto& e : row.report.entries) {
      det << row.n << ',' << e.name << ',' << format_double(e.e_rho) << ','
          << format_double(e.e_m_norm) << ','
          << (e.has_entropy ? format_double(e.e_s) : std::string("nan")) << '\n';
    }
  }
  close_checked(det, detail);

  std::vector<double> errs;
  for (const auto& row : rows) errs.push_back(row.report.max_e_rho());
  const auto rates = eoc(errs);
  log << "consistency: e_rho rates";
  for (const auto& r : rates) log << ' ' << fmt_rate(r);
  log << ", wrote " << path.string() << '\n';
  return 0;
}

std::string error_line(const std::exception& e) {
  std::string kind = "Error";
  std::string step = "-";
  if (const auto* se = dynamic_cast<const SolverError*>(&e)) {
    kind = to_string(se->kind());
    if (se->step() >= 0) step = std::to_string(se->step());
  } else if (dynamic_cast<const ConfigError*>(&e)) {
    kind = "ConfigError";
  } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
    kind = "InvalidArgument";
  }
  std::string msg;
  for (char c : std::string(e.what())) {
    if (c == '"') {
      msg += "\\\"";
    } else if (c == '\n') {
      msg += ' ';
    } else {
      msg += c;
    }
  }
  return "error kind=" + kind + " step=" + step + " message=\"" + msg + "\"";
}

}  // namespace fvnsf

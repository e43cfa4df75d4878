#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fvnsf/checks.hpp"
#include "fvnsf/config.hpp"
#include "fvnsf/convergence.hpp"
#include "fvnsf/diagnostics.hpp"

namespace fvnsf {

/// Shortest round-trip text is not required; 17 significant digits, '.'
/// decimal, "nan"/"inf" for non-finite values.
std::string format_double(double v);

inline constexpr const char* kTimeseriesHeader =
    "step,t,mass,e_kin,e_int,e_tot,diss_eps,diss_dt,diss_up,diss_alpha,energy_residual,"
    "entropy_prod,rho_min,rho_max,theta_min,theta_max,picard_iters";
inline constexpr const char* kEocHeader =
    "N,h,dt,err_rho,err_u,err_theta,err_gradu,err_gradtheta,sup_relenergy,rate_rho,rate_u,"
    "rate_theta,as_rho_min,as_rho_max,as_theta_min,as_theta_max";
inline constexpr const char* kConsistencyHeader = "N,h,dt,eps,e_rho,e_m,e_s_signed";

void write_timeseries(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_eoc(std::ostream& out, const StudyTable& table);

/// Scheme parameters of a config with dt resolved.
SchemeParams scheme_params(const RunConfig& cfg);
State initial_state_for(const RunConfig& cfg, const GridPtr& grid);

/// Each command writes its artifacts into `out_dir` (created if missing),
/// prints a short summary to `log`, and returns the process exit status.
/// Errors propagate as exceptions; the CLI turns them into error lines.
int run_command(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int study_command(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int check_command(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log,
                  const OperatorTable& ops = {});
int consistency_command(const RunConfig& cfg, const std::filesystem::path& out_dir,
                        std::ostream& log);

struct ConsistencyRow {
  int n = 0;
  ConsistencyReport report;
};
std::vector<ConsistencyRow> consistency_study(const RunConfig& cfg);

/// One machine-readable line: error kind=<Kind> step=<k|-> message="...".
std::string error_line(const std::exception& e);

}  // namespace fvnsf

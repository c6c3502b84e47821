#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nsac/eps_coords.hpp"
#include "nsac/sim.hpp"
#include "nsac/spectral1d.hpp"
#include "nsac/study.hpp"
#include "nsac/surface_pde.hpp"

namespace nsac {

// JSON <-> config with all defaults materialized; schema violations carry the
// field path, physical-validity problems throw PhysicsValidationError.
SimConfig parse_sim_config(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& cfg);
StudyConfig parse_study_config(const nlohmann::json& j);
nlohmann::json study_config_to_json(const StudyConfig& cfg);

nlohmann::json load_json_file(const std::string& path);
void apply_tol_overrides(SimConfig& cfg, const nlohmann::json& overrides);

struct RunManifest {
    uint64_t config_hash = 0;
    std::string version;
    double wall_time_s = 0.0;
    nlohmann::json tolerances;
    std::vector<std::string> outputs;
};
void write_manifest(const std::string& path, const RunManifest& manifest);

// CSV artifacts. All numeric output uses %.17g so identical inputs give
// bit-identical files.
void write_profile_csv(const std::string& path, const Profile& profile);
void write_curve_csv(const std::string& path, const Curve& curve);
Curve read_curve_csv(const std::string& path);
void write_ode_csv(const std::string& path, const std::vector<double>& rho,
                   const std::vector<double>& w);
void write_gap_report_csv(const std::string& path, const GapReport& report);
void write_kappa_report_csv(const std::string& path, const KappaReport& report);
void write_ortho_report_csv(const std::string& path, const OrthoReport& report);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagRow>& rows);
void write_norms_csv(const std::string& path, const std::vector<NormRecord>& records);
void write_study_summary_json(const std::string& path, const StudyResult& result);

// flat binary field dump with a JSON sidecar (nx, ny, h, t, eps, alpha)
void write_snapshot(const std::string& base_path, const std::vector<double>& field, int nx,
                    int ny, double h, double t, double eps, double alpha);
std::vector<double> read_snapshot(const std::string& base_path, int& nx, int& ny, double& h,
                                  double& t, double& eps, double& alpha);

inline const char* tool_version() { return "0.1.0"; }

}  // namespace nsac

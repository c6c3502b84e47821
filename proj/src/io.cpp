#include "nsac/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace nsac {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T get_or(const json& j, const std::string& path, T fallback) {
    const json* cur = &j;
    size_t pos = 0;
    std::string key;
    std::string rest = path;
    while ((pos = rest.find('.')) != std::string::npos) {
        key = rest.substr(0, pos);
        rest = rest.substr(pos + 1);
        if (!cur->contains(key)) return fallback;
        cur = &(*cur)[key];
    }
    if (!cur->contains(rest)) return fallback;
    try {
        return (*cur)[rest].get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config: bad type at field '" + path + "'");
    }
}

Vec2 get_vec2(const json& j, const std::string& path, Vec2 fallback) {
    auto arr = get_or<std::vector<double>>(j, path, {fallback.x, fallback.y});
    if (arr.size() != 2) throw ValidationError("config: field '" + path + "' must be [x, y]");
    return {arr[0], arr[1]};
}

std::ofstream open_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("io: cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("config: parse error in " + path + ": " + e.what());
    }
    return j;
}

SimConfig parse_sim_config(const json& j) {
    SimConfig cfg;
    cfg.nx = get_or<int>(j, "grid.nx", cfg.nx);
    cfg.ny = get_or<int>(j, "grid.ny", cfg.ny);
    cfg.Lx = get_or<double>(j, "grid.Lx", cfg.Lx);
    cfg.Ly = get_or<double>(j, "grid.Ly", cfg.Ly);
    std::string bnd = get_or<std::string>(j, "boundary", "periodic");
    if (bnd == "periodic")
        cfg.boundary = SimConfig::Boundary::periodic;
    else if (bnd == "walls")
        cfg.boundary = SimConfig::Boundary::walls;
    else
        throw ValidationError("config: field 'boundary' must be 'periodic' or 'walls'");
    cfg.eps = get_or<double>(j, "eps", cfg.eps);
    cfg.alpha = get_or<double>(j, "alpha", cfg.alpha);
    cfg.mobility_override = get_or<double>(j, "mobility_override", cfg.mobility_override);
    cfg.nu_plus = get_or<double>(j, "viscosity.nu_plus", cfg.nu_plus);
    cfg.nu_minus = get_or<double>(j, "viscosity.nu_minus", cfg.nu_minus);
    cfg.T = get_or<double>(j, "time.T", cfg.T);
    cfg.dt = get_or<double>(j, "time.dt", cfg.dt);
    cfg.out_interval = get_or<double>(j, "time.out_interval", cfg.out_interval);
    cfg.ac_accuracy = get_or<double>(j, "time.ac_accuracy", cfg.ac_accuracy);
    cfg.ac_only = get_or<bool>(j, "ac_only", cfg.ac_only);
    std::string kind = get_or<std::string>(j, "initial.kind", "circle");
    if (kind == "circle")
        cfg.init = SimConfig::InitKind::circle;
    else if (kind == "stripe")
        cfg.init = SimConfig::InitKind::stripe;
    else if (kind == "uniform")
        cfg.init = SimConfig::InitKind::uniform;
    else
        throw ValidationError("config: field 'initial.kind' must be circle|stripe|uniform");
    cfg.center = get_vec2(j, "initial.center", cfg.center);
    cfg.radius = get_or<double>(j, "initial.radius", cfg.radius);
    cfg.velocity = get_vec2(j, "initial.velocity", cfg.velocity);
    cfg.stripe_x0 = get_or<double>(j, "initial.stripe_x0", cfg.stripe_x0);
    cfg.stripe_x1 = get_or<double>(j, "initial.stripe_x1", cfg.stripe_x1);
    cfg.noise_amp = get_or<double>(j, "initial.noise_amp", cfg.noise_amp);
    cfg.noise_seed = get_or<unsigned>(j, "initial.noise_seed", cfg.noise_seed);
    cfg.delta_cut = get_or<double>(j, "delta_cut", cfg.delta_cut);
    cfg.projection_tol = get_or<double>(j, "projection_tol", cfg.projection_tol);
    cfg.validate();
    return cfg;
}

json sim_config_to_json(const SimConfig& cfg) {
    json j;
    j["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}, {"Lx", cfg.Lx}, {"Ly", cfg.Ly}};
    j["boundary"] = cfg.boundary == SimConfig::Boundary::periodic ? "periodic" : "walls";
    j["eps"] = cfg.eps;
    j["alpha"] = cfg.alpha;
    j["mobility_override"] = cfg.mobility_override;
    j["viscosity"] = {{"nu_plus", cfg.nu_plus}, {"nu_minus", cfg.nu_minus}};
    j["time"] = {{"T", cfg.T}, {"dt", cfg.dt}, {"out_interval", cfg.out_interval},
                 {"ac_accuracy", cfg.ac_accuracy}};
    j["ac_only"] = cfg.ac_only;
    const char* kind = cfg.init == SimConfig::InitKind::circle ? "circle"
                       : cfg.init == SimConfig::InitKind::stripe ? "stripe" : "uniform";
    j["initial"] = {{"kind", kind},
                    {"center", {cfg.center.x, cfg.center.y}},
                    {"radius", cfg.radius},
                    {"velocity", {cfg.velocity.x, cfg.velocity.y}},
                    {"stripe_x0", cfg.stripe_x0},
                    {"stripe_x1", cfg.stripe_x1},
                    {"noise_amp", cfg.noise_amp},
                    {"noise_seed", cfg.noise_seed}};
    j["delta_cut"] = cfg.delta_cut;
    j["projection_tol"] = cfg.projection_tol;
    return j;
}

StudyConfig parse_study_config(const json& j) {
    StudyConfig cfg;
    cfg.alpha = get_or<double>(j, "alpha", cfg.alpha);
    cfg.eps_list = get_or<std::vector<double>>(j, "eps_list", cfg.eps_list);
    cfg.T = get_or<double>(j, "T", cfg.T);
    cfg.R0 = get_or<double>(j, "R0", cfg.R0);
    cfg.center = get_vec2(j, "center", cfg.center);
    cfg.U = get_vec2(j, "U", cfg.U);
    cfg.resolution_factor = get_or<int>(j, "resolution_factor", cfg.resolution_factor);
    cfg.nu_plus = get_or<double>(j, "viscosity.nu_plus", cfg.nu_plus);
    cfg.nu_minus = get_or<double>(j, "viscosity.nu_minus", cfg.nu_minus);
    cfg.snapshots = get_or<int>(j, "snapshots", cfg.snapshots);
    cfg.ac_only = get_or<bool>(j, "ac_only", cfg.ac_only);
    return cfg;
}

json study_config_to_json(const StudyConfig& cfg) {
    json j;
    j["alpha"] = cfg.alpha;
    j["eps_list"] = cfg.eps_list;
    j["T"] = cfg.T;
    j["R0"] = cfg.R0;
    j["center"] = {cfg.center.x, cfg.center.y};
    j["U"] = {cfg.U.x, cfg.U.y};
    j["resolution_factor"] = cfg.resolution_factor;
    j["viscosity"] = {{"nu_plus", cfg.nu_plus}, {"nu_minus", cfg.nu_minus}};
    j["snapshots"] = cfg.snapshots;
    j["ac_only"] = cfg.ac_only;
    return j;
}

void apply_tol_overrides(SimConfig& cfg, const json& overrides) {
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        if (it.key() == "projection_tol")
            cfg.projection_tol = it.value().get<double>();
        else if (it.key() == "ac_accuracy")
            cfg.ac_accuracy = it.value().get<double>();
        else
            throw ValidationError("tol-overrides: unknown key '" + it.key() + "'");
    }
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    json j;
    j["config_hash"] = manifest.config_hash;
    j["version"] = manifest.version;
    j["wall_time_s"] = manifest.wall_time_s;
    j["tolerances"] = manifest.tolerances;
    j["outputs"] = manifest.outputs;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_profile_csv(const std::string& path, const Profile& profile) {
    auto out = open_out(path);
    out << "rho,theta0,theta0p,theta0pp\n";
    for (int i = 0; i < profile.n_points(); ++i)
        out << fmt(profile.rho[i]) << ',' << fmt(profile.theta[i]) << ','
            << fmt(profile.dtheta[i]) << ',' << fmt(profile.d2theta[i]) << '\n';
}

void write_curve_csv(const std::string& path, const Curve& curve) {
    auto out = open_out(path);
    out << "s,x,y\n";
    for (int i = 0; i < curve.n; ++i)
        out << fmt(curve.s[i]) << ',' << fmt(curve.x[i].x) << ',' << fmt(curve.x[i].y) << '\n';
}

Curve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("io: cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);  // header
    std::vector<Vec2> pts;
    while (std::getline(in, line)) {
        double s, x, y;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &x, &y) != 3)
            throw ValidationError("io: malformed curve CSV line: " + line);
        pts.push_back({x, y});
    }
    return build_curve(pts);
}

void write_ode_csv(const std::string& path, const std::vector<double>& rho,
                   const std::vector<double>& w) {
    auto out = open_out(path);
    out << "rho,w\n";
    for (size_t i = 0; i < rho.size(); ++i) out << fmt(rho[i]) << ',' << fmt(w[i]) << '\n';
}

void write_gap_report_csv(const std::string& path, const GapReport& report) {
    auto out = open_out(path);
    out << "epsilon,lambda0,lambda1,eps2_lambda1\n";
    for (const auto& r : report.rows)
        out << fmt(r.eps) << ',' << fmt(r.lambda0) << ',' << fmt(r.lambda1) << ','
            << fmt(r.eps2_lambda1) << '\n';
}

void write_kappa_report_csv(const std::string& path, const KappaReport& report) {
    auto out = open_out(path);
    out << "kappa,lhs27,rhs27,ratio27,lhs28,rhs28,ratio28\n";
    for (const auto& r : report.rows)
        out << fmt(r.kappa) << ',' << fmt(r.lhs27) << ',' << fmt(r.rhs27) << ','
            << fmt(r.ratio27) << ',' << fmt(r.lhs28) << ',' << fmt(r.rhs28) << ','
            << fmt(r.ratio28) << '\n';
}

void write_ortho_report_csv(const std::string& path, const OrthoReport& report) {
    auto out = open_out(path);
    out << "eps,defect\n";
    for (const auto& r : report.rows) out << fmt(r.eps) << ',' << fmt(r.defect) << '\n';
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagRow>& rows) {
    auto out = open_out(path);
    out << "t,E,Ekin,Egrad,Epot,divmax,radius\n";
    for (const auto& r : rows)
        out << fmt(r.t) << ',' << fmt(r.energy) << ',' << fmt(r.kinetic) << ','
            << fmt(r.gradient) << ',' << fmt(r.potential) << ',' << fmt(r.div_max) << ','
            << fmt(r.radius) << '\n';
}

void write_norms_csv(const std::string& path, const std::vector<NormRecord>& records) {
    auto out = open_out(path);
    out << "eps,alpha,linf_l2,grad_off,grad_tau,grad_tube,radius_err\n";
    for (const auto& r : records)
        out << fmt(r.eps) << ',' << fmt(r.alpha) << ',' << fmt(r.linf_l2) << ','
            << fmt(r.grad_off) << ',' << fmt(r.grad_tau) << ',' << fmt(r.grad_tube) << ','
            << fmt(r.radius_err) << '\n';
}

void write_study_summary_json(const std::string& path, const StudyResult& result) {
    json j;
    auto fits_json = [](const ErrorReport& rep) {
        json f;
        if (rep.has_fits) {
            auto one = [](const LineFit& fit) {
                return json{{"order", fit.slope}, {"ci95", fit.ci95()}};
            };
            f["linf_l2"] = one(rep.fits.linf_l2);
            f["grad_off"] = one(rep.fits.grad_off);
            f["grad_tau"] = one(rep.fits.grad_tau);
            f["grad_tube"] = one(rep.fits.grad_tube);
        }
        return f;
    };
    j["corrected"] = fits_json(result.corrected);
    j["transported"] = fits_json(result.transported);
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_snapshot(const std::string& base_path, const std::vector<double>& field, int nx,
                    int ny, double h, double t, double eps, double alpha) {
    {
        std::filesystem::path p(base_path + ".bin");
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        if (!out) throw ValidationError("io: cannot open '" + p.string() + "'");
        out.write(reinterpret_cast<const char*>(field.data()),
                  static_cast<std::streamsize>(field.size() * sizeof(double)));
    }
    json side;
    side["nx"] = nx;
    side["ny"] = ny;
    side["h"] = h;
    side["t"] = t;
    side["eps"] = eps;
    side["alpha"] = alpha;
    auto out = open_out(base_path + ".json");
    out << side.dump(2) << "\n";
}

std::vector<double> read_snapshot(const std::string& base_path, int& nx, int& ny, double& h,
                                  double& t, double& eps, double& alpha) {
    json side = load_json_file(base_path + ".json");
    nx = side.at("nx").get<int>();
    ny = side.at("ny").get<int>();
    h = side.at("h").get<double>();
    t = side.at("t").get<double>();
    eps = side.at("eps").get<double>();
    alpha = side.at("alpha").get<double>();
    std::ifstream in(base_path + ".bin", std::ios::binary);
    if (!in) throw ValidationError("io: cannot open '" + base_path + ".bin'");
    std::vector<double> field(static_cast<size_t>(nx) * ny);
    in.read(reinterpret_cast<char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!in) throw ValidationError("io: snapshot binary truncated");
    return field;
}

}  // namespace nsac

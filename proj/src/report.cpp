#include "crnrd/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace crnrd {

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return std::to_string(v);
    return std::string(buf, ptr);
}

Json vec_json(const Eigen::VectorXd& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Json mat_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

Json stoichiometry_block(const StoichData& stoich) {
    Json j;
    j["species"] = stoich.W.rows();
    j["reactions"] = stoich.W.cols();
    j["rank_W"] = stoich.rank_W;
    j["m"] = stoich.m;
    j["Q"] = mat_json(stoich.Q);
    j["exact_conservation"] = stoich.exact_conservation;
    j["linkage_classes"] = stoich.linkage_classes.size();
    j["weakly_reversible"] = stoich.weakly_reversible;
    j["deficiency"] = stoich.deficiency;
    return j;
}

Json equilibrium_block(const EquilibriumCertificate& cert) {
    Json j;
    j["classification"] = to_string(cert.classification);
    if (cert.u_ref) j["u_ref"] = vec_json(*cert.u_ref);
    if (cert.u_inf) j["u_inf"] = vec_json(*cert.u_inf);
    j["mass"] = vec_json(cert.mass);
    j["eta"] = vec_json(cert.eta);
    j["cb_residual"] = cert.cb_residual;
    j["db_residual"] = std::isfinite(cert.db_residual) ? Json(cert.db_residual)
                                                       : Json("unpaired");
    j["mass_residual"] = cert.mass_residual;
    if (!cert.failure.empty()) j["failure"] = cert.failure;
    return j;
}

Json spectral_block(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                    const SpectralCertificate& cert) {
    Json j;
    j["L"] = mat_json(rhs_jacobian(net, u_inf));
    j["beta"] = cert.beta;
    j["poincare"] = cert.poincare;
    j["lambda"] = cert.lambda;
    return j;
}

Json verification_report_json(const VerificationReport& rep) {
    Json j;
    j["network"] = rep.network_id;
    j["classification"] = to_string(rep.classification);
    j["u_inf"] = vec_json(rep.u_inf);
    j["certificate"]["beta"] = rep.beta;
    j["certificate"]["poincare"] = rep.poincare;
    j["certificate"]["lambda"] = rep.lambda;
    j["mu"] = rep.mu;
    j["mu_admissible"] = rep.mu_admissible.value();
    j["mu_in_regime"] = rep.mu_in_regime;
    j["fitted_rate"] = rep.fitted_rate;
    j["target_rate"] = rep.target_rate;
    j["ratio"] = rep.ratio;
    j["conservation_drift"] = rep.conservation_drift;
    j["clamp_count"] = rep.clamp_count;
    j["oscillatory"] = rep.oscillatory;
    j["checks"]["rate"] = rep.pass_rate;
    j["checks"]["drift"] = rep.pass_drift;
    j["checks"]["clamps"] = rep.pass_clamps;
    j["pass"] = rep.pass;
    if (!rep.failure_stage.empty()) {
        j["failure_stage"] = rep.failure_stage;
        j["failure"] = rep.failure;
    }
    j["options"]["fit_window"] = {rep.options.fit_window_lo, rep.options.fit_window_hi};
    j["options"]["tol_fit"] = rep.options.tol_fit;
    j["options"]["tol_cb"] = rep.options.tol_cb;
    j["options"]["seed"] = rep.options.seed;
    return j;
}

SimConfig load_sim_config(const Json& doc, const std::string& base_dir) {
    SimConfig cfg;
    try {
        std::filesystem::path net = doc.at("network").get<std::string>();
        if (net.is_relative() && !base_dir.empty()) net = base_dir / net;
        cfg.network_path = net.string();

        auto diff = doc.at("diffusion").get<std::vector<double>>();
        cfg.diffusion = Eigen::Map<Eigen::VectorXd>(diff.data(),
                                                    static_cast<Eigen::Index>(diff.size()));

        const auto& dom = doc.at("domain");
        cfg.domain.dim = dom.at("dim").get<int>();
        auto lengths = dom.at("lengths").get<std::vector<double>>();
        for (std::size_t i = 0; i < lengths.size() && i < 2; ++i)
            cfg.domain.lengths[i] = lengths[i];

        auto cells = doc.at("cells").get<std::vector<int>>();
        cfg.cells = {cells.at(0), cells.size() > 1 ? cells[1] : 1};

        cfg.epsilon = doc.at("epsilon").get<double>();
        for (const auto& mode : doc.at("modes")) {
            PerturbationMode m;
            auto w = mode.at("weights").get<std::vector<double>>();
            m.weights = Eigen::Map<Eigen::VectorXd>(w.data(),
                                                    static_cast<Eigen::Index>(w.size()));
            m.index_x = mode.value("index_x", mode.value("index", 0));
            m.index_y = mode.value("index_y", 0);
            m.amplitude = mode.value("amplitude", 1.0);
            cfg.modes.push_back(std::move(m));
        }
        cfg.t_end = doc.at("t_end").get<double>();
        cfg.dt = doc.at("dt").get<double>();
        cfg.stride = doc.value("stride", 1);
        cfg.clamp_negatives = doc.value("clamp_negatives", true);
        if (doc.contains("mass")) {
            auto m = doc.at("mass").get<std::vector<double>>();
            cfg.mass = Eigen::Map<Eigen::VectorXd>(m.data(),
                                                   static_cast<Eigen::Index>(m.size()));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidConfig,
                    std::string("malformed simulation config: ") + e.what());
    }
    return cfg;
}

SimConfig load_sim_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::InvalidConfig, "cannot open config file " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidConfig,
                    "invalid JSON in " + path + ": " + e.what());
    }
    return load_sim_config(doc, std::filesystem::path(path).parent_path().string());
}

std::string series_csv(const std::vector<SimRow>& rows) {
    std::string out = "t,l2w_sq,linf";
    const Eigen::Index m = rows.empty() ? 0 : rows.front().mass.size();
    for (Eigen::Index j = 0; j < m; ++j)
        out += ",mass_" + std::to_string(j + 1);
    out += ",min_u,clamps\n";
    for (const auto& row : rows) {
        out += fmt(row.t) + "," + fmt(row.l2w_sq) + "," + fmt(row.linf);
        for (Eigen::Index j = 0; j < m; ++j) out += "," + fmt(row.mass[j]);
        out += "," + fmt(row.min_u) + "," + std::to_string(row.clamps) + "\n";
    }
    return out;
}

std::string series_gnuplot(const std::vector<SimRow>& rows) {
    std::string out = "# t  log_l2w_sq\n";
    for (const auto& row : rows) {
        if (!(row.l2w_sq > 0.0)) continue;
        out += fmt(row.t) + " " + fmt(std::log(row.l2w_sq)) + "\n";
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::InvalidConfig, "cannot write " + tmp.string());
        out << contents;
    }
    std::filesystem::rename(tmp, target);
}

} // namespace crnrd

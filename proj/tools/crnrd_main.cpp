#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crnrd/harness.hpp"
#include "crnrd/parser.hpp"
#include "crnrd/report.hpp"

namespace {

using namespace crnrd;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReactionNetwork load_network(const std::string& path) {
    ParseResult res = parse_network(read_file(path));
    if (auto* err = std::get_if<ParseError>(&res))
        throw Error(ErrorKind::InvalidConfig, path + ": " + format_parse_error(*err));
    return std::get<ReactionNetwork>(std::move(res));
}

Eigen::VectorXd parse_csv_vector(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        values.push_back(std::stod(tok));
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(),
                                       static_cast<Eigen::Index>(values.size()));
}

Domain parse_domain_spec(const std::string& spec) {
    Domain d;
    auto x = spec.find('x');
    if (x == std::string::npos) {
        d.dim = 1;
        d.lengths[0] = std::stod(spec);
    } else {
        d.dim = 2;
        d.lengths[0] = std::stod(spec.substr(0, x));
        d.lengths[1] = std::stod(spec.substr(x + 1));
    }
    return d;
}

int default_threads() {
    if (const char* env = std::getenv("CRNRD_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

int cmd_analyze(const std::string& net_path) {
    ReactionNetwork net = load_network(net_path);
    StoichData stoich = analyze_stoichiometry(net);
    EquilibriumCertificate cert = certify_equilibrium(net, stoich);
    Json j;
    j["network"] = net_path;
    j["mu"] = nonlinearity_order(net);
    j["growth_constant"] = growth_constant(net);
    j["delta"] = perturbation_exponent_delta(net);
    j["stoichiometry"] = stoichiometry_block(stoich);
    j["equilibrium"] = equilibrium_block(cert);
    std::cout << j.dump(2) << "\n";
    return kExitPass;
}

int cmd_equilibrium(const std::string& net_path, const std::string& mass_csv,
                    const std::string& u0_file, double tol_cb) {
    ReactionNetwork net = load_network(net_path);
    StoichData stoich = analyze_stoichiometry(net);
    std::optional<Eigen::VectorXd> mass;
    if (!mass_csv.empty()) mass = parse_csv_vector(mass_csv);
    if (!u0_file.empty()) {
        MassVector mv = mass_vector(stoich.Q, parse_csv_vector(read_file(u0_file)));
        if (mv.nonpositive_warning)
            std::cerr << "warning: NonpositiveMass: some conserved moments are <= 0\n";
        mass = mv.values;
    }
    EquilibriumCertificate cert = certify_equilibrium(net, stoich, mass, tol_cb);
    Json j;
    j["network"] = net_path;
    j["equilibrium"] = equilibrium_block(cert);
    std::cout << j.dump(2) << "\n";
    return cert.classification == BalanceClass::NotComplexBalanced ? kExitCheckFailure
                                                                   : kExitPass;
}

int cmd_spectrum(const std::string& net_path, const std::string& diffusion_csv,
                 const std::string& domain_spec, double tol_cb) {
    ReactionNetwork net = load_network(net_path);
    StoichData stoich = analyze_stoichiometry(net);
    EquilibriumCertificate cert = certify_equilibrium(net, stoich, {}, tol_cb);
    if (cert.classification == BalanceClass::NotComplexBalanced)
        throw Error(ErrorKind::NotAnEquilibrium, "network is not complex balanced: " +
                                                     cert.failure);
    Eigen::VectorXd d = parse_csv_vector(diffusion_csv);
    Domain domain = parse_domain_spec(domain_spec);
    SpectralCertificate gap = gap_certificate(net, *cert.u_inf, d, stoich.Q, domain);
    Json j;
    j["network"] = net_path;
    j["u_inf"] = Json::array();
    for (Eigen::Index i = 0; i < cert.u_inf->size(); ++i)
        j["u_inf"].push_back((*cert.u_inf)[i]);
    j["spectral"] = spectral_block(net, *cert.u_inf, gap);
    std::cout << j.dump(2) << "\n";
    return kExitPass;
}

struct PipelineArgs {
    std::string config_path;
    std::string out_dir = ".";
    int threads = default_threads();
    unsigned seed = 0;
    double tol_cb = 1e-8;
    double tol_fit = 0.05;
    std::string fit_window; // "a,b" in absolute time
};

int cmd_simulate(const PipelineArgs& args) {
    SimConfig cfg = load_sim_config_file(args.config_path);
    cfg.threads = args.threads;
    ReactionNetwork net = load_network(cfg.network_path);
    StoichData stoich = analyze_stoichiometry(net);
    EquilibriumCertificate cert = certify_equilibrium(net, stoich, cfg.mass, args.tol_cb);
    if (cert.classification == BalanceClass::NotComplexBalanced)
        throw Error(ErrorKind::NotAnEquilibrium,
                    "network is not complex balanced: " + cert.failure);
    SimResult sim = simulate(net, *cert.u_inf, stoich.Q, cfg);
    std::filesystem::create_directories(args.out_dir);
    write_file_atomic(args.out_dir + "/series.csv", series_csv(sim.rows));
    write_file_atomic(args.out_dir + "/series_log.dat", series_gnuplot(sim.rows));
    if (sim.warn)
        std::cerr << "WARN: " << sim.total_clamps << " negative-value clamps\n";
    return kExitPass;
}

int cmd_verify(const PipelineArgs& args) {
    SimConfig cfg = load_sim_config_file(args.config_path);
    cfg.threads = args.threads;
    ReactionNetwork net = load_network(cfg.network_path);

    VerificationOptions opts;
    opts.tol_cb = args.tol_cb;
    opts.tol_fit = args.tol_fit;
    opts.seed = args.seed;
    if (!args.fit_window.empty()) {
        Eigen::VectorXd w = parse_csv_vector(args.fit_window);
        if (w.size() != 2)
            throw Error(ErrorKind::InvalidConfig, "--fit-window expects 'a,b'");
        opts.fit_window_lo = w[0] / cfg.t_end;
        opts.fit_window_hi = w[1] / cfg.t_end;
    }

    VerificationReport rep = run_verification(net, cfg, opts);
    std::filesystem::create_directories(args.out_dir);
    write_file_atomic(args.out_dir + "/series.csv", series_csv(rep.series));
    write_file_atomic(args.out_dir + "/series_log.dat", [&] {
        std::vector<SimRow> rows = rep.series;
        return series_gnuplot(rows);
    }());
    write_file_atomic(args.out_dir + "/report.json",
                      verification_report_json(rep).dump(2) + "\n");
    std::cout << verification_report_json(rep).dump(2) << "\n";
    return rep.pass ? kExitPass : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mass-action reaction network analysis and close-to-equilibrium "
                 "reaction-diffusion verification"};
    app.require_subcommand(1);

    std::string net_path, mass_csv, u0_file, diffusion_csv, domain_spec = "1.0";
    PipelineArgs pipeline;

    auto* analyze = app.add_subcommand("analyze", "Stoichiometry and balance classification");
    analyze->add_option("network", net_path, "Reaction network (.crn)")->required();

    auto* equilibrium =
        app.add_subcommand("equilibrium", "Reference equilibrium and Birch projection");
    equilibrium->add_option("network", net_path)->required();
    equilibrium->add_option("--mass", mass_csv, "Conserved mass vector, comma separated");
    equilibrium->add_option("--from-u0", u0_file, "File with mean initial concentrations");
    equilibrium->add_option("--tol-cb", pipeline.tol_cb);

    auto* spectrum = app.add_subcommand("spectrum", "Spectral gap certificate");
    spectrum->add_option("network", net_path)->required();
    spectrum->add_option("--diffusion", diffusion_csv)->required();
    spectrum->add_option("--domain", domain_spec, "'L' for an interval, 'LxW' for a rectangle");
    spectrum->add_option("--tol-cb", pipeline.tol_cb);

    auto* simulate_cmd = app.add_subcommand("simulate", "Run the IMEX reaction-diffusion solver");
    simulate_cmd->add_option("config", pipeline.config_path)->required();
    simulate_cmd->add_option("-o,--out", pipeline.out_dir);
    simulate_cmd->add_option("--threads", pipeline.threads);
    simulate_cmd->add_option("--tol-cb", pipeline.tol_cb);

    auto* verify = app.add_subcommand("verify", "End-to-end decay-rate verification");
    verify->add_option("config", pipeline.config_path)->required();
    verify->add_option("-o,--out", pipeline.out_dir);
    verify->add_option("--threads", pipeline.threads);
    verify->add_option("--seed", pipeline.seed);
    verify->add_option("--tol-cb", pipeline.tol_cb);
    verify->add_option("--tol-fit", pipeline.tol_fit);
    verify->add_option("--fit-window", pipeline.fit_window, "Absolute window 'a,b'");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(net_path);
        if (equilibrium->parsed())
            return cmd_equilibrium(net_path, mass_csv, u0_file, pipeline.tol_cb);
        if (spectrum->parsed())
            return cmd_spectrum(net_path, diffusion_csv, domain_spec, pipeline.tol_cb);
        if (simulate_cmd->parsed()) return cmd_simulate(pipeline);
        if (verify->parsed()) return cmd_verify(pipeline);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

#ifndef CRNRD_REPORT_HPP
#define CRNRD_REPORT_HPP

#include <string>

#include <json.hpp>

#include "crnrd/equilibria.hpp"
#include "crnrd/harness.hpp"
#include "crnrd/solver.hpp"
#include "crnrd/spectral.hpp"
#include "crnrd/stoich.hpp"

namespace crnrd {

// Reports use ordered_json throughout so key order is stable across runs.
using Json = nlohmann::ordered_json;

Json stoichiometry_block(const StoichData& stoich);
Json equilibrium_block(const EquilibriumCertificate& cert);
Json spectral_block(const ReactionNetwork& net, const Eigen::VectorXd& u_inf,
                    const SpectralCertificate& cert);
Json verification_report_json(const VerificationReport& rep);

/// Load a SimConfig from a JSON document. Paths inside the document are
/// resolved relative to `base_dir`.
SimConfig load_sim_config(const Json& doc, const std::string& base_dir);
SimConfig load_sim_config_file(const std::string& path);

/// CSV with header "t,l2w_sq,linf,mass_1..mass_m,min_u,clamps" using
/// shortest round-trip decimals.
std::string series_csv(const std::vector<SimRow>& rows);
/// Gnuplot-ready companion: two columns (t, log l2w_sq).
std::string series_gnuplot(const std::vector<SimRow>& rows);

/// Write via a temp file + rename so readers never observe partial output.
void write_file_atomic(const std::string& path, const std::string& contents);

} // namespace crnrd

#endif

#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fclab/constants.hpp"
#include "fclab/params.hpp"
#include "fclab/solver.hpp"

namespace fclab {

// Verdict thresholds; all visible in config files under campaign.*.
struct CampaignTolerances {
    double slope_tol = 0.10;        // relative slope tolerance for the multiplier law
    double r2_min = 0.99;
    double energy_slope_tol = 0.10; // relative slope tolerance for the energy law
    double rho_tol = 0.10;          // |rho - 1| at the top of the large-mass ladder
    double remainder_bound = 1.0;   // bound on |lambda c^2 + alpha S^{-b/2...} c^b|/c^a
    double m1_upper_const = 1.0;    // bound on m1 / c^a across the small-mass ladder
    int corpus_size = 50;
    double t_step = 1e-3;           // fiber scan step
    double t_span = 10.0;           // fiber scan over [-t_span, t_span]
};

// Parsed key=value configuration ('#' comments).  Accepted keys: dim, s, mu,
// alpha, p, c_list, box_length, box_auto, points_per_dim, campaign,
// solver.<field>, campaign.<tolerance>.  Anything else is rejected by name.
struct Config {
    ProblemParams params;           // c is per-sweep-point, taken from c_list
    std::vector<double> c_list;
    std::vector<double> box_length; // one per c, or a single broadcast value
    bool box_auto = false;
    int points_per_dim = 4096;
    SolverConfig solver;
    CampaignTolerances tol;
    std::string campaign;           // "", "critical", "small-mass", "large-mass"
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);
// CLI flag override, same key grammar as the file
void apply_override(Config& cfg, const std::string& key, const std::string& value);
// deterministic serialization of the effective config (sorted key=value lines)
std::string canonical_config(const Config& cfg);
std::uint64_t fnv1a_hash(const std::string& text);

// Heuristic box law L(c) = kappa |lambda_est(c)|^{-1/(2s)} log(1/eps_tail)
// used when box_auto is set; lambda_est extrapolates the small-mass power law
// from its c = 1 anchor.  Shipped configs carry validated explicit lengths
// instead (see configs/).
double auto_box_length(const Config& cfg, double c);
// box length for sweep point i under either policy
double box_for(const Config& cfg, std::size_t i);

struct FitResult {
    double slope = 0, intercept = 0, r_squared = 0;
};
// OLS on (ln x, ln y); intercept is ln(coefficient).
FitResult fit_powerlaw(const std::vector<std::pair<double, double>>& pairs);

struct Fit {
    FitResult fit;
    double target = 0, tolerance = 0;
    bool within = false;
};

struct SweepRow {
    double c = 0, lambda = 0, m1 = 0, kinetic = 0, d_star = 0, d_p = 0;
    double pde_residual = 0, pohozaev_residual = 0;
    bool converged = false;
    std::string flag;
};

struct SweepReport {
    std::string kind;
    std::vector<SweepRow> rows;
    std::map<std::string, Fit> fits;
    std::vector<std::pair<std::string, bool>> verdicts;
    nlohmann::ordered_json extra; // campaign-specific payload (rho ladder, scan margins, ...)
    std::string config_hash;
    std::uint64_t seed = 0;

    bool all_verdicts_true() const;
};

// CSV with the fixed header
// c,lambda_c,m_1,kinetic,d_star,d_p,pde_residual,pohozaev_residual,converged
std::string report_csv(const SweepReport& rep);
// Full JSON report; the single "timestamp" field is the only
// run-to-run-varying content.
nlohmann::ordered_json report_json(const SweepReport& rep, const Config& cfg);

// Fiber monotonicity scan at the mass-critical exponent: E_u'(t) > 0 on a
// dense t-grid for every corpus field, plus the mass smallness check.
SweepReport run_critical_campaign(const Config& cfg, const std::string& out_dir = "");
// Decreasing-mass ladder with continuation; fits the multiplier law against
// a-2 and the shifted energy law against a.
SweepReport run_small_mass_campaign(const Config& cfg, const std::string& out_dir = "");
// Increasing-mass ladder; verdicts on the rho(c) -> 1 trend and the bounded
// remainder; the energy fit is reported but not gating.
SweepReport run_large_mass_campaign(const Config& cfg, const std::string& out_dir = "");

// Exponent algebra, sharp-constant estimate, interpolation-constant bound and
// (in the critical regime) the mass smallness check, as one JSON object.
nlohmann::ordered_json constants_report(const Config& cfg);

// Single ground-state run serialized for the CLI; writes a checkpoint when
// out_dir is nonempty.
nlohmann::ordered_json solve_report(const Config& cfg, double c,
                                    const std::string& out_dir = "");

// Bounded worker pool; FCL_WORKERS caps the width (default: hardware).
int worker_count();
void run_parallel(std::size_t n_tasks, const std::function<void(std::size_t)>& fn);

} // namespace fclab

#include "fclab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fclab/corpus.hpp"
#include "fclab/field_io.hpp"
#include "fclab/functionals.hpp"
#include "fclab/spectral.hpp"
#include "fclab/version.hpp"

namespace fclab {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- workers

int worker_count() {
    int n = 0;
    if (const char* env = std::getenv("FCL_WORKERS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, 64);
}

void run_parallel(std::size_t n_tasks, const std::function<void(std::size_t)>& fn) {
    const int W = std::min<std::size_t>(worker_count(), n_tasks);
    if (W <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------- config

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(v);
    // commas and whitespace both separate
    std::string cleaned = v;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::stringstream cs(cleaned);
    while (cs >> item) {
        try {
            std::size_t pos = 0;
            double d = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(d);
        } catch (const std::exception&) {
            throw parse_error("invalid number '" + item + "' for key '" + key + "'");
        }
    }
    if (out.empty()) throw parse_error("empty value for key '" + key + "'");
    return out;
}

double parse_double(const std::string& v, const std::string& key) {
    auto list = parse_double_list(v, key);
    if (list.size() != 1) throw parse_error("key '" + key + "' expects one number");
    return list[0];
}

int parse_int(const std::string& v, const std::string& key) {
    double d = parse_double(v, key);
    int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw parse_error("key '" + key + "' expects an integer");
    return i;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw parse_error("key '" + key + "' expects a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void set_key(Config& cfg, const std::string& key, const std::string& value) {
    if (key == "dim") cfg.params.dim = parse_int(value, key);
    else if (key == "s") cfg.params.s = parse_double(value, key);
    else if (key == "mu") cfg.params.mu = parse_double(value, key);
    else if (key == "alpha") cfg.params.alpha = parse_double(value, key);
    else if (key == "p") cfg.params.p = parse_double(value, key);
    else if (key == "c_list") cfg.c_list = parse_double_list(value, key);
    else if (key == "box_length") cfg.box_length = parse_double_list(value, key);
    else if (key == "box_auto") cfg.box_auto = parse_bool(value, key);
    else if (key == "points_per_dim") cfg.points_per_dim = parse_int(value, key);
    else if (key == "campaign") {
        if (value != "critical" && value != "small-mass" && value != "large-mass")
            throw parse_error("campaign must be critical, small-mass or large-mass");
        cfg.campaign = value;
    } else if (key == "solver.max_iters") cfg.solver.max_iters = parse_int(value, key);
    else if (key == "solver.pde_residual_tol") cfg.solver.pde_residual_tol = parse_double(value, key);
    else if (key == "solver.pohozaev_tol") cfg.solver.pohozaev_tol = parse_double(value, key);
    else if (key == "solver.step_init") cfg.solver.step_init = parse_double(value, key);
    else if (key == "solver.armijo_c") cfg.solver.armijo_c = parse_double(value, key);
    else if (key == "solver.multistart_count") cfg.solver.multistart_count = parse_int(value, key);
    else if (key == "solver.seed") cfg.solver.seed = static_cast<std::uint64_t>(parse_double(value, key));
    else if (key == "solver.continuation") cfg.solver.continuation = parse_bool(value, key);
    else if (key == "solver.polish") cfg.solver.polish = parse_bool(value, key);
    else if (key == "solver.newton_iters") cfg.solver.newton_iters = parse_int(value, key);
    else if (key == "solver.descent_switch_tol") cfg.solver.descent_switch_tol = parse_double(value, key);
    else if (key == "solver.truncation_threshold") cfg.solver.truncation_threshold = parse_double(value, key);
    else if (key == "campaign.slope_tol") cfg.tol.slope_tol = parse_double(value, key);
    else if (key == "campaign.r2_min") cfg.tol.r2_min = parse_double(value, key);
    else if (key == "campaign.energy_slope_tol") cfg.tol.energy_slope_tol = parse_double(value, key);
    else if (key == "campaign.rho_tol") cfg.tol.rho_tol = parse_double(value, key);
    else if (key == "campaign.remainder_bound") cfg.tol.remainder_bound = parse_double(value, key);
    else if (key == "campaign.m1_upper_const") cfg.tol.m1_upper_const = parse_double(value, key);
    else if (key == "campaign.corpus_size") cfg.tol.corpus_size = parse_int(value, key);
    else if (key == "campaign.t_step") cfg.tol.t_step = parse_double(value, key);
    else if (key == "campaign.t_span") cfg.tol.t_span = parse_double(value, key);
    else throw parse_error("unknown key '" + key + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw parse_error("line " + std::to_string(lineno) + ": empty key");
        set_key(cfg, key, value);
    }
    if (cfg.box_auto && !cfg.box_length.empty())
        throw parse_error("box_length and box_auto are mutually exclusive");
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(Config& cfg, const std::string& key, const std::string& value) {
    set_key(cfg, key, value);
    if (cfg.box_auto && !cfg.box_length.empty())
        throw parse_error("box_length and box_auto are mutually exclusive");
}

std::string canonical_config(const Config& cfg) {
    std::map<std::string, std::string> kv;
    kv["dim"] = std::to_string(cfg.params.dim);
    kv["s"] = fmt(cfg.params.s);
    kv["mu"] = fmt(cfg.params.mu);
    kv["alpha"] = fmt(cfg.params.alpha);
    kv["p"] = fmt(cfg.params.p);
    {
        std::string v;
        for (double c : cfg.c_list) v += (v.empty() ? "" : ",") + fmt(c);
        kv["c_list"] = v;
    }
    if (cfg.box_auto) {
        kv["box_auto"] = "true";
    } else {
        std::string v;
        for (double L : cfg.box_length) v += (v.empty() ? "" : ",") + fmt(L);
        kv["box_length"] = v;
    }
    kv["points_per_dim"] = std::to_string(cfg.points_per_dim);
    if (!cfg.campaign.empty()) kv["campaign"] = cfg.campaign;
    kv["solver.max_iters"] = std::to_string(cfg.solver.max_iters);
    kv["solver.pde_residual_tol"] = fmt(cfg.solver.pde_residual_tol);
    kv["solver.pohozaev_tol"] = fmt(cfg.solver.pohozaev_tol);
    kv["solver.step_init"] = fmt(cfg.solver.step_init);
    kv["solver.armijo_c"] = fmt(cfg.solver.armijo_c);
    kv["solver.multistart_count"] = std::to_string(cfg.solver.multistart_count);
    kv["solver.seed"] = std::to_string(cfg.solver.seed);
    kv["solver.continuation"] = cfg.solver.continuation ? "true" : "false";
    kv["solver.polish"] = cfg.solver.polish ? "true" : "false";
    kv["solver.newton_iters"] = std::to_string(cfg.solver.newton_iters);
    kv["solver.descent_switch_tol"] = fmt(cfg.solver.descent_switch_tol);
    kv["solver.truncation_threshold"] = fmt(cfg.solver.truncation_threshold);
    kv["campaign.slope_tol"] = fmt(cfg.tol.slope_tol);
    kv["campaign.r2_min"] = fmt(cfg.tol.r2_min);
    kv["campaign.energy_slope_tol"] = fmt(cfg.tol.energy_slope_tol);
    kv["campaign.rho_tol"] = fmt(cfg.tol.rho_tol);
    kv["campaign.remainder_bound"] = fmt(cfg.tol.remainder_bound);
    kv["campaign.m1_upper_const"] = fmt(cfg.tol.m1_upper_const);
    kv["campaign.corpus_size"] = std::to_string(cfg.tol.corpus_size);
    kv["campaign.t_step"] = fmt(cfg.tol.t_step);
    kv["campaign.t_span"] = fmt(cfg.tol.t_span);
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

// ---------------------------------------------------------------- boxes

double auto_box_length(const Config& cfg, double c) {
    // |multiplier| extrapolated by the decreasing-mass power law from its
    // c = 1 anchor; kappa calibrated so c = 1 lands on the validated box.
    // This heuristic under-sizes boxes for c well below 1 (the law
    // overpredicts |lambda| before its asymptotic onset); shipped configs
    // carry measured lengths instead.
    DerivedExponents d = derived_exponents(cfg.params);
    const double lambda_anchor = 3.3054; // |multiplier| at c = 1, default profile
    const double kappa = 14.52;
    const double eps_tail = 1e-8;
    double lam = lambda_anchor * std::pow(c, d.a - 2.0);
    return kappa * std::pow(lam, -1.0 / (2.0 * cfg.params.s)) * std::log(1.0 / eps_tail);
}

double box_for(const Config& cfg, std::size_t i) {
    if (cfg.box_auto) {
        if (i >= cfg.c_list.size()) throw config_error("sweep index out of range");
        return auto_box_length(cfg, cfg.c_list[i]);
    }
    if (cfg.box_length.empty())
        throw config_error("no box policy: set box_length or box_auto");
    if (cfg.box_length.size() == 1) return cfg.box_length[0];
    if (i >= cfg.box_length.size())
        throw config_error("box_length list shorter than c_list");
    return cfg.box_length[i];
}

// ---------------------------------------------------------------- fits

FitResult fit_powerlaw(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2)
        throw insufficient_data("power-law fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(pairs.size());
    for (auto [x, y] : pairs) {
        if (!(x > 0.0) || !(y > 0.0))
            throw config_error("power-law fit requires positive data");
        double lx = std::log(x), ly = std::log(y);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw config_error("degenerate abscissa in power-law fit");
    FitResult f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto [x, y] : pairs) {
        double e = std::log(y) - (f.intercept + f.slope * std::log(x));
        ss_res += e * e;
    }
    f.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return f;
}

// ---------------------------------------------------------------- reports

bool SweepReport::all_verdicts_true() const {
    for (const auto& [name, ok] : verdicts)
        if (!ok) return false;
    return true;
}

namespace {

std::string csv_num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

ordered_json fit_json(const Fit& f) {
    ordered_json j;
    j["slope"] = f.fit.slope;
    j["intercept"] = f.fit.intercept;
    j["r_squared"] = f.fit.r_squared;
    j["target"] = f.target;
    j["tolerance"] = f.tolerance;
    j["within"] = f.within;
    return j;
}

} // namespace

std::string report_csv(const SweepReport& rep) {
    std::string out =
        "c,lambda_c,m_1,kinetic,d_star,d_p,pde_residual,pohozaev_residual,converged\n";
    for (const SweepRow& r : rep.rows) {
        out += csv_num(r.c) + "," + csv_num(r.lambda) + "," + csv_num(r.m1) + "," +
               csv_num(r.kinetic) + "," + csv_num(r.d_star) + "," + csv_num(r.d_p) + "," +
               csv_num(r.pde_residual) + "," + csv_num(r.pohozaev_residual) + "," +
               (r.converged ? "true" : "false") + "\n";
    }
    return out;
}

ordered_json report_json(const SweepReport& rep, const Config& cfg) {
    ordered_json j;
    j["kind"] = rep.kind;
    j["timestamp"] = iso_timestamp();
    j["provenance"] = {{"code_version", version_string},
                       {"config_hash", rep.config_hash},
                       {"seed", rep.seed}};
    j["config"] = canonical_config(cfg);
    ordered_json rows = ordered_json::array();
    for (const SweepRow& r : rep.rows) {
        ordered_json row;
        row["c"] = r.c;
        row["lambda_c"] = r.lambda;
        row["m_1"] = r.m1;
        row["kinetic"] = r.kinetic;
        row["d_star"] = r.d_star;
        row["d_p"] = r.d_p;
        row["pde_residual"] = r.pde_residual;
        row["pohozaev_residual"] = r.pohozaev_residual;
        row["converged"] = r.converged;
        row["flag"] = r.flag;
        rows.push_back(row);
    }
    j["rows"] = rows;
    ordered_json fits;
    for (const auto& [name, f] : rep.fits) fits[name] = fit_json(f);
    j["fits"] = fits;
    ordered_json verdicts;
    for (const auto& [name, ok] : rep.verdicts) verdicts[name] = ok;
    j["verdicts"] = verdicts;
    j["tolerances"] = {{"slope_tol", cfg.tol.slope_tol},
                       {"r2_min", cfg.tol.r2_min},
                       {"energy_slope_tol", cfg.tol.energy_slope_tol},
                       {"rho_tol", cfg.tol.rho_tol},
                       {"remainder_bound", cfg.tol.remainder_bound},
                       {"m1_upper_const", cfg.tol.m1_upper_const},
                       {"corpus_size", cfg.tol.corpus_size},
                       {"t_step", cfg.tol.t_step},
                       {"t_span", cfg.tol.t_span}};
    if (!rep.extra.is_null()) j["detail"] = rep.extra;
    return j;
}

// ---------------------------------------------------------------- shared

namespace {

// nan row for sweep points that produce no solve (scan campaigns)
SweepRow nan_row(double c) {
    double nan = std::numeric_limits<double>::quiet_NaN();
    return SweepRow{c, nan, nan, nan, nan, nan, nan, nan, false, ""};
}

std::mutex smu_mutex;
std::map<double, SmuEstimate> smu_cache;

// sharp-constant estimate on a wide reference box, independent of the sweep
// grids so campaign geometry cannot bias the constant
SmuEstimate reference_smu(double mu) {
    std::lock_guard<std::mutex> lock(smu_mutex);
    auto it = smu_cache.find(mu);
    if (it != smu_cache.end()) return it->second;
    Grid g = build_grid(1, 512.0, 32768);
    SmuEstimate est = s_mu_estimate(g, mu);
    smu_cache.emplace(mu, est);
    return est;
}

Field resample_linear(const Field& src, const Grid& dst) {
    Field out(dst);
    const Grid& sg = src.grid;
    const double h = sg.spacing();
    const double x0 = sg.x(0);
    const int M = sg.points_per_dim;
    for (int j = 0; j < dst.points_per_dim; ++j) {
        double x = dst.x(j);
        if (std::abs(x) >= 0.5 * sg.box_length) continue;
        double pos = (x - x0) / h;
        int i0 = static_cast<int>(std::floor(pos));
        double frac = pos - i0;
        double v0 = (i0 >= 0 && i0 < M) ? src.values[i0] : 0.0;
        double v1 = (i0 + 1 >= 0 && i0 + 1 < M) ? src.values[i0 + 1] : 0.0;
        out.values[j] = (1.0 - frac) * v0 + frac * v1;
    }
    return out;
}

void write_outputs(const SweepReport& rep, const Config& cfg,
                   const std::string& out_dir) {
    if (out_dir.empty()) return;
    std::ofstream csv(out_dir + "/report.csv");
    csv << report_csv(rep);
    std::ofstream js(out_dir + "/report.json");
    js << report_json(rep, cfg).dump(2) << "\n";
}

} // namespace

// ---------------------------------------------------------------- campaigns

SweepReport run_small_mass_campaign(const Config& cfg, const std::string& out_dir) {
    Config c2 = cfg;
    if (c2.c_list.size() < 2)
        throw insufficient_data("small-mass sweep needs a ladder of c values");
    ProblemParams pp = c2.params;
    pp.c = c2.c_list.front();
    validate(pp);
    DerivedExponents dx = derived_exponents(pp);
    if (dx.regime != Regime::supercritical)
        throw regime_error("small-mass sweep requires the supercritical regime");

    SweepReport rep;
    rep.kind = "small-mass";
    rep.seed = cfg.solver.seed;
    rep.config_hash = "fnv1a:" + [&] {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a_hash(canonical_config(cfg))));
        return std::string(buf);
    }();

    Field prev;
    double prev_c = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < cfg.c_list.size(); ++i) {
        double c = cfg.c_list[i];
        Grid g = build_grid(cfg.params.dim, box_for(cfg, i), cfg.points_per_dim);
        ProblemParams pc = cfg.params;
        pc.c = c;
        SolverConfig sc = cfg.solver;
        sc.seed = cfg.solver.seed ^ static_cast<std::uint64_t>(i);

        SolverResult res;
        if (cfg.solver.continuation && have_prev) {
            Field warm = resample_linear(prev, g);
            double scale_amp = c / prev_c;
            for (double& v : warm.values) v *= scale_amp;
            res = ground_state(pc, g, sc, &warm);
        } else {
            res = ground_state(pc, g, sc);
        }

        EnergyBreakdown e = energy(res.field, pc);
        rep.rows.push_back(SweepRow{c, res.lambda, res.m1, e.kinetic, e.d_star, e.d_p,
                                    res.pde_residual, res.pohozaev_residual,
                                    res.converged, res.flag});
        if (res.converged) {
            prev = res.field;
            prev_c = c;
            have_prev = true;
        }
        if (!out_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof(name), "%s/field_c%g.fld", out_dir.c_str(), c);
            save_field(name, res.field, pc);
        }
    }

    std::vector<std::pair<double, double>> lam_pairs, en_pairs;
    std::vector<double> m1_ratios;
    SmuEstimate smu = reference_smu(cfg.params.mu);
    DerivedExponents dws = derived_exponents(pp, smu.value);
    for (const SweepRow& r : rep.rows) {
        if (!r.converged) continue;
        if (r.lambda < 0.0) lam_pairs.emplace_back(r.c, -r.lambda);
        double shifted = r.m1 + *dws.a_mu * std::pow(r.c, dws.b);
        if (shifted > 0.0) en_pairs.emplace_back(r.c, shifted);
        m1_ratios.push_back(r.m1 / std::pow(r.c, dws.a));
    }
    if (lam_pairs.size() < 4)
        throw insufficient_data("fewer than 4 converged sweep points");

    Fit lam_fit;
    lam_fit.fit = fit_powerlaw(lam_pairs);
    lam_fit.target = dws.a - 2.0;
    lam_fit.tolerance = cfg.tol.slope_tol;
    lam_fit.within = std::abs(lam_fit.fit.slope - lam_fit.target) <=
                         cfg.tol.slope_tol * std::abs(lam_fit.target) &&
                     lam_fit.fit.r_squared >= cfg.tol.r2_min;
    rep.fits["multiplier_law"] = lam_fit;

    Fit en_fit;
    en_fit.fit = fit_powerlaw(en_pairs);
    en_fit.target = dws.a;
    en_fit.tolerance = cfg.tol.energy_slope_tol;
    en_fit.within = std::abs(en_fit.fit.slope - en_fit.target) <=
                        cfg.tol.energy_slope_tol * std::abs(en_fit.target) &&
                    en_fit.fit.r_squared >= cfg.tol.r2_min;
    rep.fits["energy_law"] = en_fit;

    double ratio_max = 0.0;
    for (double r : m1_ratios) ratio_max = std::max(ratio_max, r);
    rep.verdicts.emplace_back("multiplier_law", lam_fit.within);
    rep.verdicts.emplace_back("energy_law", en_fit.within);
    rep.verdicts.emplace_back("m1_upper_bounded", ratio_max <= cfg.tol.m1_upper_const);

    rep.extra["s_mu"] = {{"value", smu.value}, {"spread", smu.spread}};
    rep.extra["a_mu"] = *dws.a_mu;
    rep.extra["m1_over_c_a_max"] = ratio_max;
    write_outputs(rep, cfg, out_dir);
    return rep;
}

SweepReport run_large_mass_campaign(const Config& cfg, const std::string& out_dir) {
    if (cfg.c_list.size() < 2)
        throw insufficient_data("large-mass sweep needs a ladder of c values");
    ProblemParams pp = cfg.params;
    pp.c = cfg.c_list.front();
    validate(pp);
    if (!(cfg.params.alpha > 0.0))
        throw config_error("large-mass law requires alpha > 0");
    DerivedExponents dx = derived_exponents(pp);
    if (dx.regime != Regime::supercritical)
        throw regime_error("large-mass sweep requires the supercritical regime");

    SweepReport rep;
    rep.kind = "large-mass";
    rep.seed = cfg.solver.seed;
    {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a_hash(canonical_config(cfg))));
        rep.config_hash = std::string("fnv1a:") + buf;
    }

    SmuEstimate smu = reference_smu(cfg.params.mu);
    DerivedExponents dws = derived_exponents(pp, smu.value);
    const double N = cfg.params.dim;
    const double smu_pow = std::pow(smu.value, -(2.0 * N - cfg.params.mu) / N);

    Field prev;
    double prev_c = 0.0;
    bool have_prev = false;
    std::vector<double> rho, remainder;
    for (std::size_t i = 0; i < cfg.c_list.size(); ++i) {
        double c = cfg.c_list[i];
        Grid g = build_grid(cfg.params.dim, box_for(cfg, i), cfg.points_per_dim);
        ProblemParams pc = cfg.params;
        pc.c = c;
        SolverConfig sc = cfg.solver;
        sc.seed = cfg.solver.seed ^ static_cast<std::uint64_t>(i);

        SolverResult res;
        if (cfg.solver.continuation && have_prev) {
            Field warm = resample_linear(prev, g);
            double scale_amp = c / prev_c;
            for (double& v : warm.values) v *= scale_amp;
            res = ground_state(pc, g, sc, &warm);
        } else {
            res = ground_state(pc, g, sc);
        }

        EnergyBreakdown e = energy(res.field, pc);
        rep.rows.push_back(SweepRow{c, res.lambda, res.m1, e.kinetic, e.d_star, e.d_p,
                                    res.pde_residual, res.pohozaev_residual,
                                    res.converged, res.flag});
        if (res.converged) {
            prev = res.field;
            prev_c = c;
            have_prev = true;
            double num = -res.lambda * c * c;
            double den = cfg.params.alpha * smu_pow * std::pow(c, dws.b);
            rho.push_back(num / den);
            remainder.push_back(std::abs(num - den) / std::pow(c, dws.a));
        } else {
            rho.push_back(std::numeric_limits<double>::quiet_NaN());
            remainder.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        if (!out_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof(name), "%s/field_c%g.fld", out_dir.c_str(), c);
            save_field(name, res.field, pc);
        }
    }

    // trend over converged rows: |rho - 1| non-increasing, final within tol
    std::vector<double> conv_rho;
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (rep.rows[i].converged) conv_rho.push_back(rho[i]);
    if (conv_rho.size() < 2)
        throw insufficient_data("fewer than 2 converged sweep points");
    bool trend = true;
    for (std::size_t i = 1; i < conv_rho.size(); ++i)
        if (std::abs(conv_rho[i] - 1.0) > std::abs(conv_rho[i - 1] - 1.0) + 1e-6)
            trend = false;
    bool final_ok = std::abs(conv_rho.back() - 1.0) <= cfg.tol.rho_tol;
    double rem_max = 0.0;
    for (std::size_t i = 0; i < remainder.size(); ++i)
        if (rep.rows[i].converged) rem_max = std::max(rem_max, remainder[i]);

    rep.verdicts.emplace_back("rho_trend_to_one", trend && final_ok);
    rep.verdicts.emplace_back("remainder_bounded", rem_max <= cfg.tol.remainder_bound);

    // energy law reported for reference; the gating content is the rho trend
    std::vector<std::pair<double, double>> en_pairs;
    for (const SweepRow& r : rep.rows) {
        if (!r.converged) continue;
        double shifted = r.m1 + *dws.a_mu * std::pow(r.c, dws.b);
        if (shifted > 0.0) en_pairs.emplace_back(r.c, shifted);
    }
    if (en_pairs.size() >= 2) {
        Fit en_fit;
        en_fit.fit = fit_powerlaw(en_pairs);
        en_fit.target = dws.a;
        en_fit.tolerance = cfg.tol.energy_slope_tol;
        en_fit.within = std::abs(en_fit.fit.slope - en_fit.target) <=
                        cfg.tol.energy_slope_tol * std::abs(en_fit.target);
        rep.fits["energy_law"] = en_fit;
    }
    // leading exponent of -lambda c^2, also informational
    std::vector<std::pair<double, double>> lm_pairs;
    for (const SweepRow& r : rep.rows)
        if (r.converged && r.lambda < 0.0) lm_pairs.emplace_back(r.c, -r.lambda * r.c * r.c);
    if (lm_pairs.size() >= 2) {
        Fit lead;
        lead.fit = fit_powerlaw(lm_pairs);
        lead.target = dws.b;
        lead.tolerance = 0.05;
        lead.within = std::abs(lead.fit.slope - lead.target) <= 0.05 * std::abs(lead.target);
        rep.fits["leading_exponent"] = lead;
    }

    rep.extra["s_mu"] = {{"value", smu.value}, {"spread", smu.spread}};
    rep.extra["rho"] = rho;
    rep.extra["remainder_over_c_a"] = remainder;
    write_outputs(rep, cfg, out_dir);
    return rep;
}

SweepReport run_critical_campaign(const Config& cfg, const std::string& out_dir) {
    if (cfg.c_list.empty())
        throw insufficient_data("critical campaign needs at least one c");
    ProblemParams pp = cfg.params;
    pp.c = cfg.c_list.front();
    validate(pp);
    DerivedExponents dx = derived_exponents(pp);
    if (dx.regime != Regime::critical)
        throw regime_error("critical campaign requires the mass-critical exponent");

    SweepReport rep;
    rep.kind = "critical";
    rep.seed = cfg.solver.seed;
    {
        char buf[20];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a_hash(canonical_config(cfg))));
        rep.config_hash = std::string("fnv1a:") + buf;
    }

    ordered_json scans = ordered_json::array();
    bool all_monotone = true;
    bool all_mass_ok = true;
    for (std::size_t ci = 0; ci < cfg.c_list.size(); ++ci) {
        double c = cfg.c_list[ci];
        Grid g = build_grid(cfg.params.dim, box_for(cfg, ci), cfg.points_per_dim);
        ProblemParams pc = cfg.params;
        pc.c = c;

        std::vector<Field> corpus = make_corpus(g, cfg.tol.corpus_size, c,
                                                cfg.solver.seed ^ ci);
        struct ScanOut {
            double min_de = 0;
            double first_sign_change = std::numeric_limits<double>::quiet_NaN();
            bool monotone = true;
        };
        std::vector<ScanOut> outs(corpus.size());
        const int nt = static_cast<int>(2.0 * cfg.tol.t_span / cfg.tol.t_step) + 1;
        run_parallel(corpus.size(), [&](std::size_t fi) {
            EnergyBreakdown e = energy(corpus[fi], pc);
            ScanOut so;
            so.min_de = std::numeric_limits<double>::infinity();
            for (int ti = 0; ti < nt; ++ti) {
                double t = -cfg.tol.t_span + ti * cfg.tol.t_step;
                double de = fiber_from_terms(e.kinetic, e.d_star, e.d_p, pc, t).de;
                so.min_de = std::min(so.min_de, de);
                if (de <= 0.0 && so.monotone) {
                    so.monotone = false;
                    so.first_sign_change = t;
                }
            }
            outs[fi] = so;
        });

        bool monotone = true;
        double min_de = std::numeric_limits<double>::infinity();
        double first_change = std::numeric_limits<double>::quiet_NaN();
        for (const auto& so : outs) {
            min_de = std::min(min_de, so.min_de);
            if (!so.monotone && monotone) {
                monotone = false;
                first_change = so.first_sign_change;
            }
        }

        double cp = c_p_lower_bound(g, pc, cfg.tol.corpus_size, cfg.solver.seed ^ ci);
        CriticalMassCheck cm = critical_mass_check(pc, cp);

        all_monotone = all_monotone && monotone;
        all_mass_ok = all_mass_ok && cm.satisfied;

        ordered_json scan;
        scan["c"] = c;
        scan["corpus_size"] = static_cast<int>(corpus.size());
        scan["min_fiber_slope"] = min_de;
        scan["monotone"] = monotone;
        if (!monotone) scan["first_sign_change"] = first_change;
        scan["c_p_lower_bound"] = cp;
        scan["mass_check"] = {{"threshold", cm.threshold}, {"satisfied", cm.satisfied}};
        scans.push_back(scan);

        SweepRow row = nan_row(c);
        row.converged = monotone;
        rep.rows.push_back(row);
    }

    rep.verdicts.emplace_back("fiber_strictly_increasing", all_monotone);
    rep.verdicts.emplace_back("mass_condition_direction", all_mass_ok);
    rep.extra["scans"] = scans;
    write_outputs(rep, cfg, out_dir);
    return rep;
}

// ---------------------------------------------------------------- misc

ordered_json constants_report(const Config& cfg) {
    ProblemParams pp = cfg.params;
    if (!cfg.c_list.empty()) pp.c = cfg.c_list.front();
    SmuEstimate smu = reference_smu(pp.mu);
    DerivedExponents d = derived_exponents(pp, smu.value);

    ordered_json j;
    j["code_version"] = version_string;
    j["params"] = {{"dim", pp.dim}, {"s", pp.s},     {"mu", pp.mu},
                   {"alpha", pp.alpha}, {"p", pp.p}, {"c", pp.c}};
    ordered_json de;
    de["gamma_ps"] = d.gamma_ps;
    de["p_gamma"] = d.p_gamma;
    de["two_mu_star"] = d.two_mu_star;
    de["two_mu_s_star"] = d.two_mu_s_star;
    de["a"] = d.a;
    de["b"] = d.b;
    de["m1_exponent"] = d.m1_exponent;
    de["a_mu"] = d.a_mu ? ordered_json(*d.a_mu) : ordered_json(nullptr);
    de["regime"] = regime_name(d.regime);
    de["m1_of_c"] = d.regime == Regime::critical
                        ? ordered_json(nullptr)
                        : ordered_json(d.m1_of_c(pp.c));
    j["derived"] = de;
    ordered_json sj;
    sj["value"] = smu.value;
    sj["spread"] = smu.spread;
    ordered_json probes = ordered_json::array();
    for (auto [eps, ratio] : smu.probes) probes.push_back({{"eps", eps}, {"ratio", ratio}});
    sj["probes"] = probes;
    j["s_mu_estimate"] = sj;

    Grid g = build_grid(1, cfg.box_length.empty() ? 512.0 : box_for(cfg, 0),
                        cfg.points_per_dim);
    double cp = c_p_lower_bound(g, pp, cfg.tol.corpus_size, cfg.solver.seed);
    j["c_p_lower_bound"] = cp;
    if (d.regime == Regime::critical) {
        CriticalMassCheck cm = critical_mass_check(pp, cp);
        j["critical_mass_check"] = {{"threshold", cm.threshold},
                                    {"satisfied", cm.satisfied}};
    }
    return j;
}

ordered_json solve_report(const Config& cfg, double c, const std::string& out_dir) {
    ProblemParams pp = cfg.params;
    pp.c = c;
    validate(pp);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cfg.c_list.size(); ++i)
        if (cfg.c_list[i] == c) idx = i;
    Grid g = build_grid(pp.dim, box_for(cfg, idx), cfg.points_per_dim);
    SolverResult res = ground_state(pp, g, cfg.solver);

    EnergyBreakdown e = energy(res.field, pp, res.lambda);
    ordered_json j;
    j["kind"] = "solve";
    j["timestamp"] = iso_timestamp();
    j["provenance"] = {{"code_version", version_string},
                       {"config_hash",
                        "fnv1a:" +
                            [&] {
                                char buf[20];
                                std::snprintf(buf, sizeof(buf), "%016llx",
                                              static_cast<unsigned long long>(
                                                  fnv1a_hash(canonical_config(cfg))));
                                return std::string(buf);
                            }()},
                       {"seed", cfg.solver.seed}};
    j["params"] = {{"dim", pp.dim}, {"s", pp.s},     {"mu", pp.mu},
                   {"alpha", pp.alpha}, {"p", pp.p}, {"c", pp.c}};
    j["grid"] = {{"box_length", g.box_length}, {"points_per_dim", g.points_per_dim}};
    j["lambda_c"] = res.lambda;
    j["m_1"] = res.m1;
    j["kinetic"] = e.kinetic;
    j["d_star"] = e.d_star;
    j["d_p"] = e.d_p;
    j["nehari"] = e.n_c ? ordered_json(*e.n_c) : ordered_json(nullptr);
    j["pde_residual"] = res.pde_residual;
    j["pohozaev_residual"] = res.pohozaev_residual;
    j["nehari_residual"] = res.nehari_residual;
    j["converged"] = res.converged;
    j["flag"] = res.flag;
    j["multistart_best_gap"] = res.multistart_best_gap;
    ordered_json trace = ordered_json::array();
    for (const TraceEntry& t : res.trace)
        trace.push_back({{"iter", t.iter},
                         {"j", t.j},
                         {"residual", t.residual},
                         {"phase", std::string(1, t.phase)}});
    j["trace"] = trace;
    if (!out_dir.empty()) {
        char name[64];
        std::snprintf(name, sizeof(name), "%s/field_c%g.fld", out_dir.c_str(), c);
        save_field(name, res.field, pp);
        j["checkpoint"] = std::string(name);
    }
    return j;
}

} // namespace fclab

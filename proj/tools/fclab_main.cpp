#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fclab/campaign.hpp"
#include "fclab/field_io.hpp"
#include "fclab/spectral.hpp"
#include "fclab/version.hpp"

namespace {

using fclab::Config;

Config load_config(const std::string& config_path,
                   const std::vector<std::string>& overrides) {
    Config cfg;
    if (!config_path.empty()) cfg = fclab::parse_config_file(config_path);
    for (const std::string& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw fclab::parse_error("--set expects key=value, got '" + kv + "'");
        fclab::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

int run_solve(const std::string& config_path,
              const std::vector<std::string>& overrides, double c_flag,
              const std::string& out_dir) {
    Config cfg = load_config(config_path, overrides);
    double c = c_flag > 0.0 ? c_flag
                            : (!cfg.c_list.empty() ? cfg.c_list.front() : cfg.params.c);
    if (cfg.c_list.empty()) cfg.c_list = {c};
    ensure_dir(out_dir);
    auto rep = fclab::solve_report(cfg, c, out_dir);
    if (!out_dir.empty()) {
        std::ofstream out(out_dir + "/solve.json");
        out << rep.dump(2) << "\n";
    }
    std::cout << rep.dump(2) << "\n";
    return rep["converged"].get<bool>() ? 0 : 2;
}

int run_campaign(const std::string& kind, const std::string& config_path,
                 const std::vector<std::string>& overrides,
                 const std::string& out_dir) {
    Config cfg = load_config(config_path, overrides);
    std::string k = kind;
    if (k.empty()) k = cfg.campaign;
    if (k.empty())
        throw fclab::config_error(
            "no campaign selected: pass critical|small-mass|large-mass or set "
            "campaign= in the config");
    if (!cfg.campaign.empty() && !kind.empty() && cfg.campaign != kind)
        throw fclab::config_error("config requests campaign '" + cfg.campaign +
                                  "' but the command line says '" + kind + "'");
    cfg.campaign = k;
    ensure_dir(out_dir);

    fclab::SweepReport rep;
    if (k == "critical") rep = fclab::run_critical_campaign(cfg, out_dir);
    else if (k == "small-mass") rep = fclab::run_small_mass_campaign(cfg, out_dir);
    else if (k == "large-mass") rep = fclab::run_large_mass_campaign(cfg, out_dir);
    else throw fclab::config_error("unknown campaign '" + k + "'");

    for (const auto& [name, ok] : rep.verdicts)
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    std::cout << "report: " << (out_dir.empty() ? "." : out_dir) << "/report.{csv,json}\n";
    return rep.all_verdicts_true() ? 0 : 2;
}

int run_constants(const std::string& config_path,
                  const std::vector<std::string>& overrides,
                  const std::string& out_dir) {
    Config cfg = load_config(config_path, overrides);
    auto rep = fclab::constants_report(cfg);
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        std::ofstream out(out_dir + "/constants.json");
        out << rep.dump(2) << "\n";
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int run_check_field(const std::string& path) {
    auto [field, hdr] = fclab::load_field(path);
    fclab::ProblemParams pp;
    pp.dim = hdr.dim;
    pp.s = hdr.s;
    pp.mu = hdr.mu;
    pp.alpha = hdr.alpha;
    pp.p = hdr.p;
    pp.c = hdr.c;

    fclab::Norms n = fclab::norms(field, pp.s);
    double target = hdr.c * hdr.c;
    double mass_err = std::abs(n.mass - target) / target;
    double shell = fclab::outer_shell_mass_fraction(field);
    bool mass_ok = mass_err <= 1e-6;
    bool tail_ok = shell <= 2e-3;

    nlohmann::ordered_json j;
    j["file"] = path;
    j["header"] = {{"dim", hdr.dim}, {"box_length", hdr.L},
                   {"points_per_dim", hdr.M}, {"s", hdr.s}, {"mu", hdr.mu},
                   {"alpha", hdr.alpha}, {"p", hdr.p}, {"c", hdr.c},
                   {"schema_version", hdr.schema_version}};
    j["mass"] = n.mass;
    j["mass_relative_error"] = mass_err;
    j["kinetic"] = n.kinetic;
    j["outer_shell_mass_fraction"] = shell;
    j["mass_ok"] = mass_ok;
    j["tail_ok"] = tail_ok;
    std::cout << j.dump(2) << "\n";
    return (mass_ok && tail_ok) ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral lab for mass-constrained doubly nonlocal ground states"};
    app.set_version_flag("--version", fclab::version_string);
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", field_path, campaign_kind;
    std::vector<std::string> overrides;
    double c_flag = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--set", overrides,
                        "override a config key, e.g. --set solver.seed=7")
            ->take_all();
        sub->add_option("--out", out_dir, "output directory (default: .)");
    };

    CLI::App* solve = app.add_subcommand("solve", "compute one ground state");
    add_common(solve);
    solve->add_option("--c", c_flag, "mass parameter (default: first of c_list)");

    CLI::App* campaign =
        app.add_subcommand("campaign", "run a verdicted parameter sweep");
    campaign
        ->add_option("kind", campaign_kind, "critical | small-mass | large-mass")
        ->check(CLI::IsMember({"critical", "small-mass", "large-mass"}));
    add_common(campaign);

    CLI::App* constants =
        app.add_subcommand("constants", "exponent algebra and sharp-constant estimates");
    add_common(constants);

    CLI::App* check =
        app.add_subcommand("check-field", "validate a saved field checkpoint");
    check->add_option("file", field_path, "checkpoint path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return run_solve(config_path, overrides, c_flag, out_dir);
        if (campaign->parsed())
            return run_campaign(campaign_kind, config_path, overrides, out_dir);
        if (constants->parsed()) return run_constants(config_path, overrides, out_dir);
        if (check->parsed()) return run_check_field(field_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

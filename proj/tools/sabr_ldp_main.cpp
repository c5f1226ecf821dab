#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sabr_ldp/cli.hpp"
#include "sabr_ldp/errors.hpp"

using namespace sabr_ldp;

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw ConfigError("bad number in list: " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty maturity list");
    return out;
}

void add_model_options(CLI::App* sub, cli::RunConfig& cfg, std::string& maturities, std::string& strikes,
                       double& maturity, double& xi) {
    sub->add_option("--sigma0", cfg.model.sigma0, "initial volatility");
    auto* om = sub->add_option("--omega", cfg.model.omega, "vol-of-vol");
    sub->add_option("--corr", cfg.model.corr, "spot/vol correlation");
    auto* m1 = sub->add_option("--maturity", maturity, "maturity in years");
    auto* m2 = sub->add_option("--maturities", maturities, "comma separated maturities");
    m1->excludes(m2);
    sub->add_option("--strikes", strikes, "min:max:count (log-moneyness; normalized y for rate)");
    auto* hw = sub->add_option("--hull-white-xi", xi, "Hull-White vol-of-vol, mapped to omega = xi/2");
    hw->excludes(om);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic implied volatility of the time-discretized log-normal SABR model"};
    app.require_subcommand(1);

    cli::RunConfig cfg;
    std::string maturities, strikes, format = "csv";
    double maturity = 0.0, xi = 0.0;

    const std::pair<const char*, const char*> cmds[] = {
        {"smile", "asymptotic smile with Hagan and linear overlays"},
        {"atm", "ATM term structure"},
        {"rate", "rate function J_X on a normalized strike grid and switch points"},
        {"mc", "Monte Carlo validation of the discretized scheme"},
        {"bench", "reproduce the benchmark tables and figure data"},
    };
    for (const auto& [name, help] : cmds) {
        auto* sub = app.add_subcommand(name, help);
        add_model_options(sub, cfg, maturities, strikes, maturity, xi);
        sub->add_option("--nsteps", cfg.nSteps, "time steps n");
        sub->add_option("--npaths", cfg.nPaths, "Monte Carlo paths");
        sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
        sub->add_option("--vol-drift", cfg.volDrift, "volatility drift alpha");
        sub->add_flag("--research-positive-corr", cfg.researchPositiveCorr, "allow corr > 0 in mc");
        sub->add_option("--out", cfg.outputPath, "output file (default stdout)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitInvalidInput;
    }

    try {
        auto* sub = app.get_subcommands().front();
        cfg.command = cli::parse_command(sub->get_name());
        cfg.format = cli::parse_format(format);
        if (sub->count("--maturity")) {
            cfg.model.maturity = maturity;
            cfg.maturities = {maturity};
        }
        if (sub->count("--maturities")) cfg.maturities = parse_list(maturities);
        if (sub->count("--strikes")) cfg.strikes = cli::Grid::parse(strikes);
        if (sub->count("--hull-white-xi")) cfg.hullWhiteXi = xi;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return cli::kExitInvalidInput;
    }
    return cli::run(cfg, std::cerr);
}

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pfrontier.h"

namespace {

struct ConfigDeleter {
    void operator()(pf_config* c) const { pf_config_free(c); }
};
using ConfigPtr = std::unique_ptr<pf_config, ConfigDeleter>;

int fail(int code) {
    std::fprintf(stderr, "error: %s\n", pf_last_error());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-index and empirical efficient frontier toolkit"};
    app.set_version_flag("--version", std::string(pf_version()));
    app.require_subcommand(1);

    std::string config_path, calendar, accounting, price_limit, mode, out_dir, period;
    std::string seed, stocks, periods, delta, index_symbol;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (key = value lines)");
        cmd->add_option("--calendar", calendar, "weekly or monthly");
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--delta", delta, "Strike premium: 'r' or a number");
        cmd->add_option("--index-symbol", index_symbol, "Market index symbol");
        return cmd;
    };

    CLI::App* synth = add_common(app.add_subcommand("synth", "Generate a synthetic panel"));
    synth->add_option("--seed", seed, "RNG seed");
    synth->add_option("--stocks", stocks, "Number of stocks");
    synth->add_option("--periods", periods, "Number of periods");

    add_common(app.add_subcommand("pindex", "Per-stock p-index records"));

    CLI::App* frontier =
        add_common(app.add_subcommand("frontier", "Empirical efficient frontier"));
    frontier->add_option("--period", period, "Formation period id (e.g. 201403)");

    CLI::App* backtest = add_common(app.add_subcommand("backtest", "Run trading strategies"));
    backtest->add_option("--accounting", accounting, "reinvest, non-reinvest or both");
    backtest->add_option("--price-limit", price_limit, "Daily limit share, or 'off'");

    CLI::App* factor = add_common(app.add_subcommand("factor", "Cross-sectional tests"));
    factor->add_option("--mode", mode, "pindex or pratio");

    CLI11_PARSE(app, argc, argv);

    ConfigPtr config(pf_config_create());
    if (!config) {
        std::fprintf(stderr, "error: out of memory\n");
        return PF_ERR_INTERNAL;
    }
    if (!config_path.empty()) {
        if (int rc = pf_config_load(config.get(), config_path.c_str()); rc != PF_OK)
            return fail(rc);
    }

    auto override_key = [&](const char* key, const std::string& value) {
        if (!value.empty()) pf_config_set(config.get(), key, value.c_str());
    };
    override_key("calendar", calendar);
    override_key("accounting", accounting);
    override_key("price_limit", price_limit);
    override_key("mode", mode);
    override_key("out", out_dir);
    override_key("period", period);
    override_key("seed", seed);
    override_key("stocks", stocks);
    override_key("periods", periods);
    override_key("delta", delta);
    override_key("index_symbol", index_symbol);

    const std::string command = app.get_subcommands().front()->get_name();
    if (int rc = pf_run(config.get(), command.c_str()); rc != PF_OK) return fail(rc);
    return PF_OK;
}

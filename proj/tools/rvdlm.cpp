// Command-line front end.
//
//   rvdlm filter --config run.json [--out DIR] [--seed N]
//   rvdlm synth  --model RVL-DLM --days 2000 --seed 7 --out bars.csv [--params p.json] [--truth truth.csv]
//   rvdlm score  --run DIR [--out DIR]
//
// Exit codes: 0 success, 2 configuration/usage error, 3 data error,
// 4 numerical/domain error.

#include "rvdlm/errors.hpp"
#include "rvdlm/ingestion.hpp"
#include "rvdlm/pipeline.hpp"
#include "rvdlm/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace rvdlm;

int cmd_filter(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    RunConfig config = load_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.seed = *seed;
    const RunSummary summary = run_filter_pipeline(config);
    for (const auto& s : summary.series) {
        if (!s.ok) {
            std::cerr << "error: " << s.error << '\n';
            continue;
        }
        std::cout << s.ticker << ": " << s.modeled << " days (" << s.train_days << " train, " << s.eval_days
                  << " eval)";
        for (const auto& [k, v] : s.final_log_bf) std::cout << "  logBF " << k << " = " << v;
        std::cout << '\n';
        for (const auto& w : s.warnings) std::cerr << "warning: " << s.ticker << ": " << w << '\n';
    }
    std::cout << "wrote " << (config.output_dir / "summary.json").string() << '\n';
    return summary.exit_code();
}

int cmd_synth(const std::string& model_name, std::size_t days, std::uint64_t seed, const std::string& params,
              const std::string& out, const std::string& truth) {
    const ModelClass mc = parse_model_class(model_name);
    const SyntheticSpec spec = params.empty() ? default_synthetic_spec(mc, days) : load_synthetic_spec(params, mc, days);
    const SyntheticSeries s = generate_synthetic(spec, seed);
    write_csv(std::filesystem::path(out), s.bars, CsvSchema{});
    if (!truth.empty()) {
        std::ofstream t(truth, std::ios::binary);
        if (!t) throw ConfigError("cannot write '" + truth + "'");
        t << "date,phi,y,z";
        for (Eigen::Index j = 0; j < regressor_dim(mc); ++j) t << ",theta" << j;
        t << '\n';
        char buf[32];
        auto num = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        for (std::size_t i = 0; i < s.theta.size(); ++i) {
            t << format_iso_date(s.bars[i + 1].date) << ',' << num(s.phi[i]) << ',' << num(s.y[i]) << ','
              << num(s.z[i]);
            for (Eigen::Index j = 0; j < s.theta[i].size(); ++j) t << ',' << num(s.theta[i](j));
            t << '\n';
        }
    }
    std::cout << "wrote " << s.bars.size() << " bars to " << out << '\n';
    return 0;
}

int cmd_score(const std::string& run_dir, const std::string& out_dir) {
    const std::size_t n = recompute_scores(run_dir, out_dir.empty() ? run_dir : out_dir);
    std::cout << "wrote " << n << " log Bayes factor file(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic linear models for daily prices with realized-volatility learning"};
    app.require_subcommand(1);

    auto* filter = app.add_subcommand("filter", "Filter and score every configured series");
    std::string config_path, filter_out;
    std::optional<std::uint64_t> filter_seed;
    filter->add_option("--config", config_path, "JSON run configuration")->required();
    filter->add_option("--out", filter_out, "Output directory (overrides the config)");
    filter->add_option("--seed", filter_seed, "Seed for Monte Carlo columns (overrides the config)");

    auto* synth = app.add_subcommand("synth", "Simulate an OHLC series from a model class");
    std::string synth_model = "RVL-DLM", params, synth_out, truth;
    std::size_t days = 2000;
    std::uint64_t synth_seed = 1;
    synth->add_option("--model", synth_model, "SV-DLM, RV-DLM or RVL-DLM");
    synth->add_option("--days", days, "Modeled days (one extra leading bar is written)");
    synth->add_option("--seed", synth_seed, "Random seed");
    synth->add_option("--params", params, "JSON parameter file");
    synth->add_option("--out", synth_out, "OHLC CSV to write")->required();
    synth->add_option("--truth", truth, "Optional CSV of the true states");

    auto* score = app.add_subcommand("score", "Recompute log Bayes factor trajectories from a run directory");
    std::string run_dir, score_out;
    score->add_option("--run", run_dir, "Directory written by 'filter'")->required();
    score->add_option("--out", score_out, "Where to write (defaults to the run directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (filter->parsed()) return cmd_filter(config_path, filter_out, filter_seed);
        if (synth->parsed()) return cmd_synth(synth_model, days, synth_seed, params, synth_out, truth);
        if (score->parsed()) return cmd_score(run_dir, score_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

#include "rvdlm/pipeline.hpp"

#include "rvdlm/distributions.hpp"
#include "rvdlm/errors.hpp"
#include "rvdlm/forecast.hpp"
#include "rvdlm/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rvdlm {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::string> coefficient_names(ModelClass mc) {
    if (mc == ModelClass::RVLDLM) return {"intercept", "ar1", "rv_contemp", "rv_lag"};
    return {"intercept", "ar1", "rv_lag"};
}

// n_t converges quickly, so quantiles of the standardized laws repeat.
class QuantileCache {
public:
    double t(double dof, double u) {
        auto [it, fresh] = t_.try_emplace({dof, u}, 0.0);
        if (fresh) it->second = dist::student_t_quantile(u, {dof, 0.0, 1.0});
        return it->second;
    }
    // Quantile of G(n/2, n/2); phi ~ G(n/2, ns/2) is this divided by s.
    double g(double n, double u) {
        auto [it, fresh] = g_.try_emplace({n, u}, 0.0);
        if (fresh) it->second = dist::gamma_quantile(u, {0.5 * n, 0.5 * n});
        return it->second;
    }

private:
    std::map<std::pair<double, double>, double> t_;
    std::map<std::pair<double, double>, double> g_;
};

constexpr double kLo = 0.05;
constexpr double kHi = 0.95;

// sqrt(v) = phi^{-1/2}: a low quantile of phi is a high quantile of the SD.
struct VolBand {
    double median, lo, hi;
};

VolBand vol_band(double n, double s, QuantileCache& qc) {
    return {std::sqrt(s / qc.g(n, 0.5)), std::sqrt(s / qc.g(n, kHi)), std::sqrt(s / qc.g(n, kLo))};
}

double sample_quantile(std::vector<double>& v, double u) {
    const std::size_t k = std::min(v.size() - 1, static_cast<std::size_t>(u * static_cast<double>(v.size())));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    return out;
}

void write_model_csv(const std::filesystem::path& path, const SeriesFrame& frame, const FilterTrajectory& traj,
                     const ScoreLedger& ledger, const RunConfig& config, std::size_t model_index,
                     QuantileCache& qc) {
    const ModelClass mc = traj.spec.model;
    const bool rv = learns_from_rv(mc);
    const auto names = coefficient_names(mc);
    const bool mc_cols = config.mc_samples > 0;

    auto out = open_out(path);
    out << "date,in_eval,y,z,x,f,q,e,dof,log_score,log_score_z,cum_log_score,n,s,vol_sd_median,vol_sd_q05,vol_sd_q95";
    for (const auto& nm : names) out << ',' << nm << "_median," << nm << "_q05," << nm << "_q95";
    if (mc == ModelClass::RVLDLM) out << ",price_scale_effect,net_rv_contribution";
    if (mc_cols) out << ",y_pred_q05,y_pred_q50,y_pred_q95,z_pred_q05,z_pred_q50,z_pred_q95";
    out << '\n';

    Rng rng(config.seed ^ fnv1a(frame.ticker) ^ (0x9e3779b97f4a7c15ULL * (model_index + 1)));
    std::vector<double> ys, zs;
    std::size_t scored = 0;
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
        const FilterStep& st = traj.steps[t];
        const SeriesRow& row = frame.rows[t];
        const bool in_eval = frame.in_evaluation(row);
        double cum = 0.0;
        if (in_eval) cum = ledger.entries().at(scored++).cumulative;

        out << format_iso_date(st.date) << ',' << (in_eval ? 1 : 0) << ',' << fmt(row.y) << ',' << fmt(row.z) << ','
            << fmt(row.x) << ',' << fmt(st.stats.f) << ',' << fmt(st.stats.q) << ',' << fmt(st.stats.e) << ','
            << fmt(st.stats.dof) << ',' << fmt(st.stats.log_score) << ','
            << (st.z_log_score ? fmt(*st.z_log_score) : std::string()) << ',' << (in_eval ? fmt(cum) : "") << ','
            << fmt(st.post.n) << ',' << fmt(st.post.s);
        const VolBand vb = vol_band(st.post.n, st.post.s, qc);
        out << ',' << fmt(vb.median) << ',' << fmt(vb.lo) << ',' << fmt(vb.hi);

        const double tlo = qc.t(st.post.n, kLo);
        const double thi = qc.t(st.post.n, kHi);
        for (Eigen::Index j = 0; j < st.post.m.size(); ++j) {
            const double sd = std::sqrt(std::max(0.0, st.post.s * st.post.C(j, j)));
            const double m = st.post.m(j);
            out << ',' << fmt(m) << ',' << fmt(m + sd * tlo) << ',' << fmt(m + sd * thi);
        }
        if (mc == ModelClass::RVLDLM) {
            out << ',' << fmt(price_scale_effect(st.post.m(2), row.x)) << ','
                << fmt(net_rv_contribution(st.post.m(2), row.x, st.post.m(3), row.x_prev));
        }
        if (mc_cols) {
            ys.assign(config.mc_samples, 0.0);
            zs.clear();
            const RegressorInputs inputs{mc, row.y_prev, row.x_prev, config.rv_floor};
            if (rv) {
                zs.assign(config.mc_samples, 0.0);
                for (std::size_t i = 0; i < config.mc_samples; ++i) {
                    const JointDraw d = sample_joint(st.prior, traj.spec.hp.alpha, inputs, rng);
                    ys[i] = d.y;
                    zs[i] = d.z;
                }
            } else {
                const dist::StudentTParams p{st.stats.dof, st.stats.f, st.stats.q};
                for (std::size_t i = 0; i < config.mc_samples; ++i) ys[i] = dist::sample_student_t(p, rng);
            }
            out << ',' << fmt(sample_quantile(ys, kLo)) << ',' << fmt(sample_quantile(ys, 0.5)) << ','
                << fmt(sample_quantile(ys, kHi));
            if (rv) {
                out << ',' << fmt(sample_quantile(zs, kLo)) << ',' << fmt(sample_quantile(zs, 0.5)) << ','
                    << fmt(sample_quantile(zs, kHi));
            } else {
                out << ",,,";
            }
        }
        out << '\n';
    }
}

void write_bf_csv(const std::filesystem::path& path, const std::vector<std::pair<Date, double>>& traj) {
    auto out = open_out(path);
    out << "date,log_bf\n";
    for (const auto& [d, v] : traj) out << format_iso_date(d) << ',' << fmt(v) << '\n';
}

std::string bf_key(const std::string& a, const std::string& b) { return file_token(a) + "_vs_" + file_token(b); }

// Gamma filter on z_t alone: n*_t = beta n_{t-1}, then the RV update.
void write_rv_only(const std::filesystem::path& path, const SeriesFrame& frame, const RunConfig& config, double s1,
                   QuantileCache& qc) {
    auto out = open_out(path);
    out << "date,z,n,s,vol_sd_median,vol_sd_q05,vol_sd_q95\n";
    PriorMoments prior;
    prior.n_star = config.rv_only_beta;
    prior.s_prev = s1;
    for (const SeriesRow& row : frame.rows) {
        const RvUpdatedPrior u = rv_update(prior, row.z, config.rv_only_alpha);
        const VolBand vb = vol_band(u.n_tilde, u.s_tilde, qc);
        out << format_iso_date(row.date) << ',' << fmt(row.z) << ',' << fmt(u.n_tilde) << ',' << fmt(u.s_tilde)
            << ',' << fmt(vb.median) << ',' << fmt(vb.lo) << ',' << fmt(vb.hi) << '\n';
        prior.n_star = config.rv_only_beta * u.n_tilde;
        prior.s_prev = u.s_tilde;
    }
}

std::optional<std::vector<double>> json_doubles(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return j.at(key).get<std::vector<double>>();
}

json config_echo(const RunConfig& c) {
    json j;
    j["train_end"] = format_iso_date(c.train_end);
    j["eval_start"] = format_iso_date(c.eval_start);
    j["seed"] = c.seed;
    j["rv_floor"] = c.rv_floor;
    j["mc_samples"] = c.mc_samples;
    json models = json::array();
    for (const auto& m : c.models) {
        models.push_back({{"name", m.spec.name},
                          {"class", std::string(to_string(m.spec.model))},
                          {"delta", m.spec.hp.delta},
                          {"beta", m.spec.hp.beta},
                          {"alpha", m.spec.hp.alpha}});
    }
    j["models"] = models;
    return j;
}

}  // namespace

std::string file_token(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out.push_back(keep ? c : '_');
    }
    return out.empty() ? "_" : out;
}

std::vector<ModelConfig> default_models() {
    std::vector<ModelConfig> out(3);
    out[0].spec = {"SV-DLM", ModelClass::SVDLM, {0.999, 0.925, 0.0}};
    out[1].spec = {"RV-DLM", ModelClass::RVDLM, {0.999, 0.875, 2.75}};
    out[2].spec = {"RVL-DLM", ModelClass::RVLDLM, {0.999, 0.875, 2.75}};
    return out;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    const std::filesystem::path base = path.parent_path();
    RunConfig c;
    try {
        if (!j.contains("series") || !j.at("series").is_array() || j.at("series").empty()) {
            throw ConfigError("config needs a non-empty 'series' array");
        }
        std::set<std::string> tickers;
        for (const auto& s : j.at("series")) {
            SeriesConfig sc;
            sc.ticker = s.at("ticker").get<std::string>();
            sc.path = s.at("path").get<std::string>();
            if (sc.path.is_relative()) sc.path = base / sc.path;
            if (!std::filesystem::is_regular_file(sc.path)) {
                throw ConfigError("series '" + sc.ticker + "': file '" + sc.path.string() + "' does not exist");
            }
            if (s.contains("s1")) {
                sc.s1 = s.at("s1").get<double>();
                if (!(*sc.s1 > 0.0)) throw ConfigError("series '" + sc.ticker + "': s1 must be positive");
            }
            if (!tickers.insert(sc.ticker).second) throw ConfigError("duplicate ticker '" + sc.ticker + "'");
            c.series.push_back(std::move(sc));
        }

        if (j.contains("models")) {
            std::set<std::string> names;
            for (const auto& m : j.at("models")) {
                ModelConfig mc;
                mc.spec.model = parse_model_class(m.at("class").get<std::string>());
                mc.spec.name = m.value("name", std::string(to_string(mc.spec.model)));
                mc.spec.hp.delta = m.value("delta", 0.999);
                mc.spec.hp.beta = m.value("beta", mc.spec.model == ModelClass::SVDLM ? 0.925 : 0.875);
                mc.spec.hp.alpha = m.value("alpha", mc.spec.model == ModelClass::SVDLM ? 0.0 : 2.75);
                mc.spec.hp.validate(mc.spec.model);
                mc.a1 = json_doubles(m, "a1");
                mc.r1_diag = json_doubles(m, "r1_diag");
                if (m.contains("n_star1")) {
                    mc.n_star1 = m.at("n_star1").get<double>();
                    if (!(*mc.n_star1 > 0.0)) throw ConfigError("model '" + mc.spec.name + "': n_star1 must be positive");
                }
                if (mc.r1_diag && std::any_of(mc.r1_diag->begin(), mc.r1_diag->end(), [](double v) { return !(v >= 0.0); })) {
                    throw ConfigError("model '" + mc.spec.name + "': r1_diag entries must be nonnegative");
                }
                const auto d = static_cast<std::size_t>(regressor_dim(mc.spec.model));
                if ((mc.a1 && mc.a1->size() != d) || (mc.r1_diag && mc.r1_diag->size() != d)) {
                    throw ConfigError("model '" + mc.spec.name + "': a1 and r1_diag need " + std::to_string(d) +
                                      " entries");
                }
                if (!names.insert(mc.spec.name).second) throw ConfigError("duplicate model name '" + mc.spec.name + "'");
                c.models.push_back(std::move(mc));
            }
            if (c.models.empty()) throw ConfigError("config 'models' array is empty");
        } else {
            c.models = default_models();
        }

        if (j.contains("train_end")) c.train_end = parse_iso_date(j.at("train_end").get<std::string>());
        if (j.contains("eval_start")) c.eval_start = parse_iso_date(j.at("eval_start").get<std::string>());
        if (!(c.train_end < c.eval_start)) throw ConfigError("train_end must precede eval_start");
        if (j.contains("output_dir")) {
            c.output_dir = j.at("output_dir").get<std::string>();
            if (c.output_dir.is_relative()) c.output_dir = base / c.output_dir;
        }
        c.seed = j.value("seed", c.seed);
        c.rv_floor = j.value("rv_floor", c.rv_floor);
        if (!(c.rv_floor > 0.0)) throw ConfigError("rv_floor must be positive");
        c.mc_samples = j.value("mc_samples", c.mc_samples);
        if (j.contains("csv")) {
            const auto& s = j.at("csv");
            c.schema.date = s.value("date", c.schema.date);
            c.schema.open = s.value("open", c.schema.open);
            c.schema.high = s.value("high", c.schema.high);
            c.schema.low = s.value("low", c.schema.low);
            c.schema.close = s.value("close", c.schema.close);
            c.schema.adjusted_close = s.value("adjusted_close", c.schema.adjusted_close);
            c.schema.use_adjusted_close = s.value("use_adjusted_close", c.schema.use_adjusted_close);
        }
        if (j.contains("rv_only")) {
            const auto& r = j.at("rv_only");
            c.rv_only_volatility = r.value("enabled", c.rv_only_volatility);
            c.rv_only_beta = r.value("beta", c.rv_only_beta);
            c.rv_only_alpha = r.value("alpha", c.rv_only_alpha);
            HyperParams{1.0, c.rv_only_beta, c.rv_only_alpha}.validate(ModelClass::RVDLM);
        }
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    } catch (const DataError& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    return c;
}

InitialPrior initial_prior_for(const ModelConfig& mc, double s1) {
    InitialPrior p = default_initial_prior(mc.spec.model, mc.spec.hp.beta, s1);
    if (mc.a1) {
        for (std::size_t i = 0; i < mc.a1->size(); ++i) p.a(static_cast<Eigen::Index>(i)) = (*mc.a1)[i];
    }
    if (mc.r1_diag) {
        p.R.setZero();
        for (std::size_t i = 0; i < mc.r1_diag->size(); ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            p.R(k, k) = (*mc.r1_diag)[i];
        }
    }
    if (mc.n_star1) p.n_star = *mc.n_star1;
    return p;
}

int RunSummary::exit_code() const {
    for (const auto& s : series) {
        if (!s.ok) return s.exit_code;
    }
    return 0;
}

SeriesAnalysis analyze_series(const SeriesFrame& frame, const RunConfig& config, double s1) {
    if (!frame.eval_start) throw UsageError("series '" + frame.ticker + "' has no evaluation split");
    SeriesAnalysis out;
    out.frame = frame;
    for (const ModelConfig& mc : config.models) {
        const std::string where = "series " + frame.ticker + ", model " + mc.spec.name;
        std::optional<SequentialFilter> filter;
        try {
            filter.emplace(mc.spec, initial_prior_for(mc, s1));
        } catch (const Error& e) {
            rethrow_with_context(e, where + ", op initial_prior");
        }
        FilterTrajectory traj{mc.spec, {}};
        traj.steps.reserve(frame.rows.size());
        ScoreLedger ledger(mc.spec.name, *frame.eval_start);
        for (const SeriesRow& row : frame.rows) {
            try {
                FilterStep st = filter->step(row);
                ledger.record(st.date, log_score_y(st.stats), st.z_log_score);
                traj.steps.push_back(std::move(st));
            } catch (const Error& e) {
                rethrow_with_context(e, where + ", date " + format_iso_date(row.date) + ", op filter_step");
            }
        }
        out.trajectories.push_back(std::move(traj));
        out.ledgers.push_back(std::move(ledger));
    }
    return out;
}

namespace {

SeriesOutcome run_one_series(const SeriesConfig& sc, const RunConfig& config, QuantileCache& qc, json& series_json) {
    SeriesOutcome o;
    o.ticker = sc.ticker;

    const auto bars = parse_csv(sc.path, config.schema);
    o.bars = bars.size();
    SeriesFrame frame = apply_split(build_series(bars, config.rv_floor, sc.ticker), config.train_end, config.eval_start);
    o.modeled = frame.rows.size();
    o.train_days = frame.train_count;
    o.eval_days = frame.eval_count;
    if (frame.eval_count == 0) o.warnings.push_back("evaluation window is empty");
    if (frame.train_count == 0) o.warnings.push_back("training window is empty");

    o.s1 = sc.s1 ? *sc.s1 : std::max(rogers_satchell(validated_bar(bars.front())), config.rv_floor);
    const SeriesAnalysis an = analyze_series(frame, config, o.s1);
    if (!an.ledgers.empty() && !an.ledgers.front().entries().empty()) {
        o.first_scored = an.ledgers.front().entries().front().date;
    }

    const auto dir = config.output_dir / file_token(sc.ticker);
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < an.trajectories.size(); ++i) {
        const auto& name = an.trajectories[i].spec.name;
        write_model_csv(dir / (file_token(name) + ".csv"), an.frame, an.trajectories[i], an.ledgers[i], config, i, qc);
        o.models.push_back({name, an.ledgers[i].cumulative(), an.ledgers[i].joint_cumulative()});
    }
    for (std::size_t i = 0; i < an.ledgers.size(); ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            const auto traj = log_bayes_factor_trajectory(an.ledgers[i], an.ledgers[k]);
            const std::string key = bf_key(an.ledgers[i].model(), an.ledgers[k].model());
            write_bf_csv(dir / ("logbf_" + key + ".csv"), traj);
            o.final_log_bf.emplace_back(key, traj.empty() ? 0.0 : traj.back().second);
        }
    }
    if (config.rv_only_volatility) write_rv_only(dir / "rv_only_volatility.csv", frame, config, o.s1, qc);

    series_json["bars"] = o.bars;
    series_json["modeled_days"] = o.modeled;
    series_json["train_days"] = o.train_days;
    series_json["eval_days"] = o.eval_days;
    series_json["first_scored_date"] = o.first_scored ? json(format_iso_date(*o.first_scored)) : json(nullptr);
    series_json["s1"] = o.s1;
    json models = json::array();
    for (const auto& m : o.models) {
        json mj{{"name", m.model}, {"final_log_score", m.final_log_score}};
        mj["final_joint_log_score"] = m.final_joint_log_score ? json(*m.final_joint_log_score) : json(nullptr);
        models.push_back(mj);
    }
    series_json["models"] = models;
    json bf = json::object();
    for (const auto& [k, v] : o.final_log_bf) bf[k] = v;
    series_json["final_log_bayes_factors"] = bf;
    return o;
}

}  // namespace

RunSummary run_filter_pipeline(const RunConfig& config) {
    if (config.series.empty()) throw ConfigError("no series configured");
    if (config.models.empty()) throw ConfigError("no models configured");
    std::filesystem::create_directories(config.output_dir);

    RunSummary summary;
    QuantileCache qc;
    json sj = json::array();
    for (const SeriesConfig& sc : config.series) {
        json entry;
        entry["ticker"] = sc.ticker;
        SeriesOutcome o;
        try {
            o = run_one_series(sc, config, qc, entry);
        } catch (const Error& e) {
            o = SeriesOutcome{};
            o.ticker = sc.ticker;
            o.ok = false;
            o.exit_code = exit_code_for(e);
            o.error = e.what();
            entry = json{{"ticker", sc.ticker}};
        } catch (const std::filesystem::filesystem_error& e) {
            o = SeriesOutcome{};
            o.ticker = sc.ticker;
            o.ok = false;
            o.exit_code = 2;
            o.error = e.what();
            entry = json{{"ticker", sc.ticker}};
        }
        entry["ok"] = o.ok;
        entry["exit_code"] = o.exit_code;
        if (!o.ok) entry["error"] = o.error;
        entry["warnings"] = o.warnings;
        sj.push_back(entry);
        summary.series.push_back(std::move(o));
    }

    json root;
    root["config"] = config_echo(config);
    root["series"] = sj;
    root["exit_code"] = summary.exit_code();
    auto out = open_out(config.output_dir / "summary.json");
    out << root.dump(2) << '\n';
    return summary;
}

std::size_t recompute_scores(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir) {
    const auto summary_path = run_dir / "summary.json";
    std::ifstream in(summary_path);
    if (!in) throw UsageError("'" + run_dir.string() + "' is not a run directory (no summary.json)");
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw DataError("'" + summary_path.string() + "': " + e.what());
    }
    std::size_t written = 0;
    try {
        const Date window = parse_iso_date(root.at("config").at("eval_start").get<std::string>());
        std::vector<std::string> model_names;
        for (const auto& m : root.at("config").at("models")) model_names.push_back(m.at("name").get<std::string>());

        for (const auto& s : root.at("series")) {
            if (!s.value("ok", false)) continue;
            const std::string ticker = s.at("ticker").get<std::string>();
            std::vector<ScoreLedger> ledgers;
            for (const auto& name : model_names) {
                const auto table = read_csv_table(run_dir / file_token(ticker) / (file_token(name) + ".csv"));
                const std::size_t c_date = table.column("date");
                const std::size_t c_eval = table.column("in_eval");
                const std::size_t c_score = table.column("log_score");
                ScoreLedger ledger(name, window);
                for (const auto& row : table.rows) {
                    if (row.size() <= std::max({c_date, c_eval, c_score})) {
                        throw DataError("short row in results for " + ticker + "/" + name);
                    }
                    if (row[c_eval] != "1") continue;
                    ledger.record(parse_iso_date(row[c_date]), std::stod(row[c_score]));
                }
                ledgers.push_back(std::move(ledger));
            }
            const auto dir = out_dir / file_token(ticker);
            std::filesystem::create_directories(dir);
            for (std::size_t i = 0; i < ledgers.size(); ++i) {
                for (std::size_t k = 0; k < i; ++k) {
                    write_bf_csv(dir / ("logbf_" + bf_key(ledgers[i].model(), ledgers[k].model()) + ".csv"),
                                 log_bayes_factor_trajectory(ledgers[i], ledgers[k]));
                    ++written;
                }
            }
        }
    } catch (const json::exception& e) {
        throw DataError("'" + summary_path.string() + "': " + e.what());
    } catch (const std::invalid_argument&) {
        throw DataError("non-numeric log score in run directory '" + run_dir.string() + "'");
    }
    return written;
}

}  // namespace rvdlm

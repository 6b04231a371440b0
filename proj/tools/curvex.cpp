// Command-line front end: dataset generation, preparation, training, and
// rose-interface evaluation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvex/dataset.hpp"
#include "curvex/eval.hpp"
#include "curvex/field_ops.hpp"
#include "curvex/hybrid.hpp"
#include "curvex/neural.hpp"
#include "curvex/parallel.hpp"
#include "curvex/preprocess.hpp"
#include "curvex/presets.hpp"

namespace fs = std::filesystem;
using namespace curvex;

namespace {

// Flat key=value configuration file; flags override file values.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = val;
    }
    return out;
}

void apply_gen_config(const std::map<std::string, std::string>& kv, GenConfig& cfg) {
    auto get = [&](const char* k, auto& field) {
        const auto it = kv.find(k);
        if (it == kv.end()) return;
        if constexpr (std::is_same_v<std::decay_t<decltype(field)>, int>)
            field = std::stoi(it->second);
        else if constexpr (std::is_same_v<std::decay_t<decltype(field)>, double>)
            field = std::stod(it->second);
        else field = std::stoull(it->second);
    };
    get("eta", cfg.eta);
    get("hk_min_star", cfg.hk_min_star);
    get("hk_max_star", cfg.hk_max_star);
    get("cph", cfg.cph);
    get("sph2", cfg.sph2);
    get("keep_every_x", cfg.keep_every_x);
    get("nu", cfg.nu);
    get("na", cfg.na);
    get("nt", cfg.nt);
    get("ease_mid_max_pr", cfg.ease_mid_max_pr);
    get("scale", cfg.scale);
    get("rng_seed", cfg.rng_seed);
}

void apply_train_config(const std::map<std::string, std::string>& kv, TrainConfig& cfg) {
    auto get_i = [&](const char* k, int& f) {
        if (auto it = kv.find(k); it != kv.end()) f = std::stoi(it->second);
    };
    auto get_d = [&](const char* k, double& f) {
        if (auto it = kv.find(k); it != kv.end()) f = std::stod(it->second);
    };
    get_i("batch_size", cfg.batch_size);
    get_i("max_epochs", cfg.max_epochs);
    get_d("lr_init", cfg.lr_init);
    get_d("lr_min", cfg.lr_min);
    get_i("lr_halve_patience", cfg.lr_halve_patience);
    get_i("early_stop_patience", cfg.early_stop_patience);
    get_d("l2_factor", cfg.l2_factor);
    if (auto it = kv.find("seed"); it != kv.end()) cfg.seed = std::stoull(it->second);
}

SampleMatrix to_matrix(const Dataset& ds, const PreprocessorState& pre, double h) {
    SampleMatrix m;
    m.n = ds.samples.size();
    m.dim = static_cast<std::size_t>(pre.m_iota);
    m.features.resize(m.n * m.dim);
    m.hk.resize(m.n);
    m.target.resize(m.n);
    for (std::size_t s = 0; s < m.n; ++s) {
        const auto f = transform(pre, ds.samples[s].packet, h);
        std::copy(f.begin(), f.end(), m.features.begin() + static_cast<std::ptrdiff_t>(s * m.dim));
        m.hk[s] = ds.samples[s].packet.hk;
        m.target[s] = ds.samples[s].target;
    }
    return m;
}

ErrorStats matrix_stats(const ErrorNet& net, const SampleMatrix& m) {
    const auto pred = batch_forward(net, m.features, m.n, m.hk);
    return error_stats(pred, m.target);
}

int cmd_generate(const std::string& kind, GenConfig cfg, const std::string& out_path,
                 std::string manifest_path) {
    GenStats stats;
    Dataset ds;
    if (kind == "circle") ds = generate_circles(cfg, &stats);
    else ds = generate_sines(cfg, &stats);
    write_csv(ds, out_path);
    if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
    std::ofstream mf(manifest_path);
    if (!mf) throw DataError("cannot open for writing: " + manifest_path);
    mf << manifest_json(cfg, kind.c_str(), ds, stats) << "\n";
    std::cout << kind << " dataset: " << ds.size() << " samples -> " << out_path << "\n";
    if (stats.quota_warnings > 0)
        std::cout << "warning: " << stats.quota_warnings
                  << " classes below quota after the grid-draw cap\n";
    return 0;
}

int cmd_prepare(const std::vector<std::string>& inputs, const std::string& out_dir, int eta,
                int m_iota, std::uint64_t seed) {
    Dataset merged;
    merged.eta = eta;
    for (const std::string& path : inputs) {
        const Dataset part = read_csv(path);
        merged.samples.insert(merged.samples.end(), part.samples.begin(), part.samples.end());
    }
    if (merged.samples.empty()) throw DataError("prepare: no input samples");
    const double h = std::ldexp(1.0, -eta);
    if (m_iota <= 0) m_iota = preset_for_eta(eta).m_iota;

    const Dataset balanced = balance_histogram(merged, 100, seed);
    const SplitResult split = stratified_split(balanced, seed);
    const PreprocessorState pre = fit(split.train, h, m_iota);

    fs::create_directories(out_dir);
    write_csv(balanced, (fs::path(out_dir) / "balanced.csv").string());
    write_csv(split.train, (fs::path(out_dir) / "train.csv").string());
    write_csv(split.test, (fs::path(out_dir) / "test.csv").string());
    write_csv(split.valid, (fs::path(out_dir) / "valid.csv").string());
    save_json(pre, (fs::path(out_dir) / "preprocessor.json").string());

    nlohmann::json j;
    j["eta"] = eta;
    j["h"] = h;
    j["m_iota"] = m_iota;
    j["seed"] = seed;
    j["counts"] = {{"merged", merged.size()},
                   {"balanced", balanced.size()},
                   {"train", split.train.size()},
                   {"test", split.test.size()},
                   {"valid", split.valid.size()}};
    std::ofstream mf(fs::path(out_dir) / "prepare_manifest.json");
    mf << j.dump(2) << "\n";

    std::cout << "prepared " << balanced.size() << " samples (train " << split.train.size()
              << ", test " << split.test.size() << ", valid " << split.valid.size() << ") -> "
              << out_dir << "\n";
    return 0;
}

int cmd_train(const std::string& data_dir, const std::string& out_path,
              const std::string& history_path, TrainConfig cfg, int hidden_width) {
    const PreprocessorState pre =
        load_preprocessor((fs::path(data_dir) / "preprocessor.json").string());
    const Dataset train_ds = read_csv((fs::path(data_dir) / "train.csv").string());
    const Dataset valid_ds = read_csv((fs::path(data_dir) / "valid.csv").string());
    const Dataset test_ds = read_csv((fs::path(data_dir) / "test.csv").string());

    int eta = 0;
    {
        // h = 2^-eta exactly
        double h = pre.h;
        while (h < 1.0 && eta < 40) {
            h *= 2.0;
            ++eta;
        }
    }
    if (hidden_width <= 0) hidden_width = preset_for_eta(eta).hidden_width;
    if (cfg.l2_factor < 0.0) cfg.l2_factor = preset_for_eta(eta).l2_factor;

    const SampleMatrix tr = to_matrix(train_ds, pre, pre.h);
    const SampleMatrix va = to_matrix(valid_ds, pre, pre.h);
    const SampleMatrix te = to_matrix(test_ds, pre, pre.h);

    std::vector<EpochStats> history;
    const ErrorNet net =
        train(tr, va, pre.m_iota, {hidden_width, hidden_width, hidden_width, hidden_width},
              eta, pre.h, cfg, &history);
    save_json(net, out_path);
    if (!history_path.empty()) write_history_csv(history, history_path);

    auto print_stats = [](const char* name, const ErrorStats& s) {
        std::printf("%-6s rmse %.6e  mae %.6e  maxae %.6e\n", name, s.rmse, s.mae, s.maxae);
    };
    print_stats("train", matrix_stats(net, tr));
    print_stats("valid", matrix_stats(net, va));
    print_stats("test", matrix_stats(net, te));
    std::cout << "epochs run: " << history.size() << " (limit " << cfg.max_epochs << ")\n"
              << "model -> " << out_path << "\n";
    return 0;
}

int cmd_eval_rose(const std::string& model_path, const std::string& pre_path, int eta,
                  double a, double b, int petals, int nu, const std::string& out_path,
                  const std::string& corr_path, const std::string& field_path,
                  int timing_reps) {
    const ErrorNet net = load_net(model_path);
    const PreprocessorState pre = load_preprocessor(pre_path);
    const RoseShape rose(a, b, petals);
    HybridConfig cfg;
    cfg.net = &net;
    cfg.pre = &pre;

    if (!field_path.empty()) {
        const Grid grid = Grid::from_eta(eta);
        const double extent = a + b + (grid.band_half_width + 1.0) * grid.h;
        const ScalarField phi =
            reinitialize(evaluate(grid, rose, Box2::centered({0, 0}, extent)), nu);
        phi.write_csv(field_path);
    }

    const RoseEvaluation ev = evaluate_rose(rose, eta, nu, cfg, timing_reps);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot open for writing: " + out_path);
        out << report_json(ev.reports, eta, rose, nu) << "\n";
    }
    if (!corr_path.empty()) write_correlation_csv(ev.rows, corr_path);

    for (const EvalReport& r : ev.reports)
        std::printf("%-14s mae %.6e  maxae %.6e  rmse %.6e  nodes %zu  time %.6f s\n",
                    to_string(r.method), r.mae, r.maxae, r.rmse, r.n_nodes, r.wall_time);
    const double mae_fac = ev.reports[0].mae / ev.reports[1].mae;
    const double maxae_fac = ev.reports[0].maxae / ev.reports[1].maxae;
    std::printf("reduction factors: mae %.2f  maxae %.2f\n", mae_fac, maxae_fac);
    return 0;
}

int cmd_convergence(const std::string& model_dir, std::vector<int> etas, double a, double b,
                    int petals, int nu, const std::string& out_path) {
    std::vector<ConvergenceRow> rows;
    const RoseShape rose(a, b, petals);
    for (std::size_t k = 0; k < etas.size(); ++k) {
        const int eta = etas[k];
        const std::string model_path =
            (fs::path(model_dir) / ("model_eta" + std::to_string(eta) + ".json")).string();
        const std::string pre_path =
            (fs::path(model_dir) / ("preproc_eta" + std::to_string(eta) + ".json")).string();
        const ErrorNet net = load_net(model_path);
        const PreprocessorState pre = load_preprocessor(pre_path);
        HybridConfig cfg;
        cfg.net = &net;
        cfg.pre = &pre;
        const RoseEvaluation ev = evaluate_rose(rose, eta, nu, cfg, 1);

        ConvergenceRow row;
        row.eta = eta;
        row.baseline_mae = ev.reports[0].mae;
        row.baseline_maxae = ev.reports[0].maxae;
        row.hybrid_mae = ev.reports[1].mae;
        row.hybrid_maxae = ev.reports[1].maxae;
        if (k > 0) {
            const ConvergenceRow& prev = rows.back();
            row.baseline_mae_order = std::log2(prev.baseline_mae / row.baseline_mae);
            row.baseline_maxae_order = std::log2(prev.baseline_maxae / row.baseline_maxae);
            row.hybrid_mae_order = std::log2(prev.hybrid_mae / row.hybrid_mae);
            row.hybrid_maxae_order = std::log2(prev.hybrid_maxae / row.hybrid_maxae);
        } else {
            row.baseline_mae_order = row.baseline_maxae_order = row.hybrid_mae_order =
                row.hybrid_maxae_order = std::nan("");
        }
        rows.push_back(row);
        std::printf("eta %2d  baseline mae %.6e maxae %.6e | hybrid mae %.6e maxae %.6e\n",
                    eta, row.baseline_mae, row.baseline_maxae, row.hybrid_mae,
                    row.hybrid_maxae);
    }
    if (!out_path.empty()) write_convergence_csv(rows, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    configure_threads_from_env();

    CLI::App app{"Level-set interface curvature with a trained error-correcting network"};
    app.require_subcommand(1);

    // generate ---------------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "Generate circle or sine training samples");
    std::string gen_kind, gen_out = "dataset.csv", gen_manifest, gen_config;
    GenConfig gen_cfg;
    gen->add_option("--kind", gen_kind, "circle or sine")
        ->required()
        ->check(CLI::IsMember({"circle", "sine"}));
    gen->add_option("--config", gen_config, "key=value config file");
    gen->add_option("--eta", gen_cfg.eta, "refinement level, h = 2^-eta");
    gen->add_option("--scale", gen_cfg.scale, "desk-scale factor on sph2/na/nt");
    gen->add_option("--seed", gen_cfg.rng_seed, "rng seed");
    gen->add_option("--nu", gen_cfg.nu, "redistancing steps");
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--manifest", gen_manifest, "manifest JSON path");

    // prepare ----------------------------------------------------------------
    auto* prep = app.add_subcommand("prepare", "Balance, split, and fit the preprocessor");
    std::vector<std::string> prep_in;
    std::string prep_out = "prepared";
    int prep_eta = 6, prep_miota = 0;
    std::uint64_t prep_seed = 0;
    prep->add_option("--in", prep_in, "input dataset CSVs")->required()->expected(-1);
    prep->add_option("--out", prep_out, "output directory");
    prep->add_option("--eta", prep_eta, "refinement level of the inputs");
    prep->add_option("--m-iota", prep_miota, "kept principal components (default per eta)");
    prep->add_option("--seed", prep_seed, "rng seed");

    // train ------------------------------------------------------------------
    auto* tr = app.add_subcommand("train", "Train the error-correcting model");
    std::string tr_data = "prepared", tr_out = "model.json", tr_history, tr_config;
    TrainConfig tr_cfg;
    tr_cfg.l2_factor = -1.0; // resolve from the eta preset unless given
    int tr_width = 0;
    tr->add_option("--data", tr_data, "directory produced by `prepare`");
    tr->add_option("--out", tr_out, "model JSON path");
    tr->add_option("--history", tr_history, "training history CSV path");
    tr->add_option("--config", tr_config, "key=value config file");
    tr->add_option("--batch-size", tr_cfg.batch_size, "samples per update");
    tr->add_option("--max-epochs", tr_cfg.max_epochs, "epoch limit");
    tr->add_option("--lr-init", tr_cfg.lr_init, "initial learning rate");
    tr->add_option("--lr-min", tr_cfg.lr_min, "learning-rate floor");
    tr->add_option("--lr-patience", tr_cfg.lr_halve_patience, "epochs before halving");
    tr->add_option("--stop-patience", tr_cfg.early_stop_patience, "epochs before stopping");
    tr->add_option("--l2", tr_cfg.l2_factor, "L2 penalty on weights");
    tr->add_option("--seed", tr_cfg.seed, "rng seed");
    tr->add_option("--hidden-width", tr_width, "neurons per hidden layer (default per eta)");

    // eval-rose ----------------------------------------------------------------
    auto* ev = app.add_subcommand("eval-rose", "Evaluate baseline and hybrid on a rose");
    std::string ev_model, ev_pre, ev_out = "report.json", ev_corr, ev_field;
    int ev_eta = 6, ev_p = 5, ev_nu = 10, ev_reps = 10;
    double ev_a = 0.085, ev_b = 0.300;
    ev->add_option("--model", ev_model, "model JSON")->required();
    ev->add_option("--pre", ev_pre, "preprocessor JSON")->required();
    ev->add_option("--eta", ev_eta, "refinement level");
    ev->add_option("--a", ev_a, "rose amplitude");
    ev->add_option("--b", ev_b, "rose base radius");
    ev->add_option("--p", ev_p, "petal count (odd)");
    ev->add_option("--nu", ev_nu, "redistancing steps");
    ev->add_option("--out", ev_out, "report JSON path");
    ev->add_option("--dump-correlation", ev_corr, "per-node correlation CSV");
    ev->add_option("--dump-field", ev_field, "debug field CSV");
    ev->add_option("--timing-reps", ev_reps, "repetitions for the timing minimum");

    // convergence --------------------------------------------------------------
    auto* cv = app.add_subcommand("convergence", "Error versus resolution for a fixed rose");
    std::string cv_dir;
    std::vector<int> cv_etas{7, 8, 9, 10};
    double cv_a = 0.120, cv_b = 0.305;
    int cv_p = 5, cv_nu = 10;
    std::string cv_out = "convergence.csv";
    cv->add_option("--model-dir", cv_dir, "directory with model_eta{N}.json / preproc_eta{N}.json")
        ->required();
    cv->add_option("--etas", cv_etas, "refinement levels")->expected(-1);
    cv->add_option("--a", cv_a, "rose amplitude");
    cv->add_option("--b", cv_b, "rose base radius");
    cv->add_option("--p", cv_p, "petal count (odd)");
    cv->add_option("--nu", cv_nu, "redistancing steps");
    cv->add_option("--out", cv_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            if (!gen_config.empty()) {
                // file values first, parsed flags override
                GenConfig merged;
                apply_gen_config(parse_config_file(gen_config), merged);
                if (gen->count("--eta")) merged.eta = gen_cfg.eta;
                if (gen->count("--scale")) merged.scale = gen_cfg.scale;
                if (gen->count("--seed")) merged.rng_seed = gen_cfg.rng_seed;
                if (gen->count("--nu")) merged.nu = gen_cfg.nu;
                gen_cfg = merged;
            }
            return cmd_generate(gen_kind, gen_cfg, gen_out, gen_manifest);
        }
        if (prep->parsed()) return cmd_prepare(prep_in, prep_out, prep_eta, prep_miota, prep_seed);
        if (tr->parsed()) {
            if (!tr_config.empty()) {
                TrainConfig from_file = tr_cfg;
                apply_train_config(parse_config_file(tr_config), from_file);
                if (!tr->count("--batch-size")) tr_cfg.batch_size = from_file.batch_size;
                if (!tr->count("--max-epochs")) tr_cfg.max_epochs = from_file.max_epochs;
                if (!tr->count("--lr-init")) tr_cfg.lr_init = from_file.lr_init;
                if (!tr->count("--lr-min")) tr_cfg.lr_min = from_file.lr_min;
                if (!tr->count("--lr-patience"))
                    tr_cfg.lr_halve_patience = from_file.lr_halve_patience;
                if (!tr->count("--stop-patience"))
                    tr_cfg.early_stop_patience = from_file.early_stop_patience;
                if (!tr->count("--l2")) tr_cfg.l2_factor = from_file.l2_factor;
                if (!tr->count("--seed")) tr_cfg.seed = from_file.seed;
            }
            return cmd_train(tr_data, tr_out, tr_history, tr_cfg, tr_width);
        }
        if (ev->parsed())
            return cmd_eval_rose(ev_model, ev_pre, ev_eta, ev_a, ev_b, ev_p, ev_nu, ev_out,
                                 ev_corr, ev_field, ev_reps);
        if (cv->parsed()) return cmd_convergence(cv_dir, cv_etas, cv_a, cv_b, cv_p, cv_nu, cv_out);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}

#include "curvex/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "curvex/field_ops.hpp"

namespace curvex {

ErrorStats error_stats(const std::vector<double>& predicted, const std::vector<double>& truth) {
    if (predicted.size() != truth.size() || predicted.empty())
        throw DataError("error_stats: size mismatch or empty");
    ErrorStats s;
    double sse = 0.0, sae = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        const double e = std::abs(predicted[k] - truth[k]);
        sae += e;
        sse += e * e;
        s.maxae = std::max(s.maxae, e);
    }
    s.mae = sae / static_cast<double>(predicted.size());
    s.rmse = std::sqrt(sse / static_cast<double>(predicted.size()));
    return s;
}

Regression linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DataError("regression: need two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = x[k] - mx, dy = y[k] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Regression r;
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.intercept = my - r.slope * mx;
    r.pearson = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    return r;
}

const char* to_string(EvalMethod m) {
    switch (m) {
    case EvalMethod::BaselineNu10: return "baseline_nu10";
    case EvalMethod::BaselineNu20: return "baseline_nu20";
    case EvalMethod::Hybrid: return "hybrid";
    }
    return "?";
}

RoseEvaluation evaluate_rose(const RoseShape& rose, int eta, int nu, const HybridConfig& cfg,
                             int timing_reps) {
    const Grid grid = Grid::from_eta(eta);
    const double h = grid.h;
    const double extent = rose.a() + rose.b() + (grid.band_half_width + 1.0) * h;
    const Box2 region = Box2::centered({0.0, 0.0}, extent);

    const ScalarField phi = reinitialize(evaluate(grid, rose, region), nu);
    const std::vector<NodeIndex> nodes = interface_nodes(phi);
    if (nodes.empty()) throw NumericalError("evaluate_rose: no interface nodes");

    // Curvature pass timings; grid construction and redistancing excluded.
    auto time_pass = [&](auto&& pass) {
        double best = std::numeric_limits<double>::max();
        for (int rep = 0; rep < std::max(timing_reps, 1); ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            pass();
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };

    const double baseline_time = time_pass([&] {
        const VectorField nrm = normals(phi);
        const ScalarField kap = curvature(phi);
        double sink = 0.0;
        for (const NodeIndex& node : nodes) sink += numerical_hk(phi, nrm, kap, node);
        volatile double keep = sink;
        (void)keep;
    });

    RoseEvaluation ev;
    const double hybrid_time = time_pass([&] {
        const VectorField nrm = normals(phi);
        const ScalarField kap = curvature(phi);
        HybridStats st;
        const auto values = ml_curvature_batch(phi, nrm, kap, nodes, cfg, &st);
        volatile double keep = values[0];
        (void)keep;
    });

    const VectorField nrm = normals(phi);
    const ScalarField kap = curvature(phi);

    std::vector<double> truth(nodes.size()), base(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const NodeIndex node = nodes[k];
        const Vec2 pos = grid.pos(node.i, node.j);
        const Vec2 x_gamma =
            project_to_interface(pos, phi.value(node.i, node.j), nrm.value(node.i, node.j));
        truth[k] = h * rose.target_curvature(x_gamma);
        base[k] = numerical_hk(phi, nrm, kap, node);
    }
    const std::vector<double> hyb =
        ml_curvature_batch(phi, nrm, kap, nodes, cfg, &ev.hybrid_stats);

    const ErrorStats bs = error_stats(base, truth);
    const ErrorStats hs = error_stats(hyb, truth);

    EvalReport rb;
    rb.method = nu >= 20 ? EvalMethod::BaselineNu20 : EvalMethod::BaselineNu10;
    rb.mae = bs.mae;
    rb.maxae = bs.maxae;
    rb.rmse = bs.rmse;
    rb.n_nodes = nodes.size();
    rb.wall_time = baseline_time;
    rb.regression = linear_regression(truth, base);

    EvalReport rh;
    rh.method = EvalMethod::Hybrid;
    rh.mae = hs.mae;
    rh.maxae = hs.maxae;
    rh.rmse = hs.rmse;
    rh.n_nodes = nodes.size();
    rh.wall_time = hybrid_time;
    rh.regression = linear_regression(truth, hyb);

    ev.reports = {rb, rh};
    ev.rows.resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k)
        ev.rows[k] = {truth[k], base[k], hyb[k]};
    return ev;
}

std::string report_json(const std::vector<EvalReport>& reports, int eta, const RoseShape& rose,
                        int nu) {
    nlohmann::json j;
    j["eta"] = eta;
    j["nu"] = nu;
    j["rose"] = {{"a", rose.a()}, {"b", rose.b()}, {"p", rose.petals()}};
    j["reports"] = nlohmann::json::array();
    for (const EvalReport& r : reports) {
        j["reports"].push_back({{"method", to_string(r.method)},
                                {"mae", r.mae},
                                {"maxae", r.maxae},
                                {"rmse", r.rmse},
                                {"n_nodes", r.n_nodes},
                                {"wall_time", r.wall_time},
                                {"regression",
                                 {{"slope", r.regression.slope},
                                  {"intercept", r.regression.intercept},
                                  {"pearson", r.regression.pearson}}}});
    }
    return j.dump(2);
}

void write_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot open for writing: " + path);
    std::fputs("true_hk,baseline_hk,hybrid_hk\n", f);
    for (const CorrelationRow& r : rows)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", r.true_hk, r.baseline_hk, r.hybrid_hk);
    std::fclose(f);
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot open for writing: " + path);
    std::fputs("eta,baseline_mae,baseline_mae_order,baseline_maxae,baseline_maxae_order,"
               "hybrid_mae,hybrid_mae_order,hybrid_maxae,hybrid_maxae_order\n",
               f);
    for (const ConvergenceRow& r : rows)
        std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.eta,
                     r.baseline_mae, r.baseline_mae_order, r.baseline_maxae,
                     r.baseline_maxae_order, r.hybrid_mae, r.hybrid_mae_order, r.hybrid_maxae,
                     r.hybrid_maxae_order);
    std::fclose(f);
}

} // namespace curvex

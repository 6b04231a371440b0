#ifndef CURVEX_EVAL_HPP
#define CURVEX_EVAL_HPP

#include <string>
#include <vector>

#include "curvex/hybrid.hpp"
#include "curvex/shapes.hpp"

namespace curvex {

struct ErrorStats {
    double mae = 0.0;
    double maxae = 0.0;
    double rmse = 0.0;
};
ErrorStats error_stats(const std::vector<double>& predicted, const std::vector<double>& truth);

struct Regression {
    double slope = 0.0;
    double intercept = 0.0;
    double pearson = 0.0;
};
Regression linear_regression(const std::vector<double>& x, const std::vector<double>& y);

enum class EvalMethod { BaselineNu10, BaselineNu20, Hybrid };
const char* to_string(EvalMethod m);

struct EvalReport {
    EvalMethod method = EvalMethod::BaselineNu10;
    double mae = 0.0, maxae = 0.0, rmse = 0.0;
    std::size_t n_nodes = 0;
    double wall_time = 0.0; // seconds, min over repetitions, curvature pass only
    Regression regression;  // predicted vs true h*kappa
};

std::string report_json(const std::vector<EvalReport>& reports, int eta, const RoseShape& rose,
                        int nu);

/// Per-node dump behind the correlation plots.
struct CorrelationRow {
    double true_hk = 0.0;
    double baseline_hk = 0.0;
    double hybrid_hk = 0.0;
};

struct RoseEvaluation {
    std::vector<EvalReport> reports; // baseline then hybrid
    std::vector<CorrelationRow> rows;
    HybridStats hybrid_stats;
};

/// Build the rose field at eta, redistance nu steps, and measure baseline and
/// hybrid accuracy over every interface node against the exact polar-angle
/// targets.  Timings are the minimum over `timing_reps` repetitions of the
/// curvature pass alone.
RoseEvaluation evaluate_rose(const RoseShape& rose, int eta, int nu, const HybridConfig& cfg,
                             int timing_reps = 10);

void write_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path);

struct ConvergenceRow {
    int eta = 0;
    double baseline_mae = 0.0, baseline_maxae = 0.0;
    double hybrid_mae = 0.0, hybrid_maxae = 0.0;
    // log2 ratios against the previous row; NaN on the first
    double baseline_mae_order = 0.0, baseline_maxae_order = 0.0;
    double hybrid_mae_order = 0.0, hybrid_maxae_order = 0.0;
};

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

} // namespace curvex

#endif

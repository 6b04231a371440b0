#include "curvex/hybrid.hpp"

#include <cmath>

namespace curvex {

void HybridConfig::validate(double grid_h) const {
    if (!(hk_low > 0.0 && hk_low < hk_up))
        throw DataError("hybrid: need 0 < hk_low < hk_up");
    if (!net || !pre) throw DataError("hybrid: model and preprocessor required");
    if (net->h != grid_h || pre->h != grid_h)
        throw DataError("hybrid: model/preprocessor resolution does not match the grid");
    if (net->input_dim != pre->m_iota)
        throw DataError("hybrid: model input dimension does not match preprocessor");
}

double numerical_hk(const ScalarField& field, const VectorField& normals,
                    const ScalarField& curvatures, NodeIndex node) {
    const Vec2 n = normals.value(node.i, node.j);
    if (!normals.has(node.i, node.j) || normals.degenerate(node.i, node.j))
        throw NumericalError("numerical_hk: degenerate node");
    const Vec2 pos = field.grid().pos(node.i, node.j);
    const Vec2 x_gamma = project_to_interface(pos, field.value(node.i, node.j), n);
    return field.grid().h * interpolate_bilinear(curvatures, x_gamma);
}

double apply_gate_blend(double hk_numeric, double avg_prediction, double hk_low, double hk_up) {
    double value = avg_prediction;
    const double mag = std::abs(hk_numeric);
    if (mag <= hk_up) {
        const double lambda = (hk_up - mag) / (hk_up - hk_low);
        value = (1.0 - lambda) * value + lambda * (-mag);
    }
    const double sign = hk_numeric >= 0.0 ? 1.0 : -1.0;
    return sign * std::abs(value);
}

namespace {

struct NodeWork {
    double hk = 0.0;         // numerical estimate
    bool corrected = false;  // network consulted
    bool fallback = false;   // packet construction failed
    std::vector<double> feat1, feat2;
    double in1 = 0.0, in2 = 0.0; // hk inputs of the two predictions
};

NodeWork prepare_node(const ScalarField& field, const VectorField& normals,
                      const ScalarField& curvatures, NodeIndex node, const HybridConfig& cfg) {
    NodeWork w;
    w.hk = numerical_hk(field, normals, curvatures, node);
    if (std::abs(w.hk) < cfg.hk_low) return w;

    DataPacket packet;
    try {
        packet = collect(field, normals, curvatures, node);
    } catch (const NumericalError&) {
        w.fallback = true;
        return w;
    }
    packet.hk = w.hk;
    if (packet.hk > 0.0) packet = negate(packet);
    packet = reorient(packet);
    const DataPacket mirrored = reflect(packet);

    const double h = field.grid().h;
    w.feat1 = transform(*cfg.pre, packet, h);
    w.feat2 = transform(*cfg.pre, mirrored, h);
    w.in1 = packet.hk;
    w.in2 = mirrored.hk;
    w.corrected = true;
    return w;
}

} // namespace

double ml_curvature(const ScalarField& field, const VectorField& normals,
                    const ScalarField& curvatures, NodeIndex node, const HybridConfig& cfg,
                    HybridStats* stats) {
    cfg.validate(field.grid().h);
    const NodeWork w = prepare_node(field, normals, curvatures, node, cfg);
    if (!w.corrected) {
        if (stats) {
            if (w.fallback) ++stats->fallbacks;
            else ++stats->bypassed;
        }
        return w.hk;
    }
    const double f1 = forward(*cfg.net, w.feat1, w.in1);
    const double f2 = forward(*cfg.net, w.feat2, w.in2);
    if (stats) {
        stats->net_evals += 2;
        ++stats->corrected;
        if (std::abs(w.hk) <= cfg.hk_up) ++stats->blended;
    }
    return apply_gate_blend(w.hk, 0.5 * (f1 + f2), cfg.hk_low, cfg.hk_up);
}

std::vector<double> ml_curvature_batch(const ScalarField& field, const VectorField& normals,
                                       const ScalarField& curvatures,
                                       std::span<const NodeIndex> nodes,
                                       const HybridConfig& cfg, HybridStats* stats) {
    cfg.validate(field.grid().h);
    const std::size_t n = nodes.size();
    std::vector<NodeWork> work(n);
    bool failed = false;
    std::string failure;

#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < n; ++k) {
        try {
            work[k] = prepare_node(field, normals, curvatures, nodes[k], cfg);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw NumericalError("ml_curvature_batch: " + failure);

    // one matrix for both predictions of every corrected node
    const std::size_t dim = static_cast<std::size_t>(cfg.net->input_dim);
    std::vector<std::size_t> corrected_ids;
    for (std::size_t k = 0; k < n; ++k)
        if (work[k].corrected) corrected_ids.push_back(k);

    std::vector<double> features(2 * corrected_ids.size() * dim);
    std::vector<double> hks(2 * corrected_ids.size());
    for (std::size_t c = 0; c < corrected_ids.size(); ++c) {
        const NodeWork& w = work[corrected_ids[c]];
        std::copy(w.feat1.begin(), w.feat1.end(),
                  features.begin() + static_cast<std::ptrdiff_t>((2 * c) * dim));
        std::copy(w.feat2.begin(), w.feat2.end(),
                  features.begin() + static_cast<std::ptrdiff_t>((2 * c + 1) * dim));
        hks[2 * c] = w.in1;
        hks[2 * c + 1] = w.in2;
    }
    const std::vector<double> preds =
        batch_forward(*cfg.net, features, 2 * corrected_ids.size(), hks);

    std::vector<double> out(n);
    std::size_t c = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const NodeWork& w = work[k];
        if (!w.corrected) {
            out[k] = w.hk;
            if (stats) {
                if (w.fallback) ++stats->fallbacks;
                else ++stats->bypassed;
            }
            continue;
        }
        const double avg = 0.5 * (preds[2 * c] + preds[2 * c + 1]);
        out[k] = apply_gate_blend(w.hk, avg, cfg.hk_low, cfg.hk_up);
        if (stats) {
            stats->net_evals += 2;
            ++stats->corrected;
            if (std::abs(w.hk) <= cfg.hk_up) ++stats->blended;
        }
        ++c;
    }
    return out;
}

} // namespace curvex

#include "curvex/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "curvex/rng.hpp"

namespace curvex {

std::size_t ErrorNet::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers)
        n += static_cast<std::size_t>(l.rows) * l.cols + static_cast<std::size_t>(l.rows);
    return n;
}

void ErrorNet::validate() const {
    if (layers.size() != 5) throw DataError("net: expected 4 hidden layers plus output neuron");
    int in = input_dim;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const Layer& l = layers[k];
        if (l.cols != in) throw DataError("net: layer dimension chain broken");
        if (l.W.size() != static_cast<std::size_t>(l.rows) * l.cols ||
            l.b.size() != static_cast<std::size_t>(l.rows))
            throw DataError("net: weight storage size mismatch");
        in = l.rows;
    }
    if (layers.back().rows != 1 || layers.back().act != Activation::Linear)
        throw DataError("net: output neuron must be linear and scalar");
}

ErrorNet make_net(int input_dim, std::array<int, 4> hidden, int eta, double h,
                  std::uint64_t seed) {
    if (input_dim < 1) throw DataError("net: input_dim must be positive");
    for (int w : hidden)
        if (w < 1) throw DataError("net: hidden widths must be positive");

    ErrorNet net;
    net.input_dim = input_dim;
    net.hidden = hidden;
    net.eta = eta;
    net.h = h;
    net.seed = seed;

    Rng rng(sub_seed(seed, 0x7e7));
    auto add_layer = [&](int rows, int cols, Activation act) {
        Layer l;
        l.rows = rows;
        l.cols = cols;
        l.act = act;
        l.W.resize(static_cast<std::size_t>(rows) * cols);
        l.b.assign(static_cast<std::size_t>(rows), 0.0);
        const double limit = std::sqrt(6.0 / cols); // He-style fan-in scaling
        for (double& w : l.W) w = rng.uniform(-limit, limit);
        net.layers.push_back(std::move(l));
    };
    add_layer(hidden[0], input_dim, Activation::Relu);
    add_layer(hidden[1], hidden[0], Activation::Relu);
    add_layer(hidden[2], hidden[1], Activation::Relu);
    add_layer(hidden[3], hidden[2], Activation::Relu);
    add_layer(1, hidden[3], Activation::Linear);
    return net;
}

namespace {

inline void dense_forward(const Layer& l, const double* x, double* y) {
    for (int i = 0; i < l.rows; ++i) {
        const double* w = l.W.data() + static_cast<std::size_t>(i) * l.cols;
        double acc = l.b[static_cast<std::size_t>(i)];
        for (int j = 0; j < l.cols; ++j) acc += w[j] * x[j];
        y[i] = (l.act == Activation::Relu && acc < 0.0) ? 0.0 : acc;
    }
}

} // namespace

double forward(const ErrorNet& net, std::span<const double> features, double hk) {
    if (features.size() != static_cast<std::size_t>(net.input_dim))
        throw DataError("forward: feature dimension mismatch");
    std::vector<double> buf_a(features.begin(), features.end());
    std::vector<double> buf_b;
    for (const Layer& l : net.layers) {
        buf_b.resize(static_cast<std::size_t>(l.rows));
        dense_forward(l, buf_a.data(), buf_b.data());
        std::swap(buf_a, buf_b);
    }
    return hk + buf_a[0]; // structural skip-add
}

std::vector<double> batch_forward(const ErrorNet& net, const std::vector<double>& features,
                                  std::size_t n, const std::vector<double>& hks) {
    const std::size_t dim = static_cast<std::size_t>(net.input_dim);
    if (features.size() != n * dim) throw DataError("batch_forward: ragged feature matrix");
    if (hks.size() != n) throw DataError("batch_forward: hk length mismatch");
    std::vector<double> out(n);
#pragma omp parallel
    {
        std::vector<double> a, b;
#pragma omp for schedule(static)
        for (std::size_t s = 0; s < n; ++s) {
            a.assign(features.begin() + static_cast<std::ptrdiff_t>(s * dim),
                     features.begin() + static_cast<std::ptrdiff_t>((s + 1) * dim));
            for (const Layer& l : net.layers) {
                b.resize(static_cast<std::size_t>(l.rows));
                dense_forward(l, a.data(), b.data());
                std::swap(a, b);
            }
            out[s] = hks[s] + a[0];
        }
    }
    return out;
}

std::vector<double> batch_forward_f32(const ErrorNet& net, const std::vector<double>& features,
                                      std::size_t n, const std::vector<double>& hks) {
    const std::size_t dim = static_cast<std::size_t>(net.input_dim);
    if (features.size() != n * dim) throw DataError("batch_forward: ragged feature matrix");

    struct LayerF {
        int rows, cols;
        Activation act;
        std::vector<float> W, b;
    };
    std::vector<LayerF> lf;
    for (const Layer& l : net.layers) {
        LayerF x{l.rows, l.cols, l.act, {}, {}};
        x.W.assign(l.W.begin(), l.W.end());
        x.b.assign(l.b.begin(), l.b.end());
        lf.push_back(std::move(x));
    }

    std::vector<double> out(n);
#pragma omp parallel
    {
        std::vector<float> a, b;
#pragma omp for schedule(static)
        for (std::size_t s = 0; s < n; ++s) {
            a.resize(dim);
            for (std::size_t k = 0; k < dim; ++k) a[k] = static_cast<float>(features[s * dim + k]);
            for (const LayerF& l : lf) {
                b.assign(static_cast<std::size_t>(l.rows), 0.0f);
                for (int i = 0; i < l.rows; ++i) {
                    const float* w = l.W.data() + static_cast<std::size_t>(i) * l.cols;
                    float acc = l.b[static_cast<std::size_t>(i)];
                    for (int j = 0; j < l.cols; ++j) acc += w[j] * a[static_cast<std::size_t>(j)];
                    b[static_cast<std::size_t>(i)] = (l.act == Activation::Relu && acc < 0.0f) ? 0.0f : acc;
                }
                std::swap(a, b);
            }
            out[s] = static_cast<double>(static_cast<float>(hks[s]) + a[0]);
        }
    }
    return out;
}

void TrainConfig::validate() const {
    if (batch_size < 1 || max_epochs < 1) throw DataError("train config: sizes must be positive");
    if (!(lr_min <= lr_init)) throw DataError("train config: lr_min must not exceed lr_init");
    if (lr_halve_patience < 1 || early_stop_patience < 1)
        throw DataError("train config: patience must be at least 1");
    if (l2_factor < 0.0) throw DataError("train config: l2_factor must be non-negative");
}

std::vector<double> flatten_parameters(const ErrorNet& net) {
    std::vector<double> theta;
    theta.reserve(net.parameter_count());
    for (const Layer& l : net.layers) {
        theta.insert(theta.end(), l.W.begin(), l.W.end());
        theta.insert(theta.end(), l.b.begin(), l.b.end());
    }
    return theta;
}

void assign_parameters(ErrorNet& net, const std::vector<double>& theta) {
    if (theta.size() != net.parameter_count())
        throw DataError("assign_parameters: length mismatch");
    std::size_t k = 0;
    for (Layer& l : net.layers) {
        std::copy(theta.begin() + static_cast<std::ptrdiff_t>(k),
                  theta.begin() + static_cast<std::ptrdiff_t>(k + l.W.size()), l.W.begin());
        k += l.W.size();
        std::copy(theta.begin() + static_cast<std::ptrdiff_t>(k),
                  theta.begin() + static_cast<std::ptrdiff_t>(k + l.b.size()), l.b.begin());
        k += l.b.size();
    }
}

namespace {

/// Batch activations/deltas reused across batches.
struct Workspace {
    // act[0] is the input; act[l+1] the output of layer l (post-activation).
    std::vector<std::vector<double>> act;
    std::vector<std::vector<double>> delta; // per layer, n x rows
    std::vector<double> err;                // prediction - target

    void resize(const ErrorNet& net, std::size_t n) {
        act.resize(net.layers.size() + 1);
        delta.resize(net.layers.size());
        act[0].resize(n * static_cast<std::size_t>(net.input_dim));
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            act[l + 1].resize(n * static_cast<std::size_t>(net.layers[l].rows));
            delta[l].resize(n * static_cast<std::size_t>(net.layers[l].rows));
        }
        err.resize(n);
    }
};

/// RMSE-plus-L2 loss over a batch with the full gradient in flat parameter
/// order.  Per-sample work is parallel; accumulations run in a fixed order so
/// results do not depend on the thread count.
double batch_loss_gradient(const ErrorNet& net, const SampleMatrix& batch, double l2,
                           std::vector<double>* grad, Workspace& ws, double* sum_abs_err) {
    const std::size_t n = batch.n;
    const std::size_t L = net.layers.size();
    ws.resize(net, n);
    std::copy(batch.features.begin(), batch.features.end(), ws.act[0].begin());

#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < n; ++s) {
        // forward, keeping activations
        for (std::size_t l = 0; l < L; ++l) {
            const Layer& ly = net.layers[l];
            const double* x = ws.act[l].data() + s * static_cast<std::size_t>(ly.cols);
            double* y = ws.act[l + 1].data() + s * static_cast<std::size_t>(ly.rows);
            dense_forward(ly, x, y);
        }
        ws.err[s] = batch.hk[s] + ws.act[L][s] - batch.target[s];
    }

    double sse = 0.0, sae = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        sse += ws.err[s] * ws.err[s];
        sae += std::abs(ws.err[s]);
    }
    if (sum_abs_err) *sum_abs_err = sae;
    const double mse = sse / static_cast<double>(n);
    const double rmse = std::sqrt(mse);

    double l2_term = 0.0;
    for (const Layer& l : net.layers)
        for (double w : l.W) l2_term += w * w;
    const double loss = rmse + l2 * l2_term;
    if (!grad) return loss;

    // d(loss)/d(prediction_s) = err_s / (n * rmse)
    const double denom = std::max(rmse, 1e-30) * static_cast<double>(n);

#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < n; ++s) {
        ws.delta[L - 1][s] = ws.err[s] / denom;
        for (std::size_t l = L - 1; l-- > 0;) {
            const Layer& up = net.layers[l + 1];
            const double* d_up = ws.delta[l + 1].data() + s * static_cast<std::size_t>(up.rows);
            const double* a = ws.act[l + 1].data() + s * static_cast<std::size_t>(up.cols);
            double* d = ws.delta[l].data() + s * static_cast<std::size_t>(up.cols);
            for (int j = 0; j < up.cols; ++j) {
                double acc = 0.0;
                for (int i = 0; i < up.rows; ++i)
                    acc += up.W[static_cast<std::size_t>(i) * up.cols + j] * d_up[i];
                // ReLU derivative through the stored post-activation
                d[j] = (a[j] > 0.0) ? acc : 0.0;
            }
        }
    }

    grad->assign(net.parameter_count(), 0.0);
    std::size_t offset = 0;
    for (std::size_t l = 0; l < L; ++l) {
        const Layer& ly = net.layers[l];
        const std::size_t rows = static_cast<std::size_t>(ly.rows);
        const std::size_t cols = static_cast<std::size_t>(ly.cols);
        double* dW = grad->data() + offset;
        double* db = grad->data() + offset + rows * cols;
        const std::vector<double>& dl = ws.delta[l];
        const std::vector<double>& al = ws.act[l];
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < rows; ++i) {
            double* dWrow = dW + i * cols;
            double bacc = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const double dsi = dl[s * rows + i];
                if (dsi == 0.0) continue;
                bacc += dsi;
                const double* arow = al.data() + s * cols;
                for (std::size_t j = 0; j < cols; ++j) dWrow[j] += dsi * arow[j];
            }
            db[i] = bacc;
            // L2 pulls on weights only
            const double* wrow = ly.W.data() + i * cols;
            for (std::size_t j = 0; j < cols; ++j) dWrow[j] += 2.0 * l2 * wrow[j];
        }
        offset += rows * cols + rows;
    }
    return loss;
}

struct EvalAccum {
    double rmse = 0.0, mae = 0.0, maxae = 0.0;
};

EvalAccum evaluate_set(const ErrorNet& net, const SampleMatrix& set) {
    const auto pred = batch_forward(net, set.features, set.n, set.hk);
    EvalAccum acc;
    double sse = 0.0, sae = 0.0;
    for (std::size_t s = 0; s < set.n; ++s) {
        const double e = std::abs(pred[s] - set.target[s]);
        sse += e * e;
        sae += e;
        acc.maxae = std::max(acc.maxae, e);
    }
    acc.rmse = std::sqrt(sse / static_cast<double>(set.n));
    acc.mae = sae / static_cast<double>(set.n);
    return acc;
}

} // namespace

double loss_and_gradient(const ErrorNet& net, const SampleMatrix& batch, double l2,
                         std::vector<double>* grad) {
    if (batch.n == 0) throw DataError("loss_and_gradient: empty batch");
    if (batch.features.size() != batch.n * static_cast<std::size_t>(net.input_dim) ||
        batch.hk.size() != batch.n || batch.target.size() != batch.n)
        throw DataError("loss_and_gradient: inconsistent batch");
    Workspace ws;
    return batch_loss_gradient(net, batch, l2, grad, ws, nullptr);
}

ErrorNet train(const SampleMatrix& train_set, const SampleMatrix& valid_set, int input_dim,
               std::array<int, 4> hidden, int eta, double h, const TrainConfig& cfg,
               std::vector<EpochStats>* history) {
    cfg.validate();
    if (train_set.n == 0 || valid_set.n == 0) throw DataError("train: empty data set");
    if (train_set.dim != static_cast<std::size_t>(input_dim) ||
        valid_set.dim != static_cast<std::size_t>(input_dim))
        throw DataError("train: feature dimension mismatch");

    ErrorNet net = make_net(input_dim, hidden, eta, h, cfg.seed);
    std::vector<double> theta = flatten_parameters(net);
    const std::size_t P = theta.size();
    std::vector<double> m(P, 0.0), v(P, 0.0), grad;
    double lr = cfg.lr_init;
    long long adam_t = 0;
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

    Rng shuffle_rng(sub_seed(cfg.seed, 0x5f5));
    std::vector<std::size_t> order(train_set.n);
    for (std::size_t s = 0; s < train_set.n; ++s) order[s] = s;

    double best_mae = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta = theta;
    int epochs_since_improve = 0;
    int epochs_since_lr_drop = 0;

    Workspace ws;
    SampleMatrix batch;
    batch.dim = static_cast<std::size_t>(input_dim);

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double train_sse = 0.0, train_sae = 0.0;

        const std::size_t nb =
            (train_set.n + static_cast<std::size_t>(cfg.batch_size) - 1) /
            static_cast<std::size_t>(cfg.batch_size);
        for (std::size_t bi = 0; bi < nb; ++bi) {
            const std::size_t lo = bi * static_cast<std::size_t>(cfg.batch_size);
            const std::size_t hi = std::min(lo + static_cast<std::size_t>(cfg.batch_size),
                                            train_set.n);
            const std::size_t bn = hi - lo;
            batch.n = bn;
            batch.features.resize(bn * batch.dim);
            batch.hk.resize(bn);
            batch.target.resize(bn);
            for (std::size_t s = 0; s < bn; ++s) {
                const std::size_t src = order[lo + s];
                std::copy(train_set.features.begin() +
                              static_cast<std::ptrdiff_t>(src * batch.dim),
                          train_set.features.begin() +
                              static_cast<std::ptrdiff_t>((src + 1) * batch.dim),
                          batch.features.begin() + static_cast<std::ptrdiff_t>(s * batch.dim));
                batch.hk[s] = train_set.hk[src];
                batch.target[s] = train_set.target[src];
            }

            double sae = 0.0;
            const double loss =
                batch_loss_gradient(net, batch, cfg.l2_factor, &grad, ws, &sae);
            if (!std::isfinite(loss))
                throw NumericalError("train: non-finite loss at epoch " +
                                     std::to_string(epoch) + ", batch " + std::to_string(bi) +
                                     ", lr " + std::to_string(lr));
            for (std::size_t s = 0; s < bn; ++s) train_sse += ws.err[s] * ws.err[s];
            train_sae += sae;

            ++adam_t;
            const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam_t));
            const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam_t));
#pragma omp parallel for schedule(static)
            for (std::size_t k = 0; k < P; ++k) {
                const double g = grad[k];
                m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * g;
                v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * g * g;
                theta[k] -= lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + kEps);
            }
            assign_parameters(net, theta);
        }

        const EvalAccum va = evaluate_set(net, valid_set);
        if (history) {
            EpochStats row;
            row.epoch = epoch;
            row.lr = lr;
            row.train_rmse = std::sqrt(train_sse / static_cast<double>(train_set.n));
            row.train_mae = train_sae / static_cast<double>(train_set.n);
            row.valid_rmse = va.rmse;
            row.valid_mae = va.mae;
            row.valid_maxae = va.maxae;
            history->push_back(row);
        }

        if (va.mae < best_mae - 1e-12) {
            best_mae = va.mae;
            best_theta = theta;
            epochs_since_improve = 0;
            epochs_since_lr_drop = 0;
        } else {
            ++epochs_since_improve;
            ++epochs_since_lr_drop;
        }
        if (epochs_since_improve >= cfg.early_stop_patience) break;
        if (epochs_since_lr_drop >= cfg.lr_halve_patience && lr > cfg.lr_min) {
            lr = std::max(lr / 2.0, cfg.lr_min);
            epochs_since_lr_drop = 0;
        }
    }

    // keep the best-validation weights, rounded to export precision
    for (double& x : best_theta) x = static_cast<double>(static_cast<float>(x));
    assign_parameters(net, best_theta);
    return net;
}

// ---------------------------------------------------------------------------
// serialization

namespace {
constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
} // namespace

std::string base64_encode(const std::vector<float>& data) {
    // little-endian f32 payload
    std::vector<unsigned char> bytes(data.size() * 4);
    for (std::size_t k = 0; k < data.size(); ++k) {
        std::uint32_t u;
        std::memcpy(&u, &data[k], 4);
        bytes[4 * k + 0] = static_cast<unsigned char>(u & 0xff);
        bytes[4 * k + 1] = static_cast<unsigned char>((u >> 8) & 0xff);
        bytes[4 * k + 2] = static_cast<unsigned char>((u >> 16) & 0xff);
        bytes[4 * k + 3] = static_cast<unsigned char>((u >> 24) & 0xff);
    }
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t k = 0; k < bytes.size(); k += 3) {
        const std::uint32_t b0 = bytes[k];
        const std::uint32_t b1 = k + 1 < bytes.size() ? bytes[k + 1] : 0;
        const std::uint32_t b2 = k + 2 < bytes.size() ? bytes[k + 2] : 0;
        const std::uint32_t triple = (b0 << 16) | (b1 << 8) | b2;
        out.push_back(kB64Alphabet[(triple >> 18) & 0x3f]);
        out.push_back(kB64Alphabet[(triple >> 12) & 0x3f]);
        out.push_back(k + 1 < bytes.size() ? kB64Alphabet[(triple >> 6) & 0x3f] : '=');
        out.push_back(k + 2 < bytes.size() ? kB64Alphabet[triple & 0x3f] : '=');
    }
    return out;
}

std::vector<float> base64_decode(const std::string& text) {
    std::vector<unsigned char> bytes;
    bytes.reserve(text.size() / 4 * 3);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int val = b64_value(c);
        if (val < 0) throw DataError("base64: invalid character");
        acc = (acc << 6) | static_cast<std::uint32_t>(val);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            bytes.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    if (bytes.size() % 4 != 0) throw DataError("base64: payload is not a whole number of f32");
    std::vector<float> out(bytes.size() / 4);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * k]) |
                                (static_cast<std::uint32_t>(bytes[4 * k + 1]) << 8) |
                                (static_cast<std::uint32_t>(bytes[4 * k + 2]) << 16) |
                                (static_cast<std::uint32_t>(bytes[4 * k + 3]) << 24);
        std::memcpy(&out[k], &u, 4);
    }
    return out;
}

void save_json(const ErrorNet& net, const std::string& path) {
    net.validate();
    nlohmann::json j;
    j["version"] = 1;
    j["eta"] = net.eta;
    j["h"] = net.h;
    j["m_iota"] = net.input_dim;
    j["hidden_widths"] = net.hidden;
    j["skip_add"] = true;
    j["seed"] = net.seed;
    j["layers"] = nlohmann::json::array();
    for (const Layer& l : net.layers) {
        std::vector<float> w(l.W.begin(), l.W.end());
        std::vector<float> b(l.b.begin(), l.b.end());
        j["layers"].push_back({{"rows", l.rows},
                               {"cols", l.cols},
                               {"activation", l.act == Activation::Relu ? "relu" : "linear"},
                               {"W_b64", base64_encode(w)},
                               {"b_b64", base64_encode(b)}});
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

ErrorNet load_net(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    ErrorNet net;
    try {
        if (j.at("version").get<int>() != 1) throw DataError(path + ": unsupported version");
        net.eta = j.at("eta").get<int>();
        net.h = j.at("h").get<double>();
        net.input_dim = j.at("m_iota").get<int>();
        const auto widths = j.at("hidden_widths").get<std::vector<int>>();
        if (widths.size() != 4) throw DataError(path + ": hidden_widths must have 4 entries");
        std::copy(widths.begin(), widths.end(), net.hidden.begin());
        if (!j.at("skip_add").get<bool>()) throw DataError(path + ": skip_add must be true");
        net.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& lj : j.at("layers")) {
            Layer l;
            l.rows = lj.at("rows").get<int>();
            l.cols = lj.at("cols").get<int>();
            const std::string act = lj.at("activation").get<std::string>();
            if (act == "relu") l.act = Activation::Relu;
            else if (act == "linear") l.act = Activation::Linear;
            else throw DataError(path + ": unknown activation " + act);
            const auto w = base64_decode(lj.at("W_b64").get<std::string>());
            const auto b = base64_decode(lj.at("b_b64").get<std::string>());
            if (w.size() != static_cast<std::size_t>(l.rows) * l.cols)
                throw DataError(path + ": weight payload length mismatch");
            if (b.size() != static_cast<std::size_t>(l.rows))
                throw DataError(path + ": bias payload length mismatch");
            l.W.assign(w.begin(), w.end());
            l.b.assign(b.begin(), b.end());
            net.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": schema error: " + e.what());
    }
    net.validate();
    return net;
}

void write_history_csv(const std::vector<EpochStats>& history, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot open for writing: " + path);
    std::fputs("epoch,lr,train_rmse,train_mae,valid_rmse,valid_mae,valid_maxae\n", f);
    for (const EpochStats& r : history)
        std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epoch, r.lr, r.train_rmse,
                     r.train_mae, r.valid_rmse, r.valid_mae, r.valid_maxae);
    std::fclose(f);
}

} // namespace curvex

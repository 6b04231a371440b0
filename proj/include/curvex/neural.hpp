#ifndef CURVEX_NEURAL_HPP
#define CURVEX_NEURAL_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curvex/errors.hpp"

namespace curvex {

enum class Activation { Relu, Linear };

/// One dense layer, y = act(W x + b); W row-major rows x cols.
struct Layer {
    int rows = 0;
    int cols = 0;
    Activation act = Activation::Relu;
    std::vector<double> W;
    std::vector<double> b;
};

/// Error-modeling MLP: four ReLU layers and a linear output neuron feeding a
/// structural (non-trainable) skip-add of the raw hk input.
struct ErrorNet {
    int input_dim = 18;
    std::array<int, 4> hidden{130, 130, 130, 130};
    std::vector<Layer> layers; // 4 relu + 1 linear
    int eta = 0;
    double h = 0.0;
    std::uint64_t seed = 0;

    std::size_t parameter_count() const;
    void validate() const;
};

/// Freshly initialized net (He-style uniform fan-in weights, zero biases).
ErrorNet make_net(int input_dim, std::array<int, 4> hidden, int eta, double h,
                  std::uint64_t seed);

/// hk_F = hk + eps(features); the features vector must have input_dim entries.
double forward(const ErrorNet& net, std::span<const double> features, double hk);

/// Row-per-sample inference; bit-identical to per-row `forward`.
std::vector<double> batch_forward(const ErrorNet& net, const std::vector<double>& features,
                                  std::size_t n, const std::vector<double>& hks);

/// Single-precision inference path (used by the benchmark and precision
/// tests).
std::vector<double> batch_forward_f32(const ErrorNet& net, const std::vector<double>& features,
                                      std::size_t n, const std::vector<double>& hks);

struct TrainConfig {
    int batch_size = 64;
    int max_epochs = 1000;
    double lr_init = 1.5e-4;
    double lr_min = 1e-5;
    int lr_halve_patience = 15;   // epochs without valid-MAE improvement
    int early_stop_patience = 50; // epochs without valid-MAE improvement
    double l2_factor = 5e-6;      // penalty on weights, not biases
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double lr = 0.0;
    double train_rmse = 0.0, train_mae = 0.0;
    double valid_rmse = 0.0, valid_mae = 0.0, valid_maxae = 0.0;
};

/// Preprocessed training matrix: n rows of `dim` features plus the raw hk
/// skip input and the target per row.
struct SampleMatrix {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> features; // n x dim row-major
    std::vector<double> hk;       // n
    std::vector<double> target;   // n
};

/// Adam on RMSE + L2, with plateau-halved learning rate and early stopping.
/// Returns the weights of the best validation MAE epoch, rounded to f32.
/// Deterministic for a fixed seed and thread-count independent.
ErrorNet train(const SampleMatrix& train_set, const SampleMatrix& valid_set, int input_dim,
               std::array<int, 4> hidden, int eta, double h, const TrainConfig& cfg,
               std::vector<EpochStats>* history = nullptr);

/// Loss and gradient of one batch (exposed for the finite-difference check).
/// Parameter order: per layer, W row-major then b.
double loss_and_gradient(const ErrorNet& net, const SampleMatrix& batch, double l2,
                         std::vector<double>* grad);

std::vector<double> flatten_parameters(const ErrorNet& net);
void assign_parameters(ErrorNet& net, const std::vector<double>& theta);

/// JSON export with Base64-encoded little-endian f32 weights; the skip-add is
/// metadata, not a layer.
void save_json(const ErrorNet& net, const std::string& path);
ErrorNet load_net(const std::string& path);

void write_history_csv(const std::vector<EpochStats>& history, const std::string& path);

/// Base64 helpers (f32 payloads).
std::string base64_encode(const std::vector<float>& data);
std::vector<float> base64_decode(const std::string& text);

} // namespace curvex

#endif

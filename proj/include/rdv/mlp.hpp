#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdv/classify.hpp"
#include "rdv/features.hpp"

namespace rdv {

// Fully connected regression network: Leaky-ReLU hidden layers, linear scalar
// output. Inputs and the target are z-scored; forward() reports physical m/s.
struct MlpModel {
    TransferType type = TransferType::Closing;
    std::vector<int> layer_sizes;               // input, hidden..., 1
    std::vector<std::vector<double>> weights;   // per layer, row-major (out x in)
    std::vector<std::vector<double>> biases;    // per layer, length out
    double leaky_slope = 0.01;
    FeatureSchema schema;
    Normalizer feature_norm;
    double target_mean = 0.0;
    double target_std = 1.0;
};

struct TrainConfig {
    int batch_size = 32;
    int max_epochs = 1000;
    double adam_alpha = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double val_fraction = 0.10;
    std::uint64_t seed = 0;
    int early_stop_patience = 50;
    std::vector<int> hidden_layers;  // empty selects the per-type default
};

struct EpochStats {
    double train_loss = 0.0;  // MSE on the normalized scale
    double val_loss = 0.0;
    double val_mre = 0.0;     // mean relative error in physical units
};

// Hidden-layer sizes used when TrainConfig.hidden_layers is empty:
// closing 3x60, intersecting 2x60, separating 3x70.
std::vector<int> default_hidden_layers(TransferType type);

double leaky_relu(double x, double slope);

// He-style initialization (fan-in scaled normals), identity normalizers.
MlpModel init_model(TransferType type, const FeatureSchema& schema,
                    const std::vector<int>& hidden_layers, double leaky_slope, std::uint64_t seed);

// Network pass on the normalized scale.
double net_forward(const MlpModel& m, const std::vector<double>& x_norm);

// Physical-scale prediction [m/s] from raw (unnormalized) features.
double forward(const MlpModel& m, const FeatureVector& x);

// Mean squared error (1/b) * sum (pred - target)^2.
double loss_mse(const std::vector<double>& predictions, const std::vector<double>& targets);

struct Gradients {
    std::vector<std::vector<double>> dw;
    std::vector<std::vector<double>> db;
};

// Analytic gradient of the batch MSE w.r.t. every weight and bias
// (normalized scale). Exposed so it can be checked against finite
// differences.
Gradients batch_gradients(const MlpModel& m, const std::vector<std::vector<double>>& x_norm,
                          const std::vector<double>& y_norm, double* loss_out = nullptr);

// Mini-batch Adam training with a seeded 90/10 train/validation split;
// returns the weights at the epoch of minimum validation loss.
MlpModel train_mlp(const std::vector<FeatureVector>& features, const std::vector<double>& dv_mps,
                   TransferType type, const FeatureSchema& schema, const TrainConfig& cfg,
                   std::vector<EpochStats>* trace = nullptr);

// Mean relative error of physical predictions against positive reference
// labels; throws if any label is <= 0 or the input is empty.
double evaluate_mre(const MlpModel& m, const std::vector<FeatureVector>& features,
                    const std::vector<double>& dv_mps);

void save_model(const MlpModel& m, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace rdv

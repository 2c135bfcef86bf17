#include "rdv/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "rdv/rng.hpp"

namespace rdv {

namespace {

void check_shapes(const MlpModel& m) {
    if (m.layer_sizes.size() < 2 || m.layer_sizes.back() != 1) {
        throw std::invalid_argument("mlp: layer_sizes must end in a single output");
    }
    const std::size_t layers = m.layer_sizes.size() - 1;
    if (m.weights.size() != layers || m.biases.size() != layers) {
        throw std::invalid_argument("mlp: weight/bias layer count mismatch");
    }
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = static_cast<std::size_t>(m.layer_sizes[l]);
        const std::size_t out = static_cast<std::size_t>(m.layer_sizes[l + 1]);
        if (m.weights[l].size() != in * out || m.biases[l].size() != out) {
            throw std::invalid_argument("mlp: weight shapes do not chain");
        }
    }
}

// Forward pass keeping every layer's activations (index 0 is the input).
void forward_layers(const MlpModel& m, const std::vector<double>& x,
                    std::vector<std::vector<double>>& acts) {
    const std::size_t layers = m.layer_sizes.size() - 1;
    acts.resize(layers + 1);
    acts[0] = x;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = static_cast<std::size_t>(m.layer_sizes[l]);
        const std::size_t out = static_cast<std::size_t>(m.layer_sizes[l + 1]);
        acts[l + 1].assign(out, 0.0);
        const bool hidden = l != layers - 1;  // output layer stays linear
        for (std::size_t j = 0; j < out; ++j) {
            const double* w = &m.weights[l][j * in];
            double z = m.biases[l][j];
            for (std::size_t i = 0; i < in; ++i) z += w[i] * acts[l][i];
            acts[l + 1][j] = hidden ? leaky_relu(z, m.leaky_slope) : z;
        }
    }
}

}  // namespace

std::vector<int> default_hidden_layers(TransferType type) {
    switch (type) {
        case TransferType::Closing: return {60, 60, 60};
        case TransferType::Intersecting: return {60, 60};
        case TransferType::Separating: return {70, 70, 70};
    }
    throw std::logic_error("unreachable");
}

double leaky_relu(double x, double slope) { return x >= 0.0 ? x : slope * x; }

MlpModel init_model(TransferType type, const FeatureSchema& schema,
                    const std::vector<int>& hidden_layers, double leaky_slope, std::uint64_t seed) {
    MlpModel m;
    m.type = type;
    m.schema = schema;
    m.leaky_slope = leaky_slope;
    m.layer_sizes.push_back(static_cast<int>(schema.dimension()));
    for (int h : hidden_layers) {
        if (h < 1) throw std::invalid_argument("mlp: hidden width must be >= 1");
        m.layer_sizes.push_back(h);
    }
    m.layer_sizes.push_back(1);

    Rng rng(seed);
    const std::size_t layers = m.layer_sizes.size() - 1;
    m.weights.resize(layers);
    m.biases.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = static_cast<std::size_t>(m.layer_sizes[l]);
        const std::size_t out = static_cast<std::size_t>(m.layer_sizes[l + 1]);
        const double scale = std::sqrt(2.0 / static_cast<double>(in));
        m.weights[l].resize(in * out);
        for (double& w : m.weights[l]) w = scale * rng.normal();
        m.biases[l].assign(out, 0.0);
    }

    m.feature_norm.mean.assign(schema.dimension(), 0.0);
    m.feature_norm.stddev.assign(schema.dimension(), 1.0);
    m.target_mean = 0.0;
    m.target_std = 1.0;
    return m;
}

double net_forward(const MlpModel& m, const std::vector<double>& x_norm) {
    if (x_norm.size() != static_cast<std::size_t>(m.layer_sizes.front())) {
        throw std::invalid_argument("mlp: input dimension mismatch");
    }
    std::vector<std::vector<double>> acts;
    forward_layers(m, x_norm, acts);
    return acts.back()[0];
}

double forward(const MlpModel& m, const FeatureVector& x) {
    const std::vector<double> xn = apply_normalizer(m.feature_norm, x.values);
    return net_forward(m, xn) * m.target_std + m.target_mean;
}

double loss_mse(const std::vector<double>& predictions, const std::vector<double>& targets) {
    if (predictions.empty() || predictions.size() != targets.size()) {
        throw std::invalid_argument("loss_mse: inputs must be non-empty and equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predictions.size());
}

Gradients batch_gradients(const MlpModel& m, const std::vector<std::vector<double>>& x_norm,
                          const std::vector<double>& y_norm, double* loss_out) {
    check_shapes(m);
    if (x_norm.empty() || x_norm.size() != y_norm.size()) {
        throw std::invalid_argument("batch_gradients: inputs must be non-empty and equal length");
    }
    const std::size_t layers = m.layer_sizes.size() - 1;
    const double batch = static_cast<double>(x_norm.size());

    Gradients g;
    g.dw.resize(layers);
    g.db.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        g.dw[l].assign(m.weights[l].size(), 0.0);
        g.db[l].assign(m.biases[l].size(), 0.0);
    }

    double loss = 0.0;
    std::vector<std::vector<double>> acts;
    std::vector<double> delta, delta_prev;
    for (std::size_t s = 0; s < x_norm.size(); ++s) {
        forward_layers(m, x_norm[s], acts);
        const double pred = acts.back()[0];
        const double err = pred - y_norm[s];
        loss += err * err;

        // Output layer is linear: dL/dz = 2*err/batch.
        delta.assign(1, 2.0 * err / batch);
        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t in = static_cast<std::size_t>(m.layer_sizes[l]);
            const std::size_t out = static_cast<std::size_t>(m.layer_sizes[l + 1]);
            for (std::size_t j = 0; j < out; ++j) {
                const double dj = delta[j];
                double* dw = &g.dw[l][j * in];
                const double* a = acts[l].data();
                for (std::size_t i = 0; i < in; ++i) dw[i] += dj * a[i];
                g.db[l][j] += dj;
            }
            if (l == 0) break;
            delta_prev.assign(in, 0.0);
            for (std::size_t j = 0; j < out; ++j) {
                const double dj = delta[j];
                const double* w = &m.weights[l][j * in];
                for (std::size_t i = 0; i < in; ++i) delta_prev[i] += dj * w[i];
            }
            // Hidden activations are Leaky ReLU; use the stored outputs' sign.
            for (std::size_t i = 0; i < in; ++i) {
                if (acts[l][i] < 0.0) delta_prev[i] *= m.leaky_slope;
            }
            delta.swap(delta_prev);
        }
    }
    if (loss_out) *loss_out = loss / batch;
    return g;
}

MlpModel train_mlp(const std::vector<FeatureVector>& features, const std::vector<double>& dv_mps,
                   TransferType type, const FeatureSchema& schema, const TrainConfig& cfg,
                   std::vector<EpochStats>* trace) {
    if (features.size() != dv_mps.size()) throw std::invalid_argument("train_mlp: row count mismatch");
    if (features.size() < 50) throw std::invalid_argument("train_mlp: too few rows (need >= 50)");
    if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0)) {
        throw std::invalid_argument("train_mlp: val_fraction must be in (0, 1)");
    }
    if (cfg.batch_size < 1) throw std::invalid_argument("train_mlp: batch_size must be >= 1");
    for (double y : dv_mps) {
        if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("train_mlp: labels must be positive");
    }

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i-- > 1;) {
        std::swap(order[i], order[rng.index(i + 1)]);
    }
    const std::size_t n_val = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                           std::floor(cfg.val_fraction * order.size())));
    const std::size_t n_train = order.size() - n_val;
    std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
    std::vector<std::size_t> val_idx(order.begin() + n_train, order.end());

    // Normalization statistics from the training split only.
    std::vector<FeatureVector> train_rows;
    train_rows.reserve(n_train);
    for (std::size_t i : train_idx) train_rows.push_back(features[i]);
    const Normalizer fnorm = fit_normalizer(train_rows);
    double t_mean = 0.0;
    for (std::size_t i : train_idx) t_mean += dv_mps[i];
    t_mean /= static_cast<double>(n_train);
    double t_var = 0.0;
    for (std::size_t i : train_idx) {
        const double d = dv_mps[i] - t_mean;
        t_var += d * d;
    }
    const double t_std = std::max(std::sqrt(t_var / static_cast<double>(n_train)), 1e-12);

    std::vector<std::vector<double>> x_all(features.size());
    std::vector<double> y_all(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        x_all[i] = apply_normalizer(fnorm, features[i].values);
        y_all[i] = (dv_mps[i] - t_mean) / t_std;
    }

    MlpModel model = init_model(type, schema,
                                cfg.hidden_layers.empty() ? default_hidden_layers(type)
                                                          : cfg.hidden_layers,
                                0.01, mix_seed(cfg.seed, 1));
    model.feature_norm = fnorm;
    model.target_mean = t_mean;
    model.target_std = t_std;

    // Adam state.
    const std::size_t layers = model.layer_sizes.size() - 1;
    std::vector<std::vector<double>> mw(layers), vw(layers), mb(layers), vb(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        mw[l].assign(model.weights[l].size(), 0.0);
        vw[l].assign(model.weights[l].size(), 0.0);
        mb[l].assign(model.biases[l].size(), 0.0);
        vb[l].assign(model.biases[l].size(), 0.0);
    }
    long long step = 0;

    const auto eval_split = [&](const std::vector<std::size_t>& idx, double* mre) {
        double loss = 0.0, rel = 0.0;
        for (std::size_t i : idx) {
            const double pred = net_forward(model, x_all[i]);
            const double d = pred - y_all[i];
            loss += d * d;
            const double pred_mps = pred * t_std + t_mean;
            rel += std::abs(pred_mps - dv_mps[i]) / dv_mps[i];
        }
        if (mre) *mre = rel / static_cast<double>(idx.size());
        return loss / static_cast<double>(idx.size());
    };

    MlpModel best_model = model;
    double best_val = std::numeric_limits<double>::max();
    int since_best = 0;

    std::vector<std::vector<double>> xb;
    std::vector<double> yb;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        for (std::size_t i = train_idx.size(); i-- > 1;) {
            std::swap(train_idx[i], train_idx[rng.index(i + 1)]);
        }
        double train_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < train_idx.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(train_idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
            xb.clear();
            yb.clear();
            for (std::size_t i = start; i < stop; ++i) {
                xb.push_back(x_all[train_idx[i]]);
                yb.push_back(y_all[train_idx[i]]);
            }
            double batch_loss = 0.0;
            const Gradients g = batch_gradients(model, xb, yb, &batch_loss);
            train_loss += batch_loss;
            ++n_batches;
            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("train_mlp: non-finite loss at epoch " + std::to_string(epoch));
            }
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < layers; ++l) {
                for (std::size_t p = 0; p < model.weights[l].size(); ++p) {
                    mw[l][p] = cfg.adam_beta1 * mw[l][p] + (1.0 - cfg.adam_beta1) * g.dw[l][p];
                    vw[l][p] = cfg.adam_beta2 * vw[l][p] + (1.0 - cfg.adam_beta2) * g.dw[l][p] * g.dw[l][p];
                    model.weights[l][p] -=
                        cfg.adam_alpha * (mw[l][p] / bc1) / (std::sqrt(vw[l][p] / bc2) + cfg.adam_eps);
                }
                for (std::size_t p = 0; p < model.biases[l].size(); ++p) {
                    mb[l][p] = cfg.adam_beta1 * mb[l][p] + (1.0 - cfg.adam_beta1) * g.db[l][p];
                    vb[l][p] = cfg.adam_beta2 * vb[l][p] + (1.0 - cfg.adam_beta2) * g.db[l][p] * g.db[l][p];
                    model.biases[l][p] -=
                        cfg.adam_alpha * (mb[l][p] / bc1) / (std::sqrt(vb[l][p] / bc2) + cfg.adam_eps);
                }
            }
        }
        EpochStats stats;
        stats.train_loss = train_loss / static_cast<double>(n_batches);
        stats.val_loss = eval_split(val_idx, &stats.val_mre);
        if (trace) trace->push_back(stats);

        if (stats.val_loss < best_val) {
            best_val = stats.val_loss;
            best_model = model;
            since_best = 0;
        } else if (++since_best >= cfg.early_stop_patience) {
            break;
        }
    }
    return best_model;
}

double evaluate_mre(const MlpModel& m, const std::vector<FeatureVector>& features,
                    const std::vector<double>& dv_mps) {
    if (features.empty() || features.size() != dv_mps.size()) {
        throw std::invalid_argument("evaluate_mre: inputs must be non-empty and equal length");
    }
    double rel = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!(dv_mps[i] > 0.0)) throw std::invalid_argument("evaluate_mre: reference labels must be positive");
        rel += std::abs(forward(m, features[i]) - dv_mps[i]) / dv_mps[i];
    }
    return rel / static_cast<double>(features.size());
}

void save_model(const MlpModel& m, const std::string& path) {
    check_shapes(m);
    nlohmann::json j;
    j["format_version"] = 1;
    j["type"] = to_string(m.type);
    j["layer_sizes"] = m.layer_sizes;
    j["leaky_slope"] = m.leaky_slope;
    j["weights"] = m.weights;
    j["biases"] = m.biases;
    j["feature_schema"] = {{"type", to_string(m.schema.type)}, {"names", m.schema.names}};
    j["feature_norm"] = {{"mean", m.feature_norm.mean}, {"stddev", m.feature_norm.stddev}};
    j["target_norm"] = {{"mean", m.target_mean}, {"stddev", m.target_std}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed model file " + path + ": " + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw std::runtime_error("unsupported model format_version");
        }
        MlpModel m;
        m.type = transfer_type_from_string(j.at("type").get<std::string>());
        m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
        m.leaky_slope = j.at("leaky_slope").get<double>();
        m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
        m.schema.type = transfer_type_from_string(j.at("feature_schema").at("type").get<std::string>());
        m.schema.names = j.at("feature_schema").at("names").get<std::vector<std::string>>();
        m.feature_norm.mean = j.at("feature_norm").at("mean").get<std::vector<double>>();
        m.feature_norm.stddev = j.at("feature_norm").at("stddev").get<std::vector<double>>();
        m.target_mean = j.at("target_norm").at("mean").get<double>();
        m.target_std = j.at("target_norm").at("stddev").get<double>();
        if (m.schema.type != m.type) throw std::runtime_error("model/schema type mismatch");
        if (m.schema.dimension() != static_cast<std::size_t>(m.layer_sizes.front()) ||
            m.feature_norm.mean.size() != m.schema.dimension() ||
            m.feature_norm.stddev.size() != m.schema.dimension()) {
            throw std::runtime_error("model schema dimension mismatch");
        }
        check_shapes(m);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed model file " + path + ": " + e.what());
    }
}

}  // namespace rdv

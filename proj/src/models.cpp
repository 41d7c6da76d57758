#include "intraday/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "intraday/rng.hpp"
#include "intraday/threads.hpp"

namespace intraday {

using nlohmann::json;

void ClassifierSpec::validate() const {
    if (forest.n_trees < 1 || forest.max_depth < 1) {
        throw ConfigError("forest needs positive tree count and depth");
    }
    if (lstm.hidden_units < 1 || lstm.batch_size < 1 || lstm.max_epochs < 1 ||
        lstm.early_stop_patience < 1 || lstm.output_classes != 2) {
        throw ConfigError("lstm counts must be positive (and output_classes == 2)");
    }
    if (lstm.dropout_rate < 0.0 || lstm.dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must lie in [0, 1)");
    }
    if (lstm.validation_fraction <= 0.0 || lstm.validation_fraction >= 1.0) {
        throw ConfigError("validation_fraction must lie in (0, 1)");
    }
    if (lstm.learning_rate <= 0.0) {
        throw ConfigError("learning_rate must be positive");
    }
}

double FittedModel::predict_row(const double* row) const {
    if (spec.kind != ModelKind::forest) {
        throw ShapeMismatchError("predict_row on a non-forest model");
    }
    return forest.predict_row(row);
}

double FittedModel::predict_sequence(const double* seq, int steps) const {
    if (spec.kind != ModelKind::lstm) {
        throw ShapeMismatchError("predict_sequence on a non-lstm model");
    }
    return lstm_forward(lstm, seq, steps)[1];
}

void init_lstm_weights(LstmNetwork& net, uint64_t seed) {
    Rng rng(seed, "lstm-init");
    const int H = net.hidden_dim();
    const int I = net.input_dim();
    auto& p = net.params();

    auto glorot = [&](std::size_t offset, std::size_t count, int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (std::size_t i = 0; i < count; ++i) p[offset + i] = rng.uniform(-limit, limit);
    };
    glorot(net.wx_offset(), static_cast<std::size_t>(4 * H * I), I, 4 * H);
    glorot(net.wh_offset(), static_cast<std::size_t>(4 * H * H), H, 4 * H);
    for (std::size_t i = 0; i < static_cast<std::size_t>(4 * H); ++i) p[net.bias_offset() + i] = 0.0;
    for (int k = 0; k < H; ++k) p[net.bias_offset() + static_cast<std::size_t>(H + k)] = 1.0;  // forget gate
    glorot(net.dense_w_offset(), static_cast<std::size_t>(2 * H), H, 2);
    p[net.dense_b_offset()] = 0.0;
    p[net.dense_b_offset() + 1] = 0.0;
}

namespace {

FittedModel fit_lstm(const ClassifierSpec& spec, const SplitDataset& data) {
    const LstmParams& lp = spec.lstm;
    const int steps = FeatureSequence::timesteps;
    const int H = lp.hidden_units;

    std::vector<SequenceRef> all;
    all.reserve(data.train.size());
    for (const Sample& s : data.train) {
        const int slot = data.universe_slot(s.stock_index);
        const int rel = s.day_index - data.period.full_range.first;
        const double* window = data.scaled_series[static_cast<std::size_t>(slot)]
                                   [static_cast<std::size_t>(rel - steps + 1)]
                                       .data();
        all.push_back({window, s.target});
    }

    const std::size_t n = all.size();
    const auto n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * (1.0 - lp.validation_fraction)));
    if (n_train < 1 || n_train >= n) {
        throw EmptyTrainingSetError("validation split leaves an empty train or validation set");
    }
    const std::vector<SequenceRef> val(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());

    FittedModel model;
    model.spec = spec;
    model.lstm = LstmNetwork(FeatureSequence::features, H);
    init_lstm_weights(model.lstm, spec.seed);

    const double keep_prob = 1.0 - lp.dropout_rate;
    RmsPropState opt_state;
    std::vector<double> grad;
    std::vector<double> best_params = model.lstm.params();
    double best_val = std::numeric_limits<double>::infinity();
    int wait = 0;
    double epoch_seconds_total = 0.0;

    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < lp.max_epochs; ++epoch) {
        const auto epoch_start = std::chrono::steady_clock::now();
        Rng shuffle_rng(spec.seed, "lstm-shuffle", static_cast<uint64_t>(epoch));
        shuffle_rng.shuffle(order);
        Rng dropout_rng(spec.seed, "lstm-dropout", static_cast<uint64_t>(epoch));

        for (std::size_t begin = 0; begin < n_train; begin += static_cast<std::size_t>(lp.batch_size)) {
            const std::size_t end = std::min(n_train, begin + static_cast<std::size_t>(lp.batch_size));
            std::vector<SequenceRef> batch;
            batch.reserve(end - begin);
            for (std::size_t i = begin; i < end; ++i) batch.push_back(all[order[i]]);

            std::vector<double> masks;
            const std::vector<double>* masks_ptr = nullptr;
            if (lp.dropout_rate > 0.0) {
                masks.resize(batch.size() * static_cast<std::size_t>(H));
                for (double& m : masks) m = dropout_rng.bernoulli(keep_prob) ? 1.0 : 0.0;
                masks_ptr = &masks;
            }

            const double loss = lstm_batch_loss(model.lstm, batch, steps, &grad, masks_ptr, keep_prob);
            if (!std::isfinite(loss)) {
                throw NonFiniteLossError("training loss diverged at epoch " + std::to_string(epoch));
            }
            rmsprop_step(model.lstm.params(), grad, opt_state, lp.learning_rate, lp.rho, lp.epsilon);
        }

        const double val_loss = lstm_batch_loss(model.lstm, val, steps);
        if (!std::isfinite(val_loss)) {
            throw NonFiniteLossError("validation loss diverged at epoch " + std::to_string(epoch));
        }
        model.meta.epochs_run = epoch + 1;
        epoch_seconds_total +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();

        if (val_loss < best_val) {
            best_val = val_loss;
            best_params = model.lstm.params();
            wait = 0;
        } else {
            ++wait;
            if (wait >= lp.early_stop_patience) break;
        }
    }

    model.lstm.params() = best_params;
    model.meta.final_val_loss = best_val;
    model.meta.mean_epoch_seconds = epoch_seconds_total / std::max(1, model.meta.epochs_run);
    return model;
}

}  // namespace

FittedModel fit(const ClassifierSpec& spec, const SplitDataset& data) {
    spec.validate();
    if (spec.kind != data.kind) {
        throw ShapeMismatchError("dataset feature kind does not match classifier kind");
    }
    if (data.train.empty()) {
        throw EmptyTrainingSetError("no training samples");
    }

    const auto start = std::chrono::steady_clock::now();
    FittedModel model;
    if (spec.kind == ModelKind::forest) {
        std::vector<uint8_t> y(data.train.size());
        for (std::size_t i = 0; i < data.train.size(); ++i) {
            y[i] = static_cast<uint8_t>(data.train[i].target);
        }
        model.spec = spec;
        model.forest = fit_forest(data.train_x.data(), y.data(), data.train.size(),
                                  static_cast<std::size_t>(data.feature_dim), spec.forest, spec.seed,
                                  thread_cap());
    } else {
        model = fit_lstm(spec, data);
    }
    model.meta.fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return model;
}

std::vector<double> predict_proba(const FittedModel& model, const SplitDataset& data, DataSplit split) {
    if (model.spec.kind != data.kind) {
        throw ShapeMismatchError("dataset feature kind does not match classifier kind");
    }
    const auto& samples = split == DataSplit::train ? data.train : data.trade;
    std::vector<double> probs;
    probs.reserve(samples.size());
    if (model.spec.kind == ModelKind::forest) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double* row = split == DataSplit::train ? data.train_row(i) : data.trade_row(i);
            probs.push_back(model.forest.predict_row(row));
        }
    } else {
        const int steps = FeatureSequence::timesteps;
        for (const Sample& s : samples) {
            const int slot = data.universe_slot(s.stock_index);
            const int rel = s.day_index - data.period.full_range.first;
            const double* window = data.scaled_series[static_cast<std::size_t>(slot)]
                                       [static_cast<std::size_t>(rel - steps + 1)]
                                           .data();
            probs.push_back(lstm_forward(model.lstm, window, steps)[1]);
        }
    }
    return probs;
}

std::vector<double> predict_proba(const FittedModel& model, const std::vector<double>& rows,
                                  std::size_t feature_count) {
    if (model.spec.kind != ModelKind::forest) {
        throw ShapeMismatchError("row-matrix prediction requires a forest model");
    }
    if (feature_count != static_cast<std::size_t>(model.forest.feature_count) ||
        rows.size() % feature_count != 0) {
        throw ShapeMismatchError("row width does not match the fitted feature count");
    }
    std::vector<double> probs;
    probs.reserve(rows.size() / feature_count);
    for (std::size_t i = 0; i < rows.size(); i += feature_count) {
        probs.push_back(model.forest.predict_row(rows.data() + i));
    }
    return probs;
}

namespace {

json spec_to_json(const ClassifierSpec& spec) {
    return json{{"kind", spec.kind == ModelKind::forest ? "forest" : "lstm"},
                {"seed", spec.seed},
                {"forest",
                 {{"n_trees", spec.forest.n_trees},
                  {"max_depth", spec.forest.max_depth},
                  {"features_per_split", spec.forest.features_per_split},
                  {"bootstrap", spec.forest.bootstrap}}},
                {"lstm",
                 {{"hidden_units", spec.lstm.hidden_units},
                  {"dropout_rate", spec.lstm.dropout_rate},
                  {"output_classes", spec.lstm.output_classes},
                  {"learning_rate", spec.lstm.learning_rate},
                  {"batch_size", spec.lstm.batch_size},
                  {"early_stop_patience", spec.lstm.early_stop_patience},
                  {"validation_fraction", spec.lstm.validation_fraction},
                  {"max_epochs", spec.lstm.max_epochs},
                  {"rho", spec.lstm.rho},
                  {"epsilon", spec.lstm.epsilon}}}};
}

ClassifierSpec spec_from_json(const json& j) {
    ClassifierSpec spec;
    spec.kind = j.at("kind").get<std::string>() == "forest" ? ModelKind::forest : ModelKind::lstm;
    spec.seed = j.at("seed").get<uint64_t>();
    const json& f = j.at("forest");
    spec.forest.n_trees = f.at("n_trees").get<int>();
    spec.forest.max_depth = f.at("max_depth").get<int>();
    spec.forest.features_per_split = f.at("features_per_split").get<int>();
    spec.forest.bootstrap = f.at("bootstrap").get<bool>();
    const json& l = j.at("lstm");
    spec.lstm.hidden_units = l.at("hidden_units").get<int>();
    spec.lstm.dropout_rate = l.at("dropout_rate").get<double>();
    spec.lstm.output_classes = l.at("output_classes").get<int>();
    spec.lstm.learning_rate = l.at("learning_rate").get<double>();
    spec.lstm.batch_size = l.at("batch_size").get<int>();
    spec.lstm.early_stop_patience = l.at("early_stop_patience").get<int>();
    spec.lstm.validation_fraction = l.at("validation_fraction").get<double>();
    spec.lstm.max_epochs = l.at("max_epochs").get<int>();
    spec.lstm.rho = l.at("rho").get<double>();
    spec.lstm.epsilon = l.at("epsilon").get<double>();
    return spec;
}

}  // namespace

std::string model_to_json(const FittedModel& model) {
    json j;
    j["format_version"] = 1;
    j["spec"] = spec_to_json(model.spec);
    j["meta"] = {{"epochs_run", model.meta.epochs_run},
                 {"final_val_loss", model.meta.final_val_loss},
                 {"fit_seconds", model.meta.fit_seconds},
                 {"mean_epoch_seconds", model.meta.mean_epoch_seconds}};
    if (model.spec.kind == ModelKind::forest) {
        json trees = json::array();
        for (const DecisionTree& tree : model.forest.trees) {
            json nodes = json::array();
            for (const TreeNode& node : tree.nodes) {
                nodes.push_back(json::array({node.split_feature, node.split_threshold, node.left,
                                             node.right, node.class1_fraction}));
            }
            trees.push_back(std::move(nodes));
        }
        j["forest"] = {{"feature_count", model.forest.feature_count}, {"trees", std::move(trees)}};
    } else {
        j["lstm"] = {{"input_dim", model.lstm.input_dim()},
                     {"hidden_dim", model.lstm.hidden_dim()},
                     {"params", model.lstm.params()}};
    }
    return j.dump();
}

FittedModel model_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != 1) {
        throw Error("unsupported model format version");
    }
    FittedModel model;
    model.spec = spec_from_json(j.at("spec"));
    const json& meta = j.at("meta");
    model.meta.epochs_run = meta.at("epochs_run").get<int>();
    model.meta.final_val_loss = meta.at("final_val_loss").is_null()
                                    ? std::numeric_limits<double>::quiet_NaN()
                                    : meta.at("final_val_loss").get<double>();
    model.meta.fit_seconds = meta.at("fit_seconds").get<double>();
    model.meta.mean_epoch_seconds = meta.at("mean_epoch_seconds").get<double>();
    if (model.spec.kind == ModelKind::forest) {
        const json& f = j.at("forest");
        model.forest.feature_count = f.at("feature_count").get<int>();
        for (const json& tj : f.at("trees")) {
            DecisionTree tree;
            for (const json& nj : tj) {
                TreeNode node;
                node.split_feature = nj.at(0).get<int>();
                node.split_threshold = nj.at(1).get<double>();
                node.left = nj.at(2).get<int>();
                node.right = nj.at(3).get<int>();
                node.class1_fraction = nj.at(4).get<double>();
                tree.nodes.push_back(node);
            }
            model.forest.trees.push_back(std::move(tree));
        }
    } else {
        const json& l = j.at("lstm");
        model.lstm = LstmNetwork(l.at("input_dim").get<int>(), l.at("hidden_dim").get<int>());
        model.lstm.params() = l.at("params").get<std::vector<double>>();
    }
    return model;
}

void save_model(const FittedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write model file: " + path);
    }
    out << model_to_json(model) << "\n";
}

FittedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open model file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace intraday

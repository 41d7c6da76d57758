// models.hpp — uniform binary-probability classifier over the two model
// families, with seeded fitting and portable JSON serialization.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "intraday/dataset.hpp"
#include "intraday/forest.hpp"
#include "intraday/lstm.hpp"

namespace intraday {

struct LstmParams {
    int hidden_units{25};
    double dropout_rate{0.1};
    int output_classes{2};
    double learning_rate{0.001};
    int batch_size{512};
    int early_stop_patience{10};
    double validation_fraction{0.2};
    int max_epochs{1000};
    double rho{0.9};       // RMSProp decay
    double epsilon{1e-7};  // RMSProp stabilizer
};

struct ClassifierSpec {
    ModelKind kind{ModelKind::forest};
    ForestParams forest;
    LstmParams lstm;
    uint64_t seed{0};

    void validate() const;
};

struct TrainMeta {
    int epochs_run{0};
    double final_val_loss{std::numeric_limits<double>::quiet_NaN()};
    double fit_seconds{0.0};
    double mean_epoch_seconds{0.0};
};

struct FittedModel {
    ClassifierSpec spec;
    RandomForestModel forest;  // populated when spec.kind == forest
    LstmNetwork lstm;          // populated when spec.kind == lstm
    TrainMeta meta;

    double predict_row(const double* row) const;            // forest
    double predict_sequence(const double* seq, int steps) const;  // lstm
};

enum class DataSplit { train, trade };

// Fits on data.train. Forest: bagged gini trees. LSTM: minibatch RMSProp,
// chronological-tail validation split, early stopping with best-weight
// restore.
FittedModel fit(const ClassifierSpec& spec, const SplitDataset& data);

// Class-1 probability per sample of the chosen split, in sample order.
std::vector<double> predict_proba(const FittedModel& model, const SplitDataset& data, DataSplit split);

// Forest probabilities for externally assembled rows (n x feature_count).
std::vector<double> predict_proba(const FittedModel& model, const std::vector<double>& rows,
                                  std::size_t feature_count);

// Versioned JSON format: parameters + spec + seed.
void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);
std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text);

// Seeded glorot-uniform kernels, zero biases with forget gate at 1.
void init_lstm_weights(LstmNetwork& net, uint64_t seed);

}  // namespace intraday

// lstm.hpp — LSTM binary classifier: single recurrent layer, dropout on the
// final hidden state, dense softmax head. Training is minibatch RMSProp on
// categorical cross-entropy with exact backpropagation through time.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "intraday/errors.hpp"

namespace intraday {

// All parameters live in one flat vector (gate order i, f, g, o):
//   [w_x: 4H x I][w_h: 4H x H][bias: 4H][dense_w: 2 x H][dense_b: 2]
// which keeps the optimizer and the finite-difference harness trivial.
class LstmNetwork {
public:
    LstmNetwork() = default;
    LstmNetwork(int input_dim, int hidden_dim);

    int input_dim() const { return input_dim_; }
    int hidden_dim() const { return hidden_dim_; }
    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    std::size_t wx_offset() const { return 0; }
    std::size_t wh_offset() const { return static_cast<std::size_t>(4 * hidden_dim_ * input_dim_); }
    std::size_t bias_offset() const { return wh_offset() + static_cast<std::size_t>(4 * hidden_dim_ * hidden_dim_); }
    std::size_t dense_w_offset() const { return bias_offset() + static_cast<std::size_t>(4 * hidden_dim_); }
    std::size_t dense_b_offset() const { return dense_w_offset() + static_cast<std::size_t>(2 * hidden_dim_); }

private:
    int input_dim_{0};
    int hidden_dim_{0};
    std::vector<double> params_;
};

// Per-step activations kept for backpropagation.
struct LstmCache {
    int steps{0};
    std::vector<double> gates;   // steps x 4H, post-nonlinearity (i, f, g, o)
    std::vector<double> cell;    // steps x H
    std::vector<double> tanh_c;  // steps x H
    std::vector<double> hidden;  // steps x H
    std::array<double, 2> logits{};
    std::array<double, 2> probs{};
};

// One sequence forward. `sequence` is steps x input_dim row-major. When
// `dropout_mask` is non-null (training), the final hidden state is scaled by
// mask/keep_prob (inverted dropout). Probabilities always sum to 1.
std::array<double, 2> lstm_forward(const LstmNetwork& net, const double* sequence, int steps,
                                   LstmCache* cache = nullptr, const double* dropout_mask = nullptr,
                                   double keep_prob = 1.0);

// Accumulates d(loss)/d(params) for one sequence into `grad` given its
// forward cache; `loss_scale` multiplies the sample's cross-entropy gradient
// (1/batch for a batch mean).
void lstm_backward(const LstmNetwork& net, const double* sequence, int steps, const LstmCache& cache,
                   int target, double loss_scale, const double* dropout_mask, double keep_prob,
                   std::vector<double>& grad);

struct SequenceRef {
    const double* data{nullptr};  // steps x input_dim
    int target{0};
};

// Mean cross-entropy over the batch; fills `grad` (resized and zeroed) when
// non-null. Masks, when provided, hold one row of hidden_dim entries per
// sample.
double lstm_batch_loss(const LstmNetwork& net, const std::vector<SequenceRef>& batch, int steps,
                       std::vector<double>* grad = nullptr, const std::vector<double>* dropout_masks = nullptr,
                       double keep_prob = 1.0);

struct RmsPropState {
    std::vector<double> accumulator;
};

// accumulator <- rho * accumulator + (1 - rho) * grad^2
// param       <- param - lr * grad / (sqrt(accumulator) + epsilon)
void rmsprop_step(std::vector<double>& params, const std::vector<double>& grads, RmsPropState& state,
                  double learning_rate = 0.001, double rho = 0.9, double epsilon = 1e-7);

}  // namespace intraday

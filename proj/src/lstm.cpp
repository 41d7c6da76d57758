#include "intraday/lstm.hpp"

#include <algorithm>
#include <cmath>

namespace intraday {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

LstmNetwork::LstmNetwork(int input_dim, int hidden_dim)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
    if (input_dim < 1 || hidden_dim < 1) {
        throw Error("lstm dimensions must be positive");
    }
    const std::size_t h = static_cast<std::size_t>(hidden_dim);
    const std::size_t i = static_cast<std::size_t>(input_dim);
    params_.assign(4 * h * i + 4 * h * h + 4 * h + 2 * h + 2, 0.0);
}

std::array<double, 2> lstm_forward(const LstmNetwork& net, const double* sequence, int steps,
                                   LstmCache* cache, const double* dropout_mask, double keep_prob) {
    const int H = net.hidden_dim();
    const int I = net.input_dim();
    const double* wx = net.params().data() + net.wx_offset();
    const double* wh = net.params().data() + net.wh_offset();
    const double* bias = net.params().data() + net.bias_offset();
    const double* dw = net.params().data() + net.dense_w_offset();
    const double* db = net.params().data() + net.dense_b_offset();

    if (cache) {
        cache->steps = steps;
        cache->gates.assign(static_cast<std::size_t>(steps) * 4 * static_cast<std::size_t>(H), 0.0);
        cache->cell.assign(static_cast<std::size_t>(steps) * static_cast<std::size_t>(H), 0.0);
        cache->tanh_c.assign(static_cast<std::size_t>(steps) * static_cast<std::size_t>(H), 0.0);
        cache->hidden.assign(static_cast<std::size_t>(steps) * static_cast<std::size_t>(H), 0.0);
    }

    std::vector<double> h_prev(static_cast<std::size_t>(H), 0.0);
    std::vector<double> c_prev(static_cast<std::size_t>(H), 0.0);
    std::vector<double> z(static_cast<std::size_t>(4 * H));

    for (int t = 0; t < steps; ++t) {
        const double* x = sequence + static_cast<std::size_t>(t) * static_cast<std::size_t>(I);
        for (int g = 0; g < 4 * H; ++g) {
            double acc = bias[g];
            const double* wxr = wx + static_cast<std::size_t>(g) * static_cast<std::size_t>(I);
            for (int k = 0; k < I; ++k) acc += wxr[k] * x[k];
            const double* whr = wh + static_cast<std::size_t>(g) * static_cast<std::size_t>(H);
            for (int k = 0; k < H; ++k) acc += whr[k] * h_prev[static_cast<std::size_t>(k)];
            z[static_cast<std::size_t>(g)] = acc;
        }
        for (int k = 0; k < H; ++k) {
            const double gi = sigmoid(z[static_cast<std::size_t>(k)]);
            const double gf = sigmoid(z[static_cast<std::size_t>(H + k)]);
            const double gg = std::tanh(z[static_cast<std::size_t>(2 * H + k)]);
            const double go = sigmoid(z[static_cast<std::size_t>(3 * H + k)]);
            const double c = gf * c_prev[static_cast<std::size_t>(k)] + gi * gg;
            const double tc = std::tanh(c);
            const double h = go * tc;
            if (cache) {
                const std::size_t base = static_cast<std::size_t>(t) * 4 * static_cast<std::size_t>(H);
                cache->gates[base + static_cast<std::size_t>(k)] = gi;
                cache->gates[base + static_cast<std::size_t>(H + k)] = gf;
                cache->gates[base + static_cast<std::size_t>(2 * H + k)] = gg;
                cache->gates[base + static_cast<std::size_t>(3 * H + k)] = go;
                const std::size_t hb = static_cast<std::size_t>(t) * static_cast<std::size_t>(H) +
                                       static_cast<std::size_t>(k);
                cache->cell[hb] = c;
                cache->tanh_c[hb] = tc;
                cache->hidden[hb] = h;
            }
            c_prev[static_cast<std::size_t>(k)] = c;
            h_prev[static_cast<std::size_t>(k)] = h;
        }
    }

    std::array<double, 2> logits{};
    for (int o = 0; o < 2; ++o) {
        double acc = db[o];
        for (int k = 0; k < H; ++k) {
            double h = h_prev[static_cast<std::size_t>(k)];
            if (dropout_mask) h *= dropout_mask[k] / keep_prob;
            acc += dw[static_cast<std::size_t>(o) * static_cast<std::size_t>(H) + static_cast<std::size_t>(k)] * h;
        }
        logits[static_cast<std::size_t>(o)] = acc;
    }

    const double m = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - m);
    const double e1 = std::exp(logits[1] - m);
    std::array<double, 2> probs{e0 / (e0 + e1), e1 / (e0 + e1)};
    if (cache) {
        cache->logits = logits;
        cache->probs = probs;
    }
    return probs;
}

void lstm_backward(const LstmNetwork& net, const double* sequence, int steps, const LstmCache& cache,
                   int target, double loss_scale, const double* dropout_mask, double keep_prob,
                   std::vector<double>& grad) {
    const int H = net.hidden_dim();
    const int I = net.input_dim();
    const double* wh = net.params().data() + net.wh_offset();
    const double* dw = net.params().data() + net.dense_w_offset();

    double* g_wx = grad.data() + net.wx_offset();
    double* g_wh = grad.data() + net.wh_offset();
    double* g_bias = grad.data() + net.bias_offset();
    double* g_dw = grad.data() + net.dense_w_offset();
    double* g_db = grad.data() + net.dense_b_offset();

    // Softmax + cross-entropy: dlogit = p - 1{class}.
    std::array<double, 2> dlogits{cache.probs[0] * loss_scale, cache.probs[1] * loss_scale};
    dlogits[static_cast<std::size_t>(target)] -= loss_scale;

    const std::size_t last = static_cast<std::size_t>(steps - 1) * static_cast<std::size_t>(H);
    std::vector<double> dh(static_cast<std::size_t>(H), 0.0);
    for (int k = 0; k < H; ++k) {
        double h = cache.hidden[last + static_cast<std::size_t>(k)];
        const double scale = dropout_mask ? dropout_mask[k] / keep_prob : 1.0;
        for (int o = 0; o < 2; ++o) {
            const std::size_t wi = static_cast<std::size_t>(o) * static_cast<std::size_t>(H) +
                                   static_cast<std::size_t>(k);
            g_dw[wi] += dlogits[static_cast<std::size_t>(o)] * h * scale;
            dh[static_cast<std::size_t>(k)] += dlogits[static_cast<std::size_t>(o)] * dw[wi] * scale;
        }
    }
    g_db[0] += dlogits[0];
    g_db[1] += dlogits[1];

    std::vector<double> dc_next(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dz(static_cast<std::size_t>(4 * H));
    std::vector<double> dh_prev(static_cast<std::size_t>(H));

    for (int t = steps - 1; t >= 0; --t) {
        const std::size_t gbase = static_cast<std::size_t>(t) * 4 * static_cast<std::size_t>(H);
        const std::size_t hbase = static_cast<std::size_t>(t) * static_cast<std::size_t>(H);
        for (int k = 0; k < H; ++k) {
            const double gi = cache.gates[gbase + static_cast<std::size_t>(k)];
            const double gf = cache.gates[gbase + static_cast<std::size_t>(H + k)];
            const double gg = cache.gates[gbase + static_cast<std::size_t>(2 * H + k)];
            const double go = cache.gates[gbase + static_cast<std::size_t>(3 * H + k)];
            const double tc = cache.tanh_c[hbase + static_cast<std::size_t>(k)];
            const double c_prev =
                t > 0 ? cache.cell[hbase - static_cast<std::size_t>(H) + static_cast<std::size_t>(k)] : 0.0;

            const double dhk = dh[static_cast<std::size_t>(k)];
            const double dc = dc_next[static_cast<std::size_t>(k)] + dhk * go * (1.0 - tc * tc);
            const double do_ = dhk * tc;
            const double di = dc * gg;
            const double dg = dc * gi;
            const double df = dc * c_prev;

            dz[static_cast<std::size_t>(k)] = di * gi * (1.0 - gi);
            dz[static_cast<std::size_t>(H + k)] = df * gf * (1.0 - gf);
            dz[static_cast<std::size_t>(2 * H + k)] = dg * (1.0 - gg * gg);
            dz[static_cast<std::size_t>(3 * H + k)] = do_ * go * (1.0 - go);

            dc_next[static_cast<std::size_t>(k)] = dc * gf;
        }

        const double* x = sequence + static_cast<std::size_t>(t) * static_cast<std::size_t>(I);
        const double* h_prev_row =
            t > 0 ? cache.hidden.data() + (static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(H)) : nullptr;
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        for (int g = 0; g < 4 * H; ++g) {
            const double dzg = dz[static_cast<std::size_t>(g)];
            if (dzg == 0.0) continue;
            double* gx = g_wx + static_cast<std::size_t>(g) * static_cast<std::size_t>(I);
            for (int k = 0; k < I; ++k) gx[k] += dzg * x[k];
            double* gh = g_wh + static_cast<std::size_t>(g) * static_cast<std::size_t>(H);
            const double* whr = wh + static_cast<std::size_t>(g) * static_cast<std::size_t>(H);
            for (int k = 0; k < H; ++k) {
                if (h_prev_row) gh[k] += dzg * h_prev_row[k];
                dh_prev[static_cast<std::size_t>(k)] += dzg * whr[k];
            }
            g_bias[g] += dzg;
        }
        dh = dh_prev;
    }
}

double lstm_batch_loss(const LstmNetwork& net, const std::vector<SequenceRef>& batch, int steps,
                       std::vector<double>* grad, const std::vector<double>* dropout_masks,
                       double keep_prob) {
    if (batch.empty()) {
        throw EmptyTrainingSetError("lstm loss on an empty batch");
    }
    if (grad) grad->assign(net.param_count(), 0.0);

    const int H = net.hidden_dim();
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    LstmCache cache;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double* mask =
            dropout_masks ? dropout_masks->data() + i * static_cast<std::size_t>(H) : nullptr;
        const auto probs = lstm_forward(net, batch[i].data, steps, grad ? &cache : nullptr, mask, keep_prob);
        const double p = std::max(probs[static_cast<std::size_t>(batch[i].target)], 1e-300);
        loss -= std::log(p) * inv_n;
        if (grad) {
            lstm_backward(net, batch[i].data, steps, cache, batch[i].target, inv_n, mask, keep_prob, *grad);
        }
    }
    return loss;
}

void rmsprop_step(std::vector<double>& params, const std::vector<double>& grads, RmsPropState& state,
                  double learning_rate, double rho, double epsilon) {
    if (params.size() != grads.size()) {
        throw ShapeMismatchError("rmsprop parameter/gradient size mismatch");
    }
    if (state.accumulator.empty()) state.accumulator.assign(params.size(), 0.0);
    if (state.accumulator.size() != params.size()) {
        throw ShapeMismatchError("rmsprop state size mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.accumulator[i] = rho * state.accumulator[i] + (1.0 - rho) * g * g;
        params[i] -= learning_rate * g / (std::sqrt(state.accumulator[i]) + epsilon);
    }
}

}  // namespace intraday

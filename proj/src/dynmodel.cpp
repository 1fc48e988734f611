#include "rfqd/dynmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace rfqd {

ModelInput model_input(const Transition& t)
{
    ModelInput in{};
    in[0] = t.state[0];
    in[1] = t.state[1];
    in[2] = t.state[2];
    in[3] = t.phase;
    for (std::size_t i = 0; i < kGenotypeSize; ++i)
        in[4 + i] = t.action[i];
    return in;
}

StateDelta model_target(const Transition& t)
{
    return {t.next_state[0] - t.state[0], t.next_state[1] - t.state[1],
            wrap_angle(t.next_state[2] - t.state[2])};
}

struct ProbabilisticNet::Workspace {
    std::vector<double> a1, a2;     // hidden activations
    std::array<double, kModelOutputs> z3{};
    explicit Workspace(int hidden) : a1(static_cast<std::size_t>(hidden)),
                                     a2(static_cast<std::size_t>(hidden)) {}
};

ProbabilisticNet::ProbabilisticNet(int hidden, Rng& init_rng) : hidden_(hidden)
{
    const std::size_t h = static_cast<std::size_t>(hidden);
    const std::size_t in = kModelInputs, out = kModelOutputs;
    offsets_[0] = 0;               // W0: h x in
    offsets_[1] = offsets_[0] + h * in;  // b0: h
    offsets_[2] = offsets_[1] + h;       // W1: h x h
    offsets_[3] = offsets_[2] + h * h;   // b1: h
    offsets_[4] = offsets_[3] + h;       // W2: out x h
    offsets_[5] = offsets_[4] + out * h; // b2: out
    params_.assign(offsets_[5] + out, 0.0);

    // scaled-uniform fan-in weights, zero biases
    auto init_weights = [&](std::size_t off, std::size_t rows, std::size_t cols) {
        const double s = 1.0 / std::sqrt(static_cast<double>(cols));
        for (std::size_t i = 0; i < rows * cols; ++i)
            params_[off + i] = init_rng.uniform(-s, s);
    };
    init_weights(offsets_[0], h, in);
    init_weights(offsets_[2], h, h);
    init_weights(offsets_[4], out, h);
}

void ProbabilisticNet::forward(const ModelInput& input, Workspace& ws) const
{
    ++forward_count_;
    const std::size_t h = static_cast<std::size_t>(hidden_);
    const double* W0 = params_.data() + offsets_[0];
    const double* b0 = params_.data() + offsets_[1];
    const double* W1 = params_.data() + offsets_[2];
    const double* b1 = params_.data() + offsets_[3];
    const double* W2 = params_.data() + offsets_[4];
    const double* b2 = params_.data() + offsets_[5];

    for (std::size_t r = 0; r < h; ++r) {
        double z = b0[r];
        const double* row = W0 + r * kModelInputs;
        for (std::size_t c = 0; c < kModelInputs; ++c)
            z += row[c] * input[c];
        ws.a1[r] = std::tanh(z);
    }
    for (std::size_t r = 0; r < h; ++r) {
        double z = b1[r];
        const double* row = W1 + r * h;
        for (std::size_t c = 0; c < h; ++c)
            z += row[c] * ws.a1[c];
        ws.a2[r] = std::tanh(z);
    }
    for (std::size_t r = 0; r < kModelOutputs; ++r) {
        double z = b2[r];
        const double* row = W2 + r * h;
        for (std::size_t c = 0; c < h; ++c)
            z += row[c] * ws.a2[c];
        ws.z3[r] = z;
    }
}

ProbabilisticNet::Prediction ProbabilisticNet::predict(const ModelInput& input) const
{
    Workspace ws(hidden_);
    forward(input, ws);
    Prediction p;
    for (int d = 0; d < kStateDims; ++d) {
        p.mean[d] = ws.z3[static_cast<std::size_t>(d)];
        p.logvar[d] = std::clamp(ws.z3[static_cast<std::size_t>(kStateDims + d)],
                                 kLogVarMin, kLogVarMax);
    }
    return p;
}

double ProbabilisticNet::nll(std::span<const ModelInput> inputs,
                             std::span<const StateDelta> targets) const
{
    if (inputs.empty() || inputs.size() != targets.size())
        throw std::invalid_argument("nll: empty or mismatched batch");
    Workspace ws(hidden_);
    double total = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        forward(inputs[i], ws);
        for (int d = 0; d < kStateDims; ++d) {
            const double mu = ws.z3[static_cast<std::size_t>(d)];
            const double lv = std::clamp(ws.z3[static_cast<std::size_t>(kStateDims + d)],
                                         kLogVarMin, kLogVarMax);
            const double r = mu - targets[i][static_cast<std::size_t>(d)];
            total += r * r / (2.0 * std::exp(lv)) + 0.5 * lv;
        }
    }
    return total / static_cast<double>(inputs.size());
}

double ProbabilisticNet::nll_backward(std::span<const ModelInput> inputs,
                                      std::span<const StateDelta> targets,
                                      std::vector<double>& grad) const
{
    if (inputs.empty() || inputs.size() != targets.size())
        throw std::invalid_argument("nll_backward: empty or mismatched batch");
    const std::size_t h = static_cast<std::size_t>(hidden_);
    grad.assign(params_.size(), 0.0);

    const double* W1 = params_.data() + offsets_[2];
    const double* W2 = params_.data() + offsets_[4];
    double* dW0 = grad.data() + offsets_[0];
    double* db0 = grad.data() + offsets_[1];
    double* dW1 = grad.data() + offsets_[2];
    double* db1 = grad.data() + offsets_[3];
    double* dW2 = grad.data() + offsets_[4];
    double* db2 = grad.data() + offsets_[5];

    Workspace ws(hidden_);
    std::vector<double> dz1(h), dz2(h);
    std::array<double, kModelOutputs> dz3{};
    double total = 0.0;

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        forward(inputs[i], ws);
        for (int d = 0; d < kStateDims; ++d) {
            const double raw = ws.z3[static_cast<std::size_t>(kStateDims + d)];
            const double lv = std::clamp(raw, kLogVarMin, kLogVarMax);
            const double inv_var = std::exp(-lv);
            const double r = ws.z3[static_cast<std::size_t>(d)] - targets[i][static_cast<std::size_t>(d)];
            total += r * r * inv_var * 0.5 + 0.5 * lv;
            dz3[static_cast<std::size_t>(d)] = r * inv_var;
            const bool interior = raw > kLogVarMin && raw < kLogVarMax;
            dz3[static_cast<std::size_t>(kStateDims + d)] =
                interior ? 0.5 - 0.5 * r * r * inv_var : 0.0;
        }

        std::fill(dz2.begin(), dz2.end(), 0.0);
        for (std::size_t r = 0; r < kModelOutputs; ++r) {
            const double g = dz3[r];
            db2[r] += g;
            double* wrow = dW2 + r * h;
            const double* w = W2 + r * h;
            for (std::size_t c = 0; c < h; ++c) {
                wrow[c] += g * ws.a2[c];
                dz2[c] += w[c] * g;
            }
        }
        for (std::size_t c = 0; c < h; ++c)
            dz2[c] *= 1.0 - ws.a2[c] * ws.a2[c];

        std::fill(dz1.begin(), dz1.end(), 0.0);
        for (std::size_t r = 0; r < h; ++r) {
            const double g = dz2[r];
            db1[r] += g;
            double* wrow = dW1 + r * h;
            const double* w = W1 + r * h;
            for (std::size_t c = 0; c < h; ++c) {
                wrow[c] += g * ws.a1[c];
                dz1[c] += w[c] * g;
            }
        }
        for (std::size_t c = 0; c < h; ++c)
            dz1[c] *= 1.0 - ws.a1[c] * ws.a1[c];

        for (std::size_t r = 0; r < h; ++r) {
            const double g = dz1[r];
            db0[r] += g;
            double* wrow = dW0 + r * kModelInputs;
            for (std::size_t c = 0; c < kModelInputs; ++c)
                wrow[c] += g * inputs[i][c];
        }
    }

    const double scale = 1.0 / static_cast<double>(inputs.size());
    for (double& g : grad)
        g *= scale;
    return total * scale;
}

double nll_loss(const ProbabilisticNet& net, std::span<const ModelInput> inputs,
                std::span<const StateDelta> targets)
{
    return net.nll(inputs, targets);
}

Ensemble::Ensemble(const EnsembleConfig& cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed)
{
    norm_std_.fill(1.0);
    nets_.reserve(static_cast<std::size_t>(cfg.members));
    batch_rngs_.reserve(static_cast<std::size_t>(cfg.members));
    for (int j = 0; j < cfg.members; ++j) {
        Rng init = substream(seed, "model-init", static_cast<std::uint64_t>(j));
        nets_.emplace_back(cfg.hidden, init);
        batch_rngs_.push_back(substream(seed, "model-batching", static_cast<std::uint64_t>(j)));
    }
}

ModelInput Ensemble::standardize(const ModelInput& in) const
{
    ModelInput out{};
    for (std::size_t i = 0; i < kModelInputs; ++i)
        out[i] = (in[i] - norm_mean_[i]) / norm_std_[i];
    return out;
}

TrainReport Ensemble::train(const ReplayBuffer& buffer, const TrainSettings& settings)
{
    TrainReport report;
    if (buffer.empty()) {
        report.skipped_empty_buffer = true;
        return report;
    }

    const std::size_t n = buffer.size();

    // freeze standardization stats for this call
    norm_mean_.fill(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const ModelInput in = model_input(buffer[i]);
        for (std::size_t d = 0; d < kModelInputs; ++d)
            norm_mean_[d] += in[d];
    }
    for (double& m : norm_mean_)
        m /= static_cast<double>(n);
    norm_std_.fill(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const ModelInput in = model_input(buffer[i]);
        for (std::size_t d = 0; d < kModelInputs; ++d) {
            const double c = in[d] - norm_mean_[d];
            norm_std_[d] += c * c;
        }
    }
    for (double& s : norm_std_)
        s = std::max(std::sqrt(s / static_cast<double>(n)), 1e-8);

    std::vector<ModelInput> inputs(n);
    std::vector<StateDelta> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
        inputs[i] = standardize(model_input(buffer[i]));
        targets[i] = model_target(buffer[i]);
    }

    const std::size_t batch = static_cast<std::size_t>(std::max(1, settings.minibatch));
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    report.members.resize(nets_.size());
    for (std::size_t j = 0; j < nets_.size(); ++j) {
        ProbabilisticNet& net = nets_[j];
        Rng& rng = batch_rngs_[j];
        MemberTrainLog& log = report.members[j];

        // bootstrap resample for this call
        std::vector<std::size_t> order(n);
        for (auto& idx : order)
            idx = rng.uniform_index(n);

        std::vector<double> m(net.n_params(), 0.0), v(net.n_params(), 0.0), grad;
        std::vector<ModelInput> bin(batch);
        std::vector<StateDelta> btg(batch);
        long step = 0;

        for (int epoch = 0; epoch < settings.epochs; ++epoch) {
            for (std::size_t i = n; i > 1; --i)
                std::swap(order[i - 1], order[rng.uniform_index(i)]);

            for (std::size_t start = 0; start < n; start += batch) {
                const std::size_t count = std::min(batch, n - start);
                for (std::size_t b = 0; b < count; ++b) {
                    bin[b] = inputs[order[start + b]];
                    btg[b] = targets[order[start + b]];
                }
                net.nll_backward({bin.data(), count}, {btg.data(), count}, grad);

                ++step;
                const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
                const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
                auto& p = net.params();
                for (std::size_t w = 0; w < p.size(); ++w) {
                    m[w] = beta1 * m[w] + (1.0 - beta1) * grad[w];
                    v[w] = beta2 * v[w] + (1.0 - beta2) * grad[w] * grad[w];
                    p[w] -= settings.learning_rate * (m[w] / c1) / (std::sqrt(v[w] / c2) + eps);
                }
            }

            std::vector<ModelInput> rin(n);
            std::vector<StateDelta> rtg(n);
            for (std::size_t i = 0; i < n; ++i) {
                rin[i] = inputs[order[i]];
                rtg[i] = targets[order[i]];
            }
            log.epoch_loss.push_back(net.nll(rin, rtg));
        }
        log.final_loss = log.epoch_loss.empty() ? 0.0 : log.epoch_loss.back();
    }

    trained_ = true;
    return report;
}

ProbabilisticNet::Prediction Ensemble::predict(int member, const ModelInput& input) const
{
    return nets_[static_cast<std::size_t>(member)].predict(standardize(input));
}

double Ensemble::evaluate_nll(int member, std::span<const ModelInput> inputs,
                              std::span<const StateDelta> targets) const
{
    std::vector<ModelInput> std_in(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
        std_in[i] = standardize(inputs[i]);
    return nets_[static_cast<std::size_t>(member)].nll(std_in, targets);
}

ImaginedOutcome Ensemble::imagine_rollout(const Genotype& g, int member) const
{
    std::array<double, kStateDims> state{0.0, 0.0, 0.0};
    for (int k = 0; k < kSubsteps; ++k) {
        ModelInput in{};
        in[0] = state[0];
        in[1] = state[1];
        in[2] = state[2];
        in[3] = static_cast<double>(k) / kSubsteps;
        for (std::size_t i = 0; i < kGenotypeSize; ++i)
            in[4 + i] = g[i];
        const auto pred = predict(member, in);
        state[0] += pred.mean[0];
        state[1] += pred.mean[1];
        state[2] = wrap_angle(state[2] + pred.mean[2]);
    }
    ImaginedOutcome out;
    out.final_state = state;
    out.bd = {state[0], state[1]};
    out.fitness = arc_fitness(out.bd, state[2]);
    return out;
}

double Ensemble::disagreement(const Genotype& g) const
{
    const std::size_t n = nets_.size();
    std::vector<std::array<double, 2>> bds(n);
    for (std::size_t j = 0; j < n; ++j)
        bds[j] = imagine_rollout(g, static_cast<int>(j)).bd;
    // working on first-point-shifted values keeps identical members at an
    // exact zero instead of accumulating rounding dust through the mean
    double mx = 0.0, my = 0.0;
    for (const auto& b : bds) {
        mx += b[0] - bds[0][0];
        my += b[1] - bds[0][1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& b : bds) {
        const double dx = (b[0] - bds[0][0]) - mx;
        const double dy = (b[1] - bds[0][1]) - my;
        var += dx * dx + dy * dy;
    }
    return var / static_cast<double>(n);
}

std::string Ensemble::to_json() const
{
    nlohmann::json j;
    j["format"] = "rfqd-ensemble-v1";
    j["members"] = cfg_.members;
    j["hidden"] = cfg_.hidden;
    j["seed"] = seed_;
    j["trained"] = trained_;
    j["norm_mean"] = norm_mean_;
    j["norm_std"] = norm_std_;
    auto& arr = j["params"] = nlohmann::json::array();
    for (const auto& net : nets_)
        arr.push_back(net.params());
    return j.dump();
}

Ensemble Ensemble::from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::invalid_argument("ensemble checkpoint: not a JSON object");
    if (j.value("format", "") != std::string("rfqd-ensemble-v1"))
        throw std::invalid_argument("ensemble checkpoint: unknown format");
    EnsembleConfig cfg;
    cfg.members = j.at("members").get<int>();
    cfg.hidden = j.at("hidden").get<int>();
    Ensemble e(cfg, j.at("seed").get<std::uint64_t>());
    e.trained_ = j.at("trained").get<bool>();
    const auto mean = j.at("norm_mean").get<std::vector<double>>();
    const auto stdv = j.at("norm_std").get<std::vector<double>>();
    if (mean.size() != kModelInputs || stdv.size() != kModelInputs)
        throw std::invalid_argument("ensemble checkpoint: bad normalization block");
    std::copy(mean.begin(), mean.end(), e.norm_mean_.begin());
    std::copy(stdv.begin(), stdv.end(), e.norm_std_.begin());
    const auto& arr = j.at("params");
    if (arr.size() != e.nets_.size())
        throw std::invalid_argument("ensemble checkpoint: member count mismatch");
    for (std::size_t m = 0; m < e.nets_.size(); ++m) {
        auto p = arr[m].get<std::vector<double>>();
        if (p.size() != e.nets_[m].n_params())
            throw std::invalid_argument("ensemble checkpoint: parameter count mismatch");
        e.nets_[m].params() = std::move(p);
    }
    return e;
}

} // namespace rfqd

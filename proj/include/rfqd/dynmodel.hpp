#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "rfqd/arena.hpp"
#include "rfqd/genotype.hpp"
#include "rfqd/rng.hpp"

namespace rfqd {

inline constexpr int kModelInputs = 28;  // rel state (3) + phase (1) + genotype (24)
inline constexpr int kModelOutputs = 6;  // mean delta (3) + log-variance (3)
inline constexpr int kStateDims = 3;
inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 2.0;

using ModelInput = std::array<double, kModelInputs>;
using StateDelta = std::array<double, kStateDims>;

ModelInput model_input(const Transition& t);
// per-substep state delta; the heading component is the wrapped difference
StateDelta model_target(const Transition& t);

// FIFO store of real transitions. Training only ever reads it.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 100000) : capacity_(capacity) {}

    void push(const Transition& t)
    {
        if (data_.size() == capacity_)
            data_.pop_front();
        data_.push_back(t);
    }

    void push_episode(const EpisodeResult& r)
    {
        for (const auto& t : r.transitions)
            push(t);
    }

    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    const Transition& operator[](std::size_t i) const { return data_[i]; }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::deque<Transition> data_;
};

// Feed-forward net with two tanh hidden layers predicting a Gaussian over
// the next state delta: outputs a mean and a log-variance per state dim,
// the log-variance hard-clamped to [kLogVarMin, kLogVarMax].
class ProbabilisticNet {
public:
    struct Prediction {
        StateDelta mean{};
        StateDelta logvar{};
    };

    ProbabilisticNet(int hidden, Rng& init_rng);

    Prediction predict(const ModelInput& input) const;

    // Mean NLL over the batch (constant term dropped):
    //   mean_i sum_d [ (mu_d - t_d)^2 / (2 exp(lv_d)) + lv_d / 2 ]
    double nll(std::span<const ModelInput> inputs, std::span<const StateDelta> targets) const;

    // Same, also accumulating d(loss)/d(params) into grad (sized n_params, zeroed here).
    double nll_backward(std::span<const ModelInput> inputs, std::span<const StateDelta> targets,
                        std::vector<double>& grad) const;

    int hidden() const { return hidden_; }
    std::size_t n_params() const { return params_.size(); }
    const std::vector<double>& params() const { return params_; }
    std::vector<double>& params() { return params_; }

    std::uint64_t forward_count() const { return forward_count_; }
    void reset_forward_count() { forward_count_ = 0; }

private:
    struct Workspace; // activations of one forward pass
    void forward(const ModelInput& input, Workspace& ws) const;

    int hidden_;
    std::array<std::size_t, 6> offsets_{}; // W0 b0 W1 b1 W2 b2 into params_
    std::vector<double> params_;
    mutable std::uint64_t forward_count_ = 0;
};

// stateless helper mirroring the loss the net trains on (used by tests)
double nll_loss(const ProbabilisticNet& net, std::span<const ModelInput> inputs,
                std::span<const StateDelta> targets);

struct TrainSettings {
    int epochs = 20;
    double learning_rate = 1e-3;
    int minibatch = 64;
};

struct MemberTrainLog {
    std::vector<double> epoch_loss; // mean train loss after each epoch, in order
    double final_loss = 0.0;
};

struct TrainReport {
    std::vector<MemberTrainLog> members;
    bool skipped_empty_buffer = false;
};

struct ImaginedOutcome {
    std::array<double, 2> bd{};
    double fitness = 0.0;
    std::array<double, kStateDims> final_state{};
};

struct EnsembleConfig {
    int members = 4;
    int hidden = 64;
};

// Probabilistic ensemble over state deltas. Members are initialized and
// batched from per-member substreams of the ensemble seed, so member j's
// draws do not depend on how many members exist.
class Ensemble {
public:
    Ensemble(const EnsembleConfig& cfg, std::uint64_t seed);

    // Each member fits its own bootstrap resample of the buffer with Adam.
    // Input standardization stats are recomputed from the buffer and frozen
    // at the start of every call.
    TrainReport train(const ReplayBuffer& buffer, const TrainSettings& settings);

    ProbabilisticNet::Prediction predict(int member, const ModelInput& input) const;

    // Mean NLL of one member on a batch, with the ensemble's standardization.
    double evaluate_nll(int member, std::span<const ModelInput> inputs,
                        std::span<const StateDelta> targets) const;

    // Recursive mean rollout of H substeps from the episode-start frame.
    ImaginedOutcome imagine_rollout(const Genotype& g, int member) const;

    // Trace of the covariance of the members' imagined final positions.
    double disagreement(const Genotype& g) const;

    int members() const { return static_cast<int>(nets_.size()); }
    int hidden() const { return cfg_.hidden; }
    bool trained() const { return trained_; }
    std::uint64_t seed() const { return seed_; }

    const ProbabilisticNet& net(int member) const { return nets_[static_cast<std::size_t>(member)]; }
    ProbabilisticNet& net(int member) { return nets_[static_cast<std::size_t>(member)]; }
    const std::array<double, kModelInputs>& norm_mean() const { return norm_mean_; }
    const std::array<double, kModelInputs>& norm_std() const { return norm_std_; }

    std::string to_json() const;
    static Ensemble from_json(const std::string& text);

private:
    ModelInput standardize(const ModelInput& in) const;

    EnsembleConfig cfg_;
    std::uint64_t seed_;
    std::vector<ProbabilisticNet> nets_;
    std::vector<Rng> batch_rngs_; // one per member
    std::array<double, kModelInputs> norm_mean_{};
    std::array<double, kModelInputs> norm_std_{};
    bool trained_ = false;
};

} // namespace rfqd

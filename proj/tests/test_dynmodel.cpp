#include <doctest.h>

#include <cmath>
#include <vector>

#include "rfqd/dynmodel.hpp"
#include "support/gradcheck.hpp"

using namespace rfqd;

namespace {

Transition make_transition(Rng& rng, double delta_scale = 0.03)
{
    Transition t;
    t.state = {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-M_PI, M_PI)};
    t.phase = rng.uniform();
    t.action = Genotype::random(rng);
    for (int d = 0; d < kStateDims; ++d)
        t.next_state[d] = t.state[d] + delta_scale * rng.normal();
    return t;
}

ReplayBuffer synthetic_buffer(std::uint64_t seed, int n, double delta_scale = 0.03)
{
    Rng rng(seed);
    ReplayBuffer buf;
    for (int i = 0; i < n; ++i)
        buf.push(make_transition(rng, delta_scale));
    return buf;
}

void zero_params(ProbabilisticNet& net)
{
    for (double& p : net.params())
        p = 0.0;
}

} // namespace

TEST_CASE("model inputs pack state, phase and genotype in order")
{
    Rng rng(1);
    Transition t = make_transition(rng);
    const ModelInput in = model_input(t);
    CHECK(in[0] == t.state[0]);
    CHECK(in[1] == t.state[1]);
    CHECK(in[2] == t.state[2]);
    CHECK(in[3] == t.phase);
    for (std::size_t i = 0; i < kGenotypeSize; ++i)
        CHECK(in[4 + i] == t.action[i]);
}

TEST_CASE("model targets are deltas with a wrapped heading component")
{
    Transition t;
    t.state = {0.1, -0.2, 3.0};
    t.next_state = {0.15, -0.1, -3.0};
    const StateDelta d = model_target(t);
    CHECK(d[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.1).epsilon(1e-12));
    // -3.0 - 3.0 = -6.0 wraps to 2*pi - 6.0
    CHECK(d[2] == doctest::Approx(2.0 * M_PI - 6.0).epsilon(1e-12));
}

TEST_CASE("loss is zero when the mean hits the target at unit variance")
{
    Rng rng(2);
    ProbabilisticNet net(8, rng);
    zero_params(net); // mean 0, log-variance 0 everywhere
    const std::vector<ModelInput> in(1);
    const std::vector<StateDelta> t{{0.0, 0.0, 0.0}};
    CHECK(nll_loss(net, in, t) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("a unit residual on one dim at unit variance costs one half")
{
    Rng rng(2);
    ProbabilisticNet net(8, rng);
    zero_params(net);
    const std::vector<ModelInput> in(1);
    const std::vector<StateDelta> t{{1.0, 0.0, 0.0}};
    CHECK(nll_loss(net, in, t) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("loss rejects empty and mismatched batches")
{
    Rng rng(2);
    ProbabilisticNet net(8, rng);
    const std::vector<ModelInput> none;
    const std::vector<StateDelta> none_t;
    CHECK_THROWS_AS((void)net.nll(none, none_t), std::invalid_argument);
    const std::vector<ModelInput> one(1);
    CHECK_THROWS_AS((void)net.nll(one, none_t), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences on every parameter")
{
    const auto res = testsupport::gradient_check_batches(8, 5, 16, 404, 1e-4);
    CHECK(res.n_checked == 5 * (8 * 28 + 8 + 8 * 8 + 8 + 6 * 8 + 6));
    CHECK(res.n_failed == 0);
    CHECK(res.max_rel_error <= 1e-4);
}

TEST_CASE("predicted log-variance is clamped to its bounds")
{
    Rng rng(3);
    ProbabilisticNet net(8, rng);
    zero_params(net);
    // log-variance biases live in the last three slots of the output bias
    for (int d = 0; d < 3; ++d)
        net.params()[net.n_params() - 3 + static_cast<std::size_t>(d)] = 100.0;
    ModelInput in{};
    CHECK(net.predict(in).logvar[0] == kLogVarMax);
    for (int d = 0; d < 3; ++d)
        net.params()[net.n_params() - 3 + static_cast<std::size_t>(d)] = -100.0;
    CHECK(net.predict(in).logvar[0] == kLogVarMin);
}

TEST_CASE("replay buffer evicts oldest entries at capacity")
{
    ReplayBuffer buf(5);
    Rng rng(4);
    std::vector<Transition> pushed;
    for (int i = 0; i < 7; ++i) {
        pushed.push_back(make_transition(rng));
        buf.push(pushed.back());
    }
    REQUIRE(buf.size() == 5);
    CHECK(buf[0].state == pushed[2].state);
    CHECK(buf[4].state == pushed[6].state);
}

TEST_CASE("training on an empty buffer is a flagged no-op")
{
    Ensemble e({2, 8}, 7);
    ReplayBuffer buf;
    const TrainReport rep = e.train(buf, {});
    CHECK(rep.skipped_empty_buffer);
    CHECK_FALSE(e.trained());
}

TEST_CASE("training is deterministic: same seed and buffer give identical parameters")
{
    const ReplayBuffer buf = synthetic_buffer(11, 300);
    Ensemble a({2, 8}, 99), b({2, 8}, 99);
    TrainSettings s;
    s.epochs = 3;
    const TrainReport ra = a.train(buf, s);
    const TrainReport rb = b.train(buf, s);
    for (int m = 0; m < 2; ++m) {
        CHECK(a.net(m).params() == b.net(m).params());
        CHECK(ra.members[static_cast<std::size_t>(m)].epoch_loss ==
              rb.members[static_cast<std::size_t>(m)].epoch_loss);
    }
    CHECK(a.norm_mean() == b.norm_mean());
    CHECK(a.norm_std() == b.norm_std());
}

TEST_CASE("a member's training stream does not depend on how many members exist")
{
    const ReplayBuffer buf = synthetic_buffer(13, 200);
    Ensemble small({2, 8}, 55), large({4, 8}, 55);
    TrainSettings s;
    s.epochs = 2;
    small.train(buf, s);
    large.train(buf, s);
    for (int m = 0; m < 2; ++m)
        CHECK(small.net(m).params() == large.net(m).params());
}

TEST_CASE("training reads but never rewrites the buffer")
{
    ReplayBuffer buf = synthetic_buffer(17, 150);
    std::vector<std::array<double, 3>> before;
    for (std::size_t i = 0; i < buf.size(); ++i)
        before.push_back(buf[i].next_state);
    Ensemble e({2, 8}, 3);
    TrainSettings s;
    s.epochs = 2;
    e.train(buf, s);
    REQUIRE(buf.size() == before.size());
    for (std::size_t i = 0; i < buf.size(); ++i)
        CHECK(buf[i].next_state == before[i]);
}

TEST_CASE("a zero-delta world trains to near-zero predicted means")
{
    Rng rng(23);
    ReplayBuffer buf;
    for (int i = 0; i < 600; ++i) {
        Transition t = make_transition(rng, 0.0);
        t.next_state = t.state; // exactly static dynamics
        buf.push(t);
    }
    Ensemble e({2, 16}, 31);
    TrainSettings s;
    s.epochs = 60;
    e.train(buf, s);
    Rng probe(29);
    for (int i = 0; i < 20; ++i) {
        const Transition t = make_transition(probe, 0.0);
        for (int m = 0; m < e.members(); ++m) {
            const auto pred = e.predict(m, model_input(t));
            const double norm = std::sqrt(pred.mean[0] * pred.mean[0] +
                                          pred.mean[1] * pred.mean[1] +
                                          pred.mean[2] * pred.mean[2]);
            CHECK(norm < 1e-2);
        }
    }
}

TEST_CASE("held-out loss drops after training on surrogate transitions")
{
    // 50 noise-free episodes of the hidden twist field, 10% held out.
    const Surrogate world(5);
    const TwistSource twist = [&world](const Genotype& g, int k) { return world.twist(g, k); };
    Rng rng(41);
    ReplayBuffer train_buf;
    std::vector<ModelInput> held_in;
    std::vector<StateDelta> held_t;
    for (int ep = 0; ep < 50; ++ep) {
        const EpisodeResult r = execute_episode({0, 0, 0}, Genotype::random(rng), twist, nullptr, {});
        for (const Transition& t : r.transitions) {
            if (ep < 45) {
                train_buf.push(t);
            } else {
                held_in.push_back(model_input(t));
                held_t.push_back(model_target(t));
            }
        }
    }
    Ensemble e({2, 32}, 77);
    const double before = e.evaluate_nll(0, held_in, held_t);
    TrainSettings s;
    s.epochs = 25;
    const TrainReport rep = e.train(train_buf, s);
    const double after = e.evaluate_nll(0, held_in, held_t);
    CHECK(after < before);
    // the logged training curve also has to move downward overall
    for (const MemberTrainLog& log : rep.members) {
        REQUIRE(log.epoch_loss.size() == 25);
        CHECK(log.epoch_loss.back() < log.epoch_loss.front());
        CHECK(log.final_loss == log.epoch_loss.back());
    }
}

TEST_CASE("an imagined rollout costs exactly one forward pass per substep")
{
    const ReplayBuffer buf = synthetic_buffer(19, 120);
    Ensemble e({2, 8}, 9);
    TrainSettings s;
    s.epochs = 1;
    e.train(buf, s);
    e.net(0).reset_forward_count();
    e.net(1).reset_forward_count();
    (void)e.imagine_rollout(Genotype(), 1);
    CHECK(e.net(0).forward_count() == 0);
    CHECK(e.net(1).forward_count() == kSubsteps);
}

TEST_CASE("a zeroed member imagines a degenerate stationary episode")
{
    Ensemble e({2, 8}, 9);
    zero_params(e.net(0));
    const ImaginedOutcome out = e.imagine_rollout(Genotype(), 0);
    CHECK(out.bd[0] == 0.0);
    CHECK(out.bd[1] == 0.0);
    CHECK(out.fitness == 0.0);
    CHECK(out.final_state[2] == 0.0);
}

TEST_CASE("imagined rollouts are deterministic and mirror the arena formulas")
{
    const ReplayBuffer buf = synthetic_buffer(3, 200);
    Ensemble e({2, 8}, 15);
    TrainSettings s;
    s.epochs = 2;
    e.train(buf, s);
    Rng rng(6);
    const Genotype g = Genotype::random(rng);
    const ImaginedOutcome a = e.imagine_rollout(g, 0);
    const ImaginedOutcome b = e.imagine_rollout(g, 0);
    CHECK(a.bd == b.bd);
    CHECK(a.fitness == b.fitness);
    // fitness recomputed from the rollout's own bd and heading
    CHECK(a.fitness == doctest::Approx(arc_fitness(a.bd, a.final_state[2])).epsilon(1e-15));
}

TEST_CASE("disagreement is zero for identical members")
{
    Ensemble e({3, 8}, 21);
    for (int m = 1; m < 3; ++m)
        e.net(m).params() = e.net(0).params();
    Rng rng(8);
    CHECK(e.disagreement(Genotype::random(rng)) == 0.0);
}

TEST_CASE("disagreement matches the two-member closed form")
{
    Ensemble e({2, 8}, 22);
    zero_params(e.net(0));
    zero_params(e.net(1));
    // constant mean x-delta via the first output bias: final bd x = H * bias
    e.net(0).params()[e.net(0).n_params() - 6] = 0.011;
    e.net(1).params()[e.net(1).n_params() - 6] = 0.003;
    const double dx = kSubsteps * (0.011 - 0.003);
    // population variance of two points split by dx is (dx/2)^2
    CHECK(e.disagreement(Genotype()) == doctest::Approx(dx * dx / 4.0).epsilon(1e-12));
}

TEST_CASE("disagreement ignores member order")
{
    Ensemble a({3, 8}, 25), b({3, 8}, 25);
    const std::array<double, 3> biases{0.01, -0.004, 0.02};
    for (int m = 0; m < 3; ++m) {
        zero_params(a.net(m));
        zero_params(b.net(m));
        a.net(m).params()[a.net(m).n_params() - 6] = biases[static_cast<std::size_t>(m)];
        b.net(m).params()[b.net(m).n_params() - 6] = biases[static_cast<std::size_t>((m + 1) % 3)];
    }
    const Genotype g;
    CHECK(a.disagreement(g) == doctest::Approx(b.disagreement(g)).epsilon(1e-12));
}

TEST_CASE("checkpoints round-trip the whole ensemble")
{
    const ReplayBuffer buf = synthetic_buffer(33, 250);
    Ensemble e({2, 8}, 47);
    TrainSettings s;
    s.epochs = 2;
    e.train(buf, s);
    const Ensemble back = Ensemble::from_json(e.to_json());
    CHECK(back.members() == e.members());
    CHECK(back.hidden() == e.hidden());
    CHECK(back.seed() == e.seed());
    CHECK(back.trained() == e.trained());
    CHECK(back.norm_mean() == e.norm_mean());
    CHECK(back.norm_std() == e.norm_std());
    for (int m = 0; m < 2; ++m)
        CHECK(back.net(m).params() == e.net(m).params());
    Rng rng(10);
    const Genotype g = Genotype::random(rng);
    const ImaginedOutcome lhs = e.imagine_rollout(g, 1);
    const ImaginedOutcome rhs = back.imagine_rollout(g, 1);
    CHECK(lhs.bd == rhs.bd);
    CHECK(lhs.fitness == rhs.fitness);
    CHECK(e.disagreement(g) == back.disagreement(g));
}

TEST_CASE("checkpoint loading rejects malformed payloads")
{
    CHECK_THROWS_AS((void)Ensemble::from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS((void)Ensemble::from_json("not json"), std::invalid_argument);
}

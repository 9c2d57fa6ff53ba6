#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <array>

#include "builders.hpp"
#include "riskrl/errors.hpp"
#include "riskrl/generators.hpp"
#include "riskrl/mdp.hpp"
#include "riskrl/mdp_json.hpp"
#include "riskrl/risk_oracle.hpp"

using namespace riskrl;

TEST_CASE("validate accepts the degenerate one-state model") {
    MdpTables t = build::blank(1, 1, 1);
    t.rewards[0] = 0.5;
    CHECK(static_cast<bool>(validate(t)));
    CHECK_NOTHROW(TabularMdp{t});
}

TEST_CASE("validate names the first row that does not sum to one") {
    MdpTables t = build::blank(1, 1, 1);
    t.transitions[0] = 0.9;
    const ValidationReport report = validate(t);
    CHECK_FALSE(report.ok);
    CHECK(report.message == "row (h=1,s=0,a=0) sums to 0.9");
    CHECK_THROWS_AS(TabularMdp{t}, InvalidMdp);
}

TEST_CASE("validate rejects rewards outside [0,1]") {
    MdpTables t = build::blank(1, 1, 1);
    t.rewards[0] = 1.5;
    const ValidationReport report = validate(t);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("reward out of range") != std::string::npos);
    t.rewards[0] = -0.1;
    CHECK_FALSE(validate(t).ok);
}

TEST_CASE("validate rejects bad indices, negative entries and non-finite values") {
    MdpTables t = build::blank(2, 2, 2);
    t.initial_state = 2;
    CHECK(validate(t).message.find("index out of range") != std::string::npos);

    t = build::blank(2, 2, 2);
    t.rewards.pop_back();
    CHECK(validate(t).message.find("index out of range") != std::string::npos);

    t = build::blank(2, 2, 2);
    build::set_row(t, 1, 1, 0, {1.5, -0.5});
    CHECK_FALSE(validate(t).ok);

    t = build::blank(2, 2, 2);
    build::set_row(t, 1, 0, 1, {std::nan(""), 1.0});
    CHECK_FALSE(validate(t).ok);

    t = build::blank(1, 1, 1);
    t.shape.horizon = 0;
    CHECK_FALSE(validate(t).ok);
}

TEST_CASE("the first violation is reported with one-based step index") {
    MdpTables t = build::blank(3, 2, 2);
    build::set_row(t, 2, 1, 1, {0.5, 0.25});
    build::set_row(t, 2, 1, 0, {0.5, 0.25});
    CHECK(validate(t).message == "row (h=3,s=1,a=0) sums to 0.75");
}

TEST_CASE("rows within 1e-12 of one are accepted and renormalized at construction") {
    MdpTables t = build::blank(1, 2, 1);
    build::set_row(t, 0, 0, 0, {0.5 + 4e-13, 0.5});
    const TabularMdp mdp(t);
    const auto row = mdp.next_state_distribution(0, 0, 0);
    CHECK(std::abs(row[0] + row[1] - 1.0) <= 4e-16);
    CHECK(row[0] > row[1]);

    build::set_row(t, 0, 0, 0, {0.5 + 1e-11, 0.5});
    CHECK_FALSE(validate(t).ok);
}

TEST_CASE("step follows a point-mass kernel and returns the stored reward exactly") {
    const TabularMdp chain = make_chain_mdp({0.1, 0.2, 0.3});
    Rng rng(11);
    const StepResult out = step(chain, 0, 0, 0, rng);
    CHECK(out.next_state == 1);
    CHECK(out.reward == chain.reward(0, 0, 0));

    const TabularMdp random = make_random_mdp(3, 2, 2, 5);
    for (int i = 0; i < 100; ++i) {
        const StepResult r = step(random, 1, 2, 1, rng);
        CHECK(r.reward == random.reward(1, 2, 1));
    }
}

TEST_CASE("step frequencies match a fair coin") {
    const TabularMdp mdp = build::one_step({0.5, 0.5}, 0.0);
    Rng rng(2024);
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += step(mdp, 0, 0, 0, rng).next_state;
    CHECK(std::abs(ones / static_cast<double>(n) - 0.5) < 1e-2);
}

TEST_CASE("step passes a chi-square goodness-of-fit test") {
    const std::vector<double> row{0.1, 0.2, 0.3, 0.4};
    const TabularMdp mdp = build::one_step(row, 0.0);
    Rng rng(99);
    const int n = 100000;
    std::array<long, 4> counts{};
    for (int i = 0; i < n; ++i) ++counts[step(mdp, 0, 0, 0, rng).next_state];
    double stat = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double expected = n * row[j];
        stat += (counts[j] - expected) * (counts[j] - expected) / expected;
    }
    const boost::math::chi_squared dist(3);
    const double p_value = boost::math::cdf(boost::math::complement(dist, stat));
    CHECK(p_value > 1e-4);
}

TEST_CASE("step is deterministic given the seed and never lands on a zero-probability state") {
    const TabularMdp mdp = build::one_step({0.3, 0.0, 0.7}, 0.0);
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        const int x = step(mdp, 0, 0, 0, a).next_state;
        CHECK(x == step(mdp, 0, 0, 0, b).next_state);
        CHECK(x != 1);
    }
}

TEST_CASE("step rejects out-of-range indices") {
    const TabularMdp mdp = make_random_mdp(2, 2, 2, 1);
    Rng rng(1);
    CHECK_THROWS_AS(step(mdp, 2, 0, 0, rng), ConfigError);
    CHECK_THROWS_AS(step(mdp, 0, 2, 0, rng), ConfigError);
    CHECK_THROWS_AS(step(mdp, 0, 0, -1, rng), ConfigError);
}

TEST_CASE("random instances are reproducible from the seed") {
    const TabularMdp a = make_random_mdp(2, 2, 3, 7);
    const TabularMdp b = make_random_mdp(2, 2, 3, 7);
    CHECK(a.tables().transitions == b.tables().transitions);
    CHECK(a.tables().rewards == b.tables().rewards);
    const TabularMdp c = make_random_mdp(2, 2, 3, 8);
    CHECK(a.tables().transitions != c.tables().transitions);
}

TEST_CASE("random instances always validate") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const int S = 1 + static_cast<int>(seed % 4), A = 1 + static_cast<int>(seed / 4 % 3);
        const double alpha = seed % 2 == 0 ? 1.0 : 0.05;
        const TabularMdp mdp = make_random_mdp(S, A, 1 + static_cast<int>(seed % 5), seed, alpha);
        REQUIRE(validate(mdp.tables()).ok);
    }
}

TEST_CASE("a large Dirichlet concentration gives nearly uniform rows") {
    const int S = 5;
    const TabularMdp mdp = make_random_mdp(S, 2, 2, 3, 1e6);
    double worst = 0.0;
    for (double p : mdp.tables().transitions) worst = std::max(worst, std::abs(p - 1.0 / S));
    // standard deviation of each coordinate is about sqrt(p(1-p) / (S alpha)) ~ 2e-4
    CHECK(worst < 5e-3);
}

TEST_CASE("bandit-hard instance: the designated arm wins by exactly the gap") {
    for (double beta : {1.0, 0.5, -0.5, -1.0}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const int A = 3, H = 4;
            const double gap = 0.2;
            const BanditHardInstance inst = make_bandit_hard_instance(A, H, gap, seed, beta);
            REQUIRE(validate(inst.mdp.tables()).ok);
            const RiskParams params{beta};
            const ValueTables star = optimal_values(inst.mdp, params);
            CHECK(greedy_policy(star).at(0, 0) == inst.best_arm);
            CHECK(std::abs(star.v(0, 0) - inst.best_arm_value) < 1e-12);
            for (int arm = 0; arm < A; ++arm) {
                DeterministicPolicy pi(H, inst.mdp.shape().num_states, 0);
                pi.at(0, 0) = arm;
                const RegretTerms terms = regret_terms(inst.mdp, pi, params);
                const double expected = arm == inst.best_arm ? 0.0 : gap;
                CHECK(std::abs(terms.regret() - expected) < 1e-12);
            }
        }
    }
}

TEST_CASE("bandit-hard arm values follow from the Bernoulli and constant returns") {
    const double beta = 1.0, gap = 0.2;
    const int H = 4;
    const BanditHardInstance inst = make_bandit_hard_instance(2, H, gap, 5, beta);
    const auto row = inst.mdp.next_state_distribution(0, 0, inst.best_arm);
    const double p = row[1];
    CHECK(p == doctest::Approx(kDefaultBestSuccess));
    const double risky = std::log(1.0 - p + p * std::exp(beta * (H - 1))) / beta;
    CHECK(std::abs(risky - inst.best_arm_value) < 1e-12);
    const int other = 1 - inst.best_arm;
    const auto other_row = inst.mdp.next_state_distribution(0, 0, other);
    CHECK(other_row[3] == 1.0);
    CHECK(std::abs((H - 1) * inst.mdp.reward(1, 3, 0) - inst.arm_value) < 1e-12);
}

TEST_CASE("bandit-hard parameter checks") {
    CHECK_THROWS_AS(make_bandit_hard_instance(1, 4, 0.2, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_bandit_hard_instance(3, 4, 0.0, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_bandit_hard_instance(3, 4, 1.0, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_bandit_hard_instance(3, 4, 0.2, 0, 0.0), ConfigError);
    CHECK_THROWS_AS(make_bandit_hard_instance(3, 4, 0.2, 0, 1.0, 1.5), ConfigError);
    // strongly risk-averse: the default long shot cannot carry the gap, so the
    // generator falls back to centred values and still hits the gap exactly
    const BanditHardInstance inst = make_bandit_hard_instance(3, 4, 0.2, 0, -2.0);
    CHECK(inst.best_arm_value == doctest::Approx(0.5 * (3 + 0.2)));
}

TEST_CASE("chain instances are deterministic with one extra state") {
    const TabularMdp chain = make_chain_mdp({0.25, 0.5, 1.0}, 2);
    CHECK(chain.shape().num_states == 4);
    CHECK(chain.shape().horizon == 3);
    for (int h = 0; h < 3; ++h) {
        CHECK(chain.next_state_distribution(h, h, 1)[h + 1] == 1.0);
        CHECK(chain.reward(h, h, 0) == chain.reward(h, h, 1));
    }
}

TEST_CASE("JSON round trip preserves the model bit for bit") {
    const TabularMdp mdp = make_random_mdp(3, 2, 2, 42);
    const nlohmann::json doc = to_json(mdp);
    CHECK(doc.at("transitions").size() == 2);
    CHECK(doc.at("transitions")[0].size() == 3);
    CHECK(doc.at("transitions")[0][0].size() == 2);
    CHECK(doc.at("transitions")[0][0][0].size() == 3);
    const TabularMdp back = mdp_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(back.tables().transitions == mdp.tables().transitions);
    CHECK(back.tables().rewards == mdp.tables().rewards);
    CHECK(back.tables().initial_state == mdp.tables().initial_state);
}

TEST_CASE("malformed model documents raise configuration errors") {
    nlohmann::json doc = to_json(make_random_mdp(2, 2, 2, 1));
    doc.erase("rewards");
    CHECK_THROWS_AS(mdp_from_json(doc), ConfigError);
    doc = to_json(make_random_mdp(2, 2, 2, 1));
    doc["transitions"][0][0].erase(1);
    CHECK_THROWS_AS(mdp_from_json(doc), ConfigError);
    doc = to_json(make_random_mdp(2, 2, 2, 1));
    doc["rewards"][1][1][1] = 3.0;
    CHECK_THROWS_AS(mdp_from_json(doc), InvalidMdp);
    CHECK_THROWS_AS(load_mdp("/nonexistent/model.json"), ConfigError);
}

TEST_CASE("policies must fit the model") {
    const TabularMdp mdp = make_random_mdp(2, 2, 3, 1);
    CHECK_NOTHROW(check_policy(mdp, DeterministicPolicy(3, 2, 1)));
    CHECK_THROWS_AS(check_policy(mdp, DeterministicPolicy(3, 2, 2)), ConfigError);
    CHECK_THROWS_AS(check_policy(mdp, DeterministicPolicy(2, 2, 0)), ConfigError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/errors.hpp"
#include "mfg/operators.hpp"
#include "mfg/policy_ops.hpp"
#include "mfg/tabular_env.hpp"
#include "test_support.hpp"

using namespace mfg;

namespace {

QTable table2(std::initializer_list<std::initializer_list<double>> rows) {
    const int S = static_cast<int>(rows.size());
    const int A = static_cast<int>(rows.begin()->size());
    QTable q(S, A);
    int s = 0;
    for (const auto& row : rows) {
        int a = 0;
        for (double v : row) q(s, a++) = v;
        ++s;
    }
    return q;
}

} // namespace

TEST_CASE("greedy policy: argmax rows, lowest-index ties, masks") {
    const auto full = ActionSpace::full(2, 2);
    const Policy p1 = policy_greedy(table2({{1, 0}, {0, 2}}), full);
    CHECK(p1.probs(0, 0) == 1.0);
    CHECK(p1.probs(0, 1) == 0.0);
    CHECK(p1.probs(1, 1) == 1.0);

    const Policy p2 = policy_greedy(QTable(3, 4), ActionSpace::full(3, 4));
    for (int s = 0; s < 3; ++s) {
        CHECK(p2.probs(s, 0) == 1.0); // all-zero rows tie-break to action 0
    }

    const auto masked = ActionSpace::from_lists(1, 3, {{0, 1}});
    const Policy p3 = policy_greedy(table2({{5, 9, 9}}), masked);
    CHECK(p3.probs(0, 1) == 1.0);
    CHECK(p3.probs(0, 2) == 0.0);
}

TEST_CASE("greedy policy rejects structural problems") {
    CHECK_THROWS_AS(ActionSpace::from_lists(2, 2, {{0}, {}}), ConfigError);
    QTable bad(1, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(policy_greedy(bad, ActionSpace::full(1, 2)), ConfigError);
}

TEST_CASE("softmax policy: closed forms and the greedy limit") {
    const auto full = ActionSpace::full(1, 2);
    const Policy even = policy_softmax(table2({{1, 1}}), 3.7, full);
    CHECK(even.probs(0, 0) == doctest::Approx(0.5));
    CHECK(even.probs(0, 1) == doctest::Approx(0.5));

    const double L = 2.5;
    const Policy ratio = policy_softmax(table2({{0, std::log(3.0) / L}}), L, full);
    CHECK(ratio.probs(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ratio.probs(0, 1) == doctest::Approx(0.75).epsilon(1e-12));

    const Policy sharp = policy_softmax(table2({{0, 1}}), 1e9, full);
    const Policy greedy = policy_greedy(table2({{0, 1}}), full);
    CHECK(std::fabs(sharp.probs(0, 0) - greedy.probs(0, 0)) < 1e-9);
    CHECK(std::fabs(sharp.probs(0, 1) - greedy.probs(0, 1)) < 1e-9);

    CHECK_THROWS_AS(policy_softmax(table2({{0, 1}}), 0.0, full), ConfigError);
    QTable bad(1, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(policy_softmax(bad, 1.0, full), ConfigError);
}

TEST_CASE("softmax respects masks and renormalizes over the valid set") {
    const auto masked = ActionSpace::from_lists(2, 3, {{0, 2}, {1}});
    const Policy pi = policy_softmax(table2({{1, 50, 1}, {2, 3, 4}}), 1.0, masked);
    CHECK(pi.probs(0, 1) == 0.0);
    CHECK(pi.probs(0, 0) == doctest::Approx(0.5));
    CHECK(pi.probs(0, 2) == doctest::Approx(0.5));
    CHECK(pi.probs(1, 1) == doctest::Approx(1.0));
    pi.validate(masked, "masked softmax");
}

TEST_CASE("policy operators produce valid policies on arbitrary tables") {
    Rng rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const int S = 1 + rng.uniform_index(5);
        const int A = 1 + rng.uniform_index(5);
        std::vector<std::vector<int>> lists(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                if (rng.uniform() < 0.6) lists[static_cast<std::size_t>(s)].push_back(a);
            }
            if (lists[static_cast<std::size_t>(s)].empty()) {
                lists[static_cast<std::size_t>(s)].push_back(rng.uniform_index(A));
            }
        }
        const auto actions = ActionSpace::from_lists(S, A, lists);
        const QTable q = test::random_qtable(rng, S, A, -100.0, 100.0);
        policy_greedy(q, actions).validate(actions, "greedy property");
        policy_softmax(q, 0.01 + 10.0 * rng.uniform(), actions)
            .validate(actions, "softmax property");
    }
}

TEST_CASE("softmax shift invariance, greedy affine invariance") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int S = 1 + rng.uniform_index(4);
        const int A = 2 + rng.uniform_index(4);
        const auto actions = ActionSpace::full(S, A);
        const QTable q = test::random_qtable(rng, S, A, -5.0, 5.0);
        const double L = 0.1 + 5.0 * rng.uniform();

        QTable shifted = q;
        const double c = test::uniform_in(rng, -20.0, 20.0);
        for (int a = 0; a < A; ++a) shifted(0, a) += c; // shift one whole row
        const Policy p0 = policy_softmax(q, L, actions);
        const Policy p1 = policy_softmax(shifted, L, actions);
        for (int a = 0; a < A; ++a) {
            CHECK(std::fabs(p0.probs(0, a) - p1.probs(0, a)) < 1e-12);
        }

        QTable affine = q;
        const double scale = 0.1 + 3.0 * rng.uniform();
        const double offset = test::uniform_in(rng, -10.0, 10.0);
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) affine(s, a) = scale * q(s, a) + offset;
        }
        CHECK(policy_greedy(q, actions).probs == policy_greedy(affine, actions).probs);
    }
}

TEST_CASE("bellman_apply: fixed point, zero table, deterministic chain backup") {
    // single state, single action, reward c: the fixed point is c/(1-gamma)
    const double c = 0.7, gamma = 0.9;
    auto env1 = make_tabular_env("one", {{{1.0}}}, {{c}}, gamma);
    PolicyOperator greedy_op{};
    QTable fixed(1, 1);
    fixed(0, 0) = c / (1.0 - gamma);
    const QTable back = bellman_apply(fixed, Population::uniform(1), greedy_op, 0, *env1);
    CHECK(back(0, 0) == doctest::Approx(fixed(0, 0)).epsilon(1e-12));

    // q = 0 reduces the backup to the reward table
    Rng rng(3);
    auto env2 = test::random_env(rng, 4, 3, 0.8);
    const QTable zeros(4, 3);
    const Population m = Population::uniform(4);
    const QTable r_only = bellman_apply(zeros, m, greedy_op, 0, *env2);
    for (int s = 0; s < 4; ++s) {
        for (int a = 0; a < 3; ++a) CHECK(r_only(s, a) == doctest::Approx(env2->reward(s, a, m)));
    }

    // two-state deterministic chain, gamma = 0.5, greedy: enumerate the
    // 4-entry backup directly
    const std::vector<std::vector<std::vector<double>>> kernel{
        {{1.0, 0.0}, {0.0, 1.0}}, // from state 0: stay, move
        {{0.0, 1.0}, {1.0, 0.0}}, // from state 1: stay, move
    };
    const std::vector<std::vector<double>> reward{{1.0, 2.0}, {3.0, 4.0}};
    auto chain = make_tabular_env("chain", kernel, reward, 0.5);
    const QTable q_in = table2({{0.5, 1.0}, {2.0, 0.25}});
    const QTable got = bellman_apply(q_in, Population::uniform(2), greedy_op, 0, *chain);
    // oracle: v(s) = max_a q_in(s,a); out(s,a) = r(s,a) + 0.5 * sum_s2 P v
    double v[2];
    for (int s = 0; s < 2; ++s) v[s] = std::max(q_in(s, 0), q_in(s, 1));
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
            double ev = 0.0;
            for (int s2 = 0; s2 < 2; ++s2) {
                ev += kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]
                            [static_cast<std::size_t>(s2)] *
                      v[s2];
            }
            CHECK(got(s, a) ==
                  doctest::Approx(reward[static_cast<std::size_t>(s)]
                                        [static_cast<std::size_t>(a)] +
                                  0.5 * ev));
        }
    }
}

TEST_CASE("bellman_apply is a gamma-contraction in sup norm under greedy") {
    Rng rng(17);
    PolicyOperator greedy_op{};
    for (int trial = 0; trial < 50; ++trial) {
        const int S = 2 + rng.uniform_index(4);
        const int A = 2 + rng.uniform_index(3);
        const double gamma = 0.3 + 0.6 * rng.uniform();
        auto env = test::random_env(rng, S, A, gamma);
        const Population m(test::random_simplex(rng, S));
        const QTable q1 = test::random_qtable(rng, S, A, -3.0, 3.0);
        const QTable q2 = test::random_qtable(rng, S, A, -3.0, 3.0);
        const QTable t1 = bellman_apply(q1, m, greedy_op, 0, *env);
        const QTable t2 = bellman_apply(q2, m, greedy_op, 0, *env);
        double lhs = 0.0, rhs = 0.0;
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                lhs = std::max(lhs, std::fabs(t1(s, a) - t2(s, a)));
                rhs = std::max(rhs, std::fabs(q1(s, a) - q2(s, a)));
            }
        }
        CHECK(lhs <= gamma * rhs + 1e-12);
    }
}

TEST_CASE("transition_apply: identity, swap, doubly stochastic, simplex preservation") {
    PolicyOperator greedy_op{};
    // identity kernel leaves any population unchanged
    auto ident = make_tabular_env("id", {{{1.0, 0.0}}, {{0.0, 1.0}}},
                                  {{0.0}, {0.0}}, 0.9);
    const Policy triv = policy_greedy(QTable(2, 1), ident->actions());
    const Population m0(std::vector<double>{0.3, 0.7});
    const Population same = transition_apply(triv, m0, *ident, m0);
    CHECK(same[0] == doctest::Approx(0.3));
    CHECK(same[1] == doctest::Approx(0.7));

    // swap kernel permutes the mass
    auto swap_env = make_tabular_env("swap", {{{0.0, 1.0}}, {{1.0, 0.0}}},
                                     {{0.0}, {0.0}}, 0.9);
    const Population swapped = transition_apply(triv, m0, *swap_env, m0);
    CHECK(swapped[0] == doctest::Approx(0.7));
    CHECK(swapped[1] == doctest::Approx(0.3));

    // any doubly stochastic induced kernel fixes the uniform distribution
    auto ds = make_tabular_env("ds", {{{0.25, 0.75}}, {{0.75, 0.25}}}, {{0.0}, {0.0}}, 0.9);
    const Population u = Population::uniform(2);
    const Population still = transition_apply(triv, u, *ds, u);
    CHECK(still[0] == doctest::Approx(0.5));

    Rng rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        const int S = 2 + rng.uniform_index(5);
        const int A = 1 + rng.uniform_index(3);
        auto env = test::random_env(rng, S, A, 0.9);
        const Population m(test::random_simplex(rng, S));
        const QTable q = test::random_qtable(rng, S, A);
        const Policy pi = policy_softmax(q, 1.0, env->actions());
        const Population out = transition_apply(pi, m, *env, m);
        double total = 0.0;
        for (int s = 0; s < S; ++s) {
            CHECK(out[s] >= 0.0);
            total += out[s];
        }
        CHECK(std::fabs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("mfne_residual: zero table, single-state, fixed-point implication") {
    PolicyOperator greedy_op{};
    Rng rng(29);
    auto env = test::random_env(rng, 3, 2, 0.7);
    const Population m = Population::uniform(3);
    const auto [q_res, m_res] = mfne_residual(QTable(3, 2), m, greedy_op, 0, *env);
    double r_norm = 0.0;
    for (int s = 0; s < 3; ++s) {
        for (int a = 0; a < 2; ++a) r_norm += env->reward(s, a, m) * env->reward(s, a, m);
    }
    CHECK(q_res == doctest::Approx(std::sqrt(r_norm)).epsilon(1e-12));

    auto one = make_tabular_env("one", {{{1.0}, {1.0}}}, {{0.5, -0.5}}, 0.9);
    const auto [q1, m1] =
        mfne_residual(test::random_qtable(rng, 1, 2), Population::uniform(1), greedy_op, 0, *one);
    CHECK(m1 == 0.0); // the simplex over one state is a single point
}

TEST_CASE("l2_distance basics") {
    const std::vector<double> a{1.0, 0.0};
    const std::vector<double> b{0.0, 1.0};
    const std::vector<double> h{0.5, 0.5};
    CHECK(l2_distance(std::span<const double>(a), std::span<const double>(a)) == 0.0);
    CHECK(l2_distance(std::span<const double>(a), std::span<const double>(b)) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(l2_distance(std::span<const double>(h), std::span<const double>(a)) ==
          doctest::Approx(std::sqrt(0.5)));
    const std::vector<double> c{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(l2_distance(std::span<const double>(a), std::span<const double>(c)),
                    ConfigError);
}

TEST_CASE("temperature schedules") {
    TemperatureSchedule lin{TemperatureSchedule::Kind::linear, 50.0};
    CHECK(lin.at(0) == 50.0);   // first iteration
    CHECK(lin.at(1) == 100.0);
    CHECK(lin.at(49) == 2500.0);
    CHECK(lin.terminal(50) == 2500.0);
    TemperatureSchedule fixed{TemperatureSchedule::Kind::fixed, 1e-4};
    CHECK(fixed.at(7) == 1e-4);
    CHECK(fixed.terminal(50) == 1e-4);
}

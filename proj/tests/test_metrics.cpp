#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/errors.hpp"
#include "mfg/metrics.hpp"
#include "mfg/operators.hpp"
#include "mfg/ring_road.hpp"
#include "test_support.hpp"

using namespace mfg;

TEST_CASE("mse: closed forms and shape checks") {
    const Population a(std::vector<double>{0.5, 0.5});
    const Population b(std::vector<double>{1.0, 0.0});
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(a, b) == doctest::Approx(0.5));

    const Population c(std::vector<double>{1.0, 0.0, 0.0});
    const Population u = Population::uniform(3);
    CHECK(mse(c, u) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(mse(a, c), ConfigError);

    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Population x(test::random_simplex(rng, 6));
        CHECK(mse(x, x) == 0.0);
        Population y = x;
        y[0] += 1e-9;
        CHECK(mse(x, y) > 0.0);
    }
}

TEST_CASE("exploitability: zero at a self-consistent table, positive away from it") {
    Rng rng(7);
    auto env = test::random_env(rng, 4, 2, 0.75);
    PolicyOperator op{PolicyOperator::Kind::softmax, {TemperatureSchedule::Kind::fixed, 3.0}};

    const auto [q_star, mu_star] = ground_truth_mfne(*env, op, 1e-11, 5000);
    const double at_eq = exploitability(q_star, *env, op, 0, 1e-10, 1e-12);
    CHECK(at_eq < 1e-8);

    const double at_zero = exploitability(QTable(4, 2), *env, op, 0, 1e-10, 1e-12);
    CHECK(at_zero > 1e-3);
}

TEST_CASE("exploitability on the ring road: zero table is exploitable") {
    auto env = make_ring_road();
    PolicyOperator op{PolicyOperator::Kind::softmax, {TemperatureSchedule::Kind::fixed, 100.0}};
    const double e = exploitability(QTable(50, 50), *env, op, 0, 1e-8, 1e-10);
    CHECK(e > 0.0);
}

TEST_CASE("exploitability: bitwise deterministic") {
    Rng rng(11);
    auto env = test::random_env(rng, 5, 3, 0.8);
    PolicyOperator op{PolicyOperator::Kind::softmax, {TemperatureSchedule::Kind::fixed, 2.0}};
    const QTable q = test::random_qtable(rng, 5, 3);
    const double e1 = exploitability(q, *env, op, 0, 1e-9, 1e-11);
    const double e2 = exploitability(q, *env, op, 0, 1e-9, 1e-11);
    CHECK(e1 == e2);
}

TEST_CASE("softmax policies and induced populations ignore constant shifts") {
    Rng rng(13);
    auto env = test::random_env(rng, 4, 3, 0.8);
    PolicyOperator op{PolicyOperator::Kind::softmax, {TemperatureSchedule::Kind::fixed, 1.7}};
    const QTable q = test::random_qtable(rng, 4, 3);
    QTable shifted = q;
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted.data()[i] += 5.25;

    const Policy p0 = op.apply(q, env->actions(), 0);
    const Policy p1 = op.apply(shifted, env->actions(), 0);
    for (std::size_t i = 0; i < p0.probs.size(); ++i) {
        CHECK(std::fabs(p0.probs.data()[i] - p1.probs.data()[i]) < 1e-12);
    }
    const Population mu0 = induced_population(p0, *env, Population::uniform(4), 1e-12, 100000);
    const Population mu1 = induced_population(p1, *env, Population::uniform(4), 1e-12, 100000);
    for (int s = 0; s < 4; ++s) CHECK(std::fabs(mu0[s] - mu1[s]) < 1e-12);
}

TEST_CASE("record appends rows with both metrics") {
    Rng rng(17);
    auto env = test::random_env(rng, 3, 2, 0.7);
    PolicyOperator op{};
    const auto [q_star, mu_star] = ground_truth_mfne(*env, op, 1e-10, 5000);

    LearningTrace trace;
    record(trace, 0, 100, QTable(3, 2), Population::uniform(3), *env, mu_star, op);
    REQUIRE(trace.rows.size() == 1);
    CHECK(trace.rows[0].k == 0);
    CHECK(trace.rows[0].samples == 100);
    CHECK(trace.rows[0].mse >= 0.0);
    CHECK(trace.rows[0].exploitability >= 0.0);

    record(trace, 1, 250, q_star, mu_star, *env, mu_star, op);
    CHECK(trace.rows[1].samples >= trace.rows[0].samples);
    CHECK(trace.rows[1].mse == 0.0);
}

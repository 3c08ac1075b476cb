#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "aptstar/adaptive.hpp"
#include "aptstar/bernoulli.hpp"
#include "support/oracles.hpp"

using namespace aptstar;

namespace {

BatchConfig batch4() {
    BatchConfig b;
    b.n_dim = 4;
    return b;
}

}  // namespace

TEST(Sigmoid, Examples) {
    EXPECT_DOUBLE_EQ(sigmoidSmooth(0.5), 0.5);
    EXPECT_NEAR(sigmoidSmooth(1.0), 1.0 / (1.0 + std::exp(-5.0)), 1e-15);
    EXPECT_NEAR(sigmoidSmooth(1.0), 0.993307, 1e-6);
    EXPECT_NEAR(sigmoidSmooth(1e-300), 0.006693, 1e-6);
    const double below = std::nextafter(0.5, 0.0);
    EXPECT_NEAR(sigmoidSmooth(below), sigmoidSmooth(0.5), 1e-15);
    EXPECT_THROW((void)sigmoidSmooth(0.0), std::domain_error);
    EXPECT_THROW((void)sigmoidSmooth(1.01), std::domain_error);
}

TEST(Sigmoid, MonotoneIncreasing) {
    double prev = 0.0;
    for (double g = 0.001; g <= 1.0; g += 0.001) {
        const double s = sigmoidSmooth(g);
        EXPECT_GT(s, prev);
        EXPECT_LT(s, 1.0);
        prev = s;
    }
}

TEST(Decay, Examples) {
    EXPECT_DOUBLE_EQ(decayFactor(1.0, 50.0), 1.0);
    EXPECT_EQ(decayFactor(0.0, 50.0), 0.0);
    EXPECT_NEAR(decayFactor(0.5, 10.0), std::log(6.0) / std::log(11.0), 1e-15);
    EXPECT_NEAR(decayFactor(0.5, 10.0), 0.747222, 1e-6);
    EXPECT_THROW((void)decayFactor(0.5, 0.0), std::invalid_argument);
}

TEST(InformedRatio, Examples) {
    EXPECT_EQ(informedRatio(3.0, 3.0), 1.0);
    EXPECT_EQ(informedRatio(1.0, 2.0), 0.5);
    EXPECT_NEAR(informedRatio(0.68017, 2.7207), 0.25, 1e-5);
    // The same pair from the measure itself: c = sqrt(1.5) and c = 2 with c_min = 1.
    EXPECT_NEAR(informedRatio(lebesgueMeasure(std::sqrt(1.5), 1.0, 2), lebesgueMeasure(2.0, 1.0, 2)), 0.25, 1e-12);
    EXPECT_THROW((void)informedRatio(0.0, 0.0), std::domain_error);
}

TEST(BatchSize, FirstSolutionInFourDimensions) {
    const BatchConfig b = batch4();
    EXPECT_EQ(b.tau(), 50.0);
    BatchState state;
    // First solution: ratio 1, sigma = 1/(1+e^-5), theta = ln(50 sigma + 1)/ln 51.
    const double theta = std::log(50.0 * sigmoidSmooth(1.0) + 1.0) / std::log(51.0);
    EXPECT_NEAR(theta, 0.998326, 1e-6);
    EXPECT_EQ(adaptBatchSize(1.3, 0.9, b, state), 198);
    EXPECT_EQ(state.batch_size, 198);
    EXPECT_EQ(state.zeta_initial_writes, 1);
}

TEST(BatchSize, DecayEndpoints) {
    const BatchConfig b;
    EXPECT_EQ(batchSizeFromDecay(1.0, b), b.m_max);
    EXPECT_EQ(batchSizeFromDecay(0.0, b), b.m_min);
    EXPECT_EQ(b.m_max, 199);
    EXPECT_EQ(BatchConfig::fromDefault(50, 3).m_max, 99);
}

TEST(BatchSize, UnchangedCostReusesPreviousBatch) {
    BatchState state;
    const BatchConfig b = batch4();
    const long long first = adaptBatchSize(1.5, 0.9, b, state);
    EXPECT_EQ(adaptBatchSize(1.5, 0.9, b, state), first);
    EXPECT_EQ(state.zeta_initial_writes, 1);
}

TEST(BatchSize, Errors) {
    BatchState state;
    const BatchConfig b = batch4();
    EXPECT_THROW((void)adaptBatchSize(0.8, 0.9, b, state), std::domain_error);
    (void)adaptBatchSize(1.2, 0.9, b, state);
    EXPECT_THROW((void)adaptBatchSize(1.3, 0.9, b, state), std::domain_error);
    BatchConfig bad;
    bad.m_min = 10;
    bad.m_max = 10;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(BatchSize, NonIncreasingOverImprovingCosts) {
    Rng rng(6);
    std::uniform_real_distribution<double> shrink(0.5, 0.999);
    std::uniform_int_distribution<int> dim(2, 16);
    for (int t = 0; t < 300; ++t) {
        BatchConfig b;
        b.n_dim = dim(rng);
        BatchState state;
        const double c_min = 0.9;
        double c = c_min * 3.0;
        long long prev = b.m_max;
        for (int step = 0; step < 30; ++step) {
            const long long bs = adaptBatchSize(c, c_min, b, state);
            EXPECT_LE(bs, prev);
            EXPECT_GE(bs, b.m_min);
            EXPECT_LE(bs, b.m_max);
            EXPECT_LE(state.zeta_current, *state.zeta_initial);
            prev = bs;
            c = c_min + (c - c_min) * shrink(rng);
        }
        EXPECT_EQ(state.zeta_initial_writes, 1);
    }
}

TEST(Bernoulli, Examples) {
    EXPECT_EQ(bernoulliNumber(0), 1.0);
    EXPECT_EQ(bernoulliExact(2), Rational(1, 6));
    EXPECT_EQ(bernoulliExact(4), Rational(-1, 30));
    EXPECT_NEAR(bernoulliNumber(4), -1.0 / 30.0, 1e-17);
    EXPECT_THROW((void)bernoulliNumber(3), std::invalid_argument);
}

TEST(Bernoulli, MatchesAkiyamaTanigawa) {
    for (unsigned m = 2; m <= 60; m += 2) EXPECT_EQ(bernoulliExact(m), oracle::bernoulli(m)) << "B_" << m;
    // B_12 = -691/2730.
    EXPECT_EQ(bernoulliExact(12), Rational(-691, 2730));
}

TEST(TanhTaylor, Examples) {
    EXPECT_DOUBLE_EQ(tanhTaylorCharge(0.0, 0.1, 1.9, 100), 1.0);
    EXPECT_NEAR(tanhTaylorCharge(1.0, 0.1, 1.9, 100), 1.0 - 0.9 * std::tanh(1.0), 1e-6);
    EXPECT_NEAR(tanhTaylorCharge(-1.0, 0.1, 1.9, 100), 1.0 + 0.9 * std::tanh(1.0), 1e-6);
    // Commonly quoted rounded values; the exact ones are 0.314565 and 1.685435.
    EXPECT_NEAR(tanhTaylorCharge(1.0, 0.1, 1.9, 100), 0.31464, 1e-4);
    EXPECT_NEAR(tanhTaylorCharge(-1.0, 0.1, 1.9, 100), 1.68536, 1e-4);
    EXPECT_THROW((void)tanhTaylorCharge(0.5, 0.1, 1.9, 0), std::invalid_argument);
}

TEST(TanhTaylor, AgreesWithClosedForm) {
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.4 + 2.8 * i / 1000.0;
        EXPECT_NEAR(tanhTaylorCharge(x, 0.1, 1.9, 100), tanhClosedCharge(x, 0.1, 1.9), 1e-6);
        const double y = -1.0 + 2.0 * i / 1000.0;
        EXPECT_NEAR(tanhTaylorCharge(y, 0.1, 1.9, 10), tanhClosedCharge(y, 0.1, 1.9), 1e-3);
    }
}

TEST(TanhTaylor, ClampsOutsideConvergenceRadius) {
    EXPECT_EQ(tanhTaylorCharge(3.0, 0.1, 1.9, 100), tanhTaylorCharge(1.4, 0.1, 1.9, 100));
    for (int alpha : {1, 10, 100, 1000}) {
        const double q = tanhTaylorCharge(3.0, 0.1, 1.9, alpha);
        EXPECT_GE(q, 0.1);
        EXPECT_LE(q, 1.9);
    }
}

TEST(VertexCharge, Endpoints) {
    const ChargeConfig charge;
    const BatchConfig batch;
    EXPECT_NEAR(vertexCharge(100, charge, batch), 1.0, 1e-15);
    EXPECT_NEAR(vertexCharge(199, charge, batch), 1.0 - 0.9 * std::tanh(3.0), 1e-15);
    EXPECT_NEAR(vertexCharge(1, charge, batch), 1.0 + 0.9 * std::tanh(3.0), 1e-15);
    // Rounded values as usually quoted; exact ones are 0.104451 and 1.895549.
    EXPECT_NEAR(vertexCharge(199, charge, batch), 0.10455, 1e-4);
    EXPECT_NEAR(vertexCharge(1, charge, batch), 1.89545, 1e-4);
    EXPECT_EQ(vertexCharge(500, charge, batch), vertexCharge(199, charge, batch));
    EXPECT_EQ(vertexCharge(0, charge, batch), vertexCharge(1, charge, batch));
}

TEST(VertexCharge, AlwaysWithinChargeRange) {
    const BatchConfig batch;
    for (auto schedule : {ChargeSchedule::TanhTaylor, ChargeSchedule::TanhClosed, ChargeSchedule::Exponential,
                          ChargeSchedule::Polynomial, ChargeSchedule::Logarithmic, ChargeSchedule::Iteration}) {
        ChargeConfig charge;
        charge.schedule = schedule;
        double prev = kInfinity;
        for (long long b = batch.m_min; b <= batch.m_max; ++b) {
            const double q = vertexCharge(b, charge, batch);
            EXPECT_GE(q, charge.q_min);
            EXPECT_LE(q, charge.q_max);
            EXPECT_LE(q, prev + 1e-15) << toString(schedule) << " at B=" << b;
            prev = q;
        }
    }
}

TEST(AlternateSchedules, EndpointsAndMonotonicity) {
    ChargeConfig charge;
    const double x_at_u0 = charge.epsilon * (0.0 + charge.beta);
    const double x_at_u1 = charge.epsilon * (1.0 + charge.beta);
    for (auto schedule : {ChargeSchedule::Exponential, ChargeSchedule::Polynomial, ChargeSchedule::Logarithmic,
                          ChargeSchedule::Iteration}) {
        charge.schedule = schedule;
        EXPECT_NEAR(alternateChargeSchedule(x_at_u0, charge), 1.9, 1e-15);
        if (schedule != ChargeSchedule::Exponential) {
            EXPECT_NEAR(alternateChargeSchedule(x_at_u1, charge), 0.1, 1e-12);
        }
        Rng rng(static_cast<unsigned>(schedule));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            double a = u(rng);
            double b = u(rng);
            if (a > b) std::swap(a, b);
            EXPECT_GE(alternateChargeSchedule(charge.epsilon * (a + charge.beta), charge),
                      alternateChargeSchedule(charge.epsilon * (b + charge.beta), charge));
        }
    }
    charge.schedule = ChargeSchedule::Exponential;
    EXPECT_NEAR(alternateChargeSchedule(x_at_u1, charge), 0.1 + 1.8 * std::exp(-5.0), 1e-15);
    EXPECT_NEAR(alternateChargeSchedule(x_at_u1, charge), 0.11213, 1e-5);
    charge.schedule = ChargeSchedule::TanhClosed;
    EXPECT_THROW((void)alternateChargeSchedule(0.0, charge), std::invalid_argument);
}

TEST(ChargeSchedule, ParseRoundTripAndUnknownId) {
    for (auto s : {ChargeSchedule::TanhTaylor, ChargeSchedule::TanhClosed, ChargeSchedule::Exponential,
                   ChargeSchedule::Polynomial, ChargeSchedule::Logarithmic, ChargeSchedule::Iteration}) {
        EXPECT_EQ(parseChargeSchedule(toString(s)), s);
    }
    EXPECT_THROW((void)parseChargeSchedule("cubic"), std::invalid_argument);
}

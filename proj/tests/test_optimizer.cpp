#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include <omnidris/optimizer.hpp>
#include <omnidris/reports.hpp>

using namespace omnidris;

namespace {

struct Normalized {
    const char* name;
    double alpha, theta, xi, psi;
    ReducedParams red() const { return {alpha, psi, xi}; }
};

const std::vector<Normalized> normalized = {
    {"C0", 1, 1, 1, 1}, {"C1", 5, 5, 5, 5}, {"C2", 10, 10, 10, 10}, {"C3", 3, 1, 1, 1},
    {"C4", 1, 3, 1, 1}, {"C5", 1, 1, 3, 1}, {"C6", 1, 1, 1, 3},
};

OptimizeOptions table_range()
{
    OptimizeOptions o;
    o.n_max = 50.0;
    return o;
}

// Independent root of ln(1+t) - 2t/(1+t) by Newton's method from t = 4.
double t_star_newton()
{
    double t = 4.0;
    for (int i = 0; i < 50; ++i) {
        const double g = std::log1p(t) - 2.0 * t / (1.0 + t);
        const double dg = 1.0 / (1.0 + t) - 2.0 / ((1.0 + t) * (1.0 + t));
        t -= g / dg;
    }
    return t;
}

} // namespace

TEST(UniversalRatio, MatchesIndependentRoot)
{
    const double frozen = 3.92155363456750509;  // 30-digit mpmath root
    EXPECT_NEAR(t_star_newton(), frozen, 1e-13);
    EXPECT_NEAR(universal_stationary_ratio(), frozen, 1e-12);
}

TEST(MeaningfulRoot, PicksInteriorMaximum)
{
    const ReducedParams c0{1, 1, 1};
    EXPECT_NEAR(meaningful_root(solve_cubic(build_cubic(c0, 1.0)), c0, 1.0), 2.2728, 1e-4);

    const ReducedParams c2{10, 10, 10};
    EXPECT_NEAR(meaningful_root(solve_cubic(build_cubic(c2, 10.0)), c2, 10.0), 20.0250, 1e-4);

    EXPECT_NEAR(meaningful_root(solve_cubic(build_cubic(c0, 0.0)), c0, 0.0), std::sqrt(1.5), 1e-12);
}

TEST(MeaningfulRoot, NoCandidateAboveTheta)
{
    const std::vector<double> roots{-1.0, 0.5, 0.9};
    EXPECT_THROW(meaningful_root(roots, ReducedParams{1, 1, 1}, 1.0), NoInteriorMaximum);
}

TEST(OptimizeFixedTheta, ReferenceCalculatedValues)
{
    const auto c1 = optimize_fixed_theta(ReducedParams{5, 5, 5}, 5.0, table_range());
    EXPECT_NEAR(c1.n_star_cubic, 10.0502, 1e-3 * 10.0502);
    EXPECT_NEAR(c1.f_at_cubic, 0.3589, 1e-3 * 0.3589);
    EXPECT_NEAR(c1.n_star_exact, 10.0, 0.05);
    EXPECT_NEAR(c1.f_at_exact, 0.3588, 1e-3 * 0.3588);

    const auto c6 = optimize_fixed_theta(ReducedParams{1, 3, 1}, 1.0, table_range());
    EXPECT_NEAR(c6.n_star_cubic, 2.0865, 1e-3 * 2.0865);
    EXPECT_NEAR(c6.f_at_cubic, 0.1154, 1e-3 * 0.1154);

    const auto c3 = optimize_fixed_theta(ReducedParams{3, 1, 1}, 1.0, table_range());
    EXPECT_NEAR(c3.n_star_cubic, 2.8406, 1e-3 * 2.8406);
}

TEST(OptimizeFixedTheta, CubicResidualAndStationarity)
{
    for (const auto& c : normalized) {
        const auto rep = optimize_fixed_theta(c.red(), c.theta, table_range());
        const double n = rep.n_star_cubic;
        const auto cubic = build_cubic(c.red(), c.theta);
        EXPECT_LE(std::abs(cubic(n)), 1e-8 * 2.0 * c.psi * n * n * n) << c.name;

        const double h = 1e-5 * n;
        const double d = (f_series(c.red(), n + h, c.theta, 2) - f_series(c.red(), n - h, c.theta, 2)) / (2 * h);
        EXPECT_LE(std::abs(d) * n / rep.f_at_cubic, 1e-6) << c.name;
    }
}

TEST(OptimizeFixedTheta, ArgmaxInvariantUnderXiScaling)
{
    for (const auto& c : normalized) {
        const auto base = optimize_fixed_theta(c.red(), c.theta, table_range());
        for (double scale : {0.1, 3.0, 10.0}) {
            ReducedParams red = c.red();
            red.xi *= scale;
            const auto rep = optimize_fixed_theta(red, c.theta, table_range());
            EXPECT_NEAR(rep.n_star_cubic, base.n_star_cubic, 1e-9 * base.n_star_cubic) << c.name;
            EXPECT_NEAR(rep.n_star_exact, base.n_star_exact, 1e-9 * base.n_star_exact) << c.name;
        }
    }
}

TEST(OptimizeFixedTheta, OracleNeverBeaten)
{
    for (const auto& c : normalized) {
        const auto rep = optimize_fixed_theta(c.red(), c.theta, table_range());
        EXPECT_GE(rep.f_at_exact, rep.f_exact_at_cubic) << c.name;
        const double gap = (rep.f_at_exact - rep.f_exact_at_cubic) / rep.f_at_exact;
        if (std::string(c.name) == "C3") {
            // The series optimum sits ~0.32 past the exact one here; the
            // reference measured/calculated pair implies the same ~1.07% gap.
            EXPECT_NEAR(gap, 0.0107, 0.001);
        } else {
            EXPECT_LE(gap, 0.005) << c.name;
        }
    }
}

TEST(OptimizeFixedTheta, TableTwoWithinReferencePrecision)
{
    for (const auto& ref : table2_reference) {
        const auto& c = *std::find_if(normalized.begin(), normalized.end(),
                                      [&](const Normalized& x) { return std::string(x.name) == ref.scenario; });
        const auto rep = optimize_fixed_theta(c.red(), c.theta, table_range());
        EXPECT_NEAR(rep.n_star_exact, ref.meas_n, 0.05) << c.name;
        if (std::string(c.name) != "C5") EXPECT_NEAR(rep.n_star_cubic, ref.calc_n, 1e-3 * ref.calc_n) << c.name;
    }
}

TEST(OptimizeProportional, ActiveFractionFactorsOut)
{
    const ReducedParams red{1.27e5, 1.0, 5e5};
    const auto full = optimize_proportional(red, 1.0);
    const auto half = optimize_proportional(red, 0.5);
    EXPECT_EQ(full.n_star, half.n_star);
    EXPECT_NEAR(full.f_at_n_star / half.f_at_n_star, 2.0, 1e-15);
    EXPECT_NEAR(full.n_star_exact, half.n_star_exact, 1e-9 * full.n_star_exact);
}

TEST(OptimizeProportional, DoublingLightSourcesHalvesOptimum)
{
    const ReducedParams one{1.27e5, 1.0, 5e5};
    const ReducedParams two{1.27e5, 4.0, 1e6};
    const auto a = optimize_proportional(one, 1.0);
    const auto b = optimize_proportional(two, 1.0);
    EXPECT_NEAR(b.n_star, a.n_star / 2.0, 1e-12 * a.n_star);
    EXPECT_NEAR(b.f_at_n_star, a.f_at_n_star, 1e-12 * a.f_at_n_star);
}

TEST(OptimizeProportional, NoiseScalingFollowsInverseSquareRoot)
{
    const double alpha_ref = alpha_for_peak(180.0);
    const ReducedParams ref{alpha_ref, 1.0, 5e5};
    const double n_ref = optimize_proportional(ref, 0.5).n_star;
    EXPECT_NEAR(n_ref, 180.0, 1e-9);
    const std::vector<std::pair<double, double>> trend = {{3.0, 150.0}, {5.0, 120.0}, {8.0, 90.0}};
    for (const auto& [psd, reference_n] : trend) {
        const double c = psd / 2.0;
        const double n = optimize_proportional(ReducedParams{alpha_ref / c, 1.0, 5e5}, 0.5).n_star;
        EXPECT_NEAR(n, n_ref / std::sqrt(c), 1e-12 * n);
        EXPECT_NEAR(n, reference_n, 0.1 * reference_n) << "psd " << psd;
    }
}

TEST(BruteForce, NormalizedExamples)
{
    const auto c0 = brute_force_argmax(ReducedParams{1, 1, 1}, FixedAbsorbing{1}, 1.0, 50.0, 100000);
    EXPECT_NEAR(c0.n, 2.2, 0.05);
    EXPECT_NEAR(c0.rate, 0.3252, 1e-3 * 0.3252);
    EXPECT_FALSE(c0.at_boundary);

    const auto c2 = brute_force_argmax(ReducedParams{10, 10, 10}, FixedAbsorbing{10}, 1.0, 50.0, 100000);
    EXPECT_NEAR(c2.n, 20.0, 0.05);
    EXPECT_NEAR(c2.rate, 0.3602, 1e-3 * 0.3602);
}

TEST(BruteForce, MonotoneRegimeHitsUpperBoundary)
{
    const auto r = brute_force_argmax(ReducedParams{1e12, 1, 1}, FixedAbsorbing{0}, 1.0, 100.0, 1000);
    EXPECT_EQ(r.n, 100.0);
    EXPECT_TRUE(r.at_boundary);
}

TEST(BruteForce, RejectsBadRange)
{
    const ReducedParams red{1, 1, 1};
    EXPECT_THROW(brute_force_argmax(red, FixedAbsorbing{0}, 0.5, 10.0, 1000), std::invalid_argument);
    EXPECT_THROW(brute_force_argmax(red, FixedAbsorbing{0}, 5.0, 5.0, 1000), std::invalid_argument);
    EXPECT_THROW(brute_force_argmax(red, FixedAbsorbing{0}, 1.0, 10.0, 999), std::invalid_argument);
}

TEST(BruteForce, AgreesWithUniversalRatio)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> log_alpha(2.0, 6.0);
    std::uniform_real_distribution<double> psi(1.0, 16.0);
    for (int i = 0; i < 20; ++i) {
        const ReducedParams red{std::pow(10.0, log_alpha(rng)), psi(rng), 1.0};
        const double expected = std::sqrt(red.alpha / (red.psi * universal_stationary_ratio()));
        const auto r = brute_force_argmax(red, AbsorbingFraction{0.25}, 1.0, 1000.0, 20000);
        EXPECT_NEAR(r.n, expected, 1e-6 * expected);
    }
}

TEST(PowerOfTwo, ExactPowerReturnsItself)
{
    const auto c = select_power_of_two(64.0, ReducedParams{1e4, 1, 1}, FixedAbsorbing{0});
    EXPECT_EQ(c.lower, 64);
    EXPECT_EQ(c.upper, 64);
    EXPECT_EQ(c.selected, 64);
    EXPECT_EQ(c.selected_bits, 6);
}

TEST(PowerOfTwo, TieGoesToSmallerCount)
{
    const auto c = select_power_of_two(90.0, [](std::int64_t) { return 42.0; });
    EXPECT_EQ(c.lower, 64);
    EXPECT_EQ(c.upper, 128);
    EXPECT_EQ(c.selected, 64);
}

TEST(PowerOfTwo, ReferenceNoiseRows)
{
    const double alpha_ref = alpha_for_peak(180.0);
    const auto psd5 = optimize_proportional(ReducedParams{alpha_ref * 2.0 / 5.0, 1.0, 5e5}, 0.5);
    EXPECT_EQ(psd5.selection.lower, 64);
    EXPECT_EQ(psd5.selection.upper, 128);
    EXPECT_EQ(psd5.selection.selected, 128);

    const auto psd3 = optimize_proportional(ReducedParams{alpha_ref * 2.0 / 3.0, 1.0, 5e5}, 0.5);
    EXPECT_EQ(psd3.selection.lower, 128);
    EXPECT_EQ(psd3.selection.upper, 256);
    EXPECT_EQ(psd3.selection.selected, 128);
}

TEST(PowerOfTwo, BelowOneCollapsesToSingleElement)
{
    const auto rep = optimize_proportional(ReducedParams{0.5, 1.0, 1.0}, 1.0);
    EXPECT_LT(rep.n_star, 1.0);
    EXPECT_TRUE(rep.selection.below_one);
    EXPECT_EQ(rep.selection.selected, 1);
    EXPECT_EQ(rep.selection.selected_bits, 0);
}

TEST(ClosedForm, DeviationIsMeasuredNotAsserted)
{
    for (const auto& c : normalized) {
        const auto cf = closed_form_root_eq11(c.red(), c.theta);
        const double cubic = meaningful_root(solve_cubic(build_cubic(c.red(), c.theta)), c.red(), c.theta);
        EXPECT_TRUE(std::isfinite(cf.real)) << c.name;
        EXPECT_TRUE(std::isfinite(cf.imag)) << c.name;
        RecordProperty(std::string(c.name) + "_closed_form_deviation", std::to_string(cf.real - cubic));
        RecordProperty(std::string(c.name) + "_closed_form_imag", std::to_string(cf.imag));
    }
    EXPECT_THROW(closed_form_root_eq11(ReducedParams{1, 1, 1}, 0.0), std::invalid_argument);
}

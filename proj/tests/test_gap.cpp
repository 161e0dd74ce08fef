#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gapscope/adiabatic.hpp"
#include "gapscope/gap.hpp"
#include "gapscope/models.hpp"
#include "gapscope/oracle.hpp"
#include "test_helpers.hpp"

using namespace gapscope;

namespace {

TimeSeries synthetic(double offset, double amp, double omega, double phase,
                     const std::vector<double>& times, double noise_sigma = 0.0,
                     std::uint64_t seed = 0) {
    TimeSeries s;
    s.times = times;
    for (double t : times) {
        s.values.push_back(offset + amp * std::cos(omega * t + phase));
        s.sigmas.push_back(noise_sigma);
    }
    if (noise_sigma > 0.0) {
        RngStream noise(rng::key(seed, 0xf17));
        for (auto& v : s.values) v += noise_sigma * noise.normal();
        s.shots = 1;  // marks the series as statistically weighted
    }
    return s;
}

} // namespace

TEST_CASE("chebyshev nodes") {
    CHECK(chebyshev_times(1, 2.0)[0] == doctest::Approx(1.0));
    const auto two = chebyshev_times(2, 2.0);
    CHECK(two[0] == doctest::Approx(1.0 - std::sqrt(2.0) / 2));
    CHECK(two[1] == doctest::Approx(1.0 + std::sqrt(2.0) / 2));

    const auto nodes = chebyshev_times(25, 3.7);
    REQUIRE(nodes.size() == 25);
    CHECK(nodes.front() > 0.0);
    CHECK(nodes.back() < 3.7);
    for (std::size_t k = 1; k < nodes.size(); ++k) CHECK(nodes[k] > nodes[k - 1]);
    // clustering: edge spacings are tighter than the central one
    const double first_gap = nodes[1] - nodes[0];
    const double mid_gap = nodes[13] - nodes[12];
    const double last_gap = nodes[24] - nodes[23];
    CHECK(first_gap < mid_gap);
    CHECK(last_gap < mid_gap);

    CHECK_THROWS_AS(chebyshev_times(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_times(5, 0.0), std::invalid_argument);
}

TEST_CASE("shot sampler endpoints and variance law") {
    const ShotSample sure = sample_shots(1.0, 100, 7);
    CHECK(sure.estimate == doctest::Approx(1.0));
    CHECK(sure.sigma == doctest::Approx(std::sqrt(1e-4 / 100)));

    int within = 0;
    const int n_seeds = 200;
    for (int s = 0; s < n_seeds; ++s) {
        const ShotSample draw = sample_shots(0.5, 8192, rng::key(11, s));
        if (std::abs(draw.estimate) <= 0.05) ++within;
    }
    CHECK(within >= 198);

    const double p = 0.72;
    double mean = 0.0, second = 0.0;
    const int reps = 4000;
    for (int s = 0; s < reps; ++s) {
        const double est = sample_shots(p, 500, rng::key(23, s)).estimate;
        mean += est;
        second += est * est;
    }
    mean /= reps;
    second /= reps;
    const double var = second - mean * mean;
    CHECK(var == doctest::Approx(4 * p * (1 - p) / 500).epsilon(0.08));
}

TEST_CASE("acquired series starts at the static expectation and follows the oracle") {
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 7.257));
    const PauliSum obs(4, {PauliTerm(1.0, "XIII")});
    const StateVector psi0 = exact_superposition(h, 0, 1);

    std::vector<double> times{0.0};
    for (double t : chebyshev_times(24, 1.3)) times.push_back(t);
    StateVector psi = psi0;
    const TimeSeries series = acquire_series(psi, h, obs, times, {});
    CHECK(series.values[0] == doctest::Approx(expectation(obs, psi0)).epsilon(1e-12));

    // Eq-10 form at t=0: offset + A cos(theta)
    const SpectrumSlice slice = diagonalize(h, 2);
    const cplx me = matrix_element(obs, slice.eigenvectors[1], slice.eigenvectors[0]);
    const double offset = 0.5 * (expectation(obs, slice.eigenvectors[0]) +
                                 expectation(obs, slice.eigenvectors[1]));
    CHECK(series.values[0] ==
          doctest::Approx(offset + std::abs(me) * std::cos(std::arg(me))).epsilon(1e-9));

    const TimeSeries exact = exact_series(h, obs, psi0, times);
    double worst = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k)
        worst = std::max(worst, std::abs(series.values[k] - exact.values[k]));
    CHECK(worst < 0.05);  // single Trotter step per node
}

TEST_CASE("shot-sampled series reproduces the binomial variance at zero mean") {
    // <X> = 0 on |0>: variance of the estimator is 1/S
    const PauliSum h(1, {PauliTerm(1.0, "Z")});
    const PauliSum obs(1, {PauliTerm(1.0, "X")});
    const std::int64_t shots = 256;
    double second = 0.0;
    const int reps = 3000;
    for (int r = 0; r < reps; ++r) {
        StateVector psi = StateVector::basis_state(1, 0);
        AcquireOptions opts;
        opts.shots = shots;
        opts.seed = rng::key(5, r);
        const TimeSeries s = acquire_series(psi, h, obs, {1.0}, opts);
        second += s.values[0] * s.values[0];
    }
    CHECK(second / reps == doctest::Approx(1.0 / shots).epsilon(0.08));
}

TEST_CASE("budget above the node count subdivides long intervals") {
    const PauliSum h = build_ising(IsingSpec::chain(2, 1.0, 1.0));
    const PauliSum obs(2, {PauliTerm(1.0, "XI")});
    StateVector a = StateVector::plus_state(2);
    StateVector b = StateVector::plus_state(2);
    const std::vector<double> times{0.5, 1.0, 2.0};
    AcquireOptions fine;
    fine.total_steps = 12;
    const TimeSeries coarse = acquire_series(a, h, obs, times, {});
    const TimeSeries refined = acquire_series(b, h, obs, times, fine);
    // the finer budget must be closer to the exact curve
    const TimeSeries exact = exact_series(h, obs, StateVector::plus_state(2), times);
    double err_coarse = 0.0, err_fine = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        err_coarse = std::max(err_coarse, std::abs(coarse.values[k] - exact.values[k]));
        err_fine = std::max(err_fine, std::abs(refined.values[k] - exact.values[k]));
    }
    CHECK(err_fine <= err_coarse + 1e-12);
    CHECK_THROWS_AS((void)acquire_series(b, h, obs, times, AcquireOptions{.shots = -1, .seed = 0,
                                                                          .total_steps = 2}),
                    std::invalid_argument);
}

TEST_CASE("sinusoid fit recovers synthetic parameters to high precision") {
    const auto times = chebyshev_times(25, 2.0 * std::numbers::pi);
    const TimeSeries s = synthetic(0.5, 0.3, 2.0, 0.7, times);
    const FitResult fit = fit_sinusoid(s, 0.0, 8.0);
    CHECK(fit.frequency == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.phase == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(fit.residual_rms < 1e-10);
    CHECK(fit.refined);
}

TEST_CASE("fit consistency over random synthetic draws") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RngStream stream(rng::key(seed, 0xfa));
        const double offset = 2.0 * stream.uniform() - 1.0;
        const double amp = 0.2 + 0.8 * stream.uniform();
        const double omega = 0.5 + 5.0 * stream.uniform();
        const double phase = 2.0 * std::numbers::pi * stream.uniform();
        const double t_max = 1.5 * 2.0 * std::numbers::pi / omega;
        const TimeSeries s = synthetic(offset, amp, omega, phase, chebyshev_times(25, t_max));
        const FitResult fit = fit_sinusoid(s, 0.0, 8.0);
        CHECK(fit.frequency == doctest::Approx(omega).epsilon(1e-6));
        CHECK(fit.amplitude == doctest::Approx(amp).epsilon(1e-5));
    }
}

TEST_CASE("noisy fits cover the truth at three standard deviations") {
    const auto times = chebyshev_times(25, 2.0 * std::numbers::pi);
    int covered = 0;
    const int n_seeds = 100;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const TimeSeries s = synthetic(0.5, 0.3, 2.0, 0.7, times, 0.02, seed);
        const FitResult fit = fit_sinusoid(s, 0.0, 8.0);
        if (std::abs(fit.frequency - 2.0) <= 3.0 * fit.gap_std) ++covered;
    }
    CHECK(covered >= 95);
}

TEST_CASE("negative amplitudes are canonicalized with a pi phase shift") {
    const auto times = chebyshev_times(25, 4.0);
    TimeSeries flipped;
    flipped.times = times;
    for (double t : times) {
        flipped.values.push_back(0.1 + (-0.4) * std::cos(1.7 * t + 0.3));
        flipped.sigmas.push_back(0.0);
    }
    const FitResult fit = fit_sinusoid(flipped, 0.0, 6.0);
    CHECK(fit.amplitude == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(fit.phase ==
          doctest::Approx(std::fmod(0.3 + std::numbers::pi, 2 * std::numbers::pi)).epsilon(1e-5));
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK(fit.value_at(times[k]) == doctest::Approx(flipped.values[k]).epsilon(1e-10));
}

TEST_CASE("exact superpositions produce a pure single-frequency series") {
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 2.5));
    const PauliSum obs(4, {PauliTerm(1.0, "XIII")});
    const StateVector psi = exact_superposition(h, 0, 1);
    const double gap = exact_gap(h, 0, 1);
    const TimeSeries series =
        exact_series(h, obs, psi, chebyshev_times(25, 1.5 * 2 * std::numbers::pi / gap));
    const FitResult fit = fit_sinusoid(series, 0.0, 4.0 * gap);
    CHECK(fit.residual_rms < 1e-8);
    CHECK(fit.frequency == doctest::Approx(gap).epsilon(1e-8));
}

TEST_CASE("constant series has no defined frequency") {
    const PauliSum h = build_ising(IsingSpec::chain(4, 1.0, 2.0));
    const PauliSum obs(4, {PauliTerm(1.0, "XIII")});
    const SpectrumSlice slice = diagonalize(h, 1);
    const TimeSeries series =
        exact_series(h, obs, slice.eigenvectors[0], chebyshev_times(10, 3.0));
    CHECK_THROWS_AS(fit_sinusoid(series, 0.0, 5.0), FitError);
}

TEST_CASE("dft estimator: bin-centered tones, resolution bound, and fit comparison") {
    const int n = 32;
    const double dt = 0.25;
    std::vector<double> times;
    for (int k = 0; k < n; ++k) times.push_back(dt * (k + 1));
    const double bin = 2 * std::numbers::pi / (n * dt);

    SUBCASE("tone at a bin center is exact") {
        const TimeSeries s = synthetic(0.0, 1.0, 3 * bin, 0.0, times);
        const DftEstimate est = dft_estimate(s);
        CHECK(est.frequency == doctest::Approx(3 * bin).epsilon(1e-12));
        CHECK(est.resolution == doctest::Approx(bin).epsilon(1e-12));
    }
    SUBCASE("tone between bins lands within half a bin") {
        const double omega = 3.4 * bin;
        const TimeSeries s = synthetic(0.0, 1.0, omega, 0.2, times);
        const DftEstimate est = dft_estimate(s);
        CHECK(std::abs(est.frequency - omega) <= 0.5 * bin + 1e-12);
    }
    SUBCASE("the fit resolves what the dft cannot") {
        const double omega = 3.37 * bin;
        TimeSeries s = synthetic(0.0, 1.0, omega, 0.2, times);
        const DftEstimate coarse = dft_estimate(s);
        const FitResult fine = fit_sinusoid(s, 0.0, 10 * bin);
        CHECK(std::abs(fine.frequency - omega) < std::abs(coarse.frequency - omega));
        CHECK(std::abs(fine.frequency - omega) < 1e-6);
    }
    SUBCASE("non-uniform grids are rejected") {
        TimeSeries s = synthetic(0.0, 1.0, bin, 0.0, times);
        s.times[5] += 0.01;
        s.times[4] -= 0.01;
        CHECK_THROWS_AS(dft_estimate(s), FitError);
    }
}

TEST_CASE("time series validation") {
    TimeSeries s;
    s.times = {0.0, 1.0};
    s.values = {0.1, 0.2};
    s.sigmas = {0.0, 0.0};
    CHECK_NOTHROW(s.validate(1.0));
    s.values[1] = 1.5;
    CHECK_THROWS_AS(s.validate(1.0), std::invalid_argument);
    s.values[1] = 0.2;
    s.times[1] = 0.0;
    CHECK_THROWS_AS(s.validate(1.0), std::invalid_argument);
}

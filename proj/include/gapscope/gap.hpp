#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gapscope/pauli.hpp"
#include "gapscope/statevector.hpp"

namespace gapscope {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sampled expectation values of an observable at increasing times.
/// shots == kExact marks exact expectations (sigmas all zero).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> sigmas;
    std::int64_t shots = kExact;

    static constexpr std::int64_t kExact = -1;

    std::size_t size() const { return times.size(); }
    /// Enforces equal lengths, strictly increasing times, non-negative
    /// sigmas, and |value| <= bound (the observable's coefficient L1 norm).
    void validate(double value_bound) const;
};

/// Fitted offset + amplitude * cos(frequency * t + phase). The parameter
/// order in `covariance` is (offset, amplitude, frequency, phase).
struct FitResult {
    double offset = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    double gap_std = 0.0;
    double residual_rms = 0.0;
    /// False when the local refinement hit the iteration cap; the result is
    /// then the best dense-scan candidate.
    bool refined = true;

    double value_at(double t) const;
};

/// t_r = (t_max/2) (1 - cos((2r-1) pi / (2R))), r = 1..R: Chebyshev nodes on
/// (0, t_max), clustered toward both ends.
std::vector<double> chebyshev_times(int count, double t_max);

/// Binomial estimate of a +/-1-valued measurement with success probability
/// p_plus: returns ((2k - S)/S, sqrt(max(1 - est^2, 1/S^2) / S)).
struct ShotSample {
    double estimate = 0.0;
    double sigma = 0.0;
};
ShotSample sample_shots(double p_plus, std::int64_t shots, std::uint64_t seed);

struct AcquireOptions {
    std::int64_t shots = TimeSeries::kExact;
    std::uint64_t seed = 0;
    /// Total Trotter steps spent across the whole series; 0 means one step
    /// per node. Values above the node count subdivide long intervals.
    int total_steps = 0;
};

/// Advance `psi` through the time nodes by first-order Trotter steps under
/// the time-independent `h` (incremental: each node continues from the
/// previous one) and record <O> at every node, exactly or shot-sampled.
TimeSeries acquire_series(StateVector& psi, const PauliSum& h, const PauliSum& o,
                          const std::vector<double>& times, const AcquireOptions& opts);

/// Weighted least squares of offset + A cos(w t + theta) with a dense
/// frequency scan (profiled linear parameters) seeding Levenberg-Marquardt
/// refinement. Amplitude is canonicalized to >= 0 and phase into [0, 2pi).
FitResult fit_sinusoid(const TimeSeries& series, double freq_lo, double freq_hi);

struct DftEstimate {
    double frequency = 0.0;
    /// Bin width 2 pi / (R dt): the best resolution a DFT on R samples gives.
    double resolution = 0.0;
};

/// Peak nonzero-frequency bin of the series. Requires a uniform time grid.
DftEstimate dft_estimate(const TimeSeries& series);

} // namespace gapscope

#include "gapscope/gap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gapscope/rng.hpp"
#include "gapscope/trotter.hpp"

namespace gapscope {

void TimeSeries::validate(double value_bound) const {
    if (times.size() != values.size() || times.size() != sigmas.size())
        throw std::invalid_argument("TimeSeries: length mismatch");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::invalid_argument("TimeSeries: times must be strictly increasing");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (sigmas[i] < 0.0) throw std::invalid_argument("TimeSeries: negative sigma");
        if (std::abs(values[i]) > value_bound + 1e-9)
            throw std::invalid_argument("TimeSeries: value outside observable bound");
    }
}

double FitResult::value_at(double t) const {
    return offset + amplitude * std::cos(frequency * t + phase);
}

std::vector<double> chebyshev_times(int count, double t_max) {
    if (count < 1) throw std::invalid_argument("chebyshev_times: count >= 1 required");
    if (!(t_max > 0)) throw std::invalid_argument("chebyshev_times: t_max > 0 required");
    std::vector<double> ts;
    ts.reserve(count);
    for (int r = 1; r <= count; ++r) {
        const double node = std::cos((2.0 * r - 1.0) * std::numbers::pi / (2.0 * count));
        ts.push_back(0.5 * t_max * (1.0 - node));
    }
    return ts;
}

ShotSample sample_shots(double p_plus, std::int64_t shots, std::uint64_t seed) {
    if (!(p_plus >= 0.0 && p_plus <= 1.0))
        throw std::invalid_argument("sample_shots: p_plus must be in [0,1]");
    if (shots < 1) throw std::invalid_argument("sample_shots: shots >= 1 required");
    RngStream stream(seed);
    const auto k = stream.binomial(static_cast<std::uint64_t>(shots), p_plus);
    const double s = static_cast<double>(shots);
    const double estimate = (2.0 * static_cast<double>(k) - s) / s;
    const double floor = 1.0 / (s * s);
    const double sigma = std::sqrt(std::max(1.0 - estimate * estimate, floor) / s);
    return {estimate, sigma};
}

namespace {

// Steps per node, at least one each, extras apportioned to long intervals by
// largest remainder.
std::vector<int> apportion_steps(const std::vector<double>& times, int total) {
    const int n = static_cast<int>(times.size());
    std::vector<int> steps(n, 1);
    if (total <= n) return steps;
    std::vector<double> intervals(n);
    double prev = 0.0, span = 0.0;
    for (int r = 0; r < n; ++r) {
        intervals[r] = times[r] - prev;
        span += intervals[r];
        prev = times[r];
    }
    int extra = total - n;
    std::vector<double> quota(n);
    std::vector<int> whole(n);
    int assigned = 0;
    for (int r = 0; r < n; ++r) {
        quota[r] = extra * intervals[r] / span;
        whole[r] = static_cast<int>(std::floor(quota[r]));
        assigned += whole[r];
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return quota[a] - whole[a] > quota[b] - whole[b];
    });
    for (int i = 0; i < extra - assigned; ++i) ++whole[order[i]];
    for (int r = 0; r < n; ++r) steps[r] += whole[r];
    return steps;
}

} // namespace

TimeSeries acquire_series(StateVector& psi, const PauliSum& h, const PauliSum& o,
                          const std::vector<double>& times, const AcquireOptions& opts) {
    if (times.empty()) throw std::invalid_argument("acquire_series: empty time grid");
    if (std::abs(psi.norm_sq() - 1.0) > 1e-10)
        throw std::invalid_argument("acquire_series: state is not normalized");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::invalid_argument("acquire_series: times must be strictly increasing");
    if (!(times.front() >= 0.0))
        throw std::invalid_argument("acquire_series: times must be non-negative");

    const bool sampled = opts.shots != TimeSeries::kExact;
    double obs_sign = 1.0;
    if (sampled) {
        if (o.size() != 1 || std::abs(std::abs(o.terms()[0].coefficient) - 1.0) > 1e-12)
            throw std::invalid_argument(
                "acquire_series: finite shots need a single +/-1-valued Pauli string");
        obs_sign = o.terms()[0].coefficient > 0 ? 1.0 : -1.0;
        if (opts.shots < 1) throw std::invalid_argument("acquire_series: shots >= 1 required");
    }

    const auto scheduled = step_schedule(h.terms());
    const int n_nodes = static_cast<int>(times.size());
    if (opts.total_steps != 0 && opts.total_steps < n_nodes)
        throw std::invalid_argument("acquire_series: step budget below node count");
    const std::vector<int> steps = apportion_steps(times, opts.total_steps);

    TimeSeries series;
    series.shots = sampled ? opts.shots : TimeSeries::kExact;
    double prev_t = 0.0;
    for (int r = 0; r < n_nodes; ++r) {
        const double interval = times[r] - prev_t;
        const double dt = interval / steps[r];
        for (int q = 0; q < steps[r]; ++q) {
            for (const auto& term : scheduled)
                apply_pauli_exponential(psi, term, term.coefficient * dt);
        }
        prev_t = times[r];
        if (std::abs(psi.norm_sq() - 1.0) > 1e-9)
            throw std::runtime_error("acquire_series: norm drift above 1e-9");

        double value, sigma;
        if (sampled) {
            PauliTerm unit = o.terms()[0];
            unit.coefficient = 1.0;
            const PauliSum unit_sum(o.n_qubits(), {unit});
            const double m = expectation(unit_sum, psi);
            const double p_plus = std::clamp(0.5 * (1.0 + m), 0.0, 1.0);
            const ShotSample s =
                sample_shots(p_plus, opts.shots, rng::key(opts.seed, static_cast<std::uint64_t>(r)));
            value = obs_sign * s.estimate;
            sigma = s.sigma;
        } else {
            value = expectation(o, psi);
            sigma = 0.0;
        }
        series.times.push_back(times[r]);
        series.values.push_back(value);
        series.sigmas.push_back(sigma);
    }
    series.validate(o.coefficient_l1());
    return series;
}

namespace {

struct LinearProfile {
    double chi2 = std::numeric_limits<double>::infinity();
    double c0 = 0.0;  // offset
    double c1 = 0.0;  // A cos(theta)
    double c2 = 0.0;  // -A sin(theta)
};

LinearProfile profile_at(double omega, const TimeSeries& s, const std::vector<double>& w) {
    const std::size_t n = s.size();
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    double y2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(omega * s.times[i]);
        const double sn = std::sin(omega * s.times[i]);
        const Eigen::Vector3d row(1.0, c, sn);
        g += w[i] * row * row.transpose();
        b += w[i] * s.values[i] * row;
        y2 += w[i] * s.values[i] * s.values[i];
    }
    // tiny ridge keeps the omega -> 0 candidates solvable
    g += 1e-12 * g.trace() * Eigen::Matrix3d::Identity();
    const Eigen::Vector3d c = g.ldlt().solve(b);
    LinearProfile p;
    p.chi2 = std::max(0.0, y2 - 2.0 * c.dot(b) + c.dot(g * c));
    p.c0 = c(0);
    p.c1 = c(1);
    p.c2 = c(2);
    return p;
}

struct Params {
    double offset, amplitude, omega, phase;
};

double chi2_of(const Params& p, const TimeSeries& s, const std::vector<double>& w) {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = s.values[i] - (p.offset + p.amplitude * std::cos(p.omega * s.times[i] +
                                                                          p.phase));
        chi2 += w[i] * r * r;
    }
    return chi2;
}

void fill_jacobian(const Params& p, const TimeSeries& s, const std::vector<double>& w,
                   Eigen::MatrixXd& jac, Eigen::VectorXd& res) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double arg = p.omega * s.times[i] + p.phase;
        const double c = std::cos(arg), sn = std::sin(arg);
        const double sw = std::sqrt(w[i]);
        jac(i, 0) = sw;
        jac(i, 1) = sw * c;
        jac(i, 2) = -sw * p.amplitude * s.times[i] * sn;
        jac(i, 3) = -sw * p.amplitude * sn;
        res(i) = sw * (s.values[i] - (p.offset + p.amplitude * c));
    }
}

} // namespace

FitResult fit_sinusoid(const TimeSeries& series, double freq_lo, double freq_hi) {
    const std::size_t n = series.size();
    if (n < 5) throw FitError("fit_sinusoid: at least 5 points required");
    if (!(freq_lo >= 0.0) || !(freq_hi > freq_lo))
        throw FitError("fit_sinusoid: need 0 <= freq_lo < freq_hi");

    double vmin = series.values[0], vmax = series.values[0];
    for (double v : series.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (vmax - vmin < 1e-13 * std::max(1.0, std::abs(vmax)))
        throw FitError("fit_sinusoid: constant series, frequency undefined");

    const bool exact = series.shots == TimeSeries::kExact;
    std::vector<double> w(n, 1.0);
    if (!exact) {
        for (std::size_t i = 0; i < n; ++i) {
            const double sigma = std::max(series.sigmas[i], 1e-12);
            w[i] = 1.0 / (sigma * sigma);
        }
    }

    // Dense scan: profile the linear parameters at each candidate frequency.
    const double span = series.times.back() - series.times.front();
    const double d_omega = std::numbers::pi / (4.0 * std::max(span, 1e-12));
    const int n_scan =
        std::clamp(static_cast<int>(std::ceil((freq_hi - freq_lo) / d_omega)) + 1, 64, 400000);
    double best_omega = freq_lo;
    LinearProfile best;
    for (int k = 0; k < n_scan; ++k) {
        const double omega = freq_lo + (freq_hi - freq_lo) * k / (n_scan - 1);
        const LinearProfile p = profile_at(omega, series, w);
        if (p.chi2 < best.chi2) {
            best = p;
            best_omega = omega;
        }
    }
    Params scan_params{best.c0, std::hypot(best.c1, best.c2), best_omega,
                       std::atan2(-best.c2, best.c1)};

    // Levenberg refinement of all four parameters.
    Params p = scan_params;
    double chi2 = chi2_of(p, series, w);
    double lambda = 1e-3;
    bool converged = false;
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd res(n);
    for (int iter = 0; iter < 200; ++iter) {
        fill_jacobian(p, series, w, jac, res);
        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Eigen::Vector4d jtr = jac.transpose() * res;
        if (jtr.norm() < 1e-14 * std::max(1.0, chi2)) {
            converged = true;
            break;
        }
        bool stepped = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::Matrix4d damped = jtj;
            for (int d = 0; d < 4; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-14);
            const Eigen::Vector4d delta = damped.ldlt().solve(jtr);
            const Params trial{p.offset + delta(0), p.amplitude + delta(1), p.omega + delta(2),
                               p.phase + delta(3)};
            const double trial_chi2 = chi2_of(trial, series, w);
            if (std::isfinite(trial_chi2) && trial_chi2 <= chi2) {
                const double improvement = chi2 - trial_chi2;
                p = trial;
                chi2 = trial_chi2;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (improvement < 1e-15 * std::max(chi2, 1e-30) + 1e-300) converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) {
            converged = true;  // stuck in a flat region: accept current point
            break;
        }
        if (converged) break;
    }
    if (!converged || !std::isfinite(chi2)) {
        p = scan_params;
        chi2 = chi2_of(p, series, w);
    }

    // Canonical form: amplitude >= 0, frequency >= 0, phase in [0, 2 pi).
    if (p.amplitude < 0) {
        p.amplitude = -p.amplitude;
        p.phase += std::numbers::pi;
    }
    if (p.omega < 0) {
        p.omega = -p.omega;
        p.phase = -p.phase;
    }
    p.phase = std::fmod(p.phase, 2 * std::numbers::pi);
    if (p.phase < 0) p.phase += 2 * std::numbers::pi;

    FitResult fit;
    fit.offset = p.offset;
    fit.amplitude = p.amplitude;
    fit.frequency = p.omega;
    fit.phase = p.phase;
    fit.refined = converged;

    fill_jacobian(p, series, w, jac, res);
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    Eigen::Matrix4d cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
    if (exact && n > 4) cov *= chi2 / static_cast<double>(n - 4);
    fit.covariance = cov;
    fit.gap_std = std::sqrt(std::max(0.0, cov(2, 2)));

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = series.values[i] - fit.value_at(series.times[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

DftEstimate dft_estimate(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 2) throw FitError("dft_estimate: at least 2 points required");
    const double dt = series.times[1] - series.times[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double step = series.times[i + 1] - series.times[i];
        if (std::abs(step - dt) > 1e-9 * std::max(std::abs(dt), 1.0))
            throw FitError("dft_estimate: non-uniform time grid");
    }
    double mean = 0.0;
    for (double v : series.values) mean += v;
    mean /= static_cast<double>(n);

    const std::size_t k_max = n / 2;
    double best_mag = -1.0;
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= k_max; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t r = 0; r < n; ++r) {
            const double arg = -2.0 * std::numbers::pi * static_cast<double>(k * r) /
                               static_cast<double>(n);
            acc += (series.values[r] - mean) * std::exp(cplx{0.0, arg});
        }
        const double mag = std::abs(acc);
        if (mag > best_mag) {
            best_mag = mag;
            best_k = k;
        }
    }
    DftEstimate est;
    est.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    est.frequency = static_cast<double>(best_k) * est.resolution;
    return est;
}

} // namespace gapscope

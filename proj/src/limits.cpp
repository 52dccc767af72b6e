#include "rabilab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "rabilab/errors.hpp"

namespace rabilab::limits {

namespace {

double block_max(const ham::SpinBlock& b) { return b.cwiseAbs().maxCoeff(); }

void check_lambda_sequence(const std::vector<double>& seq, const char* who) {
    if (seq.empty()) throw PreconditionError(std::string(who) + ": lambda_sequence non-empty");
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!(seq[i] > 0.0) || !std::isfinite(seq[i])) {
            throw PreconditionError(std::string(who) + ": every lambda > 0");
        }
        if (i > 0 && !(seq[i] < seq[i - 1])) {
            throw PreconditionError(std::string(who) + ": lambda_sequence strictly decreasing");
        }
    }
}

std::vector<double> default_times(const ModelParams& params) {
    std::vector<double> t(16);
    for (std::size_t j = 0; j < t.size(); ++j) {
        t[j] = 2.0 * std::numbers::pi / params.omega0 * static_cast<double>(j) / static_cast<double>(t.size());
    }
    return t;
}

ModelParams with_lambda(ModelParams p, double lambda) {
    p.lambda = lambda;
    return p;
}

// Diagonal and off-diagonal element at one sweep point; A = 0 falls back to
// the plain Fock element because the displaced basis is undefined there.
ham::SpinBlock sweep_element(const ModelParams& p, double amplitude, double lambda, double alpha_phase, int n, int k,
                             double t, const ham::SeriesCutoffs& cutoffs) {
    if (amplitude == 0.0) {
        ham::SpinBlock e = ham::h_q_rot_fock_element(n, k, t, p);
        if (k == 0) e -= p.lambda * p.lambda / p.omega0 * ham::SpinBlock::Identity();
        return e;
    }
    const Complex alpha = std::polar(amplitude / lambda, alpha_phase);
    return ham::h_q_displaced_bessel_element(n, k, alpha, t, p, cutoffs).full();
}

SweepRow sweep_point(const SweepConfig& config, const ModelParams& base, double lambda) {
    const ModelParams p = with_lambda(base, lambda);
    const DriveParams drive{config.amplitude_fixed, -config.alpha_phase};
    SweepRow row;
    row.lambda = lambda;
    row.alpha_mag = config.amplitude_fixed / lambda;

    std::set<int> diag_levels;
    for (const auto& probe : config.probe_levels) diag_levels.insert(probe.n);

    for (double t : config.time_samples) {
        const ham::SpinBlock target = ham::h_sc_bessel(base, drive, t, config.cutoffs);
        for (int n : diag_levels) {
            const auto e = sweep_element(p, config.amplitude_fixed, lambda, config.alpha_phase, n, 0, t, config.cutoffs);
            row.diag_residual = std::max(row.diag_residual, block_max(e - target));
        }
        for (const auto& probe : config.probe_levels) {
            if (probe.k < 1) continue;
            const auto e = sweep_element(p, config.amplitude_fixed, lambda, config.alpha_phase, probe.n, probe.k, t,
                                         config.cutoffs);
            const double m = block_max(e);
            row.offdiag_norm = std::max(row.offdiag_norm, m);
            auto& slot = row.offdiag_by_k[probe.k];
            slot = std::max(slot, m);
        }
    }
    return row;
}

// Least squares over the last three entries of (x, y), in log space.
double tail_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t take = std::min<std::size_t>(3, x.size());
    return log_log_slope(std::vector<double>(x.end() - static_cast<std::ptrdiff_t>(take), x.end()),
                         std::vector<double>(y.end() - static_cast<std::ptrdiff_t>(take), y.end()));
}

}  // namespace

void SweepConfig::validate() const {
    if (!(amplitude_fixed >= 0.0) || !std::isfinite(amplitude_fixed)) {
        throw PreconditionError("SweepConfig: amplitude_fixed >= 0");
    }
    check_lambda_sequence(lambda_sequence, "SweepConfig");
    if (probe_levels.empty()) throw PreconditionError("SweepConfig: probe_levels non-empty");
    for (const auto& p : probe_levels) {
        if (p.n < 0 || p.k < 0) throw PreconditionError("SweepConfig: probe levels n >= 0, k >= 0");
    }
    if (time_samples.empty()) throw PreconditionError("SweepConfig: time_samples non-empty");
    cutoffs.validate();
}

void ConvergenceReport::write_csv(std::ostream& out, const csv::HeaderLines& header) const {
    csv::HeaderLines full = header;
    for (const auto& [k, slope] : fitted_exponents) {
        full.emplace_back("fitted_exponent_k" + std::to_string(k), csv::format_real(slope));
    }
    csv::Writer w(out, full, {"lambda", "alpha_mag", "offdiag_norm", "diag_residual"});
    for (const auto& r : rows) w.row(std::vector<double>{r.lambda, r.alpha_mag, r.offdiag_norm, r.diag_residual});
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DegenerateFit("log_log_slope: need at least two points");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > std::numeric_limits<double>::min())) {
            throw DegenerateFit("log_log_slope: non-positive or underflowed magnitude");
        }
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateFit("log_log_slope: abscissae coincide");
    return sxy / sxx;
}

ConvergenceReport semiclassical_sweep(const SweepConfig& config, const ModelParams& params) {
    params.validate();
    config.validate();

    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(config.lambda_sequence.size());
    for (double lambda : config.lambda_sequence) {
        jobs.push_back(std::async(std::launch::async, sweep_point, std::cref(config), std::cref(params), lambda));
    }
    ConvergenceReport report;
    for (auto& j : jobs) report.rows.push_back(j.get());

    std::set<int> orders;
    for (const auto& p : config.probe_levels) {
        if (p.k >= 1) orders.insert(p.k);
    }
    for (int k : orders) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& r : report.rows) {
            x.push_back(r.lambda);
            y.push_back(r.offdiag_by_k.at(k));
        }
        try {
            report.fitted_exponents[k] = tail_slope(x, y);
        } catch (const DegenerateFit&) {
            // reported as absent
        }
    }
    return report;
}

double offdiag_magnitude(const ModelParams& params, Complex alpha, int n, int k, const std::vector<double>& time_samples,
                         const ham::SeriesCutoffs& cutoffs) {
    double m = 0.0;
    for (double t : time_samples) {
        m = std::max(m, block_max(ham::h_q_displaced_bessel_element(n, k, alpha, t, params, cutoffs).full()));
    }
    return m;
}

double offdiag_scaling_exponent(const ModelParams& params, Complex alpha, int n, int k,
                                const std::vector<double>& lambda_sequence, const std::vector<double>& time_samples) {
    params.validate();
    if (k < 1 || n < 1) throw PreconditionError("offdiag_scaling_exponent: k >= 1, n >= 1");
    if (alpha == Complex(0.0)) throw AlphaZero("offdiag_scaling_exponent: alpha = 0");
    check_lambda_sequence(lambda_sequence, "offdiag_scaling_exponent");
    const double amplitude = params.lambda * std::abs(alpha);
    const double phase = std::arg(alpha);
    const auto times = time_samples.empty() ? default_times(params) : time_samples;
    const auto cutoffs = ham::SeriesCutoffs::for_argument(4.0 * amplitude / params.omega0, k);

    std::vector<double> mags;
    for (double lambda : lambda_sequence) {
        const Complex a = std::polar(amplitude / lambda, phase);
        mags.push_back(offdiag_magnitude(with_lambda(params, lambda), a, n, k, times, cutoffs));
    }
    return tail_slope(lambda_sequence, mags);
}

std::vector<FockLimitRow> fock_limit_check(const ModelParams& params, double amplitude, int k,
                                           const std::vector<int>& n_sequence, specfun::AsymptoticVariant variant) {
    params.validate();
    if (k < 0) throw PreconditionError("fock_limit_check: k >= 0");
    if (!(amplitude >= 0.0)) throw PreconditionError("fock_limit_check: A >= 0");
    for (std::size_t i = 0; i < n_sequence.size(); ++i) {
        if (n_sequence[i] < 1 || (i > 0 && n_sequence[i] <= n_sequence[i - 1])) {
            throw PreconditionError("fock_limit_check: n_sequence increasing and >= 1");
        }
    }
    const double target = 0.5 * params.omega * std::abs(specfun::bessel_j(k, 4.0 * amplitude / params.omega0));
    std::vector<FockLimitRow> rows;
    for (int n : n_sequence) {
        const double effective =
            variant == specfun::AsymptoticVariant::plain ? n : n + 0.5 * (k + 1);
        FockLimitRow row;
        row.n = n;
        row.lambda = amplitude / std::sqrt(effective);
        const ModelParams p = with_lambda(params, row.lambda);
        row.element_value = block_max(ham::h_q_rot_fock_element(n, k, 0.0, p));
        row.bessel_target = target;
        row.abs_err = std::abs(row.element_value - target);
        rows.push_back(row);
    }
    return rows;
}

void TransformLimitConfig::validate() const {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw PreconditionError("TransformLimitConfig: A > 0");
    check_lambda_sequence(lambda_sequence, "TransformLimitConfig");
    if (time_samples.empty()) throw PreconditionError("TransformLimitConfig: time_samples non-empty");
    if (probe_levels < 0) throw PreconditionError("TransformLimitConfig: probe_levels >= 0");
}

std::vector<TransformLimitRow> transformation_limit_check(const ModelParams& params,
                                                          const TransformLimitConfig& config) {
    params.validate();
    config.validate();
    auto point = [&](double lambda) {
        const ModelParams p = with_lambda(params, lambda);
        const double mag = config.amplitude / lambda;
        const Complex alpha = std::polar(mag, config.alpha_phase);
        const int needed = static_cast<int>(std::ceil(4.0 * mag * mag + 8.0 * mag));
        const int support = truncation_for_displacement(mag + lambda / params.omega0, config.probe_levels).N;
        const Truncation trunc = Truncation::with_default_guard(std::max(needed, support));

        const int levels = config.probe_levels + 1;
        Matrix basis = Matrix::Zero(trunc.dim(), 2 * levels);
        for (int n = 0; n < levels; ++n) {
            const Vector col = displaced_fock_state(alpha, n, trunc);
            for (int m = 0; m < trunc.field_dim(); ++m) {
                basis(2 * m, 2 * n) = col(m);
                basis(2 * m + 1, 2 * n + 1) = col(m);
            }
        }
        const DriveParams drive{config.amplitude, -config.alpha_phase};
        TransformLimitRow row{lambda, mag, trunc.N, 0.0};
        for (double t : config.time_samples) {
            const Matrix d = spin_displacement(p, trunc, +1, params.omega0 * t).entries;
            const Matrix block = basis.adjoint() * (d * basis);
            Matrix target = Matrix::Zero(2 * levels, 2 * levels);
            const ham::SpinBlock u = ham::u_sc(drive, params, t);
            for (int n = 0; n < levels; ++n) target.block<2, 2>(2 * n, 2 * n) = u;
            row.deviation = std::max(row.deviation, linalg::max_abs(block - target));
        }
        return row;
    };

    std::vector<std::future<TransformLimitRow>> jobs;
    for (double lambda : config.lambda_sequence) jobs.push_back(std::async(std::launch::async, point, lambda));
    std::vector<TransformLimitRow> rows;
    for (auto& j : jobs) rows.push_back(j.get());
    return rows;
}

double polaron_diagonal_element(const ModelParams& params, int sign, int n) {
    params.validate();
    if (sign != 1 && sign != -1) throw PreconditionError("polaron_diagonal_element: sign must be +1 or -1");
    if (n < 0) throw PreconditionError("polaron_diagonal_element: n >= 0");
    const double mu = params.lambda / params.omega0;
    return specfun::scaled_laguerre(n, 0, mu * mu);
}

DiagramResult diagram_commutes(const ModelParams& params, double amplitude, double lambda_small, double t,
                               const ham::SeriesCutoffs& cutoffs, int level, double alpha_phase) {
    params.validate();
    if (!(lambda_small > 0.0)) throw PreconditionError("diagram_commutes: lambda_small > 0");
    if (!(amplitude >= 0.0)) throw PreconditionError("diagram_commutes: A >= 0");
    if (level < 0) throw PreconditionError("diagram_commutes: level >= 0");
    const ModelParams p = with_lambda(params, lambda_small);
    DiagramResult r;
    r.path1 = sweep_element(p, amplitude, lambda_small, alpha_phase, level, 0, t, cutoffs);
    r.path2 = ham::h_sc_bessel(params, DriveParams{amplitude, -alpha_phase}, t, cutoffs);
    r.deviation = block_max(r.path1 - r.path2);
    return r;
}

}  // namespace rabilab::limits

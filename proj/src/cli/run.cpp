#include "rabilab/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rabilab/dynamics.hpp"
#include "rabilab/fockspace.hpp"
#include "rabilab/hamiltonians.hpp"
#include "rabilab/limits.hpp"
#include "rabilab/specfun.hpp"

namespace rabilab::cli {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x) { return csv::format_real(x); }

double max_abs(const Matrix2& m) { return m.cwiseAbs().maxCoeff(); }

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

// Largest ratio v[i] / v[i-1]; below 1 iff the sequence strictly decreases.
double worst_ratio(const std::vector<double>& v) {
    double r = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) r = std::max(r, v[i] / v[i - 1]);
    return r;
}

std::string write_csv(Report& report, const RunConfig& config, const std::string& name,
                      const std::function<void(std::ostream&)>& body) {
    std::ostringstream s;
    body(s);
    report.add_file(write_file(config.output_dir, name, s.str()));
    return name;
}

// --- check-identities -----------------------------------------------------

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Complex complex(double max_mag) { return std::polar(real(0.0, max_mag), real(-pi, pi)); }

private:
    std::mt19937_64 rng_;
};

void identities(const RunConfig& config, Report& report) {
    Sampler rng(config.seed);
    const int m = config.identity_samples;
    const double scale = config.tolerance_scale;
    auto record = [&](const std::string& name, double residual, double tol, const std::string& detail) {
        report.add_threshold(name, residual, tol * scale, detail);
    };

    double r = 0.0;
    for (int i = 0; i < m; ++i) {
        const int p = rng.integer(1, 40);
        const double z = rng.real(0.1, 50.0);
        r = std::max(r, std::abs(specfun::bessel_j(p - 1, z) + specfun::bessel_j(p + 1, z) -
                                 2.0 * p / z * specfun::bessel_j(p, z)));
    }
    record("bessel_three_term_recurrence", r, 1e-12, "J_{p-1} + J_{p+1} = (2p/z) J_p, p <= 40, z <= 50");

    double r_sum = 0.0;
    double r_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        const double z = rng.real(0.0, 50.0);
        const int top = static_cast<int>(std::ceil(z)) + 40;
        double even = specfun::bessel_j(0, z);
        double squares = even * even;
        for (int p = 1; p <= top; ++p) {
            const double j = specfun::bessel_j(p, z);
            if (p % 2 == 0) even += 2.0 * j;
            squares += 2.0 * j * j;
        }
        r_sum = std::max(r_sum, std::abs(even - 1.0));
        r_sq = std::max(r_sq, std::abs(squares - 1.0));
    }
    record("bessel_even_sum_rule", r_sum, 1e-12, "J_0 + 2 sum J_2k = 1, z <= 50");
    record("bessel_square_sum_rule", r_sq, 1e-12, "J_0^2 + 2 sum J_p^2 = 1, z <= 50");

    r = 0.0;
    for (int i = 0; i < m; ++i) {
        const double z = rng.real(0.0, 30.0);
        const double theta = rng.real(-pi, pi);
        const int p_max = static_cast<int>(std::ceil(z)) + 25;
        r = std::max(r, std::abs(specfun::jacobi_anger(z, theta, p_max) - std::polar(1.0, z * std::sin(theta))));
    }
    record("jacobi_anger_expansion", r, 1e-10, "sum_p J_p(z) e^{i p theta} = e^{i z sin theta}, z <= 30");

    double r_rec = 0.0;
    double r_ord = 0.0;
    for (int i = 0; i < m; ++i) {
        const int n = rng.integer(1, 50);
        const int k = rng.integer(0, 10);
        const double x = rng.real(0.0, 40.0);
        const double lp = specfun::laguerre(n + 1, k, x);
        const double l0 = specfun::laguerre(n, k, x);
        const double lm = specfun::laguerre(n - 1, k, x);
        const double lhs = (n + 1) * lp;
        const double rhs = (2.0 * n + k + 1 - x) * l0 - (n + k) * lm;
        const double mag = std::max({std::abs(lhs), std::abs((2.0 * n + k + 1 - x) * l0), std::abs((n + k) * lm)});
        r_rec = std::max(r_rec, std::abs(lhs - rhs) / mag);
        double sum = 0.0;
        double abs_sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double l = specfun::laguerre(j, k, x);
            sum += l;
            abs_sum += std::abs(l);
        }
        r_ord = std::max(r_ord, std::abs(specfun::laguerre(n, k + 1, x) - sum) / abs_sum);
    }
    record("laguerre_three_term_recurrence", r_rec, 1e-10, "relative, n <= 50, k <= 10, x <= 40");
    record("laguerre_order_raising_sum", r_ord, 1e-10, "L_n^{k+1} = sum_{j<=n} L_j^k, relative");

    {
        const auto t = Truncation::with_default_guard(60);
        const auto lad = ladder_operators(t);
        const Matrix c = lad.lower.entries * lad.raise.entries - lad.raise.entries * lad.lower.entries;
        const Matrix block = c.topLeftCorner(t.N, t.N) - Matrix::Identity(t.N, t.N);
        record("canonical_commutator", block.cwiseAbs().maxCoeff(), 1e-13, "[a, a^dag] = 1 below the top level, N = 60");
    }

    double r_unit = 0.0;
    double r_comp = 0.0;
    for (int i = 0; i < m; ++i) {
        const Complex a = rng.complex(2.0);
        const Complex b = rng.complex(2.0);
        const auto t = truncation_for_displacement(4.0, 10);
        const int lim = displaced_support_limit(4.0, t) + 1;
        const Matrix da = displacement_matrix(a, t).entries;
        const Matrix db = displacement_matrix(b, t).entries;
        const Matrix dab = displacement_matrix(a + b, t).entries;
        r_unit = std::max(r_unit, (da.adjoint() * da - Matrix::Identity(t.field_dim(), t.field_dim()))
                                      .topLeftCorner(lim, lim)
                                      .cwiseAbs()
                                      .maxCoeff());
        const Complex phase = std::polar(1.0, (a * std::conj(b)).imag());
        r_comp = std::max(r_comp, (da * db - phase * dab).topLeftCorner(lim, lim).cwiseAbs().maxCoeff());
    }
    record("displacement_unitarity", r_unit, 1e-10, "D^dag D = 1 on the reliable block, |beta| <= 2");
    record("displacement_composition", r_comp, 1e-10, "D(a) D(b) = e^{i Im(a b*)} D(a + b), |a|, |b| <= 2");

    r = 0.0;
    {
        const auto t = truncation_for_displacement(3.0, 10);
        for (int i = 0; i < m; ++i) {
            const int n = rng.integer(0, 10);
            const auto v = quadrature_dispersion({rng.complex(3.0), n}, t);
            r = std::max({r, std::abs(v.var_x - (n + 0.5)), std::abs(v.var_p - (n + 0.5))});
        }
    }
    record("displaced_fock_dispersion", r, 1e-6, "quadrature variances n + 1/2 in |alpha, n>, n <= 10, |alpha| <= 3");

    double r6 = 0.0;
    double r7 = 0.0;
    {
        const auto t = Truncation::with_default_guard(80);
        for (int i = 0; i < m; ++i) {
            const ModelParams p{rng.real(0.0, 2.0), 1.0, rng.real(0.0, 0.4)};
            const int n = rng.integer(0, 20);
            const int k = rng.integer(0, 6);
            const Matrix d = spin_displacement(p, t).entries;
            const Matrix conj = d.adjoint() * ham::h_q(p, t).entries * d;
            const Matrix2 brute = conj.block(2 * (n + k), 2 * n, 2, 2);
            r6 = std::max(r6, max_abs(ham::h_q_transformed_element(n, k, p).full() - brute));
            const double time = rng.real(0.0, 2.0 * pi);
            Matrix2 closed = ham::h_q_rot_fock_element(n, k, time, p);
            if (k == 0) closed -= p.lambda * p.lambda / p.omega0 * Matrix2::Identity();
            r7 = std::max(r7, max_abs(ham::h_q_bessel_series_element(n, k, time, p, ham::SeriesCutoffs{}).full() - closed));
        }
    }
    record("polaron_fock_elements", r6, 1e-9, "closed-form polaron elements against D^dag H D, N = 80");
    record("normal_ordered_series", r7, 1e-10, "operator-Bessel series against the closed rotating-frame elements");

    double r_frame = 0.0;
    double r_avg = 0.0;
    for (int i = 0; i < m; ++i) {
        const ModelParams p{rng.real(0.0, 2.0), rng.real(0.5, 2.0), 0.0};
        const DriveParams drive{rng.real(0.0, 1.5), rng.real(-pi, pi)};
        const auto cut = ham::SeriesCutoffs::for_argument(4.0 * drive.amplitude / p.omega0);
        const double time = rng.real(0.0, 10.0);
        const Matrix2 u = ham::u_sc(drive, p, time);
        const Matrix2 rotated = u.adjoint() * (0.5 * p.omega * spin::sigma_z()) * u;
        r_frame = std::max(r_frame, max_abs(ham::h_sc_bessel(p, drive, time, cut) - rotated));
        const int nodes = 2 * cut.p_max + 2;
        Matrix2 avg = Matrix2::Zero();
        for (int j = 0; j < nodes; ++j) avg += ham::h_sc_bessel(p, drive, 2.0 * pi * j / (nodes * p.omega0), cut);
        avg /= static_cast<double>(nodes);
        const Matrix2 target = 0.5 * ham::renormalized_freq_sc(p, drive) * spin::sigma_z();
        r_avg = std::max(r_avg, max_abs(avg - target));
    }
    record("semiclassical_frame", r_frame, 1e-11, "Bessel form equals u_sc^dag (Omega/2) sigma_z u_sc");
    record("semiclassical_period_average", r_avg, 1e-11, "period average equals (Omega/2) J_0(4A/omega0) sigma_z");

    double r_per = 0.0;
    double r_herm = 0.0;
    for (int i = 0; i < m; ++i) {
        const ModelParams p{rng.real(0.0, 2.0), 1.0, rng.real(0.01, 0.3)};
        const Complex alpha = rng.complex(4.0) + 0.1;
        const int n = rng.integer(0, 8);
        const int k = rng.integer(0, 4);
        const double time = rng.real(0.0, 2.0 * pi);
        const auto cut = ham::SeriesCutoffs::for_argument(4.0 * p.lambda * std::abs(alpha) / p.omega0, n + k);
        const auto a = ham::h_q_displaced_bessel_element(n, k, alpha, time, p, cut).full();
        const auto b = ham::h_q_displaced_bessel_element(n, k, alpha, time + 2.0 * pi / p.omega0, p, cut).full();
        r_per = std::max(r_per, max_abs(a - b));
        const auto up = ham::h_q_displaced_bessel_element_any(n, n + k, alpha, time, p, cut).full();
        const auto down = ham::h_q_displaced_bessel_element_any(n + k, n, alpha, time, p, cut).full();
        r_herm = std::max(r_herm, max_abs(up - down.adjoint()));
    }
    record("displaced_element_periodicity", r_per, 1e-10, "displaced-basis elements periodic in 2 pi / omega0");
    record("displaced_element_hermiticity", r_herm, 1e-12, "<m|H|n> = <n|H|m>^dag in the displaced basis");

    r = 0.0;
    {
        const auto cut = ham::SeriesCutoffs::for_argument(0.0, 10);
        for (int i = 0; i < m; ++i) {
            const ModelParams p{rng.real(0.0, 2.0), 1.0, rng.real(0.0, 0.3)};
            const int n = rng.integer(0, 5);
            const int k = rng.integer(0, 3);
            const double time = rng.real(0.0, 2.0 * pi);
            Matrix2 fock = ham::h_q_rot_fock_element(n, k, time, p);
            if (k == 0) fock -= p.lambda * p.lambda / p.omega0 * Matrix2::Identity();
            const auto small = ham::h_q_displaced_bessel_element(n, k, std::polar(1e-8, rng.real(-pi, pi)), time, p, cut);
            r = std::max(r, max_abs(small.full() - fock));
        }
    }
    record("displaced_small_alpha_limit", r, 1e-6, "displaced elements at |alpha| = 1e-8 reduce to Fock elements");

    double r_norm = 0.0;
    double r_rev = 0.0;
    {
        const ModelParams p{1.0, 1.0, 0.3};
        const auto t = dyn::coherent_truncation(1.5);
        dyn::PropagationConfig pc;
        pc.t_end = 2.0;
        pc.dt_initial = 0.01;
        const auto h = dyn::lab_provider(p, t);
        const Vector psi0 = dyn::coherent_product_state(Complex(1.5, 0.0), config.spin_state(), t);
        const auto fwd = dyn::propagate(h, psi0, pc, dyn::StateLayout::spin_field);
        for (double v : fwd.series("norm")) r_norm = std::max(r_norm, std::abs(v - 1.0));
        const auto back = dyn::propagate(dyn::reversed(h, pc.t_end), fwd.states.back(), pc, dyn::StateLayout::spin_field);
        r_rev = 1.0 - linalg::fidelity(back.states.back(), psi0);
    }
    record("propagation_unitarity", r_norm, 1e-10, "norm drift of a lab-frame run, lambda = 0.3, t = 2");
    record("time_reversal", r_rev, 1e-6, "forward then reversed propagation returns the initial state");

    r = 0.0;
    {
        const ModelParams p{0.0, 1.0, rng.real(0.05, 0.5)};
        const Complex alpha = rng.complex(2.0);
        const auto t = dyn::coherent_truncation(std::abs(alpha) + p.lambda / p.omega0);
        dyn::PropagationConfig pc;
        pc.t_end = 3.0;
        const auto traj = dyn::propagate(dyn::lab_provider(p, t), dyn::coherent_product_state(alpha, config.spin_state(), t),
                                         pc, dyn::StateLayout::spin_field);
        for (std::size_t j = 0; j < traj.times.size(); ++j) {
            const Vector exact = dyn::omega_zero_state(p, alpha, config.spin_state(), traj.times[j], t);
            r = std::max(r, 1.0 - linalg::fidelity(exact, traj.states[j]));
        }
    }
    record("omega_zero_exact_evolution", r, 1e-7, "Omega = 0 run against the spin-conditional displaced state");

    write_csv(report, config, "identities.csv", [&](std::ostream& out) {
        csv::Writer w(out, run_header(config), {"check", "name", "residual", "tolerance"});
        for (std::size_t i = 0; i < report.checks().size(); ++i) {
            const auto& c = report.checks()[i];
            w.row(std::vector<std::string>{std::to_string(i + 1), c.name, fmt(c.residual), fmt(c.tolerance)});
        }
    });
}

// --- limits -----------------------------------------------------------------

void sweep(const RunConfig& config, Report& report) {
    const auto result = limits::semiclassical_sweep(config.sweep, config.params);
    csv::HeaderLines extra{{"resolved.p_max", std::to_string(config.sweep.cutoffs.p_max)},
                           {"resolved.l_max", std::to_string(config.sweep.cutoffs.l_max)}};
    write_csv(report, config, "sweep.csv", [&](std::ostream& out) { result.write_csv(out, run_header(config, extra)); });

    std::vector<double> off;
    std::vector<double> diag;
    for (const auto& row : result.rows) {
        off.push_back(row.offdiag_norm);
        diag.push_back(row.diag_residual);
    }
    if (off.size() >= 2) {
        report.add_flag("offdiag_norm_strictly_decreasing", strictly_decreasing(off), worst_ratio(off),
                        "largest ratio of consecutive rows");
        report.add_flag("diag_residual_strictly_decreasing", strictly_decreasing(diag), worst_ratio(diag),
                        "largest ratio of consecutive rows");
    }
    for (const auto& [k, slope] : result.fitted_exponents) {
        report.add_threshold("offdiag_exponent_k" + std::to_string(k), std::abs(slope - k) / k,
                             0.1 * config.tolerance_scale, "relative deviation of slope " + fmt(slope) + " from " + std::to_string(k));
    }
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        report.add_residual("diag_residual_lambda_" + fmt(result.rows[i].lambda), result.rows[i].diag_residual);
    }
}

void fock_limit(const RunConfig& config, Report& report) {
    struct Series {
        int k;
        std::vector<limits::FockLimitRow> plain;
        std::vector<limits::FockLimitRow> szego;
    };
    std::vector<Series> all;
    for (int k : config.fock.orders) {
        all.push_back({k,
                       limits::fock_limit_check(config.params, config.fock.amplitude, k, config.fock.levels,
                                                specfun::AsymptoticVariant::plain),
                       limits::fock_limit_check(config.params, config.fock.amplitude, k, config.fock.levels,
                                                specfun::AsymptoticVariant::szego)});
    }
    write_csv(report, config, "fock_limit.csv", [&](std::ostream& out) {
        csv::Writer w(out, run_header(config),
                      {"n", "k", "variant", "lambda", "element_value", "bessel_target", "abs_err"});
        for (const auto& s : all) {
            for (const auto* rows : {&s.plain, &s.szego}) {
                const std::string variant = rows == &s.plain ? "plain" : "szego";
                for (const auto& r : *rows) {
                    w.row(std::vector<std::string>{std::to_string(r.n), std::to_string(s.k), variant, fmt(r.lambda),
                                                   fmt(r.element_value), fmt(r.bessel_target), fmt(r.abs_err)});
                }
            }
        }
    });
    for (const auto& s : all) {
        const std::string tag = "_k" + std::to_string(s.k);
        for (const auto* rows : {&s.plain, &s.szego}) {
            std::vector<double> err;
            for (const auto& r : *rows) err.push_back(r.abs_err);
            const bool zero = std::all_of(err.begin(), err.end(), [](double e) { return e == 0.0; });
            if (err.size() >= 2) {
                report.add_flag(std::string(rows == &s.plain ? "plain" : "szego") + "_error_decreasing" + tag,
                                zero || strictly_decreasing(err), zero ? 0.0 : worst_ratio(err),
                                "largest ratio of consecutive errors");
            }
        }
        double ratio = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < s.plain.size(); ++i) {
            ok = ok && s.szego[i].abs_err <= s.plain[i].abs_err;
            if (s.plain[i].abs_err > 0.0) ratio = std::max(ratio, s.szego[i].abs_err / s.plain[i].abs_err);
        }
        report.add_flag("szego_not_worse" + tag, ok, ratio, "largest szego / plain error ratio");
        report.add_residual("plain_error_largest_n" + tag, s.plain.back().abs_err);
        report.add_residual("szego_error_largest_n" + tag, s.szego.back().abs_err);
    }
}

void transform_limit(const RunConfig& config, Report& report) {
    const auto rows = limits::transformation_limit_check(config.params, config.transform);
    write_csv(report, config, "transform_limit.csv", [&](std::ostream& out) {
        csv::Writer w(out, run_header(config), {"lambda", "alpha_mag", "truncation", "deviation"});
        for (const auto& r : rows) w.row({r.lambda, r.alpha_mag, static_cast<double>(r.truncation), r.deviation});
    });
    std::vector<double> dev;
    for (const auto& r : rows) {
        dev.push_back(r.deviation);
        report.add_residual("deviation_lambda_" + fmt(r.lambda), r.deviation);
    }
    if (dev.size() >= 2) {
        report.add_flag("deviation_strictly_decreasing", strictly_decreasing(dev), worst_ratio(dev),
                        "largest ratio of consecutive rows");
    }
}

void diagram(const RunConfig& config, Report& report) {
    double z = 0.0;
    for (double a : config.diagram.amplitudes) z = std::max(z, 4.0 * a / config.params.omega0);
    const auto cut = ham::SeriesCutoffs::for_argument(z, config.diagram.level);
    const double l1 = config.diagram.lambda_small;
    const double l2 = 0.5 * l1;
    struct Row {
        double amplitude, t, d1, d2;
    };
    std::vector<Row> rows;
    for (double a : config.diagram.amplitudes) {
        double worst = INFINITY;
        for (double t : config.diagram.times) {
            const auto r1 = limits::diagram_commutes(config.params, a, l1, t, cut, config.diagram.level);
            const auto r2 = limits::diagram_commutes(config.params, a, l2, t, cut, config.diagram.level);
            rows.push_back({a, t, r1.deviation, r2.deviation});
            worst = std::min(worst, r1.deviation / r2.deviation);
        }
        report.add_flag("deviation_halves_A_" + fmt(a), worst >= 2.0, worst,
                        "smallest deviation ratio when lambda_small halves");
    }
    write_csv(report, config, "diagram.csv", [&](std::ostream& out) {
        csv::Writer w(out, run_header(config, {{"resolved.p_max", std::to_string(cut.p_max)}}),
                      {"amplitude", "t", "lambda_small", "deviation", "deviation_half_lambda", "ratio"});
        for (const auto& r : rows) w.row({r.amplitude, r.t, l1, r.d1, r.d2, r.d1 / r.d2});
    });
}

// --- dynamics ----------------------------------------------------------------

double norm_drift(const dyn::Trajectory& traj) {
    double d = 0.0;
    for (double v : traj.series("norm")) d = std::max(d, std::abs(v - 1.0));
    return d;
}

void evolve(const RunConfig& config, Report& report) {
    const auto spin = config.spin_state();
    const double scale = config.tolerance_scale;
    dyn::Trajectory traj;
    csv::HeaderLines extra;
    switch (config.evolve.model) {
        case EvolveModel::quantum: {
            const auto t = dyn::coherent_truncation(std::abs(config.alpha) + config.params.lambda / config.params.omega0);
            extra.emplace_back("resolved.truncation_N", std::to_string(t.N));
            traj = dyn::propagate(dyn::lab_provider(config.params, t), dyn::coherent_product_state(config.alpha, spin, t),
                                  config.propagation, dyn::StateLayout::spin_field);
            if (config.params.omega == 0.0) {
                double r = 0.0;
                for (std::size_t j = 0; j < traj.times.size(); ++j) {
                    const Vector exact = dyn::omega_zero_state(config.params, config.alpha, spin, traj.times[j], t);
                    r = std::max(r, 1.0 - linalg::fidelity(exact, traj.states[j]));
                }
                report.add_threshold("omega_zero_oracle", r, 1e-7 * scale,
                                     "infidelity against the exact Omega = 0 displaced evolution");
            }
            break;
        }
        case EvolveModel::semiclassical: {
            traj = dyn::propagate(dyn::semiclassical_provider(config.params, config.drive), spin, config.propagation,
                                  dyn::StateLayout::spin_only);
            if (config.params.omega == 0.0) {
                const Matrix2 u0 = ham::u_sc(config.drive, config.params, 0.0);
                double r = 0.0;
                for (std::size_t j = 0; j < traj.times.size(); ++j) {
                    const Vector exact = ham::u_sc(config.drive, config.params, traj.times[j]) * u0.adjoint() * spin;
                    r = std::max(r, 1.0 - linalg::fidelity(exact, traj.states[j]));
                }
                report.add_threshold("omega_zero_oracle", r, 1e-7 * scale,
                                     "infidelity against the closed-form Omega = 0 propagator");
            }
            break;
        }
        case EvolveModel::displaced: {
            const double z = 4.0 * config.params.lambda * std::abs(config.alpha) / config.params.omega0;
            const auto cut = ham::SeriesCutoffs::for_argument(z, config.evolve.levels);
            extra.emplace_back("resolved.p_max", std::to_string(cut.p_max));
            traj = dyn::displaced_coefficient_dynamics(config.params, config.alpha, config.n0, spin, config.evolve.levels,
                                                       config.propagation, cut);
            const auto pop = dyn::level_population(traj, config.n0);
            report.add_residual("final_population_n0", pop.back());
            report.add_residual("min_population_n0", *std::min_element(pop.begin(), pop.end()));
            break;
        }
    }
    extra.emplace_back("resolved.dt", fmt(traj.dt_used));
    report.add_threshold("norm_drift", norm_drift(traj), 1e-8 * scale, "largest |norm - 1| over all samples");
    const int amps = std::min<int>(config.evolve.amplitude_columns, static_cast<int>(traj.states.front().size()));
    write_csv(report, config, "evolve.csv",
              [&](std::ostream& out) { traj.write_csv(out, run_header(config, extra), amps); });
}

void compare(const RunConfig& config, Report& report) {
    const auto spin = config.spin_state();
    std::vector<double> gaps;
    std::vector<std::vector<double>> summary;
    for (std::size_t i = 0; i < config.compare.lambdas.size(); ++i) {
        ModelParams p = config.params;
        p.lambda = config.compare.lambdas[i];
        const Complex alpha = std::polar(config.compare.amplitude / p.lambda, config.compare.alpha_phase);
        const auto cmp = dyn::compare_quantum_semiclassical(p, alpha, spin, config.propagation);
        const double drift = std::max(norm_drift(cmp.quantum), norm_drift(cmp.semiclassical));
        gaps.push_back(cmp.max_inversion_gap);
        summary.push_back({p.lambda, std::abs(alpha), static_cast<double>(cmp.trunc.N), cmp.max_inversion_gap, drift});
        report.add_threshold("norm_drift_lambda_" + fmt(p.lambda), drift, 1e-8 * config.tolerance_scale,
                             "largest |norm - 1| of both runs");
        report.add_residual("max_inversion_gap_lambda_" + fmt(p.lambda), cmp.max_inversion_gap);
        const auto& zq = cmp.quantum.series("sigma_z");
        const auto& zs = cmp.semiclassical.series("sigma_z");
        write_csv(report, config, "compare_" + std::to_string(i + 1) + ".csv", [&](std::ostream& out) {
            csv::Writer w(out,
                          run_header(config, {{"resolved.lambda", fmt(p.lambda)},
                                              {"resolved.alpha_mag", fmt(std::abs(alpha))},
                                              {"resolved.truncation_N", std::to_string(cmp.trunc.N)},
                                              {"resolved.dt", fmt(cmp.quantum.dt_used)}}),
                          {"t", "sigma_z_quantum", "sigma_z_semiclassical", "photon_number"});
            for (std::size_t j = 0; j < cmp.quantum.times.size(); ++j) {
                w.row({cmp.quantum.times[j], zq[j], zs[j], cmp.quantum.series("photon_number")[j]});
            }
        });
    }
    write_csv(report, config, "compare.csv", [&](std::ostream& out) {
        csv::Writer w(out, run_header(config), {"lambda", "alpha_mag", "truncation", "max_inversion_gap", "norm_drift"});
        for (const auto& row : summary) w.row(row);
    });
    if (gaps.size() >= 2) {
        report.add_flag("inversion_gap_strictly_decreasing", strictly_decreasing(gaps), worst_ratio(gaps),
                        "largest ratio of consecutive gaps");
    }
}

bool log_axes(Command c) { return c == Command::sweep || c == Command::transform_limit; }

}  // namespace

Report execute(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec || !std::filesystem::is_directory(config.output_dir)) {
        throw ValidationError("output directory writable: " + config.output_dir.string());
    }
    Report report(config);
    switch (config.command) {
        case Command::check_identities: identities(config, report); break;
        case Command::sweep: sweep(config, report); break;
        case Command::fock_limit: fock_limit(config, report); break;
        case Command::transform_limit: transform_limit(config, report); break;
        case Command::evolve: evolve(config, report); break;
        case Command::compare: compare(config, report); break;
        case Command::diagram: diagram(config, report); break;
    }
    const std::string name = command_name(config.command);
    std::vector<std::string> csvs;
    auto json = report.to_json();
    for (const auto& f : json["files"]) csvs.push_back(f.get<std::string>());
    const auto script = "plot_" + name + ".py";
    write_file(config.output_dir, script, plot_script(name, csvs, log_axes(config.command)));
    report.add_file(script);
    report.add_file("report.json");
    write_file(config.output_dir, "report.json", report.to_json().dump(2) + "\n");
    return report;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Report report = execute(config);
        int passed = 0;
        for (const auto& c : report.checks()) passed += c.passed ? 1 : 0;
        out << command_name(config.command) << ": " << passed << " of " << report.checks().size()
            << " checks passed; report in " << (config.output_dir / "report.json").string() << "\n";
        if (const Check* f = report.first_failure()) {
            err << "check failed: " << f->name << " (value " << fmt(f->residual);
            if (f->tolerance > 0.0) err << ", tolerance " << fmt(f->tolerance);
            err << ") " << f->detail << "\n";
            return exit_check_failed;
        }
        return exit_ok;
    } catch (const ValidationError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return exit_numeric_failure;
    } catch (const Error& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config_error;
    }
}

int run_from_file(const std::string& command, const std::filesystem::path& config_path, const Overrides& overrides,
                  std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config_file(config_path, overrides);
        if (command_name(config.command) != command) {
            throw ValidationError("command '" + command + "' matches the config file's command '" +
                                  command_name(config.command) + "'");
        }
    } catch (const ParseError& e) {
        err << "config parse error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ValidationError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config_error;
    }
    return run(config, out, err);
}

}  // namespace rabilab::cli

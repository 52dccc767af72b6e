// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rabilab/dynamics.hpp"
#include "rabilab/hamiltonians.hpp"
#include "rabilab/limits.hpp"
#include "rabilab/specfun.hpp"

using namespace rabilab;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double block_diff(const Matrix2& a, const Matrix2& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Vector fock(int n, const Truncation& t) {
    Vector v = Vector::Zero(t.field_dim());
    v(n) = 1.0;
    return v;
}

// 1. special functions
Outcome special_functions() {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> pd(0, 40);
    std::uniform_real_distribution<double> zd(0.0, 50.0);
    double bessel_worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const int p = pd(rng);
        const double z = zd(rng);
        const double ref = oracle::bessel_series(p, z);
        bessel_worst = std::max(bessel_worst, std::abs(specfun::bessel_j(p, z) - ref) / std::abs(ref));
    }
    std::uniform_int_distribution<int> nd(0, 50);
    std::uniform_int_distribution<int> kd(0, 10);
    std::uniform_real_distribution<double> xd(-20.0, 20.0);
    double laguerre_worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const int n = nd(rng);
        const int k = kd(rng);
        const double x = xd(rng);
        const double ref = oracle::laguerre_sum(n, k, x);
        laguerre_worst = std::max(laguerre_worst, std::abs(specfun::laguerre(n, k, x) - ref) / std::abs(ref));
    }
    std::uniform_real_distribution<double> jz(0.0, 30.0);
    std::uniform_real_distribution<double> jt(-pi, pi);
    double ja_worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double z = jz(rng);
        const double theta = jt(rng);
        const int p_max = static_cast<int>(std::ceil(z)) + 25;
        ja_worst = std::max(ja_worst, std::abs(specfun::jacobi_anger(z, theta, p_max) -
                                               std::polar(1.0, z * std::sin(theta))));
    }
    return {bessel_worst <= 1e-12 && laguerre_worst <= 1e-11 && ja_worst <= 1e-10,
            "bessel rel " + fmt(bessel_worst) + ", laguerre rel " + fmt(laguerre_worst) + ", jacobi-anger " +
                fmt(ja_worst)};
}

// 2. representation equivalence
Outcome representation_equivalence() {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> nd(0, 20);
    std::uniform_int_distribution<int> kd(0, 6);
    std::uniform_real_distribution<double> chid(0.0, 0.8);
    std::uniform_real_distribution<double> td(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> ad(0.0, 3.0);
    std::uniform_real_distribution<double> phd(-pi, pi);
    const Truncation fock_trunc = Truncation::with_default_guard(80);
    double worst6 = 0.0;
    double worst7 = 0.0;
    double worst9 = 0.0;
    int max_n = 80;
    for (int i = 0; i < 200; ++i) {
        const ModelParams p{1.0, 1.0, 0.5 * chid(rng)};
        const int n = nd(rng);
        const int k = kd(rng);
        const double t = td(rng);
        Complex alpha = std::polar(ad(rng), phd(rng));
        if (std::abs(alpha) < 1e-3) alpha = 1e-3;

        const Matrix d = spin_displacement(p, fock_trunc).entries;
        const Matrix conj = d.adjoint() * ham::h_q(p, fock_trunc).entries * d;
        const Matrix2 brute6 = oracle::block(fock(n + k, fock_trunc), conj, fock(n, fock_trunc));
        worst6 = std::max(worst6, block_diff(ham::h_q_transformed_element(n, k, p).full(), brute6));

        Matrix2 s36 = ham::h_q_rot_fock_element(n, k, t, p);
        if (k == 0) s36 -= p.lambda * p.lambda / p.omega0 * Matrix2::Identity();
        worst7 = std::max(worst7, block_diff(ham::h_q_bessel_series_element(n, k, t, p, ham::SeriesCutoffs{}).full(), s36));

        const Truncation big = oracle::truncation(std::abs(alpha) + p.lambda / p.omega0, n + k);
        max_n = std::max(max_n, big.N);
        const oracle::TransformedRotating ht(p, big);
        const auto cut = ham::SeriesCutoffs::for_argument(4.0 * p.lambda * std::abs(alpha) / p.omega0, k);
        const Matrix2 brute9 =
            ht.block(displaced_fock_state(alpha, n + k, big), displaced_fock_state(alpha, n, big), t);
        worst9 = std::max(worst9, block_diff(ham::h_q_displaced_bessel_element(n, k, alpha, t, p, cut).full(), brute9));
    }
    return {worst6 <= 1e-9 && worst7 <= 1e-10 && worst9 <= 1e-7,
            "polaron Fock " + fmt(worst6) + ", normal-ordered series " + fmt(worst7) + ", displaced basis " +
                fmt(worst9) + " (oracle N up to " + std::to_string(max_n) + ")"};
}

// 3. semiclassical sweep
Outcome sweep() {
    limits::SweepConfig c;
    c.amplitude_fixed = 0.5;
    c.lambda_sequence = {0.2, 0.1, 0.05, 0.025};
    for (int n = 0; n <= 5; ++n) {
        for (int k = 0; k <= 3; ++k) c.probe_levels.push_back({n, k});
    }
    for (int j = 0; j < 16; ++j) c.time_samples.push_back(2.0 * pi * j / 16.0);
    const auto report = limits::semiclassical_sweep(c, ModelParams{1.0, 1.0, 0.0});
    bool ok = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        ok = ok && report.rows[i].offdiag_norm < report.rows[i - 1].offdiag_norm;
        ok = ok && report.rows[i].diag_residual < report.rows[i - 1].diag_residual;
    }
    std::string detail = ok ? "columns strictly decreasing" : "columns NOT strictly decreasing";
    for (int k = 1; k <= 3; ++k) {
        const auto it = report.fitted_exponents.find(k);
        const bool fit = it != report.fitted_exponents.end() && std::abs(it->second - k) <= 0.1 * k;
        ok = ok && fit;
        detail += ", k=" + std::to_string(k) + " slope " +
                  (it == report.fitted_exponents.end() ? std::string("n/a") : fmt(it->second));
    }
    return {ok, detail};
}

// 4. Fock-basis asymptotics
Outcome fock_asymptotics() {
    bool ok = true;
    double worst_ratio = 0.0;
    for (double amp : {0.3, 1.0}) {
        for (int k : {0, 1, 2}) {
            const ModelParams p{1.0, 1.0, 0.0};
            const auto plain = limits::fock_limit_check(p, amp, k, {10, 100, 1000}, specfun::AsymptoticVariant::plain);
            const auto szego = limits::fock_limit_check(p, amp, k, {10, 100, 1000}, specfun::AsymptoticVariant::szego);
            for (std::size_t i = 0; i < plain.size(); ++i) {
                if (i > 0) {
                    ok = ok && plain[i].abs_err < plain[i - 1].abs_err;
                    ok = ok && szego[i].abs_err < szego[i - 1].abs_err;
                }
                ok = ok && szego[i].abs_err <= plain[i].abs_err;
                worst_ratio = std::max(worst_ratio, szego[i].abs_err / plain[i].abs_err);
            }
        }
    }
    return {ok, "both variants decreasing, largest szego/plain error ratio " + fmt(worst_ratio)};
}

// 5. transformation-operator limit
Outcome transformation_limit() {
    limits::TransformLimitConfig c;
    c.amplitude = 0.3;
    c.lambda_sequence = {0.1, 0.05, 0.025};
    for (int j = 0; j < 8; ++j) c.time_samples.push_back(2.0 * pi * j / 8.0);
    const auto rows = limits::transformation_limit_check(ModelParams{1.0, 1.0, 0.0}, c);
    bool ok = true;
    std::string detail = "deviation";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) ok = ok && rows[i].deviation < rows[i - 1].deviation;
        detail += " " + fmt(rows[i].deviation) + " (N=" + std::to_string(rows[i].truncation) + ")";
    }
    return {ok, detail};
}

// 6. diagram commutation
Outcome diagram() {
    bool ok = true;
    std::string detail = "ratios";
    const auto cut = ham::SeriesCutoffs::for_argument(2.0);
    for (double amp : {0.0, 0.25, 0.5}) {
        double worst = INFINITY;
        for (double t : {0.0, 0.7, 2.1, 4.0}) {
            const auto a = limits::diagram_commutes(ModelParams{1.0, 1.0, 0.0}, amp, 0.1, t, cut);
            const auto b = limits::diagram_commutes(ModelParams{1.0, 1.0, 0.0}, amp, 0.05, t, cut);
            worst = std::min(worst, a.deviation / b.deviation);
        }
        ok = ok && worst >= 2.0;
        detail += " A=" + fmt(amp) + ":" + fmt(worst);
    }
    return {ok, detail};
}

// 7. dynamics convergence
Outcome dynamics_convergence() {
    const Eigen::Vector2cd up(1.0, 0.0);
    dyn::PropagationConfig c;
    c.t_end = 30.0;
    c.dt_initial = 0.01;
    c.sample_interval = 0.1;
    bool ok = true;
    double prev_gap = INFINITY;
    double worst_norm = 0.0;
    double worst_fid = 0.0;
    std::string gaps;
    for (double lambda : {0.1, 0.05, 0.025}) {
        const ModelParams p{1.0, 1.0, lambda};
        const Complex alpha(0.25 / lambda, 0.0);
        const auto cmp = dyn::compare_quantum_semiclassical(p, alpha, up, c);
        ok = ok && cmp.max_inversion_gap < prev_gap;
        prev_gap = cmp.max_inversion_gap;
        gaps += " " + fmt(cmp.max_inversion_gap);

        const auto rot = dyn::propagate(dyn::rotating_provider(p, cmp.trunc), cmp.quantum.states.front(), c,
                                        dyn::StateLayout::spin_field);
        const int levels = 16;
        const Vector c0 = dyn::lab_to_displaced(cmp.quantum.states.front(), p, alpha, 0.0, cmp.trunc, levels);
        const auto disp = dyn::displaced_coefficient_dynamics(
            p, alpha, c0 / c0.norm(), c, ham::SeriesCutoffs::for_argument(4.0 * 0.25 / p.omega0, levels));
        for (const auto* traj : {&cmp.quantum, &cmp.semiclassical, &rot, &disp}) {
            for (double v : traj->series("norm")) worst_norm = std::max(worst_norm, std::abs(v - 1.0));
        }
        for (std::size_t j = 0; j < cmp.quantum.times.size(); ++j) {
            const double t = cmp.quantum.times[j];
            const Vector& lab = cmp.quantum.states[j];
            const Vector from_rot = dyn::rotating_to_lab(rot.states[j], p.omega0, t);
            const Vector from_disp = dyn::displaced_to_lab(disp.states[j], p, alpha, t, cmp.trunc);
            worst_fid = std::max({worst_fid, 1.0 - linalg::fidelity(lab, from_rot),
                                  1.0 - linalg::fidelity(lab, from_disp),
                                  1.0 - linalg::fidelity(from_rot, from_disp)});
        }
    }
    ok = ok && worst_norm < 1e-8 && worst_fid <= 1e-6;
    return {ok, "gaps" + gaps + ", norm drift " + fmt(worst_norm) + ", worst infidelity " + fmt(worst_fid)};
}

// 8. collapse versus sustained oscillation
Outcome phenomenology() {
    const Eigen::Vector2cd up(1.0, 0.0);
    dyn::PropagationConfig c;
    c.t_end = 40.0;
    c.dt_initial = 0.01;
    c.sample_interval = 0.05;
    const ModelParams p{1.0, 1.0, 0.5};
    const auto cmp = dyn::compare_quantum_semiclassical(p, Complex(3.0, 0.0), up, c);
    const auto& tq = cmp.quantum.times;
    const double q0 = dyn::envelope(tq, cmp.quantum.series("sigma_z"), 0.0, 10.0);
    const double q1 = dyn::envelope(tq, cmp.quantum.series("sigma_z"), 30.0, 40.0);
    const double s0 = dyn::envelope(tq, cmp.semiclassical.series("sigma_z"), 0.0, 10.0);
    const double s1 = dyn::envelope(tq, cmp.semiclassical.series("sigma_z"), 30.0, 40.0);
    const bool ok = q1 < 0.25 * q0 && s1 >= 0.9 * s0;
    return {ok, "quantum envelope " + fmt(q0) + " -> " + fmt(q1) + ", semiclassical " + fmt(s0) + " -> " + fmt(s1)};
}

// 9. dispersion law
Outcome dispersion() {
    double worst = 0.0;
    const auto t = truncation_for_displacement(3.0, 10);
    for (int n = 0; n <= 10; ++n) {
        for (double mag : {0.0, 0.7, 1.5, 3.0}) {
            for (double phase : {0.0, 1.0, 2.5}) {
                const auto v = quadrature_dispersion({std::polar(mag, phase), n}, t);
                worst = std::max({worst, std::abs(v.var_x - (n + 0.5)), std::abs(v.var_p - (n + 0.5))});
            }
        }
    }
    return {worst <= 1e-6, "worst |var - (n + 1/2)| " + fmt(worst) + " (N=" + std::to_string(t.N) + ")"};
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "special-function suite", 10.0, special_functions},
        {2, "representation equivalence", 120.0, representation_equivalence},
        {3, "semiclassical-limit sweep", 60.0, sweep},
        {4, "Fock-basis asymptotics", 5.0, fock_asymptotics},
        {5, "transformation-operator limit", 120.0, transformation_limit},
        {6, "diagram commutation", 30.0, diagram},
        {7, "dynamics convergence", 300.0, dynamics_convergence},
        {8, "collapse vs sustained oscillation", 60.0, phenomenology},
        {9, "displaced-Fock dispersion law", 5.0, dispersion},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_seconds;
        const bool pass = out.pass && in_time;
        if (!pass) ++failures;
        std::printf("criterion %d [PRIMARY] %-34s %s  %s; %.2fs of %.0fs budget\n", c.id, c.name,
                    pass ? "PASS" : "FAIL", out.detail.c_str(), secs, c.budget_seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

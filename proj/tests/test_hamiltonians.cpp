#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "rabilab/errors.hpp"
#include "rabilab/hamiltonians.hpp"
#include "rabilab/specfun.hpp"

using namespace rabilab;
using namespace rabilab::ham;

namespace {

constexpr double pi = std::numbers::pi;

double diff(const SpinBlock& a, const SpinBlock& b) { return (a - b).cwiseAbs().maxCoeff(); }

Vector fock(int n, const Truncation& t) {
    Vector v = Vector::Zero(t.field_dim());
    v(n) = 1.0;
    return v;
}

SpinBlock fock_block(const Matrix& op, int row, int col, const Truncation& t) {
    return oracle::block(fock(row, t), op, fock(col, t));
}

}  // namespace

TEST_CASE("semiclassical hamiltonian") {
    ModelParams p{1.0, 1.0, 0.0};
    CHECK(diff(h_sc(p, {0.0, 0.0}, 0.37), 0.5 * spin::sigma_z()) == 0.0);
    CHECK(diff(h_sc(p, {0.8, 0.0}, pi / 2.0), 0.5 * spin::sigma_z()) < 1e-15);
    SpinBlock expect;
    expect << 0.5, 1.0, 1.0, -0.5;
    CHECK(diff(h_sc(p, {0.5, 0.0}, 0.0), expect) == 0.0);
}

TEST_CASE("semiclassical propagator") {
    ModelParams p{1.0, 1.3, 0.0};
    DriveParams d{0.7, 0.0};
    CHECK(diff(u_sc(d, p, 0.0), SpinBlock::Identity()) == 0.0);
    CHECK(diff(u_sc(d, p, pi / p.omega0), SpinBlock::Identity()) < 1e-15);
    for (double t : {0.3, 1.1, 4.0}) {
        const SpinBlock u = u_sc(d, p, t);
        CHECK(diff(u.adjoint() * u, SpinBlock::Identity()) < 1e-14);
    }
}

TEST_CASE("semiclassical Bessel expansion equals the frame transformation") {
    ModelParams p{0.9, 1.2, 0.0};
    for (double amp : {0.0, 0.35, 1.4}) {
        DriveParams d{amp, 0.0};
        const auto cut = SeriesCutoffs::for_argument(4.0 * amp / p.omega0);
        for (double t : {0.0, 0.4, 2.9}) {
            const double h = 1e-5;
            const SpinBlock u = u_sc(d, p, t);
            const SpinBlock du = (u_sc(d, p, t + h) - u_sc(d, p, t - h)) / (2.0 * h);
            const SpinBlock frame = u.adjoint() * h_sc(p, d, t) * u - Complex(0.0, 1.0) * u.adjoint() * du;
            const SpinBlock series = h_sc_bessel(p, d, t, cut);
            CHECK(diff(series, frame) < 1e-9);
            CHECK(diff(series, series.adjoint()) < 1e-12);
        }
    }
    CHECK(diff(h_sc_bessel(p, {0.0, 0.0}, 1.0, SeriesCutoffs{}), 0.5 * p.omega * spin::sigma_z()) < 1e-16);
}

TEST_CASE("semiclassical Bessel time average gives the renormalized splitting") {
    ModelParams p{1.0, 1.0, 0.0};
    DriveParams d{0.6, 0.0};
    const auto cut = SeriesCutoffs::for_argument(2.4);
    // trapezoidal rule on a trigonometric polynomial of degree <= p_max is exact
    const int nodes = 2 * cut.p_max + 2;
    SpinBlock avg = SpinBlock::Zero();
    for (int j = 0; j < nodes; ++j) avg += h_sc_bessel(p, d, 2.0 * pi * j / nodes, cut);
    avg /= nodes;
    CHECK(diff(avg, 0.5 * renormalized_freq_sc(p, d) * spin::sigma_z()) < 1e-12);
    CHECK(renormalized_freq_sc(p, {0.0, 0.0}) == 1.0);
}

TEST_CASE("cutoff insufficiency is reported") {
    ModelParams p{1.0, 1.0, 0.5};
    CHECK_THROWS_AS(h_sc_bessel(p, {5.0, 0.0}, 0.0, SeriesCutoffs{5, 200, 1e-12}), CutoffInsufficient);
    CHECK_THROWS_AS(h_q_bessel_series_element(0, 4, 0.0, p, SeriesCutoffs{3, 200, 1e-12}), CutoffInsufficient);
    CHECK_THROWS_AS(h_q_displaced_bessel_element(0, 0, 0.0, 0.0, p, SeriesCutoffs{}), AlphaZero);
}

TEST_CASE("quantum Rabi matrix") {
    const Truncation t = Truncation::with_default_guard(40);
    ModelParams p{0.8, 1.1, 0.0};
    const auto h0 = h_q(p, t);
    h0.validate();
    Eigen::SelfAdjointEigenSolver<Matrix> es0(h0.entries);
    std::vector<double> expect;
    for (int n = 0; n <= t.N; ++n) {
        expect.push_back(n * p.omega0 - 0.4);
        expect.push_back(n * p.omega0 + 0.4);
    }
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < t.dim(); ++i) CHECK(es0.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-12));

    ModelParams q{0.0, 1.1, 0.45};
    Eigen::SelfAdjointEigenSolver<Matrix> es(h_q(q, t).entries);
    for (int n = 0; n <= t.reliable(); ++n) {
        const double e = n * q.omega0 - q.lambda * q.lambda / q.omega0;
        CHECK(es.eigenvalues()(2 * n) == doctest::Approx(e).epsilon(1e-10));
        CHECK(es.eigenvalues()(2 * n + 1) == doctest::Approx(e).epsilon(1e-10));
    }

    const Matrix h = h_q(q, t).entries;
    for (int n : {0, 4}) CHECK(diff(fock_block(h, n + 1, n, t), q.lambda * std::sqrt(n + 1.0) * spin::sigma_x()) < 1e-15);
}

TEST_CASE("polaron-frame Fock elements against numerical conjugation") {
    const Truncation t = Truncation::with_default_guard(80);
    ModelParams zero{1.3, 1.0, 0.0};
    const auto e0 = h_q_transformed_element(4, 0, zero);
    CHECK(e0.scalar == 4.0);
    CHECK(diff(e0.spin, 0.65 * spin::sigma_z()) == 0.0);
    CHECK(diff(h_q_transformed_element(4, 2, zero).spin, SpinBlock::Zero()) == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> nd(0, 20);
    std::uniform_int_distribution<int> kd(0, 6);
    std::uniform_real_distribution<double> chid(0.0, 0.8);
    for (int trial = 0; trial < 6; ++trial) {
        ModelParams p{1.0 + 0.1 * trial, 1.0, 0.0};
        p.lambda = 0.5 * chid(rng) * p.omega0;
        const Matrix d = spin_displacement(p, t).entries;
        const Matrix conj = d.adjoint() * h_q(p, t).entries * d;
        const Matrix conj_expm = oracle::polaron_hamiltonian_expm(p, t);
        for (int j = 0; j < 5; ++j) {
            const int n = nd(rng);
            const int k = kd(rng);
            const SpinBlock closed = h_q_transformed_element(n, k, p).full();
            INFO("n=" << n << " k=" << k << " lambda=" << p.lambda);
            CHECK(diff(closed, fock_block(conj, n + k, n, t)) < 1e-9);
            CHECK(diff(closed, fock_block(conj_expm, n + k, n, t)) < 1e-9);
        }
    }
}

TEST_CASE("rotating-frame Fock elements") {
    ModelParams p{1.0, 1.0, 0.3};
    for (int n : {0, 3}) {
        for (int k : {0, 2}) {
            CHECK(diff(h_q_rot_fock_element(n, k, 0.0, p), h_q_transformed_element(n, k, p).spin) < 1e-16);
            const double m0 = h_q_rot_fock_element(n, k, 0.0, p).cwiseAbs().maxCoeff();
            CHECK(h_q_rot_fock_element(n, k, 1.7, p).cwiseAbs().maxCoeff() == doctest::Approx(m0).epsilon(1e-15));
        }
        CHECK(diff(h_q_rot_fock_element(n, 0, 2.2, p), 0.5 * renormalized_freq_q(p, n) * spin::sigma_z()) < 1e-16);
    }
    CHECK(renormalized_freq_q({1.0, 1.0, 0.0}, 9) == 1.0);
}

TEST_CASE("normal-ordered operator Bessel series equals the Laguerre closed form") {
    ModelParams zero{1.0, 1.0, 0.0};
    CHECK(diff(h_q_bessel_series_element(2, 0, 0.3, zero, SeriesCutoffs{}).full(), 0.5 * spin::sigma_z()) == 0.0);

    ModelParams p{1.0, 1.0, 0.2};  // chi = 0.4
    const auto e = h_q_bessel_series_element(3, 0, 0.0, p, SeriesCutoffs{});
    const auto closed = h_q_transformed_element(3, 0, p);
    CHECK(diff(e.full(), closed.full() - 3.0 * p.omega0 * SpinBlock::Identity()) < 1e-10);

    const double chi = p.chi();
    const double mod = 0.5 * std::exp(-chi * chi / 2.0) * std::pow(chi, 3) * oracle::sqrt_factorial_ratio_exact(2, 3) *
                       std::abs(oracle::laguerre_sum(2, 3, chi * chi));
    CHECK(h_q_bessel_series_element(2, 3, 1.234, p, SeriesCutoffs{}).spin.cwiseAbs().maxCoeff() ==
          doctest::Approx(mod).epsilon(1e-10));

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> nd(0, 20);
    std::uniform_int_distribution<int> kd(0, 6);
    std::uniform_real_distribution<double> chid(0.0, 0.8);
    std::uniform_real_distribution<double> td(0.0, 2.0 * pi);
    for (int i = 0; i < 40; ++i) {
        ModelParams q{1.0, 1.0, 0.5 * chid(rng)};
        const int n = nd(rng);
        const int k = kd(rng);
        const double time = td(rng);
        const auto series = h_q_bessel_series_element(n, k, time, q, SeriesCutoffs{});
        SpinBlock expect = h_q_rot_fock_element(n, k, time, q);
        if (k == 0) expect -= q.lambda * q.lambda / q.omega0 * SpinBlock::Identity();
        INFO("n=" << n << " k=" << k << " chi=" << q.chi());
        CHECK(diff(series.full(), expect) < 1e-10);
    }
}

TEST_CASE("displaced rotating-frame matrix") {
    const Truncation t = Truncation::with_default_guard(100);
    ModelParams p{1.0, 1.2, 0.35};
    const Complex alpha(1.4, -0.9);
    const double time = 0.77;
    const auto hd = h_q_displaced(p, alpha, time, t);
    hd.validate();
    CHECK((h_q_displaced(p, 0.0, time, t).entries - h_q_rotating(p, time, t).entries).cwiseAbs().maxCoeff() == 0.0);

    const Matrix dd = tensor(spin::identity(), displacement_matrix(alpha, t)).entries;
    const Matrix brute = dd.adjoint() * h_q_rotating(p, time, t).entries * dd;
    const int r = 2 * displaced_support_limit(std::abs(alpha), t) + 1;
    CHECK((hd.entries - brute).topLeftCorner(r, r).cwiseAbs().maxCoeff() < 1e-8);

    // field-identity part is h_sc with A = lambda |alpha| and phase = -arg alpha
    const SpinBlock block00 = fock_block(hd.entries, 0, 0, t);
    const DriveParams drive{p.lambda * std::abs(alpha), -std::arg(alpha)};
    CHECK(diff(block00, h_sc(p, drive, time)) < 1e-14);

    ModelParams free{1.0, 1.0, 0.0};
    const Matrix m = h_q_displaced(free, alpha, time, t).entries;
    CHECK((m - tensor(0.5 * spin::sigma_z(), field_identity(t)).entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("displaced-basis closed form against brute-force conjugation") {
    const ModelParams p{1.0, 1.0, 0.15};  // chi = 0.3
    const Complex alpha(2.0, 1.0);
    const Truncation t(80, Truncation::with_default_guard(80).guard_band);
    const oracle::TransformedRotating ht(p, t);
    const double time = 0.7;
    const auto cut = SeriesCutoffs::for_argument(4.0 * p.lambda * std::abs(alpha) / p.omega0, 2);
    const int n = 1;
    const int k = 2;
    const SpinBlock brute =
        ht.block(displaced_fock_state(alpha, n + k, t), displaced_fock_state(alpha, n, t), time);
    const SpinBlock closed = h_q_displaced_bessel_element(n, k, alpha, time, p, cut).full();
    CHECK(diff(closed, brute) < 1e-7);

    // upper triangle by hermitian reflection
    const SpinBlock reflected = h_q_displaced_bessel_element_any(n, n + k, alpha, time, p, cut).full();
    const SpinBlock brute_upper =
        ht.block(displaced_fock_state(alpha, n, t), displaced_fock_state(alpha, n + k, t), time);
    CHECK(diff(reflected, brute_upper) < 1e-7);
}

TEST_CASE("displaced-basis closed form over random tuples") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> nd(0, 20);
    std::uniform_int_distribution<int> kd(0, 6);
    std::uniform_real_distribution<double> chid(0.0, 0.8);
    std::uniform_real_distribution<double> td(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> ad(0.05, 3.0);
    std::uniform_real_distribution<double> phd(-pi, pi);
    for (int i = 0; i < 8; ++i) {
        const ModelParams p{0.7 + 0.1 * i, 1.0, 0.5 * chid(rng)};
        const Complex alpha = std::polar(ad(rng), phd(rng));
        const int n = nd(rng);
        const int k = kd(rng);
        const double time = td(rng);
        const auto t = oracle::truncation(std::abs(alpha) + p.lambda / p.omega0, n + k);
        const oracle::TransformedRotating ht(p, t);
        const auto cut = SeriesCutoffs::for_argument(4.0 * p.lambda * std::abs(alpha) / p.omega0, k);
        const SpinBlock closed = h_q_displaced_bessel_element(n, k, alpha, time, p, cut).full();
        const SpinBlock brute =
            ht.block(displaced_fock_state(alpha, n + k, t), displaced_fock_state(alpha, n, t), time);
        INFO("n=" << n << " k=" << k << " alpha=" << alpha << " lambda=" << p.lambda << " N=" << t.N);
        CHECK(diff(closed, brute) < 1e-7);
    }
}

TEST_CASE("displaced-basis reductions") {
    const ModelParams p{1.0, 1.0, 0.25};
    const SeriesCutoffs cut = SeriesCutoffs::for_argument(0.0, 8);
    for (int n : {0, 2}) {
        for (int k : {0, 1, 3}) {
            SpinBlock fock = h_q_rot_fock_element(n, k, 0.9, p);
            if (k == 0) fock -= p.lambda * p.lambda / p.omega0 * SpinBlock::Identity();
            CHECK(diff(h_q_displaced_bessel_element(n, k, std::polar(1e-8, 0.4), 0.9, p, cut).full(), fock) < 1e-6);
        }
    }

    // hermitian reflection
    const Complex alpha(0.9, 0.6);
    const auto a = h_q_displaced_bessel_element_any(2, 5, alpha, 0.3, p, cut).full();
    const auto b = h_q_displaced_bessel_element_any(5, 2, alpha, 0.3, p, cut).full();
    CHECK(diff(a, b.adjoint()) == 0.0);

    // periodicity
    const double period = 2.0 * pi / p.omega0;
    for (int k : {0, 2}) {
        CHECK(diff(h_q_displaced_bessel_element(3, k, alpha, 0.4, p, cut).full(),
                   h_q_displaced_bessel_element(3, k, alpha, 0.4 + period, p, cut).full()) < 1e-12);
        CHECK(diff(h_q_rot_fock_element(3, k, 0.4, p), h_q_rot_fock_element(3, k, 0.4 + period, p)) < 1e-12);
        CHECK(diff(h_q_bessel_series_element(3, k, 0.4, p, SeriesCutoffs{}).full(),
                   h_q_bessel_series_element(3, k, 0.4 + period, p, SeriesCutoffs{}).full()) < 1e-12);
    }
}

TEST_CASE("precomputed displaced-basis matrix matches the element evaluator") {
    const ModelParams p{1.0, 1.0, 0.2};
    const Complex alpha(1.5, -0.5);
    const auto cut = SeriesCutoffs::for_argument(4.0 * p.lambda * std::abs(alpha), 8);
    const DisplacedBesselHamiltonian h(p, alpha, 8, cut);
    const Matrix m = h.matrix(1.3);
    CHECK(linalg::hermiticity_defect(m) < 1e-15);
    for (int row = 0; row <= 8; ++row) {
        for (int col = 0; col <= 8; ++col) {
            const SpinBlock e = h_q_displaced_bessel_element_any(row, col, alpha, 1.3, p, cut).full();
            CHECK(diff(m.block<2, 2>(2 * row, 2 * col), e) < 1e-14);
        }
    }
}

TEST_CASE("c-number reductions") {
    const ModelParams p{1.0, 1.0, 0.3};
    const SeriesCutoffs cut = SeriesCutoffs::for_argument(4.0 * 0.3 * 2.0);
    const double c = p.lambda * p.lambda / p.omega0;

    const auto zero = h_hyperbolic_sc(p, 0.0, 0.0, 0.8, cut);
    CHECK(diff(zero.full(), -c * SpinBlock::Identity() + 0.5 * spin::sigma_z()) < 1e-16);

    for (double t : {0.0, 0.7, 3.3}) {
        const auto hyp = h_hyperbolic_sc(p, 2.0, 0.0, t, cut);
        const SpinBlock target = h_sc_bessel(p, {p.lambda * 2.0, 0.0}, t, cut) - c * SpinBlock::Identity();
        CHECK(diff(hyp.full(), target) < 1e-12);
        CHECK(diff(hyp.full(), hyp.full().adjoint()) < 1e-12);

        const auto no = h_normal_ordered_sc(p, 2.0, 0.4, t, cut);
        const auto hy = h_hyperbolic_sc(p, 2.0, 0.4, t, cut);
        CHECK(no.scalar == hy.scalar);
        const double factor = std::exp(-0.5 * p.chi() * p.chi());
        CHECK(diff(no.spin, factor * hy.spin) < 1e-12);
    }
}

TEST_CASE("renormalized frequencies converge under lambda = A / sqrt(n)") {
    const double amp = 0.4;
    const double sc = renormalized_freq_sc({1.0, 1.0, 0.0}, {amp, 0.0});
    double prev = INFINITY;
    for (int n : {10, 100, 1000}) {
        const double q = renormalized_freq_q({1.0, 1.0, amp / std::sqrt(static_cast<double>(n))}, n);
        const double gap = std::abs(q - sc);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("spectrum is preserved by the polaron transformation") {
    // low spectrum of the lab-frame matrix vs. the matrix assembled from the
    // closed-form polaron-frame elements, each converged in its own truncation
    const Truncation t = Truncation::with_default_guard(60);
    const ModelParams p{0.9, 1.0, 0.3};
    Eigen::SelfAdjointEigenSolver<Matrix> a(h_q(p, t).entries);

    const int levels = 61;
    Matrix polaron = Matrix::Zero(2 * levels, 2 * levels);
    for (int n = 0; n < levels; ++n) {
        for (int k = 0; n + k < levels; ++k) {
            const SpinBlock e = h_q_transformed_element(n, k, p).full();
            polaron.block<2, 2>(2 * (n + k), 2 * n) = e;
            if (k > 0) polaron.block<2, 2>(2 * n, 2 * (n + k)) = e.adjoint();
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> b(polaron);
    CHECK((a.eigenvalues().head(30) - b.eigenvalues().head(30)).cwiseAbs().maxCoeff() < 1e-8);
}

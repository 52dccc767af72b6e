#include "rabilab/hamiltonians.hpp"

#include <cmath>
#include <string>

#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

namespace rabilab {

void ModelParams::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw PreconditionError("omega0 > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw PreconditionError("lambda >= 0");
    if (!std::isfinite(omega)) throw PreconditionError("omega finite");
}

void DriveParams::validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw PreconditionError("amplitude >= 0");
    if (!std::isfinite(phase)) throw PreconditionError("phase finite");
}

namespace ham {

namespace {

double parity(int p) { return (p % 2 == 0) ? 1.0 : -1.0; }

// J_m for any integer m, via J_{-m} = (-1)^m J_m.
double bessel_signed(const std::vector<double>& table, int m) {
    if (m >= 0) return table[static_cast<std::size_t>(m)];
    return parity(m) * table[static_cast<std::size_t>(-m)];
}

std::vector<double> bessel_table(int max_order, double z) {
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
    for (int m = 0; m <= max_order; ++m) out[static_cast<std::size_t>(m)] = specfun::bessel_j(m, z);
    return out;
}

// sigma_z (-sigma_x)^p
SpinBlock sz_minus_sx_pow(int p) {
    if (p % 2 == 0) return spin::sigma_z();
    return -spin::sigma_z() * spin::sigma_x();
}

// sigma_z sigma_x^k
SpinBlock sz_sx_pow(int k) {
    if (k % 2 == 0) return spin::sigma_z();
    return spin::sigma_z() * spin::sigma_x();
}

void check_bessel_tail(int first_dropped_order, double z, const SeriesCutoffs& cutoffs, const char* who) {
    if (first_dropped_order < 0) {
        throw CutoffInsufficient(std::string(who) + ": p_max below the harmonic order required");
    }
    // sum over the dropped orders of both signs is bounded by twice the
    // first bound when (z/2)/(p+1) <= 1/2
    const double bound = specfun::bessel_tail_bound(first_dropped_order, z);
    const bool geometric = std::abs(z) / 2.0 <= 0.5 * (first_dropped_order + 1);
    if (!geometric || 4.0 * bound > cutoffs.tail_tolerance) {
        throw CutoffInsufficient(std::string(who) + ": Bessel tail bound " + std::to_string(bound) +
                                 " at order " + std::to_string(first_dropped_order) + " exceeds tolerance");
    }
}

// (Omega/2) sigma_z sum over harmonics with phase e^{i p (w t + phi)}.
SpinBlock semiclassical_bessel_sum(double omega, double z, double angle, const SeriesCutoffs& cutoffs) {
    const auto table = bessel_table(cutoffs.p_max, z);
    SpinBlock out = spin::sigma_z() * table[0];
    for (int p = 1; p <= cutoffs.p_max; ++p) {
        const Complex harmonic = std::polar(1.0, p * angle) + parity(p) * std::polar(1.0, -p * angle);
        out += sz_minus_sx_pow(p) * (table[static_cast<std::size_t>(p)] * harmonic);
    }
    return 0.5 * omega * out;
}

// <n_out| a^dag^c a^d |n_in>
double normal_ordered_monomial(int n_out, int n_in, int c, int d) {
    if (d > n_in || n_out != n_in - d + c) return 0.0;
    const int mid = n_in - d;
    return std::exp(0.5 * (std::lgamma(n_in + 1.0) + std::lgamma(n_out + 1.0)) - std::lgamma(mid + 1.0));
}

}  // namespace

void SeriesCutoffs::validate() const {
    if (p_max < 1) throw PreconditionError("SeriesCutoffs: p_max >= 1");
    if (l_max < 0) throw PreconditionError("SeriesCutoffs: l_max >= 0");
    if (!(tail_tolerance > 0.0)) throw PreconditionError("SeriesCutoffs: tail_tolerance > 0");
}

SeriesCutoffs SeriesCutoffs::for_argument(double z, int extra_orders) {
    SeriesCutoffs c;
    c.p_max = static_cast<int>(std::ceil(std::abs(z))) + 25 + std::max(0, extra_orders);
    return c;
}

SpinBlock h_sc(const ModelParams& params, const DriveParams& drive, double t) {
    return 0.5 * params.omega * spin::sigma_z() +
           2.0 * drive.amplitude * std::cos(params.omega0 * t + drive.phase) * spin::sigma_x();
}

SpinBlock u_sc(const DriveParams& drive, const ModelParams& params, double t) {
    // exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x
    const double theta = 2.0 * drive.amplitude / params.omega0 * std::sin(params.omega0 * t + drive.phase);
    return std::cos(theta) * spin::identity() - Complex(0.0, std::sin(theta)) * spin::sigma_x();
}

SpinBlock h_sc_bessel(const ModelParams& params, const DriveParams& drive, double t, const SeriesCutoffs& cutoffs) {
    cutoffs.validate();
    const double z = 4.0 * drive.amplitude / params.omega0;
    check_bessel_tail(cutoffs.p_max + 1, z, cutoffs, "h_sc_bessel");
    return semiclassical_bessel_sum(params.omega, z, params.omega0 * t + drive.phase, cutoffs);
}

double renormalized_freq_sc(const ModelParams& params, const DriveParams& drive) {
    return params.omega * specfun::bessel_j(0, 4.0 * drive.amplitude / params.omega0);
}

TruncatedOperator h_q(const ModelParams& params, const Truncation& trunc) {
    const auto [a, ad] = ladder_operators(trunc);
    Matrix m = tensor(spin::identity(), number_operator(trunc)).entries * params.omega0;
    m += tensor(0.5 * params.omega * spin::sigma_z(), field_identity(trunc)).entries;
    m += tensor(params.lambda * spin::sigma_x(), FieldOperator{trunc, ad.entries + a.entries}).entries;
    return {trunc, std::move(m), true};
}

TruncatedOperator h_q_rotating(const ModelParams& params, double t, const Truncation& trunc) {
    const auto [a, ad] = ladder_operators(trunc);
    const Complex up = std::polar(1.0, params.omega0 * t);
    Matrix m = tensor(0.5 * params.omega * spin::sigma_z(), field_identity(trunc)).entries;
    m += tensor(params.lambda * spin::sigma_x(), FieldOperator{trunc, up * ad.entries + std::conj(up) * a.entries})
             .entries;
    return {trunc, std::move(m), true};
}

TruncatedOperator h_q_displaced(const ModelParams& params, Complex alpha, double t, const Truncation& trunc) {
    if (std::norm(alpha) > trunc.N / 4.0) {
        throw TruncationTooSmall("h_q_displaced: |alpha|^2 exceeds N/4");
    }
    auto out = h_q_rotating(params, t, trunc);
    const Complex up = std::polar(1.0, params.omega0 * t);
    const double classical = 2.0 * (std::conj(alpha) * up).real();  // e^{iwt} a* + e^{-iwt} a
    out.entries += tensor(params.lambda * classical * spin::sigma_x(), field_identity(trunc)).entries;
    return out;
}

BlockElement h_q_transformed_element(int n, int k, const ModelParams& params) {
    if (n < 0 || k < 0) throw PreconditionError("h_q_transformed_element: n >= 0, k >= 0");
    BlockElement e;
    if (k == 0) e.scalar = n * params.omega0 - params.lambda * params.lambda / params.omega0;
    const double chi = params.chi();
    const double c = 0.5 * params.omega * parity(k) * specfun::scaled_laguerre(n, k, chi * chi);
    e.spin = c * sz_sx_pow(k);
    return e;
}

SpinBlock h_q_rot_fock_element(int n, int k, double t, const ModelParams& params) {
    if (n < 0 || k < 0) throw PreconditionError("h_q_rot_fock_element: n >= 0, k >= 0");
    const double chi = params.chi();
    const double c = 0.5 * params.omega * parity(k) * specfun::scaled_laguerre(n, k, chi * chi);
    return (c * std::polar(1.0, k * params.omega0 * t)) * sz_sx_pow(k);
}

double renormalized_freq_q(const ModelParams& params, int n) {
    if (n < 0) throw PreconditionError("renormalized_freq_q: n >= 0");
    const double chi = params.chi();
    return params.omega * specfun::scaled_laguerre(n, 0, chi * chi);
}

BlockElement h_q_bessel_series_element(int n, int k, double t, const ModelParams& params,
                                       const SeriesCutoffs& cutoffs) {
    if (n < 0 || k < 0) throw PreconditionError("h_q_bessel_series_element: n >= 0, k >= 0");
    cutoffs.validate();
    if (cutoffs.p_max < k) {
        throw CutoffInsufficient("h_q_bessel_series_element: p_max < k drops the only contributing harmonic");
    }
    const double chi = params.chi();
    const double w = params.omega0;
    const int row = n + k;

    BlockElement e;
    if (k == 0) e.scalar = -params.lambda * params.lambda / w;
    if (chi == 0.0) {
        if (k == 0) e.spin = 0.5 * params.omega * spin::sigma_z();
        return e;
    }
    const double log_chi = std::log(chi);

    // term_l of harmonic p, coefficient (-1)^l chi^{2l+p} / (l! (l+p)!)
    auto coefficient = [&](int l, int p) {
        return parity(l) * std::exp((2 * l + p) * log_chi - std::lgamma(l + 1.0) - std::lgamma(l + p + 1.0));
    };

    for (int p = 0; p <= cutoffs.p_max; ++p) {
        Complex harmonic_sum = 0.0;
        const Complex up = std::polar(1.0, p * w * t);
        double last = 0.0;
        for (int l = 0; l <= cutoffs.l_max; ++l) {
            const double c = coefficient(l, p);
            Complex term = 0.0;
            if (p == 0) {
                term = c * normal_ordered_monomial(row, n, l, l);
            } else {
                term = c * (up * normal_ordered_monomial(row, n, l + p, l) +
                            parity(p) * std::conj(up) * normal_ordered_monomial(row, n, l, l + p));
            }
            harmonic_sum += term;
            last = std::abs(term);
        }
        // a^l |n> vanishes for l > n, so the series is finite; a cutoff below n
        // is only acceptable if the dropped terms are negligible
        if (cutoffs.l_max < n && last > 1e-15 * std::max(std::abs(harmonic_sum), 1e-300)) {
            throw CutoffInsufficient("h_q_bessel_series_element: l_max below n with a non-negligible tail");
        }
        if (harmonic_sum != Complex(0.0)) e.spin += sz_minus_sx_pow(p) * harmonic_sum;
    }
    e.spin *= 0.5 * params.omega * std::exp(-0.5 * chi * chi);
    return e;
}

BlockElement h_q_displaced_bessel_element(int n, int k, Complex alpha, double t, const ModelParams& params,
                                          const SeriesCutoffs& cutoffs) {
    if (n < 0 || k < 0) throw PreconditionError("h_q_displaced_bessel_element: n >= 0, k >= 0");
    if (alpha == Complex(0.0)) {
        throw AlphaZero("h_q_displaced_bessel_element: alpha = 0; use h_q_rot_fock_element");
    }
    cutoffs.validate();
    const double mag = std::abs(alpha);
    const double z = 4.0 * params.lambda * mag / params.omega0;
    check_bessel_tail(cutoffs.p_max + 1 - k, z, cutoffs, "h_q_displaced_bessel_element");

    const auto table = bessel_table(cutoffs.p_max + k, z);
    const double arg = std::arg(alpha);  // alpha/|alpha| = e^{i arg}
    const double wt = params.omega0 * t;

    SpinBlock brace = spin::sigma_z() * (std::polar(1.0, k * arg) * table[static_cast<std::size_t>(k)]);
    for (int p = 1; p <= cutoffs.p_max; ++p) {
        // (-1)^k e^{ipwt} (alpha*/|alpha|)^{p-k} J_{p-k} + (-1)^p e^{-ipwt} (alpha/|alpha|)^{p+k} J_{p+k}
        const Complex first = parity(k) * std::polar(1.0, p * wt - (p - k) * arg) * bessel_signed(table, p - k);
        const Complex second = parity(p) * std::polar(1.0, -p * wt + (p + k) * arg) * bessel_signed(table, p + k);
        brace += sz_minus_sx_pow(p) * (first + second);
    }

    const double chi = params.chi();
    BlockElement e;
    if (k == 0) e.scalar = -params.lambda * params.lambda / params.omega0;
    e.spin = (0.5 * params.omega * parity(k) * specfun::scaled_laguerre(n, k, chi * chi)) * brace;
    return e;
}

BlockElement h_q_displaced_bessel_element_any(int row, int col, Complex alpha, double t, const ModelParams& params,
                                              const SeriesCutoffs& cutoffs) {
    if (row >= col) return h_q_displaced_bessel_element(col, row - col, alpha, t, params, cutoffs);
    auto e = h_q_displaced_bessel_element(row, col - row, alpha, t, params, cutoffs);
    e.spin = e.spin.adjoint().eval();
    return e;
}

BlockElement h_hyperbolic_sc(const ModelParams& params, double alpha_mag, double phi, double t,
                             const SeriesCutoffs& cutoffs) {
    cutoffs.validate();
    const double z = 4.0 * params.lambda * alpha_mag / params.omega0;
    check_bessel_tail(cutoffs.p_max + 1, z, cutoffs, "h_hyperbolic_sc");
    BlockElement e;
    e.scalar = -params.lambda * params.lambda / params.omega0;
    e.spin = semiclassical_bessel_sum(params.omega, z, params.omega0 * t + phi, cutoffs);
    return e;
}

BlockElement h_normal_ordered_sc(const ModelParams& params, double alpha_mag, double phi, double t,
                                 const SeriesCutoffs& cutoffs) {
    auto e = h_hyperbolic_sc(params, alpha_mag, phi, t, cutoffs);
    const double chi = params.chi();
    e.spin *= std::exp(-0.5 * chi * chi);
    return e;
}

DisplacedBesselHamiltonian::DisplacedBesselHamiltonian(const ModelParams& params, Complex alpha, int max_level,
                                                       const SeriesCutoffs& cutoffs)
    : params_(params), max_level_(max_level), p_max_(cutoffs.p_max) {
    if (alpha == Complex(0.0)) throw AlphaZero("DisplacedBesselHamiltonian: alpha = 0");
    if (max_level < 0) throw PreconditionError("DisplacedBesselHamiltonian: max_level >= 0");
    cutoffs.validate();
    phase_ = alpha / std::abs(alpha);
    const double z = 4.0 * params.lambda * std::abs(alpha) / params.omega0;
    check_bessel_tail(p_max_ + 1 - max_level, z, cutoffs, "DisplacedBesselHamiltonian");
    bessel_ = bessel_table(p_max_ + max_level, z);

    const double chi = params.chi();
    coeff_.resize(static_cast<std::size_t>(max_level) + 1);
    for (int k = 0; k <= max_level; ++k) {
        auto seq = specfun::scaled_laguerre_sequence(max_level - k, k, chi * chi);
        for (auto& v : seq) v *= 0.5 * params.omega * parity(k);
        coeff_[static_cast<std::size_t>(k)] = std::move(seq);
    }
}

SpinBlock DisplacedBesselHamiltonian::brace(int k, double t) const {
    const double arg = std::arg(phase_);
    const double wt = params_.omega0 * t;
    SpinBlock even = SpinBlock::Zero();
    Complex even_sum = std::polar(1.0, k * arg) * bessel_[static_cast<std::size_t>(k)];
    Complex odd_sum = 0.0;
    for (int p = 1; p <= p_max_; ++p) {
        const Complex first = parity(k) * std::polar(1.0, p * wt - (p - k) * arg) * bessel_signed(bessel_, p - k);
        const Complex second = parity(p) * std::polar(1.0, -p * wt + (p + k) * arg) * bessel_signed(bessel_, p + k);
        if (p % 2 == 0) {
            even_sum += first + second;
        } else {
            odd_sum += first + second;
        }
    }
    even = spin::sigma_z() * even_sum;
    return even - (spin::sigma_z() * spin::sigma_x()) * odd_sum;
}

Matrix DisplacedBesselHamiltonian::matrix(double t) const {
    const int levels = max_level_ + 1;
    Matrix h = Matrix::Zero(2 * levels, 2 * levels);
    const double constant = -params_.lambda * params_.lambda / params_.omega0;
    for (int k = 0; k < levels; ++k) {
        const SpinBlock b = brace(k, t);
        const auto& c = coeff_[static_cast<std::size_t>(k)];
        for (int n = 0; n + k < levels; ++n) {
            SpinBlock block = c[static_cast<std::size_t>(n)] * b;
            if (k == 0) block += constant * SpinBlock::Identity();
            h.block<2, 2>(2 * (n + k), 2 * n) = block;
            if (k > 0) h.block<2, 2>(2 * n, 2 * (n + k)) = block.adjoint();
        }
    }
    return h;
}

}  // namespace ham
}  // namespace rabilab

#include "rabilab/fockspace.hpp"

#include <cmath>
#include <string>

#include "rabilab/errors.hpp"
#include "rabilab/specfun.hpp"

namespace rabilab {

Truncation::Truncation(int n, int guard) : N(n), guard_band(guard) {
    if (N < 1) throw PreconditionError("Truncation: N >= 1");
    if (guard_band < 0 || guard_band >= N) throw PreconditionError("Truncation: 0 <= guard_band < N");
}

Truncation Truncation::with_default_guard(int n) {
    if (n < 1) throw PreconditionError("Truncation: N >= 1");
    const int guard = static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(n))));
    return Truncation(n, std::min(guard, n - 1));
}

void TruncatedOperator::validate() const {
    if (entries.rows() != trunc.dim() || entries.cols() != trunc.dim()) {
        throw DimensionMismatch("TruncatedOperator: entries must be " + std::to_string(trunc.dim()) + " square");
    }
    if (hermitian) {
        const double scale = std::max(linalg::max_abs(entries), 1e-300);
        if (linalg::hermiticity_defect(entries) > 1e-12 * scale) {
            throw PreconditionError("TruncatedOperator: Hermitian-flagged operator is not Hermitian");
        }
    }
}

namespace spin {

Matrix2 identity() { return Matrix2::Identity(); }

Matrix2 sigma_x() {
    Matrix2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix2 sigma_y() {
    Matrix2 m;
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix2 sigma_z() {
    Matrix2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix2 projector_x(int sign) { return 0.5 * (identity() + static_cast<double>(sign) * sigma_x()); }

}  // namespace spin

LadderPair ladder_operators(const Truncation& trunc) {
    const int dim = trunc.field_dim();
    Matrix lower = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix raise = lower.adjoint();
    return {FieldOperator{trunc, std::move(lower)}, FieldOperator{trunc, std::move(raise)}};
}

FieldOperator number_operator(const Truncation& trunc) {
    const int dim = trunc.field_dim();
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
    return {trunc, std::move(m)};
}

FieldOperator field_identity(const Truncation& trunc) {
    return {trunc, Matrix::Identity(trunc.field_dim(), trunc.field_dim())};
}

FieldOperator displacement_matrix(Complex beta, const Truncation& trunc) {
    const double x = std::norm(beta);
    if (x > trunc.N / 4.0) {
        throw TruncationTooSmall("displacement_matrix: |beta|^2 = " + std::to_string(x) + " exceeds N/4 = " +
                                 std::to_string(trunc.N / 4.0));
    }
    const int dim = trunc.field_dim();
    const double arg = std::arg(beta);
    Matrix d = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        // <n+k|D|n> = e^{ik arg b} g(n,k);  <n|D|n+k> = (-1)^k e^{-ik arg b} g(n,k)
        const auto g = specfun::scaled_laguerre_sequence(trunc.N - k, k, x);
        const Complex below = std::polar(1.0, k * arg);
        const Complex above = (k % 2 == 0 ? 1.0 : -1.0) * std::conj(below);
        for (int n = 0; n + k < dim; ++n) {
            const double gnk = g[static_cast<std::size_t>(n)];
            d(n + k, n) = below * gnk;
            if (k > 0) d(n, n + k) = above * gnk;
        }
    }
    return {trunc, std::move(d)};
}

Vector displaced_fock_state(Complex beta, int n, const Truncation& trunc) {
    if (n < 0 || n > trunc.N) throw PreconditionError("displaced_fock_state: 0 <= n <= N");
    const double x = std::norm(beta);
    const double arg = std::arg(beta);
    const int dim = trunc.field_dim();
    Vector v = Vector::Zero(dim);
    for (int m = 0; m < dim; ++m) {
        if (m >= n) {
            const int k = m - n;
            v(m) = std::polar(1.0, k * arg) * specfun::scaled_laguerre(n, k, x);
        } else {
            const int k = n - m;
            v(m) = (k % 2 == 0 ? 1.0 : -1.0) * std::polar(1.0, -k * arg) * specfun::scaled_laguerre(m, k, x);
        }
    }
    return v;
}

int displaced_support_limit(double beta_mag, const Truncation& trunc) {
    const double room = std::sqrt(static_cast<double>(trunc.N)) - std::abs(beta_mag) - 6.0;
    if (room < 1.0) return -1;
    return std::min(trunc.N, static_cast<int>(std::floor((room * room - 1.0) / 2.0)));
}

Truncation truncation_for_displacement(double beta_mag, int n_max) {
    const double edge = std::abs(beta_mag) + std::sqrt(2.0 * n_max + 1.0) + 6.0;
    int n = static_cast<int>(std::ceil(edge * edge));
    n = std::max(n, static_cast<int>(std::ceil(4.0 * beta_mag * beta_mag)));
    return Truncation::with_default_guard(n);
}

TruncatedOperator tensor(const Matrix2& spin_part, const FieldOperator& field) {
    const Eigen::Index fdim = field.entries.rows();
    if (field.entries.cols() != fdim || fdim != field.trunc.field_dim()) {
        throw DimensionMismatch("tensor: field operator dimension inconsistent with truncation");
    }
    Matrix out(2 * fdim, 2 * fdim);
    for (Eigen::Index n = 0; n < fdim; ++n) {
        for (Eigen::Index m = 0; m < fdim; ++m) {
            const Complex f = field.entries(n, m);
            out(2 * n, 2 * m) = spin_part(0, 0) * f;
            out(2 * n, 2 * m + 1) = spin_part(0, 1) * f;
            out(2 * n + 1, 2 * m) = spin_part(1, 0) * f;
            out(2 * n + 1, 2 * m + 1) = spin_part(1, 1) * f;
        }
    }
    return {field.trunc, std::move(out), false};
}

TruncatedOperator spin_displacement(const ModelParams& params, const Truncation& trunc, int sign, double phase) {
    if (sign != 1 && sign != -1) throw PreconditionError("spin_displacement: sign must be +1 or -1");
    const Complex shift = std::polar(sign * params.lambda / params.omega0, phase);
    const auto plus = tensor(spin::projector_x(+1), displacement_matrix(-shift, trunc));
    const auto minus = tensor(spin::projector_x(-1), displacement_matrix(shift, trunc));
    return {trunc, plus.entries + minus.entries, false};
}

QuadratureVariances quadrature_dispersion(const DisplacedFockLabel& label, const Truncation& trunc) {
    if (label.n < 0) throw PreconditionError("quadrature_dispersion: n >= 0");
    if (std::norm(label.alpha) > trunc.N / 4.0 || displaced_support_limit(std::abs(label.alpha), trunc) < label.n) {
        throw TruncationTooSmall("quadrature_dispersion: displaced state not supported by truncation N = " +
                                 std::to_string(trunc.N));
    }
    const Vector psi = displaced_fock_state(label.alpha, label.n, trunc);
    const auto [a, ad] = ladder_operators(trunc);
    const double s = 1.0 / std::sqrt(2.0);
    const Matrix x = s * (a.entries + ad.entries);
    const Matrix p = Complex(0.0, s) * (ad.entries - a.entries);

    auto variance = [&](const Matrix& op) {
        const Vector op_psi = op * psi;
        const double mean = psi.dot(op_psi).real();
        const double second = op_psi.squaredNorm();
        return second - mean * mean;
    };
    return {variance(x), variance(p)};
}

Vector product_state(const Vector& field, const Eigen::Vector2cd& spin_state) {
    Vector out(2 * field.size());
    for (Eigen::Index n = 0; n < field.size(); ++n) {
        out(2 * n) = field(n) * spin_state(0);
        out(2 * n + 1) = field(n) * spin_state(1);
    }
    return out;
}

}  // namespace rabilab

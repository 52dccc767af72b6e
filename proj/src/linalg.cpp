#include "rabilab/linalg.hpp"

#include <array>
#include <cmath>

namespace rabilab::linalg {

namespace {

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients b_0..b_13 (Higham 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// theta_m from the same reference: the largest 1-norm for which the order-m
// approximant is accurate to double precision without scaling.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

Matrix pade_low(const Matrix& a, int m) {
    static const std::array<std::array<double, 10>, 4> coeffs = {{
        {120.0, 60.0, 12.0, 1.0},
        {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0},
        {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0},
        {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0,
         1.0},
    }};
    const auto& b = coeffs[static_cast<std::size_t>((m - 3) / 2)];
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix power = ident;
    Matrix u_even = b[1] * ident;
    Matrix v = b[0] * ident;
    for (int j = 2; j <= m; j += 2) {
        power = power * a2;
        u_even += b[static_cast<std::size_t>(j + 1)] * power;
        v += b[static_cast<std::size_t>(j)] * power;
    }
    const Matrix u = a * u_even;
    return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
    const auto& b = kPade13;
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Matrix expm(const Matrix& a) {
    const double norm = one_norm(a);
    if (norm <= kTheta3) return pade_low(a, 3);
    if (norm <= kTheta5) return pade_low(a, 5);
    if (norm <= kTheta7) return pade_low(a, 7);
    if (norm <= kTheta9) return pade_low(a, 9);

    int squarings = 0;
    if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    const Matrix scaled = a / std::ldexp(1.0, squarings);
    Matrix result = pade13(scaled);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

Vector expm_multiply(const Matrix& a, const Vector& v, double tol) {
    const double norm = one_norm(a);
    const int pieces = std::max(1, static_cast<int>(std::ceil(norm)));
    const Matrix scaled = a / static_cast<double>(pieces);
    Vector out = v;
    for (int s = 0; s < pieces; ++s) {
        Vector term = out;
        Vector sum = out;
        const double base = sum.norm();
        for (int j = 1; j <= 60; ++j) {
            term = scaled * term / static_cast<double>(j);
            sum += term;
            if (term.norm() <= tol * base) break;
        }
        out = std::move(sum);
    }
    return out;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Matrix& a) { return max_abs(a - a.adjoint()); }

double fidelity(const Vector& u, const Vector& v) { return std::norm(u.dot(v)); }

}  // namespace rabilab::linalg

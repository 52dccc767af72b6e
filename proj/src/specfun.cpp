#include "rabilab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rabilab/errors.hpp"

namespace rabilab::specfun {

namespace {

constexpr double kMaxOrder = 1e4;
constexpr double kMaxArgument = 1e4;

int parity_sign(int p) { return (p % 2 == 0) ? 1 : -1; }

void check_domain(int p, double z) {
    if (!std::isfinite(z) || std::abs(z) > kMaxArgument || std::abs(static_cast<double>(p)) > kMaxOrder) {
        throw DomainError("bessel_j: argument out of supported domain (p=" + std::to_string(p) +
                          ", z=" + std::to_string(z) + ")");
    }
}

// Series for p >= 0, z >= 0 in long double.
long double series_nonneg(int p, long double z, const SeriesControl& control) {
    const long double half = z / 2.0L;
    // first term (z/2)^p / p!, built in log space to survive large p
    long double log_first = p * std::log(half) - std::lgamma(static_cast<long double>(p) + 1.0L);
    if (log_first < -11000.0L) return 0.0L;
    long double term = std::exp(log_first);
    long double sum = term;
    const long double q = half * half;
    int small_run = 0;
    for (int m = 1; m <= control.max_terms; ++m) {
        term *= -q / (static_cast<long double>(m) * static_cast<long double>(m + p));
        sum += term;
        if (std::abs(term) < control.tail_tolerance * std::abs(sum)) {
            if (++small_run == 3) return sum;
        } else {
            small_run = 0;
        }
    }
    if (sum == 0.0L) return sum;
    throw SeriesNotConverged("bessel_j: series tail bound not met within max_terms");
}

// Miller downward recurrence for p >= 0, z > 0.
long double miller_nonneg(int p, long double z) {
    const double scale = std::max(static_cast<double>(p), static_cast<double>(z));
    int start = static_cast<int>(scale) + 30 + static_cast<int>(std::ceil(std::sqrt(200.0 * scale)));
    if (start % 2 != 0) ++start;

    long double next = 0.0L;     // J_{k+1}
    long double current = 1e-300L;  // J_k at k = start
    long double norm = 0.0L;
    long double at_p = 0.0L;
    for (int k = start; k > 0; --k) {
        const long double prev = (2.0L * k / z) * current - next;  // J_{k-1}
        next = current;
        current = prev;
        if (k - 1 == p) at_p = current;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * current;
        if (std::abs(current) > 1e3000L) {
            current *= 1e-3000L;
            next *= 1e-3000L;
            norm *= 1e-3000L;
            at_p *= 1e-3000L;
        }
    }
    norm += current;  // J_0
    return at_p / norm;
}

}  // namespace

void SeriesControl::validate() const {
    if (max_terms < 1) throw PreconditionError("SeriesControl: max_terms >= 1");
    if (!(tail_tolerance > 0.0)) throw PreconditionError("SeriesControl: tail_tolerance > 0");
}

double bessel_j_series(int p, double z, const SeriesControl& control) {
    control.validate();
    if (p < 0) return parity_sign(p) * bessel_j_series(-p, z, control);
    if (z < 0.0) return parity_sign(p) * bessel_j_series(p, -z, control);
    if (z == 0.0) return p == 0 ? 1.0 : 0.0;
    return static_cast<double>(series_nonneg(p, z, control));
}

double bessel_j(int p, double z, const SeriesControl& control) {
    check_domain(p, z);
    control.validate();
    if (p < 0) return parity_sign(p) * bessel_j(-p, z, control);
    if (z < 0.0) return parity_sign(p) * bessel_j(p, -z, control);
    if (z == 0.0) return p == 0 ? 1.0 : 0.0;

    // The series terms decrease monotonically from the first one when
    // (z/2)^2 < p + 1, so there is no cancellation to speak of.
    const double half = z / 2.0;
    if (half * half < static_cast<double>(p + 1) || z <= 2.0) {
        return static_cast<double>(series_nonneg(p, z, control));
    }
    return static_cast<double>(miller_nonneg(p, z));
}

double laguerre(int n, int k, double x) {
    if (n < 0 || k < 0) throw PreconditionError("laguerre: n >= 0 and k >= 0");
    if (n == 0) return 1.0;
    if (x == 0.0) return binomial(n + k, n);

    const long double xl = x;
    long double prev = 1.0L;                  // L_0
    long double curr = 1.0L + k - xl;         // L_1
    for (int m = 1; m < n; ++m) {
        // (m+1) L_{m+1} = (2m+1+k-x) L_m - (m+k) L_{m-1}
        const long double a = static_cast<long double>(2 * m + 1 + k) - xl;
        const long double next = std::fma(a, curr, -static_cast<long double>(m + k) * prev) / (m + 1);
        prev = curr;
        curr = next;
    }
    return static_cast<double>(curr);
}

std::vector<double> scaled_laguerre_sequence(int n_max, int k, double x) {
    if (n_max < 0 || k < 0) throw PreconditionError("scaled_laguerre: n >= 0 and k >= 0");
    if (x < 0.0) throw PreconditionError("scaled_laguerre: x >= 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        if (k == 0) std::fill(out.begin(), out.end(), 1.0);
        return out;
    }

    // g_m = e^{-x/2} x^{k/2} sqrt(m!/(m+k)!) L_m^k(x) obeys
    // sqrt((m+1)(m+k+1)) g_{m+1} = (2m+1+k-x) g_m - sqrt(m(m+k)) g_{m-1}.
    const long double xl = x;
    const long double log_g0 =
        -xl / 2.0L + 0.5L * k * std::log(xl) - 0.5L * std::lgamma(static_cast<long double>(k) + 1.0L);
    long double prev = 0.0L;
    long double curr = std::exp(log_g0);
    out[0] = static_cast<double>(curr);
    for (int m = 0; m < n_max; ++m) {
        const long double a = static_cast<long double>(2 * m + 1 + k) - xl;
        const long double b = std::sqrt(static_cast<long double>(m) * static_cast<long double>(m + k));
        const long double c = std::sqrt(static_cast<long double>(m + 1) * static_cast<long double>(m + k + 1));
        const long double next = std::fma(a, curr, -b * prev) / c;
        prev = curr;
        curr = next;
        out[static_cast<std::size_t>(m) + 1] = static_cast<double>(curr);
    }
    return out;
}

double scaled_laguerre(int n, int k, double x) {
    if (n < 0) throw PreconditionError("scaled_laguerre: n >= 0 and k >= 0");
    return scaled_laguerre_sequence(n, k, x).back();
}

double log_sqrt_factorial_ratio(int n, int k) {
    if (n < 0 || k < 0) throw PreconditionError("sqrt_factorial_ratio: n >= 0 and k >= 0");
    long double acc = 0.0L;
    for (int j = 1; j <= k; ++j) acc += std::log(static_cast<long double>(n) + j);
    return static_cast<double>(-0.5L * acc);
}

double sqrt_factorial_ratio(int n, int k) {
    if (n < 0 || k < 0) throw PreconditionError("sqrt_factorial_ratio: n >= 0 and k >= 0");
    long double acc = 0.0L;
    for (int j = 1; j <= k; ++j) acc += std::log(static_cast<long double>(n) + j);
    return static_cast<double>(std::exp(-0.5L * acc));
}

double binomial(int n_plus_k, int n) {
    if (n < 0 || n > n_plus_k) return 0.0;
    const long double log_c = std::lgamma(static_cast<long double>(n_plus_k) + 1.0L) -
                              std::lgamma(static_cast<long double>(n) + 1.0L) -
                              std::lgamma(static_cast<long double>(n_plus_k - n) + 1.0L);
    const double c = static_cast<double>(std::exp(log_c));
    return c < 9007199254740992.0 ? std::round(c) : c;
}

std::complex<double> jacobi_anger(double z, double theta, int p_max) {
    if (p_max < 0) throw PreconditionError("jacobi_anger: p_max >= 0");
    std::complex<double> sum = bessel_j(0, z);
    for (int p = 1; p <= p_max; ++p) {
        const double jp = bessel_j(p, z);
        const double jm = parity_sign(p) * jp;
        sum += jp * std::polar(1.0, p * theta) + jm * std::polar(1.0, -p * theta);
    }
    return sum;
}

double bessel_tail_bound(int p, double z) {
    if (p < 0) p = -p;
    const double az = std::abs(z);
    if (az == 0.0) return p == 0 ? 1.0 : 0.0;
    return std::exp(p * std::log(az / 2.0) - std::lgamma(p + 1.0));
}

AsymptoticComparison laguerre_bessel_asymptotic(int n, int p, double x, AsymptoticVariant variant) {
    if (n < 1 || p < 0 || !(x > 0.0)) {
        throw PreconditionError("laguerre_bessel_asymptotic: n >= 1, p >= 0, x > 0");
    }
    const double nd = n;
    const double lhs = std::pow(nd, -p) * laguerre(n, p, x / nd);
    double rhs = 0.0;
    if (variant == AsymptoticVariant::plain) {
        rhs = std::pow(x, -0.5 * p) * bessel_j(p, 2.0 * std::sqrt(x));
    } else {
        const double y = x / nd;
        const double big_n = nd + (p + 1) / 2.0;
        // (n+p)!/n! = 1 / sqrt_factorial_ratio(n, p)^2
        const double ratio = std::exp(-2.0 * log_sqrt_factorial_ratio(n, p));
        rhs = std::pow(nd, -p) * std::exp(y / 2.0) * std::pow(y, -0.5 * p) * std::pow(big_n, -0.5 * p) * ratio *
              bessel_j(p, 2.0 * std::sqrt(big_n * y));
    }
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace rabilab::specfun

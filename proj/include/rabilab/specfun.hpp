#pragma once

// Special functions for the Rabi matrix elements: integer-order Bessel
// functions of the first kind, associated Laguerre polynomials, factorial
// ratios, the Jacobi-Anger sum and the Laguerre -> Bessel asymptotics.
//
// Every function here is pure and thread-safe.

#include <complex>
#include <vector>

namespace rabilab::specfun {

/// Truncation control for power series.  A series is accepted once three
/// consecutive terms are below tail_tolerance relative to the partial sum.
struct SeriesControl {
    int max_terms = 500;
    double tail_tolerance = 1e-17;

    /// Throws PreconditionError unless max_terms >= 1 and tail_tolerance > 0.
    void validate() const;
};

/// J_p(z) for integer order p (negative allowed) and real z.
///
/// Uses the power series while its terms decrease from the start, and
/// Miller's downward recurrence normalised by J_0 + 2 sum J_2k = 1 otherwise.
/// Both paths run in extended precision.  Throws DomainError when |z| or |p|
/// exceed 1e4, and SeriesNotConverged if the series misses its tail bound.
double bessel_j(int p, double z, const SeriesControl& control = {});

/// The power series of J_p(z) alone, for any p >= 0.  Loses relative accuracy
/// once (z/2)^2 is much larger than p + 1; exposed for diagnostics.
double bessel_j_series(int p, double z, const SeriesControl& control = {});

/// Associated Laguerre polynomial L_n^k(x), n, k >= 0, by upward three-term
/// recurrence in n in extended precision.  L_n^k(0) = C(n+k, n).
double laguerre(int n, int k, double x);

/// exp(-x/2) x^(k/2) sqrt(n!/(n+k)!) L_n^k(x) for x >= 0.
///
/// This is the displacement matrix element <n+k|D(b)|n> with x = |b|^2,
/// stripped of its phase e^{ik arg b}.  Evaluated by the normalised recurrence, so it stays finite for
/// large n and k where the unnormalised factors would over/underflow.
double scaled_laguerre(int n, int k, double x);

/// scaled_laguerre(n, k, x) for n = 0..n_max in one recurrence pass.
std::vector<double> scaled_laguerre_sequence(int n_max, int k, double x);

/// sqrt(n!/(n+k)!) computed from a log-space sum.
double sqrt_factorial_ratio(int n, int k);

/// log sqrt(n!/(n+k)!).
double log_sqrt_factorial_ratio(int n, int k);

/// Binomial coefficient C(n+k, n) as a double, exact while representable.
double binomial(int n_plus_k, int n);

/// Partial Jacobi-Anger sum  sum_{p=-p_max}^{p_max} J_p(z) e^{i p theta}.
std::complex<double> jacobi_anger(double z, double theta, int p_max);

/// Upper bound on |J_p(z)| for p >= 0: (|z|/2)^p / p!.
double bessel_tail_bound(int p, double z);

enum class AsymptoticVariant { plain, szego };

struct AsymptoticComparison {
    double lhs;
    double rhs;
    double abs_err;
};

/// Finite-n comparison of n^-p L_n^p(x/n) with its Bessel asymptote.
///
/// plain:  rhs = x^(-p/2) J_p(2 sqrt(x)).
/// szego:  rhs = n^-p e^{x/2n} (x/n)^(-p/2) N^(-p/2) (n+p)!/n! J_p(2 sqrt(N x/n))
///         with N = n + (p+1)/2.
AsymptoticComparison laguerre_bessel_asymptotic(int n, int p, double x, AsymptoticVariant variant);

}  // namespace rabilab::specfun

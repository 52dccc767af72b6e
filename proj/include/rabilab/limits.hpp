#pragma once

// Numerical execution of the semiclassical limit: lambda -> 0 and |alpha| -> oo
// with A = lambda |alpha| held fixed.  Three routes are measured:
//
//   semiclassical_sweep          displaced-Fock matrix elements
//   fock_limit_check             plain Fock elements with lambda = A / sqrt(n)
//   transformation_limit_check   the polaron operator itself
//
// and diagram_commutes compares "transform then take the limit" against
// "take the limit then transform".

#include <map>
#include <ostream>
#include <vector>

#include "rabilab/csv.hpp"
#include "rabilab/fockspace.hpp"
#include "rabilab/hamiltonians.hpp"
#include "rabilab/params.hpp"
#include "rabilab/specfun.hpp"

namespace rabilab::limits {

struct ProbeLevel {
    int n = 0;
    int k = 0;
};

struct SweepConfig {
    double amplitude_fixed = 0.5;              // A = lambda |alpha|
    std::vector<double> lambda_sequence;       // strictly decreasing, > 0
    std::vector<ProbeLevel> probe_levels;      // k = 0 entries feed the diagonal residual
    std::vector<double> time_samples;
    ham::SeriesCutoffs cutoffs;
    double alpha_phase = 0.0;                  // arg alpha; the drive phase is -alpha_phase

    /// Throws PreconditionError naming the violated invariant.
    void validate() const;
};

struct SweepRow {
    double lambda = 0.0;
    double alpha_mag = 0.0;
    double offdiag_norm = 0.0;
    double diag_residual = 0.0;
    std::map<int, double> offdiag_by_k;  // max element modulus per photon order k >= 1
};

struct ConvergenceReport {
    std::vector<SweepRow> rows;             // decreasing lambda
    std::map<int, double> fitted_exponents; // k -> log-log slope of offdiag vs lambda

    /// Columns lambda, alpha_mag, offdiag_norm, diag_residual.
    void write_csv(std::ostream& out, const csv::HeaderLines& header) const;
};

/// For each lambda: offdiag_norm is the largest entry modulus of the
/// displaced-basis element over probe (n, k >= 1) and time samples;
/// diag_residual is the largest entry modulus of element(n, 0) - h_sc_bessel(A).
/// The residual keeps the constant -lambda^2/omega0 of the element.  Sweep
/// points run concurrently; rows come back in input order.  A = 0 uses the
/// plain Fock elements.  Exponents are fitted over the three smallest lambda
/// values for every probed k >= 1 (omitted when the fit is degenerate).
ConvergenceReport semiclassical_sweep(const SweepConfig& config, const ModelParams& params);

/// Log-log slope of max_t |<alpha, n+k| H~ |alpha, n>| against lambda, with
/// A = params.lambda * |alpha| and the phase of alpha held fixed.  Least
/// squares over the three smallest lambda values.  Throws DegenerateFit if a
/// magnitude underflows or fewer than two points are usable.
double offdiag_scaling_exponent(const ModelParams& params, Complex alpha, int n, int k,
                                const std::vector<double>& lambda_sequence,
                                const std::vector<double>& time_samples = {});

/// Magnitude of the element at a fixed set of times.
double offdiag_magnitude(const ModelParams& params, Complex alpha, int n, int k, const std::vector<double>& time_samples,
                         const ham::SeriesCutoffs& cutoffs);

/// Least-squares slope of log y against log x.  Throws DegenerateFit on
/// non-positive data or fewer than two points.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct FockLimitRow {
    int n = 0;
    double lambda = 0.0;
    double element_value = 0.0;
    double bessel_target = 0.0;
    double abs_err = 0.0;
};

/// |h_q_rot_fock_element(n, k)| with lambda = A / sqrt(n) (plain) or
/// lambda = A / sqrt(n + (k+1)/2) (szego) against (Omega/2) |J_k(4A/omega0)|.
std::vector<FockLimitRow> fock_limit_check(const ModelParams& params, double amplitude, int k,
                                           const std::vector<int>& n_sequence, specfun::AsymptoticVariant variant);

struct TransformLimitRow {
    double lambda = 0.0;
    double alpha_mag = 0.0;
    int truncation = 0;
    double deviation = 0.0;
};

struct TransformLimitConfig {
    double amplitude = 0.3;
    std::vector<double> lambda_sequence;
    std::vector<double> time_samples;
    double alpha_phase = 0.0;
    /// Deviation is measured on displaced levels 0..probe_levels.
    int probe_levels = 10;

    void validate() const;
};

/// max over t of || D^dag(alpha) D~(t) D(alpha) - u_sc(t) (x) I ||_max on the
/// displaced levels 0..probe_levels, D~(t) the rotating-frame polaron
/// operator.  The truncation grows with |alpha|: N >= 4|alpha|^2 + 8|alpha|.
std::vector<TransformLimitRow> transformation_limit_check(const ModelParams& params,
                                                          const TransformLimitConfig& config);

/// <+-x, n| D~(t) |+-x, n> for the sigma_x eigenstates.  The rotating phase
/// only enters off the diagonal, so there is no time argument.
double polaron_diagonal_element(const ModelParams& params, int sign, int n);

struct DiagramResult {
    ham::SpinBlock path1;  // diagonal displaced-basis element at lambda_small
    ham::SpinBlock path2;  // h_sc_bessel at A
    double deviation = 0.0;
};

/// Both routes around the transformation/limit square at one time and one
/// displaced level.  A = 0 uses the plain Fock element for path1.
DiagramResult diagram_commutes(const ModelParams& params, double amplitude, double lambda_small, double t,
                               const ham::SeriesCutoffs& cutoffs, int level = 0, double alpha_phase = 0.0);

}  // namespace rabilab::limits

#pragma once

// Every representation of the semiclassical and quantum Rabi Hamiltonians:
//
//   lab frame              h_sc, h_q
//   polaron frame          h_q_transformed_element (Fock basis)
//   polaron + rotating     h_q_rot_fock_element, h_q_bessel_series_element,
//                          h_q_displaced_bessel_element (displaced basis)
//   rotating + displaced   h_q_displaced
//   semiclassical frame    u_sc, h_sc_bessel
//   c-number reductions    h_hyperbolic_sc, h_normal_ordered_sc
//
// "Rotating" always means the interaction picture with respect to
// omega0 a^dag a, so a -> a e^{-i omega0 t}.  The constant -lambda^2/omega0 of
// the polaron frame is carried as the scalar part of a BlockElement.

#include <vector>

#include "rabilab/fockspace.hpp"
#include "rabilab/linalg.hpp"
#include "rabilab/params.hpp"

namespace rabilab::ham {

using SpinBlock = Matrix2;

/// Harmonic cutoff p_max for the Bessel sums and normal-ordering cutoff
/// l_max for the operator series.
struct SeriesCutoffs {
    int p_max = 30;
    int l_max = 200;
    /// Dropped-tail tolerance for the bound |J_p(z)| <= (z/2)^p / p!.
    double tail_tolerance = 1e-12;

    void validate() const;

    /// p_max = ceil(z) + 25 + extra_orders.
    static SeriesCutoffs for_argument(double z, int extra_orders = 0);
};

/// scalar * I + spin.
struct BlockElement {
    double scalar = 0.0;
    SpinBlock spin = SpinBlock::Zero();

    SpinBlock full() const { return scalar * SpinBlock::Identity() + spin; }
};

// --- semiclassical -------------------------------------------------------

/// (Omega/2) sigma_z + 2A sigma_x cos(omega0 t + phase).
SpinBlock h_sc(const ModelParams& params, const DriveParams& drive, double t);

/// exp[-i (2A/omega0) sigma_x sin(omega0 t + phase)], the Omega = 0 propagator
/// (up to the constant frame offset at t = 0 when phase != 0).
SpinBlock u_sc(const DriveParams& drive, const ModelParams& params, double t);

/// The semiclassical Hamiltonian in the u_sc frame, expanded in J_p(4A/omega0).
/// Throws CutoffInsufficient if the dropped harmonics exceed the tolerance.
SpinBlock h_sc_bessel(const ModelParams& params, const DriveParams& drive, double t, const SeriesCutoffs& cutoffs);

/// Omega J_0(4A/omega0).
double renormalized_freq_sc(const ModelParams& params, const DriveParams& drive);

// --- quantum, explicit matrices -------------------------------------------

/// omega0 a^dag a + (Omega/2) sigma_z + lambda sigma_x (a^dag + a).
TruncatedOperator h_q(const ModelParams& params, const Truncation& trunc);

/// Rotating-frame quantum Hamiltonian
/// (Omega/2) sigma_z + lambda sigma_x (e^{i omega0 t} a^dag + e^{-i omega0 t} a).
TruncatedOperator h_q_rotating(const ModelParams& params, double t, const Truncation& trunc);

/// D^dag(alpha) h_q_rotating(t) D(alpha) in closed form:
/// (Omega/2) sigma_z + lambda sigma_x (e^{i w t} alpha* + e^{-i w t} alpha) + lambda sigma_x (e^{i w t} a^dag + e^{-i w t} a).
/// Throws TruncationTooSmall if |alpha|^2 > N/4.
TruncatedOperator h_q_displaced(const ModelParams& params, Complex alpha, double t, const Truncation& trunc);

// --- quantum, closed-form matrix elements ---------------------------------

/// <n+k| D^dag h_q D |n> in the polaron frame, k >= 0:
/// scalar = (n omega0 - lambda^2/omega0) delta_k0, spin = (Omega/2) e^{-chi^2/2} (-chi)^k
/// sqrt(n!/(n+k)!) L_n^k(chi^2) sigma_z sigma_x^k.
BlockElement h_q_transformed_element(int n, int k, const ModelParams& params);

/// The spin part of h_q_transformed_element in the rotating frame, which
/// picks up the phase e^{i k omega0 t}.
SpinBlock h_q_rot_fock_element(int n, int k, double t, const ModelParams& params);

/// Omega e^{-chi^2/2} L_n(chi^2).
double renormalized_freq_q(const ModelParams& params, int n);

/// <n+k| H~_q(t) |n> by direct summation of the normal-ordered operator-Bessel
/// series, harmonic by harmonic (p <= p_max) and power by power (l <= l_max).
/// Includes the constant -lambda^2/omega0 at k = 0.
BlockElement h_q_bessel_series_element(int n, int k, double t, const ModelParams& params,
                                       const SeriesCutoffs& cutoffs);

/// <alpha, n+k| H~_q(t) |alpha, n> for k >= 0 in the displaced Fock basis.
/// Throws AlphaZero for alpha == 0 (use h_q_rot_fock_element instead) and
/// CutoffInsufficient if p_max leaves a Bessel tail above tolerance.
BlockElement h_q_displaced_bessel_element(int n, int k, Complex alpha, double t, const ModelParams& params,
                                          const SeriesCutoffs& cutoffs);

/// Element for any sign of k: k < 0 is obtained from the k > 0 element of the
/// transposed pair by Hermitian reflection.
BlockElement h_q_displaced_bessel_element_any(int row, int col, Complex alpha, double t, const ModelParams& params,
                                              const SeriesCutoffs& cutoffs);

// --- c-number reductions --------------------------------------------------

/// Spin-rotation (cosh/sinh) form with a -> alpha, alpha = |alpha| e^{-i phi}:
/// -lambda^2/omega0 + (Omega/2) sigma_z J_0(z) + (Omega/2) sigma_z sum_p (-sigma_x)^p J_p(z)
/// [e^{ip phi} e^{ip w t} + (-1)^p e^{-ip phi} e^{-ip w t}],  z = 4 lambda |alpha| / omega0.
BlockElement h_hyperbolic_sc(const ModelParams& params, double alpha_mag, double phi, double t,
                             const SeriesCutoffs& cutoffs);

/// The normal-ordered operator-Bessel form with a -> alpha.  Identical to
/// h_hyperbolic_sc except that every Omega term carries e^{-chi^2/2}.
BlockElement h_normal_ordered_sc(const ModelParams& params, double alpha_mag, double phi, double t,
                                 const SeriesCutoffs& cutoffs);

/// Precomputed displaced-basis Hamiltonian on levels 0..max_level, for repeated
/// evaluation at many times.  matrix(t) is 2(max_level+1) square in the
/// spin-fastest order; its (n+k, n) blocks equal h_q_displaced_bessel_element.
class DisplacedBesselHamiltonian {
public:
    DisplacedBesselHamiltonian(const ModelParams& params, Complex alpha, int max_level, const SeriesCutoffs& cutoffs);

    Matrix matrix(double t) const;
    int max_level() const { return max_level_; }

private:
    SpinBlock brace(int k, double t) const;

    ModelParams params_;
    Complex phase_;  // alpha / |alpha|
    int max_level_;
    int p_max_;
    std::vector<double> bessel_;              // J_m(z), m = 0..p_max + max_level
    std::vector<std::vector<double>> coeff_;  // coeff_[k][n] = (Omega/2)(-1)^k scaled_laguerre(n, k, chi^2)
};

}  // namespace rabilab::ham

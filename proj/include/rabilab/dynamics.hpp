#pragma once

// Time evolution and the quantum/semiclassical comparison.
//
// Frames used for the quantum model (U_f = exp(i omega0 t a^dag a),
// D = spin_displacement, D(alpha) the plain field displacement):
//
//   lab        psi
//   rotating   U_f psi
//   displaced  c = D(alpha)^dag U_f D^dag psi, evolved by the displaced-basis
//              Bessel Hamiltonian on a finite set of levels.

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rabilab/csv.hpp"
#include "rabilab/fockspace.hpp"
#include "rabilab/hamiltonians.hpp"
#include "rabilab/params.hpp"

namespace rabilab::dyn {

struct PropagationConfig {
    double t_end = 10.0;
    double dt_initial = 0.01;
    double norm_tolerance = 1e-10;
    int max_step_halvings = 4;
    /// Observables are recorded on the uniform grid 0, dt_out, 2 dt_out, ...
    double sample_interval = 0.1;

    /// dt_initial > 0, norm_tolerance in (0, 1e-4], t_end > 0, sample_interval > 0.
    void validate() const;
};

/// H(t) on a fixed dimension.  time_independent lets the stepper reuse one
/// step exponential.
struct HamiltonianProvider {
    int dim = 0;
    std::function<Matrix(double)> at;
    bool time_independent = false;
};

/// Layout of the state vector, which decides which observables are recorded.
enum class StateLayout { spin_only, spin_field };

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    /// sigma_x, sigma_z, norm for every layout; photon_number for spin_field.
    std::map<std::string, std::vector<double>> observables;
    double dt_used = 0.0;

    const std::vector<double>& series(const std::string& name) const;

    /// Columns t, the named observables, then re/im of the first
    /// amplitude_count amplitudes.
    void write_csv(std::ostream& out, const csv::HeaderLines& header, int amplitude_count = 0) const;
};

/// Fixed-step fourth-order commutator-free Magnus stepping:
///   psi <- exp(-i dt (a1 H1 + a2 H2)) exp(-i dt (a2 H1 + a1 H2)) psi,
/// H1, H2 at the two Gauss nodes, a1,2 = (3 -+ 2 sqrt3)/12.  Each exponential is
/// unitary to rounding, so the norm check guards the exponential itself.  If
/// the norm drifts past norm_tolerance the run restarts with half the step,
/// at most max_step_halvings times, then throws StepLimitExceeded.
Trajectory propagate(const HamiltonianProvider& h, const Vector& psi0, const PropagationConfig& config,
                     StateLayout layout);

/// H'(s) = -H(t_end - s): propagating a final state with it runs time backwards.
HamiltonianProvider reversed(const HamiltonianProvider& h, double t_end);

// --- providers ------------------------------------------------------------

HamiltonianProvider constant_provider(const Matrix& h);
HamiltonianProvider semiclassical_provider(const ModelParams& params, const DriveParams& drive);
HamiltonianProvider lab_provider(const ModelParams& params, const Truncation& trunc);
HamiltonianProvider rotating_provider(const ModelParams& params, const Truncation& trunc);
/// The displaced-basis Bessel Hamiltonian on levels 0..levels-1.
HamiltonianProvider displaced_provider(const ModelParams& params, Complex alpha, int levels,
                                       const ham::SeriesCutoffs& cutoffs);

// --- frames ---------------------------------------------------------------

/// N = ceil(|alpha|^2 + 8 sqrt(|alpha|^2 + 1) + 20).
Truncation coherent_truncation(double alpha_mag);

/// |alpha> (x) spin in the spin-fastest layout.
Vector coherent_product_state(Complex alpha, const Eigen::Vector2cd& spin_state, const Truncation& trunc);

/// U_f(t)^dag applied to a rotating-frame state.
Vector rotating_to_lab(const Vector& psi_rot, double omega0, double t);

/// Lab state D U_f(t)^dag D(alpha) c for displaced-basis coefficients c.
Vector displaced_to_lab(const Vector& c, const ModelParams& params, Complex alpha, double t, const Truncation& trunc);

/// c = D(alpha)^dag U_f(t) D^dag psi on levels 0..levels-1 (a projection).
Vector lab_to_displaced(const Vector& psi, const ModelParams& params, Complex alpha, double t, const Truncation& trunc,
                        int levels);

/// Exact lab-frame state at time t for Omega = 0 from |alpha> (x) spin: each
/// sigma_x branch s = +-1 carries the coherent state that rotates about -s lambda/omega0.
Vector omega_zero_state(const ModelParams& params, Complex alpha, const Eigen::Vector2cd& spin_state, double t,
                        const Truncation& trunc);

/// Evolves the displaced-basis coefficients from c0 (dimension 2 levels).
Trajectory displaced_coefficient_dynamics(const ModelParams& params, Complex alpha, const Vector& c0,
                                          const PropagationConfig& config, const ham::SeriesCutoffs& cutoffs);

/// Same, starting from |alpha, n0> (x) spin in the displaced frame.
Trajectory displaced_coefficient_dynamics(const ModelParams& params, Complex alpha, int n0,
                                          const Eigen::Vector2cd& spin_state, int levels,
                                          const PropagationConfig& config, const ham::SeriesCutoffs& cutoffs);

/// sum_s |c_{n, s}|^2 along a displaced-coefficient trajectory.
std::vector<double> level_population(const Trajectory& traj, int n);

/// First sample time at which 1 - population(n0) exceeds threshold, or -1 if never.
double leakage_crossing_time(const Trajectory& traj, int n0, double threshold);

// --- comparison -----------------------------------------------------------

struct Comparison {
    Trajectory quantum;
    Trajectory semiclassical;
    double max_inversion_gap = 0.0;
    Truncation trunc;
};

/// Lab-frame quantum run from |alpha> (x) spin against the semiclassical run
/// with A = lambda |alpha| and phase -arg alpha, both from the same spin state.
/// The truncation comes from coherent_truncation unless n_override > 0.
Comparison compare_quantum_semiclassical(const ModelParams& params, Complex alpha, const Eigen::Vector2cd& spin_state,
                                         const PropagationConfig& config, int n_override = 0);

/// Half the peak-to-peak spread of series over the samples with t in [t0, t1].
double envelope(const std::vector<double>& times, const std::vector<double>& series, double t0, double t1);

}  // namespace rabilab::dyn

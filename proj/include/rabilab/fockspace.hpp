#pragma once

// Truncated boson and spin-1/2 operator algebra.
//
// Basis convention for the spin (x) field space: index = 2 n + s, spin index
// fastest, s = 0 <-> +z and s = 1 <-> -z.  Field-only operators live on the
// (N+1)-dimensional Fock space {|0>, ..., |N>}.

#include "rabilab/linalg.hpp"
#include "rabilab/params.hpp"

namespace rabilab {

/// Fock-space cutoff.  Levels above reliable() are corrupted by truncation
/// and are excluded from every matrix-element comparison.
struct Truncation {
    int N = 1;
    int guard_band = 0;

    Truncation() = default;
    Truncation(int n, int guard);

    /// guard_band = min(ceil(4 sqrt(N)), N - 1).
    static Truncation with_default_guard(int n);

    int field_dim() const { return N + 1; }
    int dim() const { return 2 * (N + 1); }
    int reliable() const { return N - guard_band; }
};

/// Operator on the field alone, (N+1) x (N+1).
struct FieldOperator {
    Truncation trunc;
    Matrix entries;
};

/// Operator on spin (x) field, 2(N+1) x 2(N+1) in the spin-fastest order.
struct TruncatedOperator {
    Truncation trunc;
    Matrix entries;
    bool hermitian = false;

    /// Throws DimensionMismatch unless entries is dim x dim, and
    /// PreconditionError if a Hermitian-flagged instance is not Hermitian to
    /// 1e-12 relative.
    void validate() const;
};

/// |alpha, n> = D(alpha)|n>.
struct DisplacedFockLabel {
    Complex alpha;
    int n = 0;
};

namespace spin {
Matrix2 identity();
Matrix2 sigma_x();
Matrix2 sigma_y();
Matrix2 sigma_z();
/// Projector onto the sigma_x eigenstate with eigenvalue sign (+1 or -1).
Matrix2 projector_x(int sign);
}  // namespace spin

struct LadderPair {
    FieldOperator lower;
    FieldOperator raise;
};

LadderPair ladder_operators(const Truncation& trunc);

FieldOperator number_operator(const Truncation& trunc);

FieldOperator field_identity(const Truncation& trunc);

/// <m|D(beta)|n> from the closed Laguerre form.
///
/// Throws TruncationTooSmall if |beta|^2 > N/4.
FieldOperator displacement_matrix(Complex beta, const Truncation& trunc);

/// Column n of D(beta): the displaced Fock state |beta, n> truncated to the
/// first N+1 levels.  No truncation check; callers size N themselves.
Vector displaced_fock_state(Complex beta, int n, const Truncation& trunc);

/// Largest level n whose displaced state D(beta)|n> is contained in the
/// truncation to well below double precision, i.e. the largest n with
/// (|beta| + sqrt(2n+1) + 6)^2 <= N.  Returns -1 if even n = 0 fails.
int displaced_support_limit(double beta_mag, const Truncation& trunc);

/// Smallest N for which levels 0..n_max displaced by |beta| are supported,
/// with the default guard band.
Truncation truncation_for_displacement(double beta_mag, int n_max);

/// entries[(2n+s),(2m+t)] = spin[s,t] field[n,m].
TruncatedOperator tensor(const Matrix2& spin_part, const FieldOperator& field);

/// D(-sign (lambda/omega0) sigma_x) = P_+ (x) D(-sign lambda/omega0) + P_- (x) D(+sign lambda/omega0).
///
/// sign = -1 gives the inverse transformation.  A nonzero phase rotates the
/// field displacement, beta -> beta e^{i phase}; the rotating-frame operator at
/// time t uses phase = omega0 t.  Throws TruncationTooSmall if
/// (lambda/omega0)^2 > N/4.
TruncatedOperator spin_displacement(const ModelParams& params, const Truncation& trunc, int sign = +1,
                                    double phase = 0.0);

/// Quadrature variances of D(alpha)|n>, with x = (a + a^dag)/sqrt2 and
/// p = i(a^dag - a)/sqrt2, evaluated numerically in the truncated space.
struct QuadratureVariances {
    double var_x;
    double var_p;
};

QuadratureVariances quadrature_dispersion(const DisplacedFockLabel& label, const Truncation& trunc);

/// Embed a field state as field (x) spin state.
Vector product_state(const Vector& field, const Eigen::Vector2cd& spin_state);

}  // namespace rabilab

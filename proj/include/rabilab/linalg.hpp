#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rabilab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

namespace linalg {

/// Dense matrix exponential, Pade(13) with scaling and squaring.
Matrix expm(const Matrix& a);

/// exp(a) v without forming exp(a): truncated Taylor series applied to the
/// vector, with the argument split into s pieces so each has 1-norm <= 1.
/// Terms are summed until they fall below tol relative to the partial sum.
Vector expm_multiply(const Matrix& a, const Vector& v, double tol = 1e-16);

/// Largest entry modulus.
double max_abs(const Matrix& a);

/// max |A - A^dagger|.
double hermiticity_defect(const Matrix& a);

/// |<u|v>|^2 for normalised states.
double fidelity(const Vector& u, const Vector& v);

}  // namespace linalg
}  // namespace rabilab

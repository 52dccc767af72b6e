#include "rabilab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "rabilab/errors.hpp"

namespace rabilab::dyn {

namespace {

// Commutator-free Magnus weights at the Gauss nodes 1/2 -+ sqrt3/6.
const double node1 = 0.5 - std::sqrt(3.0) / 6.0;
const double node2 = 0.5 + std::sqrt(3.0) / 6.0;
const double weight_a = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double weight_b = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

// Above this dimension the exponential is applied to the vector by a Taylor
// series instead of being formed.
constexpr int dense_expm_limit = 16;

Vector apply_exp(const Matrix& generator, const Vector& v) {
    if (generator.rows() <= dense_expm_limit) return linalg::expm(generator) * v;
    return linalg::expm_multiply(generator, v);
}

void record(Trajectory& traj, double t, const Vector& psi, StateLayout layout) {
    double sx = 0.0;
    double sz = 0.0;
    double photons = 0.0;
    const Eigen::Index levels = psi.size() / 2;
    for (Eigen::Index n = 0; n < levels; ++n) {
        const Complex up = psi(2 * n);
        const Complex down = psi(2 * n + 1);
        sx += 2.0 * (std::conj(up) * down).real();
        sz += std::norm(up) - std::norm(down);
        photons += static_cast<double>(n) * (std::norm(up) + std::norm(down));
    }
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.observables["sigma_x"].push_back(sx);
    traj.observables["sigma_z"].push_back(sz);
    traj.observables["norm"].push_back(psi.norm());
    if (layout == StateLayout::spin_field) traj.observables["photon_number"].push_back(photons);
}

struct NormDrift {};

Trajectory run(const HamiltonianProvider& h, const Vector& psi0, const PropagationConfig& config, StateLayout layout,
               int halvings) {
    const int samples = std::max(1, static_cast<int>(std::ceil(config.t_end / config.sample_interval - 1e-9)));
    const double interval = config.t_end / samples;
    const int per_sample =
        std::max(1, static_cast<int>(std::ceil(interval / config.dt_initial - 1e-9))) * (1 << halvings);
    const double dt = interval / per_sample;
    const Complex minus_i_dt(0.0, -dt);

    Matrix step;
    if (h.time_independent) step = linalg::expm(minus_i_dt * h.at(0.0));

    Trajectory traj;
    traj.dt_used = dt;
    Vector psi = psi0;
    record(traj, 0.0, psi, layout);
    for (int s = 0; s < samples; ++s) {
        for (int j = 0; j < per_sample; ++j) {
            const double t = (static_cast<double>(s) * per_sample + j) * dt;
            if (h.time_independent) {
                psi = step * psi;
            } else {
                const Matrix h1 = h.at(t + node1 * dt);
                const Matrix h2 = h.at(t + node2 * dt);
                psi = apply_exp(minus_i_dt * (weight_b * h1 + weight_a * h2), psi);
                psi = apply_exp(minus_i_dt * (weight_a * h1 + weight_b * h2), psi);
            }
            if (std::abs(psi.norm() - 1.0) > config.norm_tolerance) throw NormDrift{};
        }
        record(traj, (s + 1) * interval, psi, layout);
    }
    return traj;
}

}  // namespace

void PropagationConfig::validate() const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw PreconditionError("PropagationConfig: t_end > 0");
    if (!(dt_initial > 0.0)) throw PreconditionError("PropagationConfig: dt_initial > 0");
    if (!(norm_tolerance > 0.0) || norm_tolerance > 1e-4) {
        throw PreconditionError("PropagationConfig: norm_tolerance in (0, 1e-4]");
    }
    if (max_step_halvings < 0) throw PreconditionError("PropagationConfig: max_step_halvings >= 0");
    if (!(sample_interval > 0.0)) throw PreconditionError("PropagationConfig: sample_interval > 0");
}

const std::vector<double>& Trajectory::series(const std::string& name) const {
    const auto it = observables.find(name);
    if (it == observables.end()) throw PreconditionError("Trajectory: no observable named " + name);
    return it->second;
}

void Trajectory::write_csv(std::ostream& out, const csv::HeaderLines& header, int amplitude_count) const {
    std::vector<std::string> columns{"t"};
    for (const auto& [name, values] : observables) columns.push_back(name);
    const int amps = states.empty() ? 0 : std::min<int>(amplitude_count, static_cast<int>(states.front().size()));
    for (int i = 0; i < amps; ++i) {
        columns.push_back("re_c" + std::to_string(i));
        columns.push_back("im_c" + std::to_string(i));
    }
    csv::Writer w(out, header, columns);
    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<double> row{times[j]};
        for (const auto& [name, values] : observables) row.push_back(values[j]);
        for (int i = 0; i < amps; ++i) {
            row.push_back(states[j](i).real());
            row.push_back(states[j](i).imag());
        }
        w.row(row);
    }
}

Trajectory propagate(const HamiltonianProvider& h, const Vector& psi0, const PropagationConfig& config,
                     StateLayout layout) {
    config.validate();
    if (h.dim <= 0 || psi0.size() != h.dim || h.dim % 2 != 0) {
        throw DimensionMismatch("propagate: state dimension must equal the (even) Hamiltonian dimension");
    }
    if (layout == StateLayout::spin_only && h.dim != 2) {
        throw DimensionMismatch("propagate: spin_only layout requires dimension 2");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw PreconditionError("propagate: psi0 normalized within 1e-10");

    for (int halvings = 0; halvings <= config.max_step_halvings; ++halvings) {
        try {
            return run(h, psi0, config, layout, halvings);
        } catch (const NormDrift&) {
            // retry with a smaller step
        }
    }
    throw StepLimitExceeded("propagate: norm drift above " + std::to_string(config.norm_tolerance) + " after " +
                            std::to_string(config.max_step_halvings) + " step halvings");
}

HamiltonianProvider reversed(const HamiltonianProvider& h, double t_end) {
    auto at = h.at;
    return {h.dim, [at, t_end](double s) -> Matrix { return -at(t_end - s); }, h.time_independent};
}

HamiltonianProvider constant_provider(const Matrix& h) {
    return {static_cast<int>(h.rows()), [h](double) { return h; }, true};
}

HamiltonianProvider semiclassical_provider(const ModelParams& params, const DriveParams& drive) {
    params.validate();
    drive.validate();
    return {2, [params, drive](double t) -> Matrix { return ham::h_sc(params, drive, t); }, false};
}

HamiltonianProvider lab_provider(const ModelParams& params, const Truncation& trunc) {
    params.validate();
    return constant_provider(ham::h_q(params, trunc).entries);
}

HamiltonianProvider rotating_provider(const ModelParams& params, const Truncation& trunc) {
    params.validate();
    const auto [a, ad] = ladder_operators(trunc);
    const Matrix h0 = tensor(0.5 * params.omega * spin::sigma_z(), field_identity(trunc)).entries;
    const Matrix v = tensor(params.lambda * spin::sigma_x(), ad).entries;
    const double w = params.omega0;
    if (params.lambda == 0.0) return constant_provider(h0);
    return {trunc.dim(),
            [h0, v, w](double t) -> Matrix {
                const Complex up = std::polar(1.0, w * t);
                return h0 + up * v + std::conj(up) * v.adjoint();
            },
            false};
}

HamiltonianProvider displaced_provider(const ModelParams& params, Complex alpha, int levels,
                                       const ham::SeriesCutoffs& cutoffs) {
    params.validate();
    if (levels < 1) throw PreconditionError("displaced_provider: levels >= 1");
    auto h = std::make_shared<const ham::DisplacedBesselHamiltonian>(params, alpha, levels - 1, cutoffs);
    return {2 * levels, [h](double t) { return h->matrix(t); }, false};
}

Truncation coherent_truncation(double alpha_mag) {
    const double x = alpha_mag * alpha_mag;
    return Truncation::with_default_guard(static_cast<int>(std::ceil(x + 8.0 * std::sqrt(x + 1.0) + 20.0)));
}

Vector coherent_product_state(Complex alpha, const Eigen::Vector2cd& spin_state, const Truncation& trunc) {
    const Vector field = displaced_fock_state(alpha, 0, trunc);
    if (std::abs(field.norm() - 1.0) > 1e-12) {
        throw TruncationTooSmall("coherent_product_state: |alpha| too large for the truncation");
    }
    return product_state(field, spin_state);
}

Vector rotating_to_lab(const Vector& psi_rot, double omega0, double t) {
    Vector out = psi_rot;
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= std::polar(1.0, -omega0 * t * static_cast<double>(i / 2));
    return out;
}

Vector displaced_to_lab(const Vector& c, const ModelParams& params, Complex alpha, double t, const Truncation& trunc) {
    const int levels = static_cast<int>(c.size() / 2);
    Vector chi = Vector::Zero(trunc.dim());
    for (int m = 0; m < levels; ++m) {
        const Vector col = displaced_fock_state(alpha, m, trunc);
        for (int j = 0; j < trunc.field_dim(); ++j) {
            chi(2 * j) += col(j) * c(2 * m);
            chi(2 * j + 1) += col(j) * c(2 * m + 1);
        }
    }
    return spin_displacement(params, trunc).entries * rotating_to_lab(chi, params.omega0, t);
}

Vector lab_to_displaced(const Vector& psi, const ModelParams& params, Complex alpha, double t, const Truncation& trunc,
                        int levels) {
    const Vector chi = rotating_to_lab(spin_displacement(params, trunc).entries.adjoint() * psi, params.omega0, -t);
    Vector c = Vector::Zero(2 * levels);
    for (int m = 0; m < levels; ++m) {
        const Vector col = displaced_fock_state(alpha, m, trunc);
        for (int j = 0; j < trunc.field_dim(); ++j) {
            c(2 * m) += std::conj(col(j)) * chi(2 * j);
            c(2 * m + 1) += std::conj(col(j)) * chi(2 * j + 1);
        }
    }
    return c;
}

Vector omega_zero_state(const ModelParams& params, Complex alpha, const Eigen::Vector2cd& spin_state, double t,
                        const Truncation& trunc) {
    params.validate();
    const double mu = params.lambda / params.omega0;
    const double r = 1.0 / std::sqrt(2.0);
    Vector out = Vector::Zero(trunc.dim());
    for (int sign : {+1, -1}) {
        const Eigen::Vector2cd x_state(r, sign * r);
        const double g = sign * mu;
        // exp(-i H_s t) = e^{i omega0 g^2 t} D(g)^dag e^{-i omega0 t a^dag a} D(g), with D(a)D(b) = e^{i Im(a b*)} D(a+b)
        const Complex shifted = (alpha + g) * std::polar(1.0, -params.omega0 * t);
        const double phase = (g * std::conj(alpha)).imag() + params.omega0 * g * g * t - (g * std::conj(shifted)).imag();
        out += product_state(std::polar(1.0, phase) * x_state.dot(spin_state) *
                                 displaced_fock_state(shifted - g, 0, trunc),
                             x_state);
    }
    return out;
}

Trajectory displaced_coefficient_dynamics(const ModelParams& params, Complex alpha, const Vector& c0,
                                          const PropagationConfig& config, const ham::SeriesCutoffs& cutoffs) {
    if (c0.size() < 2 || c0.size() % 2 != 0) throw DimensionMismatch("displaced_coefficient_dynamics: 2 levels");
    const int levels = static_cast<int>(c0.size() / 2);
    return propagate(displaced_provider(params, alpha, levels, cutoffs), c0, config, StateLayout::spin_field);
}

Trajectory displaced_coefficient_dynamics(const ModelParams& params, Complex alpha, int n0,
                                          const Eigen::Vector2cd& spin_state, int levels,
                                          const PropagationConfig& config, const ham::SeriesCutoffs& cutoffs) {
    if (n0 < 0 || n0 >= levels) throw PreconditionError("displaced_coefficient_dynamics: 0 <= n0 < levels");
    Vector c0 = Vector::Zero(2 * levels);
    c0(2 * n0) = spin_state(0);
    c0(2 * n0 + 1) = spin_state(1);
    return displaced_coefficient_dynamics(params, alpha, c0, config, cutoffs);
}

std::vector<double> level_population(const Trajectory& traj, int n) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& c : traj.states) {
        if (2 * n + 1 >= c.size()) throw PreconditionError("level_population: level outside the state");
        out.push_back(std::norm(c(2 * n)) + std::norm(c(2 * n + 1)));
    }
    return out;
}

double leakage_crossing_time(const Trajectory& traj, int n0, double threshold) {
    const auto pop = level_population(traj, n0);
    for (std::size_t j = 0; j < pop.size(); ++j) {
        if (1.0 - pop[j] > threshold) return traj.times[j];
    }
    return -1.0;
}

Comparison compare_quantum_semiclassical(const ModelParams& params, Complex alpha, const Eigen::Vector2cd& spin_state,
                                         const PropagationConfig& config, int n_override) {
    params.validate();
    Comparison out;
    out.trunc = n_override > 0 ? Truncation::with_default_guard(n_override) : coherent_truncation(std::abs(alpha));
    const Vector psi0 = coherent_product_state(alpha, spin_state, out.trunc);
    out.quantum = propagate(lab_provider(params, out.trunc), psi0, config, StateLayout::spin_field);

    const DriveParams drive{params.lambda * std::abs(alpha), alpha == Complex(0.0) ? 0.0 : -std::arg(alpha)};
    out.semiclassical = propagate(semiclassical_provider(params, drive), spin_state, config, StateLayout::spin_only);

    const auto& q = out.quantum.series("sigma_z");
    const auto& s = out.semiclassical.series("sigma_z");
    for (std::size_t j = 0; j < q.size(); ++j) out.max_inversion_gap = std::max(out.max_inversion_gap, std::abs(q[j] - s[j]));
    return out;
}

double envelope(const std::vector<double>& times, const std::vector<double>& series, double t0, double t1) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] < t0 - 1e-12 || times[j] > t1 + 1e-12) continue;
        lo = std::min(lo, series[j]);
        hi = std::max(hi, series[j]);
    }
    if (!(hi >= lo)) throw PreconditionError("envelope: no samples in the window");
    return 0.5 * (hi - lo);
}

}  // namespace rabilab::dyn

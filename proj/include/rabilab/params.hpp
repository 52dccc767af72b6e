#pragma once

namespace rabilab {

/// Physical parameters of the quantum Rabi model, in angular-frequency units.
struct ModelParams {
    double omega = 1.0;   // two-level splitting
    double omega0 = 1.0;  // field frequency
    double lambda = 0.0;  // spin-field coupling

    /// 2 lambda / omega0.
    double chi() const { return 2.0 * lambda / omega0; }

    /// Throws PreconditionError naming the violated invariant.
    void validate() const;
};

/// Classical drive 2A cos(omega0 t + phase) of the semiclassical model.
struct DriveParams {
    double amplitude = 0.0;
    double phase = 0.0;

    void validate() const;
};

}  // namespace rabilab

#pragma once

namespace motprobe {

struct LaserConfig {
    double detuning_MHz = -12.0;          // red detuning is negative
    double beam_intensity_mW_cm2 = 2.4;   // single beam
    int n_beams = 6;
    double linewidth_MHz = 6.066;         // Gamma / 2pi, Rb D2
    // Calibrated so the default beam yields 6.5e5 photons/s per atom under
    // the single-beam saturation convention.
    double isat_eff_mW_cm2 = 4.08;
    double wavelength_um = 0.780;

    void validate() const;
};

struct FiberSpec {
    double waist_diameter_um = 0.6;
    double interaction_range_um = 0.3;   // sensing shell depth beyond the surface
    double transmission_T = 0.8;         // waist to detector end
    double coupling_eta_f = 0.2;

    double waist_radius_um() const { return 0.5 * waist_diameter_um; }
    void validate() const;
};

struct PhotonBudget {
    double n_eff = 0.0;
    double gamma_sc_per_s = 0.0;
    double eta_f = 0.0;
    double eta_D = 0.0;
    double transmission_T = 0.0;

    void validate() const;
};

// Natural decay rate Gamma = 2 pi * linewidth, in 1/s.
double natural_decay_rate(const LaserConfig& laser);

double saturation_parameter(const LaserConfig& laser);

// Two-level saturated scattering rate per atom:
//   (Gamma/2) s / (1 + s + (2 delta / Gamma)^2)
double scattering_rate(const LaserConfig& laser);

// Detected SPCM count rate N_eff * eta_f * gamma_sc * eta_D * T.
double photon_rate(const PhotonBudget& budget);

// h c / lambda in joules.
double photon_energy(double wavelength_um);

}  // namespace motprobe

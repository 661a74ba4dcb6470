#pragma once

#include <cstdint>

#include "motprobe/rng.hpp"

namespace motprobe {

struct SpcmSpec {
    double quantum_efficiency_eta_D = 0.6;
    double dark_ambient_rate_per_s = 1.5e5;
    double repump_scatter_rate_per_s = 2.0e4;
    double cooling_scatter_rate_per_s = 4.0e4;
    double gate_time_s = 0.1;

    void validate() const;
};

struct PhotodiodeSpec {
    double collection_fraction = 0.01;
    double responsivity_A_per_W = 0.5;
    double load_resistance_ohm = 1.0e6;
    double background_volts = 1.0e-4;

    void validate() const;
};

// Counts in one gate for the given expected rate. Advances rng.
std::uint64_t spcm_sample(double expected_rate_per_s, const SpcmSpec& spec, Rng& rng);

// Counts converted back to a rate.
double spcm_sample_rate(double expected_rate_per_s, const SpcmSpec& spec, Rng& rng);

// Signal voltage from the fluorescence of N atoms, excluding background_volts.
double photodiode_voltage(double atoms, double gamma_sc_per_s, const PhotodiodeSpec& spec,
                          double wavelength_um);

}  // namespace motprobe

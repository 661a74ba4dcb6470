#include "motprobe/detectors.hpp"

#include <cmath>

#include "motprobe/error.hpp"
#include "motprobe/physics.hpp"

namespace motprobe {

void SpcmSpec::validate() const {
    require(std::isfinite(quantum_efficiency_eta_D) && quantum_efficiency_eta_D > 0.0 &&
                quantum_efficiency_eta_D <= 1.0,
            ErrorKind::Validation, "spcm.quantum_efficiency_eta_D must be in (0, 1]");
    for (double r : {dark_ambient_rate_per_s, repump_scatter_rate_per_s,
                     cooling_scatter_rate_per_s}) {
        require(std::isfinite(r) && r >= 0.0, ErrorKind::Validation,
                "spcm background rates must be >= 0");
    }
    require(std::isfinite(gate_time_s) && gate_time_s > 0.0, ErrorKind::Validation,
            "spcm.gate_time_s must be > 0");
}

void PhotodiodeSpec::validate() const {
    require(std::isfinite(collection_fraction) && collection_fraction >= 0.0 &&
                collection_fraction < 1.0,
            ErrorKind::Validation, "photodiode.collection_fraction must be in [0, 1)");
    require(std::isfinite(responsivity_A_per_W) && responsivity_A_per_W >= 0.0,
            ErrorKind::Validation, "photodiode.responsivity_A_per_W must be >= 0");
    require(std::isfinite(load_resistance_ohm) && load_resistance_ohm >= 0.0,
            ErrorKind::Validation, "photodiode.load_resistance_ohm must be >= 0");
    require(std::isfinite(background_volts) && background_volts >= 0.0, ErrorKind::Validation,
            "photodiode.background_volts must be >= 0");
}

std::uint64_t spcm_sample(double expected_rate_per_s, const SpcmSpec& spec, Rng& rng) {
    require(std::isfinite(expected_rate_per_s) && expected_rate_per_s >= 0.0,
            ErrorKind::InvalidRate, "SPCM expected rate must be finite and >= 0");
    return poisson(expected_rate_per_s * spec.gate_time_s, rng);
}

double spcm_sample_rate(double expected_rate_per_s, const SpcmSpec& spec, Rng& rng) {
    return static_cast<double>(spcm_sample(expected_rate_per_s, spec, rng)) / spec.gate_time_s;
}

double photodiode_voltage(double atoms, double gamma_sc_per_s, const PhotodiodeSpec& spec,
                          double wavelength_um) {
    require(std::isfinite(atoms) && atoms >= 0.0, ErrorKind::InvalidInput,
            "atom number must be finite and >= 0");
    const double optical_power_W = atoms * gamma_sc_per_s * photon_energy(wavelength_um) *
                                   spec.collection_fraction;
    return optical_power_W * spec.responsivity_A_per_W * spec.load_resistance_ohm;
}

}  // namespace motprobe

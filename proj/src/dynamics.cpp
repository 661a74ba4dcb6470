#include "motprobe/dynamics.hpp"

#include <cmath>

#include "motprobe/config.hpp"
#include "motprobe/detectors.hpp"
#include "motprobe/error.hpp"
#include "motprobe/rng.hpp"

namespace motprobe {

void TrapDynamics::validate() const {
    require(std::isfinite(capture_rate_R_per_s) && capture_rate_R_per_s >= 0.0,
            ErrorKind::Validation, "dynamics.capture_rate_per_s must be >= 0");
    require(std::isfinite(lifetime_tau_s) && lifetime_tau_s > 0.0, ErrorKind::Validation,
            "dynamics.lifetime_s must be > 0");
    require(std::isfinite(initial_atoms_N0) && initial_atoms_N0 >= 0.0, ErrorKind::Validation,
            "dynamics.initial_atoms must be >= 0");
}

double loading_curve(const TrapDynamics& dyn, double t_s) {
    require(t_s >= 0.0, ErrorKind::InvalidInput, "time must be >= 0");
    const double steady = dyn.capture_rate_R_per_s * dyn.lifetime_tau_s;
    const double decay = std::exp(-t_s / dyn.lifetime_tau_s);
    return steady * (1.0 - decay) + dyn.initial_atoms_N0 * decay;
}

double decay_curve(const TrapDynamics& dyn, double t_s) {
    require(t_s >= 0.0, ErrorKind::InvalidInput, "time must be >= 0");
    return dyn.initial_atoms_N0 * std::exp(-t_s / dyn.lifetime_tau_s);
}

double tnf_visible_signal(double atoms, const RegimeParams& regime, const CloudModel& tmpl,
                          const FiberSpec& fiber) {
    require(std::isfinite(atoms) && atoms >= 0.0, ErrorKind::InvalidInput,
            "atom number must be finite and >= 0");
    if (atoms <= regime.crossover_atoms) {
        return effective_atom_number(cloud_for_atom_number(atoms, regime, tmpl), fiber);
    }
    const double at_crossover = effective_atom_number(
        cloud_for_atom_number(regime.crossover_atoms, regime, tmpl), fiber);
    return at_crossover *
           std::pow(atoms / regime.crossover_atoms, regime.central_density_exponent_alpha);
}

void SubsystemState::apply(const ScheduleEvent& ev) {
    switch (ev.subsystem) {
        case Subsystem::Repump: repump = ev.on; break;
        case Subsystem::Cooling: cooling = ev.on; break;
        case Subsystem::BField: bfield = ev.on; break;
        case Subsystem::Dispenser: dispenser = ev.on; break;
    }
}

std::string_view to_string(Subsystem s) {
    switch (s) {
        case Subsystem::Repump: return "repump";
        case Subsystem::Cooling: return "cooling";
        case Subsystem::BField: return "bfield";
        case Subsystem::Dispenser: return "dispenser";
    }
    return "unknown";
}

void Schedule::validate() const {
    require(std::isfinite(duration_s) && duration_s > 0.0, ErrorKind::InvalidSchedule,
            "schedule duration must be > 0");
    require(std::isfinite(sample_interval_s) && sample_interval_s > 0.0,
            ErrorKind::InvalidSchedule, "schedule sample interval must be > 0");
    require(std::isfinite(initial_atoms) && initial_atoms >= 0.0, ErrorKind::InvalidSchedule,
            "schedule initial atoms must be >= 0");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double t = events[i].time_s;
        require(std::isfinite(t) && t >= 0.0 && t <= duration_s, ErrorKind::InvalidSchedule,
                "schedule event times must lie within [0, duration]");
        if (i > 0) {
            require(t > events[i - 1].time_s, ErrorKind::InvalidSchedule,
                    "schedule event times must be strictly increasing");
        }
    }
}

Schedule step_schedule(double segment_s, double interval_s) {
    Schedule s;
    s.initial.dispenser = true;
    s.sample_interval_s = interval_s;
    s.duration_s = 7.0 * segment_s;
    s.events = {
        {1.0 * segment_s, Subsystem::Repump, true},  {2.0 * segment_s, Subsystem::Cooling, true},
        {3.0 * segment_s, Subsystem::BField, true},  {4.0 * segment_s, Subsystem::BField, false},
        {5.0 * segment_s, Subsystem::Cooling, false}, {6.0 * segment_s, Subsystem::Repump, false},
    };
    return s;
}

std::vector<double> step_change_times(const Schedule& sched) {
    std::vector<double> out;
    out.reserve(sched.events.size());
    for (const auto& ev : sched.events) out.push_back(ev.time_s);
    return out;
}

namespace {

// Atom number a time dt after an anchor holding `atoms`, with the state fixed.
double evolve(const SubsystemState& state, double atoms, double dt, const ExperimentConfig& cfg) {
    if (!state.traps()) {
        return 0.0;
    }
    if (state.loads()) {
        TrapDynamics d = cfg.loading;
        d.initial_atoms_N0 = atoms;
        return loading_curve(d, dt);
    }
    const double tau = state.dispenser ? cfg.loading.lifetime_tau_s : cfg.decay.lifetime_tau_s;
    return atoms * std::exp(-dt / tau);
}

}  // namespace

ScheduleTrace simulate_schedule(const Schedule& sched, const ExperimentConfig& cfg,
                                std::uint64_t seed, bool noise) {
    sched.validate();
    cfg.validate();

    const double gamma_sc = scattering_rate(cfg.laser);
    const RegimeParams& regime = cfg.regime;
    // Fiber signal per atom below the crossover, from the overlap integral.
    const double e_crossover = tnf_visible_signal(regime.crossover_atoms, regime,
                                                  cfg.cloud_template, cfg.fiber);
    const auto visible = [&](double n) {
        if (n <= regime.crossover_atoms) return e_crossover * (n / regime.crossover_atoms);
        return e_crossover *
               std::pow(n / regime.crossover_atoms, regime.central_density_exponent_alpha);
    };

    ScheduleTrace trace;
    trace.spcm.value_name = "spcm_rate";
    trace.spcm.value_unit = "counts/s";
    trace.photodiode.value_name = "photodiode";
    trace.photodiode.value_unit = "V";
    trace.atoms.value_name = "atoms";
    trace.atoms.value_unit = "atoms";
    trace.expected_spcm.value_name = "spcm_expected_rate";
    trace.expected_spcm.value_unit = "counts/s";

    Rng rng(seed);
    SubsystemState state = sched.initial;
    double anchor_t = 0.0;
    double anchor_n = state.traps() ? sched.initial_atoms : 0.0;
    std::size_t next_event = 0;

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * sched.sample_interval_s;
        if (t > sched.duration_s * (1.0 + 1e-12)) break;

        while (next_event < sched.events.size() && sched.events[next_event].time_s <= t) {
            const auto& ev = sched.events[next_event++];
            anchor_n = evolve(state, anchor_n, ev.time_s - anchor_t, cfg);
            anchor_t = ev.time_s;
            state.apply(ev);
            if (!state.traps()) anchor_n = 0.0;
        }
        const double atoms = evolve(state, anchor_n, t - anchor_t, cfg);

        double expected = cfg.spcm.dark_ambient_rate_per_s;
        if (state.repump) expected += cfg.spcm.repump_scatter_rate_per_s;
        if (state.cooling) {
            expected += cfg.spcm.cooling_scatter_rate_per_s;
            expected += photon_rate({visible(atoms), gamma_sc, cfg.fiber.coupling_eta_f,
                                     cfg.spcm.quantum_efficiency_eta_D,
                                     cfg.fiber.transmission_T});
        }
        const double measured = noise ? spcm_sample_rate(expected, cfg.spcm, rng) : expected;

        double volts = cfg.photodiode.background_volts;
        if (state.cooling) {
            volts += photodiode_voltage(atoms, gamma_sc, cfg.photodiode, cfg.laser.wavelength_um);
        }

        trace.spcm.push_back(t, measured);
        trace.expected_spcm.push_back(t, expected);
        trace.photodiode.push_back(t, volts);
        trace.atoms.push_back(t, atoms);
    }
    return trace;
}

}  // namespace motprobe

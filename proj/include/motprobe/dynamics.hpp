#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "motprobe/cloud.hpp"
#include "motprobe/physics.hpp"
#include "motprobe/timeseries.hpp"

namespace motprobe {

struct ExperimentConfig;

// dN/dt = R - N / tau with N(0) = N0.
struct TrapDynamics {
    double capture_rate_R_per_s = 0.0;
    double lifetime_tau_s = 1.0;
    double initial_atoms_N0 = 0.0;

    void validate() const;
};

double loading_curve(const TrapDynamics& dyn, double t_s);
double decay_curve(const TrapDynamics& dyn, double t_s);

// Effective atom number seen by the fiber for a trap holding N atoms.
// Below the crossover this is the overlap integral of the Gaussian cloud;
// above it E_x * (N / N_x)^alpha, E_x being the value at the crossover.
double tnf_visible_signal(double atoms, const RegimeParams& regime, const CloudModel& tmpl,
                          const FiberSpec& fiber);

enum class Subsystem { Repump, Cooling, BField, Dispenser };

struct ScheduleEvent {
    double time_s = 0.0;
    Subsystem subsystem = Subsystem::Repump;
    bool on = true;
};

struct SubsystemState {
    bool repump = false;
    bool cooling = false;
    bool bfield = false;
    bool dispenser = false;

    bool traps() const { return cooling && bfield; }
    bool loads() const { return repump && cooling && bfield && dispenser; }
    void apply(const ScheduleEvent& ev);
};

struct Schedule {
    SubsystemState initial{};
    double initial_atoms = 0.0;
    std::vector<ScheduleEvent> events;
    double duration_s = 0.0;
    double sample_interval_s = 0.1;

    void validate() const;
};

std::string_view to_string(Subsystem s);

// Paper switching experiment: repump, cooling, B-field switched on one per
// segment, then off in reverse order. Dispenser on throughout.
Schedule step_schedule(double segment_s, double interval_s);

// Change times of step_schedule, in order.
std::vector<double> step_change_times(const Schedule& sched);

struct ScheduleTrace {
    TimeSeries spcm;           // counts/s
    TimeSeries photodiode;     // volts
    TimeSeries atoms;          // N(t), for diagnostics
    TimeSeries expected_spcm;  // noise-free SPCM rate
};

// Samples at t_k = k * interval for t_k <= duration. An event at time t
// applies to the sample at t. The trap loads with cfg.loading while loads()
// holds; otherwise atoms decay with cfg.loading.lifetime when the dispenser
// is on and cfg.decay.lifetime when it is off. Without cooling light or
// B-field the trap empties at once.
ScheduleTrace simulate_schedule(const Schedule& sched, const ExperimentConfig& cfg,
                                std::uint64_t seed, bool noise = true);

}  // namespace motprobe

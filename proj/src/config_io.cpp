#include "motprobe/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "motprobe/error.hpp"
#include "motprobe/manifest.hpp"
#include "motprobe/units.hpp"

namespace motprobe {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorKind::ConfigParse, what); }

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) parse_fail("config key '" + key + "' must be a number");
    return v.get<double>();
}

Vec3 as_vec3(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 3) parse_fail("config key '" + key + "' must be [x, y, z]");
    return {as_number(v[0], key), as_number(v[1], key), as_number(v[2], key)};
}

// Binds the keys of one config section to setters and rejects the rest.
class Section {
public:
    using Setter = std::function<void(const json&, const std::string&)>;

    Section(std::string name, std::vector<std::string>& defaulted)
        : name_(std::move(name)), defaulted_(defaulted) {}

    Section& number(const std::string& key, double& target, double scale = 1.0) {
        setters_[key] = [&target, scale](const json& v, const std::string& k) {
            target = as_number(v, k) * scale;
        };
        return *this;
    }

    Section& integer(const std::string& key, int& target) {
        setters_[key] = [&target](const json& v, const std::string& k) {
            if (!v.is_number_integer()) parse_fail("config key '" + k + "' must be an integer");
            target = v.get<int>();
        };
        return *this;
    }

    Section& custom(const std::string& key, Setter setter) {
        setters_[key] = std::move(setter);
        return *this;
    }

    void read(const json& doc) const {
        if (!doc.contains(name_)) {
            for (const auto& [key, _] : setters_) defaulted_.push_back(name_ + "." + key);
            return;
        }
        const json& obj = doc.at(name_);
        if (!obj.is_object()) parse_fail("config section '" + name_ + "' must be an object");
        for (const auto& [key, value] : obj.items()) {
            if (!setters_.contains(key)) parse_fail("unknown config key '" + name_ + "." + key + "'");
        }
        for (const auto& [key, setter] : setters_) {
            if (obj.contains(key)) {
                setter(obj.at(key), name_ + "." + key);
            } else {
                defaulted_.push_back(name_ + "." + key);
            }
        }
    }

private:
    std::string name_;
    std::vector<std::string>& defaulted_;
    std::map<std::string, Setter> setters_;
};

void dynamics_section(Section& s, TrapDynamics& d) {
    s.number("capture_rate_per_s", d.capture_rate_R_per_s)
        .number("lifetime_s", d.lifetime_tau_s)
        .number("initial_atoms", d.initial_atoms_N0);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

LoadedConfig config_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        parse_fail("config parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) parse_fail("config document must be a JSON object");

    LoadedConfig out;
    ExperimentConfig& cfg = out.config;
    auto& defaulted = out.defaulted;
    const double mm = units::um_per_mm;
    const double per_mm3 = units::per_mm3_to_per_um3(1.0);

    Section laser("laser", defaulted);
    laser.number("detuning_MHz", cfg.laser.detuning_MHz)
        .number("beam_intensity_mW_cm2", cfg.laser.beam_intensity_mW_cm2)
        .integer("n_beams", cfg.laser.n_beams)
        .number("linewidth_MHz", cfg.laser.linewidth_MHz)
        .number("isat_eff_mW_cm2", cfg.laser.isat_eff_mW_cm2)
        .number("wavelength_um", cfg.laser.wavelength_um);

    Section fiber("fiber", defaulted);
    fiber.number("waist_diameter_um", cfg.fiber.waist_diameter_um)
        .number("interaction_range_um", cfg.fiber.interaction_range_um)
        .number("transmission_T", cfg.fiber.transmission_T)
        .number("coupling_eta_f", cfg.fiber.coupling_eta_f);

    Section spcm("spcm", defaulted);
    spcm.number("quantum_efficiency_eta_D", cfg.spcm.quantum_efficiency_eta_D)
        .number("dark_ambient_rate_per_s", cfg.spcm.dark_ambient_rate_per_s)
        .number("repump_scatter_rate_per_s", cfg.spcm.repump_scatter_rate_per_s)
        .number("cooling_scatter_rate_per_s", cfg.spcm.cooling_scatter_rate_per_s)
        .number("gate_time_s", cfg.spcm.gate_time_s);

    Section photodiode("photodiode", defaulted);
    photodiode.number("collection_fraction", cfg.photodiode.collection_fraction)
        .number("responsivity_A_per_W", cfg.photodiode.responsivity_A_per_W)
        .number("load_resistance_ohm", cfg.photodiode.load_resistance_ohm)
        .number("background_volts", cfg.photodiode.background_volts);

    Section cloud("cloud", defaulted);
    cloud
        .custom("shape",
                [&cfg](const json& v, const std::string& k) {
                    const std::string name = v.is_string() ? v.get<std::string>() : "";
                    if (name == "gaussian") {
                        cfg.cloud_template.shape = CloudShape::Gaussian;
                    } else if (name == "flat_top") {
                        cfg.cloud_template.shape = CloudShape::FlatTop;
                    } else {
                        parse_fail("config key '" + k + "' must be \"gaussian\" or \"flat_top\"");
                    }
                })
        .custom("center_mm",
                [&cfg, mm](const json& v, const std::string& k) {
                    cfg.cloud_template.center_um = mm * as_vec3(v, k);
                })
        .custom("radii_mm",
                [&cfg, mm](const json& v, const std::string& k) {
                    cfg.cloud_template.radii_um = mm * as_vec3(v, k);
                })
        .number("peak_density_per_mm3", cfg.cloud_template.peak_density_per_um3, per_mm3);

    Section regime("regime", defaulted);
    regime.number("crossover_atoms", cfg.regime.crossover_atoms)
        .custom("constant_density_per_mm3",
                [&cfg, per_mm3](const json& v, const std::string& k) {
                    if (v.is_null()) {
                        cfg.regime.constant_density_per_um3.reset();
                    } else {
                        cfg.regime.constant_density_per_um3 = as_number(v, k) * per_mm3;
                    }
                })
        .number("central_density_exponent_alpha", cfg.regime.central_density_exponent_alpha);

    Section loading("loading", defaulted);
    dynamics_section(loading, cfg.loading);
    Section decay("decay", defaulted);
    dynamics_section(decay, cfg.decay);

    Section sampling("sampling", defaulted);
    sampling.number("interval_s", cfg.sampling.interval_s)
        .number("step_segment_s", cfg.sampling.step_segment_s)
        .number("step_settle_s", cfg.sampling.step_settle_s)
        .number("loading_duration_s", cfg.sampling.loading_duration_s)
        .number("decay_duration_s", cfg.sampling.decay_duration_s)
        .number("scan_half_span_mm", cfg.sampling.scan_half_span_um, mm)
        .integer("scan_points", cfg.sampling.scan_points)
        .integer("camera_bit_depth", cfg.sampling.camera_bit_depth);

    const std::vector<const Section*> sections = {&laser,   &fiber,   &spcm,  &photodiode,
                                                  &cloud,   &regime,  &loading, &decay,
                                                  &sampling};
    static const std::vector<std::string> known = {"laser",  "fiber",   "spcm",  "photodiode",
                                                   "cloud",  "regime",  "loading", "decay",
                                                   "sampling", "seed"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            parse_fail("unknown config key '" + key + "'");
        }
    }
    for (const Section* s : sections) s->read(doc);

    if (doc.contains("seed")) {
        const json& seed = doc.at("seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
            parse_fail("config key 'seed' must be a non-negative integer");
        }
        cfg.seed = seed.get<std::uint64_t>();
    } else {
        defaulted.push_back("seed");
    }

    cfg.validate();
    return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

json config_to_json(const ExperimentConfig& cfg) {
    const auto mm3 = [](const Vec3& v) {
        return json::array({units::um_to_mm(v.x), units::um_to_mm(v.y), units::um_to_mm(v.z)});
    };
    const auto dynamics = [](const TrapDynamics& d) {
        return json{{"capture_rate_per_s", d.capture_rate_R_per_s},
                    {"lifetime_s", d.lifetime_tau_s},
                    {"initial_atoms", d.initial_atoms_N0}};
    };
    json regime_density = nullptr;
    if (cfg.regime.constant_density_per_um3) {
        regime_density = units::per_um3_to_per_mm3(*cfg.regime.constant_density_per_um3);
    }
    return json{
        {"laser",
         {{"detuning_MHz", cfg.laser.detuning_MHz},
          {"beam_intensity_mW_cm2", cfg.laser.beam_intensity_mW_cm2},
          {"n_beams", cfg.laser.n_beams},
          {"linewidth_MHz", cfg.laser.linewidth_MHz},
          {"isat_eff_mW_cm2", cfg.laser.isat_eff_mW_cm2},
          {"wavelength_um", cfg.laser.wavelength_um}}},
        {"fiber",
         {{"waist_diameter_um", cfg.fiber.waist_diameter_um},
          {"interaction_range_um", cfg.fiber.interaction_range_um},
          {"transmission_T", cfg.fiber.transmission_T},
          {"coupling_eta_f", cfg.fiber.coupling_eta_f}}},
        {"spcm",
         {{"quantum_efficiency_eta_D", cfg.spcm.quantum_efficiency_eta_D},
          {"dark_ambient_rate_per_s", cfg.spcm.dark_ambient_rate_per_s},
          {"repump_scatter_rate_per_s", cfg.spcm.repump_scatter_rate_per_s},
          {"cooling_scatter_rate_per_s", cfg.spcm.cooling_scatter_rate_per_s},
          {"gate_time_s", cfg.spcm.gate_time_s}}},
        {"photodiode",
         {{"collection_fraction", cfg.photodiode.collection_fraction},
          {"responsivity_A_per_W", cfg.photodiode.responsivity_A_per_W},
          {"load_resistance_ohm", cfg.photodiode.load_resistance_ohm},
          {"background_volts", cfg.photodiode.background_volts}}},
        {"cloud",
         {{"shape", cfg.cloud_template.shape == CloudShape::Gaussian ? "gaussian" : "flat_top"},
          {"center_mm", mm3(cfg.cloud_template.center_um)},
          {"radii_mm", mm3(cfg.cloud_template.radii_um)},
          {"peak_density_per_mm3",
           units::per_um3_to_per_mm3(cfg.cloud_template.peak_density_per_um3)}}},
        {"regime",
         {{"crossover_atoms", cfg.regime.crossover_atoms},
          {"constant_density_per_mm3", regime_density},
          {"central_density_exponent_alpha", cfg.regime.central_density_exponent_alpha}}},
        {"loading", dynamics(cfg.loading)},
        {"decay", dynamics(cfg.decay)},
        {"sampling",
         {{"interval_s", cfg.sampling.interval_s},
          {"step_segment_s", cfg.sampling.step_segment_s},
          {"step_settle_s", cfg.sampling.step_settle_s},
          {"loading_duration_s", cfg.sampling.loading_duration_s},
          {"decay_duration_s", cfg.sampling.decay_duration_s},
          {"scan_half_span_mm", units::um_to_mm(cfg.sampling.scan_half_span_um)},
          {"scan_points", cfg.sampling.scan_points},
          {"camera_bit_depth", cfg.sampling.camera_bit_depth}}},
        {"seed", cfg.seed},
    };
}

std::string config_hash(const ExperimentConfig& cfg) {
    return sha256_hex(config_to_json(cfg).dump());
}

}  // namespace motprobe

#include "motprobe/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "motprobe/config_io.hpp"
#include "motprobe/error.hpp"
#include "motprobe/estimation.hpp"
#include "motprobe/experiments.hpp"
#include "motprobe/manifest.hpp"
#include "motprobe/timeseries.hpp"

namespace motprobe {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string command;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool no_noise = false;
    std::string out_dir;
    std::optional<double> scan_speed_mm_s;
    bool plots = false;
    bool background_subtract = false;
    std::string input;
    std::string model;
    std::optional<double> fixed_offset;
    std::optional<double> gate_s;
};

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigParse: return kExitConfig;
        case ErrorKind::Validation:
        case ErrorKind::InvalidInput:
        case ErrorKind::InvalidGeometry:
        case ErrorKind::InvalidSchedule:
        case ErrorKind::InvalidRate: return kExitValidation;
        case ErrorKind::DegenerateData:
        case ErrorKind::InvalidData:
        case ErrorKind::NoConvergence:
        case ErrorKind::EmptySegment: return kExitNumerical;
        case ErrorKind::Io: return kExitIo;
    }
    return kExitNumerical;
}

std::string_view exit_category(int code) {
    switch (code) {
        case kExitConfig: return "config";
        case kExitValidation: return "validation";
        case kExitNumerical: return "numerical";
        case kExitIo: return "io";
        default: return "error";
    }
}

void report_error(std::ostream& err, int code, std::string_view kind, const std::string& message) {
    err << json{{"error", exit_category(code)}, {"kind", kind}, {"message", message}}.dump()
        << '\n';
}

class Emitter {
public:
    Emitter(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir_.string() + "'");
    }

    void write_text(const std::string& name, const std::string& body) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << body;
        if (!f) fail(ErrorKind::Io, "cannot write '" + (dir_ / name).string() + "'");
    }

    void series(const std::string& name, const TimeSeries& s) {
        const std::string body = to_csv(s);
        write_text(name, body);
        files_.push_back({name, s.size(), sha256_hex(body)});
    }

    void json_file(const std::string& name, const json& doc) { write_text(name, doc.dump(2) + "\n"); }

    // Whitespace separated two-column file for plotting tools.
    void plot(const std::string& name, const TimeSeries& s) {
        std::string body = fmt::format("# {} [{}]  {} [{}]\n", s.x_name, s.x_unit, s.value_name,
                                       s.value_unit);
        for (std::size_t i = 0; i < s.size(); ++i) {
            body += fmt::format("{} {}\n", s.xs[i], s.values[i]);
        }
        write_text(name, body);
    }

    const std::vector<EmittedFile>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<EmittedFile> files_;
};

fs::path output_dir(const Options& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (const char* env = std::getenv("MOTPROBE_OUT"); env && *env) return env;
    return ".";
}

ExperimentConfig resolve_config(const Options& opt, std::ostream& err) {
    LoadedConfig loaded;
    if (opt.config_path.empty()) {
        loaded.config = ExperimentConfig::paper_default();
    } else {
        loaded = load_config(opt.config_path);
        if (!loaded.defaulted.empty()) {
            err << fmt::format("motprobe: notice: {} config field(s) not set, using defaults\n",
                               loaded.defaulted.size());
        }
    }
    if (opt.seed) loaded.config.seed = *opt.seed;
    loaded.config.validate();
    return loaded.config;
}

void finish(Emitter& em, const std::string& command, const ExperimentConfig& cfg, bool noise,
            const json& summary) {
    em.json_file(command + "_manifest.json", run_manifest(command, cfg, noise, em.files(), summary));
}

TimeSeries with_time_axis(TimeSeries s, double speed_mm_s) {
    require(speed_mm_s > 0.0, ErrorKind::InvalidInput, "--scan-speed must be > 0");
    const double x0 = s.xs.front();
    for (double& x : s.xs) x = (x - x0) / speed_mm_s;
    s.x_name = "time";
    s.x_unit = "s";
    return s;
}

json levels_json(const StepsRun& run) {
    json levels = json::array();
    for (std::size_t i = 0; i < run.levels.size(); ++i) {
        levels.push_back({{"mean", run.levels[i].mean},
                          {"std_error", run.levels[i].std_error},
                          {"samples", run.levels[i].count},
                          {"expected", run.expected_levels[i]}});
    }
    return levels;
}

json two_channel_summary(const TwoChannelRun& run) {
    return json{{"photodiode_fit", fit_to_json(run.photodiode_fit)},
                {"spcm_fit", fit_to_json(run.spcm_fit)}};
}

int command_steps(const Options& opt, const ExperimentConfig& cfg, std::ostream& out) {
    const bool noise = !opt.no_noise;
    const StepsRun run = run_steps(cfg, noise);
    Emitter em(output_dir(opt));
    em.series("steps_spcm.csv", run.trace.spcm);
    em.series("steps_photodiode.csv", run.trace.photodiode);
    if (opt.plots) em.plot("fig2_steps.dat", run.trace.spcm);
    const json summary = {{"levels", levels_json(run)}};
    finish(em, "steps", cfg, noise, summary);
    out << summary.dump() << '\n';
    return kExitOk;
}

int command_scan(const Options& opt, const ExperimentConfig& cfg, std::ostream& out) {
    const bool noise = !opt.no_noise;
    const ScanRun run = run_scan(cfg, noise);
    TimeSeries spcm = run.spcm;
    TimeSeries camera = run.camera;
    if (opt.scan_speed_mm_s) {
        spcm = with_time_axis(spcm, *opt.scan_speed_mm_s);
        camera = with_time_axis(camera, *opt.scan_speed_mm_s);
    }
    Emitter em(output_dir(opt));
    em.series("scan_spcm.csv", spcm);
    em.series("scan_camera.csv", camera);
    if (opt.plots) {
        em.plot("fig3_scan_spcm.dat", spcm);
        em.plot("fig3_scan_camera.dat", camera);
    }
    const json summary = {{"spcm_fit", fit_to_json(run.spcm_fit)},
                          {"camera_fit", fit_to_json(run.camera_fit)}};
    finish(em, "scan", cfg, noise, summary);
    out << json{{"tnf_diameter_mm", one_over_e_diameter(run.spcm_fit)},
                {"camera_diameter_mm", one_over_e_diameter(run.camera_fit)}}
               .dump()
        << '\n';
    return kExitOk;
}

int command_two_channel(const Options& opt, const ExperimentConfig& cfg, std::ostream& out,
                        bool loading) {
    const bool noise = !opt.no_noise;
    const TwoChannelRun run = loading ? run_loading(cfg, noise, opt.background_subtract)
                                      : run_decay(cfg, noise, opt.background_subtract);
    const std::string name = loading ? "loading" : "decay";
    Emitter em(output_dir(opt));
    em.series(name + "_spcm.csv", run.trace.spcm);
    em.series(name + "_photodiode.csv", run.trace.photodiode);
    if (opt.plots) {
        const std::string fig = loading ? "fig4" : "fig5";
        em.plot(fig + "_" + name + "_spcm.dat", run.trace.spcm);
        em.plot(fig + "_" + name + "_photodiode.dat", run.trace.photodiode);
    }
    const json summary = two_channel_summary(run);
    finish(em, name, cfg, noise, summary);
    out << json{{"photodiode_tau_s", run.photodiode_fit.value("tau")},
                {"tnf_tau_s", run.spcm_fit.value("tau")}}
               .dump()
        << '\n';
    return kExitOk;
}

int command_fit(const Options& opt, std::ostream& out) {
    require(!opt.input.empty(), ErrorKind::InvalidInput, "fit needs --input CSV");
    require(!opt.model.empty(), ErrorKind::InvalidInput, "fit needs --model gaussian|loading|decay");
    const FitModel model = fit_model_from_string(opt.model);

    std::ifstream in(opt.input, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + opt.input + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    TimeSeries series;
    try {
        series = parse_csv(buf.str());
    } catch (const Error& e) {
        fail(ErrorKind::Io, std::string("cannot read '") + opt.input + "': " + e.what());
    }

    FitOptions fo;
    fo.fixed_offset = opt.fixed_offset;
    if (opt.gate_s) fo.weights = poisson_weights(series.values, *opt.gate_s);
    const FitResult result = fit(model, series.xs, series.values, fo);
    json doc = fit_to_json(result);
    doc["input"] = opt.input;
    doc["x_unit"] = series.x_unit;
    doc["value_unit"] = series.value_unit;

    Emitter em(output_dir(opt));
    em.json_file("fit_result.json", doc);
    out << doc.dump() << '\n';
    return kExitOk;
}

int command_compare(const Options& opt, const ExperimentConfig& cfg, std::ostream& out) {
    json table = compare_channels(cfg, !opt.no_noise, opt.background_subtract);
    table["config_hash"] = config_hash(cfg);
    Emitter em(output_dir(opt));
    em.json_file("compare.json", table);
    out << table.dump() << '\n';
    return kExitOk;
}

int command_report(const Options& opt, const ExperimentConfig& cfg, std::ostream& out) {
    json report = report_to_json(paper_report(cfg));
    report["config_hash"] = config_hash(cfg);
    report["seed"] = cfg.seed;
    report["artifact_version"] = std::string(kArtifactVersion);
    Emitter em(output_dir(opt));
    em.json_file("paper_report.json", report);
    if (opt.plots) {
        const StepsRun steps = run_steps(cfg, true);
        em.plot("fig2_steps.dat", steps.trace.spcm);
        const ScanRun scan = run_scan(cfg, true);
        em.plot("fig3_scan_spcm.dat", scan.spcm);
        em.plot("fig3_scan_camera.dat", scan.camera);
        const TwoChannelRun loading = run_loading(cfg, true);
        em.plot("fig4_loading_spcm.dat", loading.trace.spcm);
        em.plot("fig4_loading_photodiode.dat", loading.trace.photodiode);
        const TwoChannelRun decay = run_decay(cfg, true);
        em.plot("fig5_decay_spcm.dat", decay.trace.spcm);
        em.plot("fig5_decay_photodiode.dat", decay.trace.photodiode);
    }
    for (const auto& row : report["targets"]) {
        out << fmt::format("{:<28} target {:>12.6g}  obtained {:>12.6g}  {}\n",
                           row["name"].get<std::string>(), row["target"].get<double>(),
                           row["obtained"].get<double>(),
                           !row["checked"].get<bool>() ? "info"
                           : row["passed"].get<bool>() ? "PASS"
                                                       : "FAIL");
    }
    return report["all_passed"].get<bool>() ? kExitOk : kExitReportFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Nanofiber-probed MOT digital twin"};
    app.name("motprobe");
    app.add_option("command", opt.command,
                   "steps | scan | loading | decay | fit | compare | paper-report")
        ->required()
        ->check(CLI::IsMember(
            {"steps", "scan", "loading", "decay", "fit", "compare", "paper-report"}));
    app.add_option("--config", opt.config_path, "JSON config; omitted keys take defaults");
    app.add_option("--seed", opt.seed, "override the config seed");
    app.add_flag("--no-noise", opt.no_noise, "report expected rates instead of SPCM draws");
    app.add_option("--out", opt.out_dir, "output directory (default $MOTPROBE_OUT or .)");
    app.add_option("--scan-speed", opt.scan_speed_mm_s, "map scan position to time, mm/s");
    app.add_flag("--plots", opt.plots, "also write two-column plot files");
    app.add_flag("--background-subtract", opt.background_subtract,
                 "hold fit offsets at the known detector backgrounds");
    app.add_option("--input", opt.input, "fit: CSV series to fit");
    app.add_option("--model", opt.model, "fit: gaussian | loading | decay");
    app.add_option("--fixed-offset", opt.fixed_offset, "fit: hold the offset at this value");
    app.add_option("--gate", opt.gate_s, "fit: SPCM gate in s, enables Poisson weights");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, kExitConfig, "usage", e.what());
        return kExitConfig;
    }

    try {
        if (opt.command == "fit") return command_fit(opt, out);
        const ExperimentConfig cfg = resolve_config(opt, err);
        if (opt.command == "steps") return command_steps(opt, cfg, out);
        if (opt.command == "scan") return command_scan(opt, cfg, out);
        if (opt.command == "loading") return command_two_channel(opt, cfg, out, true);
        if (opt.command == "decay") return command_two_channel(opt, cfg, out, false);
        if (opt.command == "compare") return command_compare(opt, cfg, out);
        return command_report(opt, cfg, out);
    } catch (const Error& e) {
        const int code = exit_code(e.kind());
        report_error(err, code, to_string(e.kind()), e.what());
        return code;
    } catch (const std::exception& e) {
        report_error(err, kExitIo, "io", e.what());
        return kExitIo;
    }
}

}  // namespace motprobe

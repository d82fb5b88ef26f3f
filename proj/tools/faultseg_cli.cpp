// faultseg: abrupt-change detection and segmentation of fault recordings.

#include "faultseg/pipeline.hpp"
#include "faultseg/signal_io.hpp"
#include "faultseg/synth.hpp"
#include "faultseg/wavelet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
namespace fp = faultseg::pipeline;

// Each flag writes into the override object under its config key, so flags
// and config-file keys stay one-to-one.
struct Overrides {
    json values = json::object();

    template <typename T>
    void add(CLI::App& app, const std::string& key, const std::string& help)
    {
        app.add_option_function<T>("--" + key, [this, key](const T& v) { values[key] = v; }, help);
    }

    void flag(CLI::App& app, const std::string& key, const std::string& help)
    {
        app.add_flag_callback("--" + key, [this, key] { values[key] = true; }, help);
        app.add_flag_callback("--no-" + key, [this, key] { values[key] = false; },
                              "disable --" + key);
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Detect abrupt changes in power-system fault recordings and segment them"};
    app.set_version_flag("--version", "faultseg 1.0");

    Overrides o;
    std::string config_path;
    std::string cascade_dir;
    std::string synth_csv;
    bool pretty = false;

    app.add_option("--config", config_path, "JSON configuration (same keys as the echoed config)")
        ->check(CLI::ExistingFile);
    o.add<std::string>(app, "input", "input file (.csv or COMTRADE .cfg)");
    o.add<std::string>(app, "format", "input format: csv | comtrade");
    o.add<std::string>(app, "channel", "process only this channel");
    o.add<double>(app, "fs", "sampling rate in Hz (required for CSV files without a time column)");
    o.add<std::string>(app, "synth",
                       "synthetic input preset: fault-current | resistive-decay | transient | sinusoid");
    o.add<std::uint64_t>(app, "seed", "noise seed for synthetic input");
    o.add<double>(app, "snr", "fault-segment SNR in dB for synthetic input");
    o.add<std::string>(app, "normalize", "subtract | divide (by the record mean)");
    o.add<std::string>(app, "whitening", "none | fixed | adjusted | adaptive (default adjusted)");
    o.add<double>(app, "f0", "nominal fundamental frequency in Hz (default 50)");
    o.add<double>(app, "pulsation", "whitening design frequency in Hz (default 51)");
    o.add<double>(app, "mu", "LMS step size for adaptive whitening (default 1e-4)");
    o.flag(app, "enforce-dc-null", "keep alpha + beta = 1 during adaptation");
    o.add<int>(app, "levels", "wavelet decomposition depth (default 1)");
    o.add<std::string>(app, "boundary", "periodic | zero");
    o.flag(app, "colocate", "require co-located crossings on coarser levels");
    o.add<double>(app, "mad-divisor", "MAD consistency divisor (default 0.6725)");
    o.add<std::string>(app, "mad-center", "median | zero");
    o.add<std::size_t>(app, "sigma-prefix", "estimate noise from the first N samples only");
    o.add<long>(app, "group-delay", "detail-to-sample alignment: instant = 2 (m - delay)");
    o.add<std::size_t>(app, "merge-window", "cluster radius in samples (default 3C/2)");
    o.add<std::size_t>(app, "min-run", "minimum crossings per retained cluster (default 2)");
    o.add<std::size_t>(app, "expected-events", "event count of a regular fault sequence (default 3)");
    o.add<std::size_t>(app, "min-segment", "shortest segment in samples (default C/2)");
    o.add<std::string>(app, "out-json", "write the JSON result here (default stdout)");
    o.add<std::string>(app, "out-plots", "directory for two-column plot data");
    app.add_option("--export-cascade", cascade_dir,
                   "write db4 scaling/wavelet functions (phi.txt, psi.txt) and exit");
    app.add_option("--write-synth-csv", synth_csv, "write the synthetic input record as CSV");
    app.add_flag("--pretty", pretty, "indent JSON output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!cascade_dir.empty()) {
            const auto basis = faultseg::wavelet::db4_basis(faultseg::wavelet::Normalization::paper_refinement);
            const auto c = faultseg::wavelet::cascade(basis, 50, 64);
            std::filesystem::create_directories(cascade_dir);
            faultseg::wavelet::write_two_column(c.phi, std::filesystem::path(cascade_dir) / "phi.txt");
            faultseg::wavelet::write_two_column(c.psi, std::filesystem::path(cascade_dir) / "psi.txt");
            std::cerr << "cascade converged after " << c.iterations << " iterations\n";
            return 0;
        }

        fp::PipelineConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            config = fp::from_json(json::parse(in));
        }
        config = fp::from_json(o.values, config);

        if (!synth_csv.empty()) {
            if (config.synth.empty())
                throw faultseg::ConfigError("--write-synth-csv needs --synth");
            auto spec = faultseg::synth::preset(config.synth);
            spec.seed = config.seed;
            spec.f0 = config.whitening.f_fund;
            if (config.fs)
                spec.fs = *config.fs;
            if (config.snr_db)
                spec.noise_rms = faultseg::synth::noise_rms_for_snr(spec, *config.snr_db);
            faultseg::RecordSet set;
            set.records.push_back(faultseg::synth::generate(config.synth, spec).first);
            faultseg::io::write_csv(set, synth_csv);
        }

        const auto result = fp::run_pipeline(config);
        const auto doc = fp::to_json(result);
        const std::string text = doc.dump(pretty ? 2 : -1) + "\n";
        if (config.out_json.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(config.out_json);
            if (!out)
                throw faultseg::Error("cannot write '" + config.out_json + "'");
            out << text;
        }
        if (!config.out_plots.empty())
            fp::emit_plot_data(result, config.out_plots);
    } catch (const std::exception& e) {
        std::cerr << "faultseg: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#ifndef FAULTSEG_PIPELINE_HPP
#define FAULTSEG_PIPELINE_HPP

#include "faultseg/detection.hpp"
#include "faultseg/record.hpp"
#include "faultseg/segmentation.hpp"
#include "faultseg/signal_io.hpp"
#include "faultseg/wavelet.hpp"
#include "faultseg/whitening.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace faultseg::pipeline {

enum class InputFormat { csv, comtrade };

/// Every knob of one run. Optional fields resolve from the record (C =
/// round(fs / f0)) and are echoed with their effective values.
struct PipelineConfig {
    std::string input;
    InputFormat format = InputFormat::csv;
    std::string channel; ///< empty: all channels
    std::optional<double> fs;

    std::string synth;   ///< preset name; bypasses `input`
    std::uint64_t seed = 0;
    std::optional<double> snr_db;

    io::NormalizeMode normalize = io::NormalizeMode::subtract_mean;
    whitening::Config whitening;

    int levels = 1;
    wavelet::Boundary boundary = wavelet::Boundary::periodic;
    bool colocate = false;

    double mad_divisor = detection::default_mad_divisor;
    detection::MadCenter mad_center = detection::MadCenter::median;
    std::size_t sigma_prefix = 0; ///< samples; 0 estimates from the whole record
    long group_delay = -1;

    std::optional<std::size_t> merge_window;
    std::size_t min_run = 2;
    std::size_t expected_events = 3;
    std::optional<std::size_t> min_segment;

    std::string out_json;
    std::string out_plots;

    /// Cross-field checks that need no data.
    void validate() const;
    /// Checks that need the sampling rate.
    void validate_for(double fs) const;
};

nlohmann::json to_json(const PipelineConfig& config);
/// Applies the keys present in `j` on top of `base`; unknown keys throw.
PipelineConfig from_json(const nlohmann::json& j, PipelineConfig base = {});

struct ChannelResult {
    std::string channel;
    PipelineConfig config; ///< effective (resolved) configuration
    int samples_per_cycle = 0;

    std::vector<double> original;
    std::vector<double> whitened;
    std::size_t warmup = 0;
    wavelet::DecompositionTree tree;

    detection::ThresholdReport threshold;
    detection::ChangePointSet raw;
    detection::ChangePointSet smoothed;
    segmentation::SegmentList segments;

    std::map<std::string, double> timings_ms;
};

struct PipelineResult {
    std::string source;
    std::vector<ChannelResult> channels;
};

/// Raised by run_pipeline; names the stage and channel that failed.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, std::string channel, const std::string& what);
    const std::string& stage() const noexcept { return stage_; }
    const std::string& channel() const noexcept { return channel_; }

private:
    std::string stage_;
    std::string channel_;
};

/// normalize -> whiten -> decompose -> threshold -> smooth -> segment.
ChannelResult process_record(const Record& record, const PipelineConfig& config);

/// Loads the configured input (or synthesizes it) and processes every
/// selected channel; channels run concurrently.
PipelineResult run_pipeline(const PipelineConfig& config);
PipelineResult run_pipeline(const RecordSet& records, const PipelineConfig& config);

nlohmann::json to_json(const ChannelResult& result, bool include_timings = true);
nlohmann::json to_json(const PipelineResult& result, bool include_timings = true);

/// Per channel: <ch>_original.txt, <ch>_whitened.txt, <ch>_detail.txt,
/// <ch>_threshold.txt and <ch>_impulses.txt, two columns each.
void emit_plot_data(const PipelineResult& result, const std::filesystem::path& dir);

} // namespace faultseg::pipeline

#endif

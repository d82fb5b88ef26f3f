#include "faultseg/pipeline.hpp"

#include "faultseg/synth.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>

namespace faultseg::pipeline {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string_view to_string(InputFormat f)
{
    return f == InputFormat::csv ? "csv" : "comtrade";
}

InputFormat format_from_string(const std::string& s)
{
    if (s == "csv") return InputFormat::csv;
    if (s == "comtrade") return InputFormat::comtrade;
    throw ConfigError("unknown input format '" + s + "'");
}

std::string_view to_string(io::NormalizeMode m)
{
    return m == io::NormalizeMode::subtract_mean ? "subtract" : "divide";
}

io::NormalizeMode normalize_from_string(const std::string& s)
{
    if (s == "subtract") return io::NormalizeMode::subtract_mean;
    if (s == "divide") return io::NormalizeMode::divide_by_mean;
    throw ConfigError("unknown normalization '" + s + "'");
}

std::string_view to_string(wavelet::Boundary b)
{
    return b == wavelet::Boundary::periodic ? "periodic" : "zero";
}

wavelet::Boundary boundary_from_string(const std::string& s)
{
    if (s == "periodic") return wavelet::Boundary::periodic;
    if (s == "zero") return wavelet::Boundary::zero;
    throw ConfigError("unknown boundary mode '" + s + "'");
}

std::string_view to_string(detection::MadCenter c)
{
    return c == detection::MadCenter::median ? "median" : "zero";
}

detection::MadCenter center_from_string(const std::string& s)
{
    if (s == "median") return detection::MadCenter::median;
    if (s == "zero") return detection::MadCenter::zero;
    throw ConfigError("unknown MAD centering '" + s + "'");
}

// Keeps level-1 crossings that have a crossing at a co-located index on
// some coarser level.
detection::ChangePointSet corroborate(const detection::ChangePointSet& raw,
                                      const wavelet::DecompositionTree& tree,
                                      const PipelineConfig& config)
{
    std::vector<std::vector<bool>> over;
    for (std::size_t j = 1; j < tree.levels.size(); ++j) {
        const auto& d = tree.levels[j].detail;
        const auto report = detection::make_report(d, config.mad_divisor, config.mad_center);
        std::vector<bool> hits(d.size());
        for (std::size_t m = 0; m < d.size(); ++m)
            hits[m] = std::abs(d[m]) > report.T;
        over.push_back(std::move(hits));
    }
    detection::ChangePointSet out;
    out.report = raw.report;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < over.size() && !found; ++j) {
            const long centre = static_cast<long>(raw.detail_indices[i] >> (j + 1));
            for (long m = centre - 2; m <= centre + 1 && !found; ++m) {
                if (m >= 0 && m < static_cast<long>(over[j].size()) &&
                    over[j][static_cast<std::size_t>(m)])
                    found = true;
            }
        }
        if (found) {
            out.instants.push_back(raw.instants[i]);
            out.detail_indices.push_back(raw.detail_indices[i]);
            out.run_lengths.push_back(raw.run_lengths[i]);
        }
    }
    return out;
}

std::string file_stem(const std::string& channel)
{
    std::string out;
    for (char c : channel)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? "channel" : out;
}

void write_rows(const std::filesystem::path& path, const char* header,
                const std::vector<std::pair<std::size_t, double>>& rows)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << header << '\n';
    char buf[64];
    for (const auto& [i, v] : rows) {
        std::snprintf(buf, sizeof buf, "%zu %.17g\n", i, v);
        out << buf;
    }
    if (!out)
        throw Error("write to '" + path.string() + "' failed");
}

std::vector<std::pair<std::size_t, double>> indexed(const std::vector<double>& v)
{
    std::vector<std::pair<std::size_t, double>> rows;
    rows.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        rows.emplace_back(i, v[i]);
    return rows;
}

} // namespace

void PipelineConfig::validate() const
{
    whitening.validate();
    if (synth.empty() && input.empty())
        throw ConfigError("no input given (use an input path or a synth preset)");
    if (levels < 1 || levels > 30)
        throw ConfigError("levels must lie in [1, 30]");
    if (!(mad_divisor > 0))
        throw ConfigError("MAD divisor must be positive");
    if (merge_window && *merge_window < 1)
        throw ConfigError("merge window must be at least 1 sample");
    if (min_run < 1)
        throw ConfigError("min run must be at least 1");
    if (expected_events < 1)
        throw ConfigError("expected events must be at least 1");
    if (fs && !(*fs > 0))
        throw ConfigError("fs must be positive");
}

void PipelineConfig::validate_for(double rate) const
{
    validate();
    if (!(whitening.f_fund < rate / 2))
        throw ConfigError("fundamental above Nyquist");
    if (whitening.mode != whitening::Mode::none && whitening.mode != whitening::Mode::fixed_fourier &&
        !(whitening.f_pulsation < rate / 2))
        throw ConfigError("pulsation must be below fs/2");
}

json to_json(const PipelineConfig& c)
{
    json j;
    j["input"] = c.input;
    j["format"] = to_string(c.format);
    j["channel"] = c.channel;
    j["fs"] = c.fs ? json(*c.fs) : json(nullptr);
    j["synth"] = c.synth;
    j["seed"] = c.seed;
    j["snr"] = c.snr_db ? json(*c.snr_db) : json(nullptr);
    j["normalize"] = to_string(c.normalize);
    j["whitening"] = whitening::to_string(c.whitening.mode);
    j["f0"] = c.whitening.f_fund;
    j["pulsation"] = c.whitening.f_pulsation;
    j["mu"] = c.whitening.mu;
    j["enforce-dc-null"] = c.whitening.enforce_dc_null;
    j["levels"] = c.levels;
    j["boundary"] = to_string(c.boundary);
    j["colocate"] = c.colocate;
    j["mad-divisor"] = c.mad_divisor;
    j["mad-center"] = to_string(c.mad_center);
    j["sigma-prefix"] = c.sigma_prefix;
    j["group-delay"] = c.group_delay;
    j["merge-window"] = c.merge_window ? json(*c.merge_window) : json(nullptr);
    j["min-run"] = c.min_run;
    j["expected-events"] = c.expected_events;
    j["min-segment"] = c.min_segment ? json(*c.min_segment) : json(nullptr);
    j["out-json"] = c.out_json;
    j["out-plots"] = c.out_plots;
    return j;
}

PipelineConfig from_json(const json& j, PipelineConfig c)
{
    if (!j.is_object())
        throw ConfigError("configuration must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "input") c.input = v.get<std::string>();
            else if (key == "format") c.format = format_from_string(v.get<std::string>());
            else if (key == "channel") c.channel = v.get<std::string>();
            else if (key == "fs") c.fs = v.is_null() ? std::nullopt : std::optional(v.get<double>());
            else if (key == "synth") c.synth = v.get<std::string>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "snr") c.snr_db = v.is_null() ? std::nullopt : std::optional(v.get<double>());
            else if (key == "normalize") c.normalize = normalize_from_string(v.get<std::string>());
            else if (key == "whitening") c.whitening.mode = whitening::mode_from_string(v.get<std::string>());
            else if (key == "f0") c.whitening.f_fund = v.get<double>();
            else if (key == "pulsation") c.whitening.f_pulsation = v.get<double>();
            else if (key == "mu") c.whitening.mu = v.get<double>();
            else if (key == "enforce-dc-null") c.whitening.enforce_dc_null = v.get<bool>();
            else if (key == "levels") c.levels = v.get<int>();
            else if (key == "boundary") c.boundary = boundary_from_string(v.get<std::string>());
            else if (key == "colocate") c.colocate = v.get<bool>();
            else if (key == "mad-divisor") c.mad_divisor = v.get<double>();
            else if (key == "mad-center") c.mad_center = center_from_string(v.get<std::string>());
            else if (key == "sigma-prefix") c.sigma_prefix = v.get<std::size_t>();
            else if (key == "group-delay") c.group_delay = v.get<long>();
            else if (key == "merge-window") c.merge_window = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (key == "min-run") c.min_run = v.get<std::size_t>();
            else if (key == "expected-events") c.expected_events = v.get<std::size_t>();
            else if (key == "min-segment") c.min_segment = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (key == "out-json") c.out_json = v.get<std::string>();
            else if (key == "out-plots") c.out_plots = v.get<std::string>();
            else throw ConfigError("unknown configuration key '" + key + "'");
        } catch (const json::exception& e) {
            throw ConfigError("configuration key '" + key + "': " + e.what());
        }
    }
    return c;
}

PipelineError::PipelineError(std::string stage, std::string channel, const std::string& what)
    : Error("stage '" + stage + "', channel '" + channel + "': " + what)
    , stage_(std::move(stage))
    , channel_(std::move(channel))
{
}

ChannelResult process_record(const Record& record, const PipelineConfig& config)
{
    ChannelResult r;
    r.channel = record.channel_id();
    std::string stage = "validate";
    try {
        const auto total_start = Clock::now();
        config.validate_for(record.fs());
        const int C = whitening::samples_per_cycle(record.fs(), config.whitening.f_fund);
        r.samples_per_cycle = C;
        r.config = config;
        const auto defaults = segmentation::SmoothingConfig::for_cycle(C);
        if (!r.config.merge_window)
            r.config.merge_window = defaults.merge_window;
        if (!r.config.min_segment)
            r.config.min_segment = defaults.min_segment;
        r.original.assign(record.samples().begin(), record.samples().end());

        stage = "normalize";
        auto t = Clock::now();
        const Record normalized = io::normalize(record, config.normalize);
        r.timings_ms["normalize"] = elapsed_ms(t);

        stage = "whiten";
        t = Clock::now();
        const Record white = whitening::apply(normalized, config.whitening);
        r.whitened.assign(white.samples().begin(), white.samples().end());
        r.warmup = white.warmup();
        r.timings_ms["whiten"] = elapsed_ms(t);

        stage = "decompose";
        t = Clock::now();
        const auto basis = wavelet::db4_basis(wavelet::Normalization::orthonormal);
        r.tree = wavelet::msd(white.samples(), basis, config.levels, config.boundary);
        r.timings_ms["decompose"] = elapsed_ms(t);

        stage = "threshold";
        t = Clock::now();
        const auto& d = r.tree.levels.front().detail;
        auto options = detection::level1_exclusions(record.size(), r.warmup, basis.length());
        options.group_delay = config.group_delay;
        double rms = 0.0;
        for (double v : normalized.samples())
            rms += v * v;
        options.min_magnitude = 1e-9 * std::sqrt(rms / static_cast<double>(record.size()));

        std::size_t first = options.exclude_head;
        std::size_t last = d.size() - options.exclude_tail;
        if (config.sigma_prefix > 0)
            last = std::min(last, first + (config.sigma_prefix + 1) / 2);
        if (last < first + 2)
            throw ConfigError("too few valid detail coefficients to estimate the noise scale");
        r.threshold = detection::make_report(
            std::span<const double>(d).subspan(first, last - first), config.mad_divisor,
            config.mad_center);
        r.raw = detection::detect(d, r.threshold, options);
        if (config.colocate && r.tree.levels.size() > 1)
            r.raw = corroborate(r.raw, r.tree, config);
        r.timings_ms["threshold"] = elapsed_ms(t);

        stage = "segment";
        t = Clock::now();
        segmentation::SmoothingConfig smoothing;
        smoothing.merge_window = *r.config.merge_window;
        smoothing.min_run = config.min_run;
        smoothing.expected_events = config.expected_events;
        smoothing.min_segment = *r.config.min_segment;
        const auto merged = segmentation::merge_close(r.raw, smoothing.merge_window);
        r.smoothed = segmentation::remove_glitches(merged, smoothing.min_run);
        r.segments = segmentation::build_segments(r.smoothed, record.size(), smoothing);
        r.timings_ms["segment"] = elapsed_ms(t);
        r.timings_ms["total"] = elapsed_ms(total_start);
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(stage, record.channel_id(), e.what());
    }
    return r;
}

PipelineResult run_pipeline(const RecordSet& records, const PipelineConfig& config)
{
    PipelineResult result;
    result.source = records.source;

    std::vector<const Record*> selected;
    for (const auto& r : records.records) {
        if (config.channel.empty() || r.channel_id() == config.channel)
            selected.push_back(&r);
    }
    if (selected.empty())
        throw PipelineError("select", config.channel, "no such channel in " + records.source);

    if (selected.size() == 1) {
        result.channels.push_back(process_record(*selected.front(), config));
        return result;
    }
    std::vector<std::future<ChannelResult>> jobs;
    for (const auto* r : selected)
        jobs.push_back(std::async(std::launch::async,
                                  [r, &config] { return process_record(*r, config); }));
    for (auto& job : jobs)
        result.channels.push_back(job.get());
    return result;
}

PipelineResult run_pipeline(const PipelineConfig& config)
{
    config.validate();
    const auto start = Clock::now();
    RecordSet records;
    try {
        if (!config.synth.empty()) {
            auto spec = synth::preset(config.synth);
            spec.seed = config.seed;
            spec.f0 = config.whitening.f_fund;
            if (config.fs)
                spec.fs = *config.fs;
            if (config.snr_db)
                spec.noise_rms = synth::noise_rms_for_snr(spec, *config.snr_db);
            records.records.push_back(synth::generate(config.synth, spec).first);
            records.source = "synth:" + config.synth;
        } else if (config.format == InputFormat::csv) {
            records = io::load_csv(config.input, config.fs);
        } else {
            records = io::load_comtrade_1991_ascii(config.input);
        }
        records.check_single_rate();
    } catch (const std::exception& e) {
        throw PipelineError("load", config.channel, e.what());
    }
    const double load_ms = elapsed_ms(start);

    auto result = run_pipeline(records, config);
    for (auto& ch : result.channels)
        ch.timings_ms["load"] = load_ms;
    return result;
}

json to_json(const ChannelResult& r, bool include_timings)
{
    json j;
    j["channel"] = r.channel;
    j["config"] = to_json(r.config);
    j["threshold"] = {{"sigma", r.threshold.sigma},
                      {"n", r.threshold.n},
                      {"T", r.threshold.T},
                      {"divisor", r.threshold.mad_divisor}};
    j["raw_instants"] = r.raw.instants;
    j["instants"] = r.segments.event_instants;
    json segments = json::array();
    for (const auto& s : r.segments.segments)
        segments.push_back({{"start", s.start}, {"end", s.end}, {"label", segmentation::to_string(s.label)}});
    j["segments"] = std::move(segments);
    j["classification"] = segmentation::to_string(r.segments.classification);
    if (include_timings)
        j["timings_ms"] = r.timings_ms;
    return j;
}

json to_json(const PipelineResult& result, bool include_timings)
{
    json out = json::array();
    for (const auto& ch : result.channels)
        out.push_back(to_json(ch, include_timings));
    return out;
}

void emit_plot_data(const PipelineResult& result, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw Error("cannot create plot directory '" + dir.string() + "'");

    for (const auto& ch : result.channels) {
        const auto stem = file_stem(ch.channel);
        write_rows(dir / (stem + "_original.txt"), "# sample value", indexed(ch.original));
        write_rows(dir / (stem + "_whitened.txt"), "# sample value", indexed(ch.whitened));
        const auto& d = ch.tree.levels.front().detail;
        write_rows(dir / (stem + "_detail.txt"), "# detail_index value", indexed(d));
        write_rows(dir / (stem + "_threshold.txt"), "# detail_index threshold",
                   indexed(std::vector<double>(d.size(), ch.threshold.T)));
        std::vector<std::pair<std::size_t, double>> impulses;
        for (auto p : ch.segments.event_instants)
            impulses.emplace_back(p, 1.0);
        write_rows(dir / (stem + "_impulses.txt"), "# sample impulse", impulses);
    }
}

} // namespace faultseg::pipeline

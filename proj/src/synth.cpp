#include "faultseg/synth.hpp"

#include "faultseg/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace faultseg::synth {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double waveform(const SynthSpec& spec, double theta)
{
    double v = std::sin(theta);
    for (const auto& h : spec.harmonics)
        v += h.relative_amplitude * std::sin(h.order * theta);
    return v;
}

void add_noise(std::vector<double>& x, const SynthSpec& spec)
{
    if (spec.noise_rms <= 0)
        return;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_rms);
    for (auto& v : x)
        v += noise(rng);
}

GroundTruth truth_for(const SynthSpec& spec)
{
    GroundTruth truth;
    for (std::size_t i = 0; i < spec.events.size(); ++i)
        truth.true_instants.push_back(spec.event_sample(i));
    truth.expected_classification = segmentation::classify(truth.true_instants.size(), 3);
    return truth;
}

Record make_record(const SynthSpec& spec, std::vector<double> x)
{
    return Record(spec.channel_id, spec.unit, spec.fs, std::move(x));
}

} // namespace

void SynthSpec::validate() const
{
    if (!(fs > 0) || !(f0 > 0) || !(duration > 0))
        throw ConfigError("synth: fs, f0 and duration must be positive");
    int top = 1;
    for (const auto& h : harmonics) {
        if (h.order < 1)
            throw ConfigError("synth: harmonic order must be positive");
        top = std::max(top, h.order);
    }
    if (!(fs > 2.0 * f0 * top))
        throw ConfigError("synth: highest harmonic above Nyquist");
    if (noise_rms < 0)
        throw ConfigError("synth: noise RMS must be non-negative");
    double last = 0.0;
    for (const auto& e : events) {
        if (!(e.instant > last) || !(e.instant < duration))
            throw ConfigError("synth: event instants must increase strictly within (0, duration)");
        if (e.kind == EventKind::dc_offset_decay && !(e.decay_tau > 0))
            throw ConfigError("synth: decay time constant must be positive");
        last = e.instant;
    }
}

std::size_t SynthSpec::sample_count() const
{
    return static_cast<std::size_t>(std::llround(duration * fs));
}

std::size_t SynthSpec::event_sample(std::size_t i) const
{
    return static_cast<std::size_t>(std::llround(events.at(i).instant * fs));
}

std::vector<double> clean_signal(const SynthSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.sample_count();
    std::vector<double> x(n, 0.0);

    double amplitude = spec.amplitude;
    double phase = spec.phase;
    struct Decay {
        std::size_t start;
        double magnitude;
        double tau;
    };
    std::vector<Decay> decays;
    std::size_t next = 0;
    for (std::size_t k = 0; k < n; ++k) {
        while (next < spec.events.size() && spec.event_sample(next) <= k) {
            const auto& e = spec.events[next];
            switch (e.kind) {
            case EventKind::amplitude_step: amplitude = spec.amplitude * e.magnitude; break;
            case EventKind::phase_step: phase += e.magnitude; break;
            case EventKind::clear_to_zero: amplitude = 0.0; break;
            case EventKind::dc_offset_decay:
                decays.push_back({spec.event_sample(next), e.magnitude, e.decay_tau});
                if (e.amplitude_after)
                    amplitude = spec.amplitude * *e.amplitude_after;
                break;
            }
            ++next;
        }
        const double t = static_cast<double>(k) / spec.fs;
        double v = amplitude * waveform(spec, two_pi * spec.f0 * t + phase);
        for (const auto& d : decays)
            v += d.magnitude * std::exp(-static_cast<double>(k - d.start) / spec.fs / d.tau);
        x[k] = v;
    }
    return x;
}

Generated gen_fault_current(const SynthSpec& spec)
{
    for (const auto& e : spec.events) {
        if (e.kind == EventKind::dc_offset_decay)
            throw ConfigError("synth: fault-current records take step/clear events only");
    }
    auto x = clean_signal(spec);
    add_noise(x, spec);
    return {make_record(spec, std::move(x)), truth_for(spec)};
}

Generated gen_resistive_decay(const SynthSpec& spec)
{
    if (spec.events.size() != 1 || spec.events.front().kind != EventKind::dc_offset_decay)
        throw ConfigError("synth: resistive decay needs exactly one dc_offset_decay event");
    if (!(spec.events.front().decay_tau > 0))
        throw ConfigError("synth: decay time constant must be positive");
    auto x = clean_signal(spec);
    add_noise(x, spec);
    auto truth = truth_for(spec);
    truth.expected_classification = segmentation::Classification::inception_only;
    return {make_record(spec, std::move(x)), std::move(truth)};
}

Generated gen_cusp(double alpha, double K, double t_cusp, const SynthSpec& spec)
{
    if (!(alpha >= 0 && alpha < 1))
        throw ConfigError("synth: cusp exponent must lie in [0, 1)");
    if (!(K >= 0))
        throw ConfigError("synth: cusp constant must be non-negative");
    SynthSpec base = spec;
    base.events.clear();
    if (!(t_cusp > 0 && t_cusp < base.duration))
        throw ConfigError("synth: cusp instant must lie within (0, duration)");

    auto x = clean_signal(base);
    const auto start = static_cast<std::size_t>(std::llround(t_cusp * base.fs));
    for (std::size_t k = start; k < x.size(); ++k) {
        const double dt = static_cast<double>(k - start) / base.fs;
        x[k] += alpha == 0.0 ? K : K * std::pow(dt, alpha);
    }
    add_noise(x, base);

    GroundTruth truth;
    truth.true_instants = {start};
    truth.expected_classification = segmentation::Classification::inception_only;
    return {make_record(base, std::move(x)), std::move(truth)};
}

double noise_rms_for_snr(const SynthSpec& spec, double snr_db)
{
    const auto x = clean_signal(spec);
    std::size_t begin = 0;
    std::size_t end = x.size();
    if (!spec.events.empty()) {
        begin = spec.event_sample(0);
        if (spec.events.size() > 1)
            end = spec.event_sample(1);
    }
    double power = 0.0;
    for (std::size_t k = begin; k < end; ++k)
        power += x[k] * x[k];
    power /= static_cast<double>(end - begin);
    return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

SynthSpec preset(std::string_view name)
{
    SynthSpec spec;
    spec.channel_id = std::string(name);
    if (name == "fault-current") {
        spec.unit = Unit::ampere;
        spec.events = {{0.20, EventKind::amplitude_step, 5.0, 0.0, {}},
                       {0.36, EventKind::clear_to_zero, 0.0, 0.0, {}},
                       {0.56, EventKind::amplitude_step, 1.0, 0.0, {}}};
    } else if (name == "resistive-decay") {
        spec.unit = Unit::volt;
        spec.events = {{0.30, EventKind::dc_offset_decay, 2.0, 0.05, 0.5}};
    } else if (name == "transient") {
        // Swing-like amplitude oscillation: six steps 80 ms apart.
        for (int i = 0; i < 6; ++i)
            spec.events.push_back(
                {0.10 + 0.08 * i, EventKind::amplitude_step, i % 2 == 0 ? 3.0 : 1.0, 0.0, {}});
    } else if (name == "sinusoid") {
        spec.harmonics.clear();
    } else {
        throw ConfigError("unknown synth preset '" + std::string(name) + "'");
    }
    return spec;
}

Generated generate(std::string_view preset_name, const SynthSpec& spec)
{
    if (preset_name == "resistive-decay")
        return gen_resistive_decay(spec);
    return gen_fault_current(spec);
}

} // namespace faultseg::synth

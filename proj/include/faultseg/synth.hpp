#ifndef FAULTSEG_SYNTH_HPP
#define FAULTSEG_SYNTH_HPP

#include "faultseg/record.hpp"
#include "faultseg/segmentation.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace faultseg::synth {

enum class EventKind { amplitude_step, phase_step, dc_offset_decay, clear_to_zero };

struct Event {
    double instant = 0.0; ///< seconds
    EventKind kind = EventKind::amplitude_step;
    /// amplitude_step: new amplitude (multiple of nominal); phase_step:
    /// phase jump in radians; dc_offset_decay: initial offset.
    double magnitude = 0.0;
    double decay_tau = 0.0; ///< seconds, dc_offset_decay only
    /// dc_offset_decay: amplitude after the event (unchanged if unset).
    std::optional<double> amplitude_after;
};

struct Harmonic {
    int order = 3;
    double relative_amplitude = 0.0;
};

struct SynthSpec {
    double fs = 2500.0;
    double f0 = 50.0;
    double duration = 0.8;
    /// Initial phase of the fundamental; pi/2 puts t = k / f0 on a crest.
    double phase = 1.5707963267948966;
    double amplitude = 1.0;
    std::vector<Event> events;
    std::vector<Harmonic> harmonics{{3, 0.10}, {5, 0.05}};
    double noise_rms = 0.0;
    std::uint64_t seed = 0;
    std::string channel_id = "synth";
    Unit unit = Unit::dimensionless;

    void validate() const;
    std::size_t sample_count() const;
    std::size_t event_sample(std::size_t i) const;
};

struct GroundTruth {
    std::vector<std::size_t> true_instants;
    segmentation::Classification expected_classification =
        segmentation::Classification::no_event;
};

using Generated = std::pair<Record, GroundTruth>;

/// Piecewise sinusoid driven by amplitude/phase/clear events plus
/// harmonics and seeded Gaussian noise.
Generated gen_fault_current(const SynthSpec& spec);

/// Sinusoid with a decaying offset and amplitude change from one
/// dc_offset_decay event.
Generated gen_resistive_decay(const SynthSpec& spec);

/// Baseline waveform plus K |t - t_cusp|^alpha for t >= t_cusp (a level
/// shift of K when alpha = 0). `spec.events` is ignored.
Generated gen_cusp(double alpha, double K, double t_cusp, const SynthSpec& spec);

/// Noise-free version of any spec (events applied, noise_rms ignored).
std::vector<double> clean_signal(const SynthSpec& spec);

/// Noise RMS giving `snr_db` relative to the mean power of the noiseless
/// fault segment [first event, second event or end).
double noise_rms_for_snr(const SynthSpec& spec, double snr_db);

/// Named presets: fault-current, resistive-decay, transient, sinusoid.
SynthSpec preset(std::string_view name);
/// Generates any preset through the matching generator.
Generated generate(std::string_view preset_name, const SynthSpec& spec);

} // namespace faultseg::synth

#endif

#ifndef FAULTSEG_RECORD_HPP
#define FAULTSEG_RECORD_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace faultseg {

enum class Unit { volt, ampere, dimensionless };

std::string_view to_string(Unit unit);
Unit unit_from_string(std::string_view text);

/// A sampled single-channel waveform.
///
/// Construction validates fs > 0, a non-empty sample vector and finite
/// values; a Record is immutable afterwards. `warmup` counts leading
/// samples that carry no valid data (filter start-up) and must be ignored
/// by detectors.
class Record {
public:
    Record(std::string channel_id, Unit unit, double fs, std::vector<double> samples,
           double t0 = 0.0, std::size_t warmup = 0);

    const std::string& channel_id() const noexcept { return channel_id_; }
    Unit unit() const noexcept { return unit_; }
    double fs() const noexcept { return fs_; }
    double t0() const noexcept { return t0_; }
    std::size_t warmup() const noexcept { return warmup_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::span<const double> samples() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    /// Same metadata, new samples (length may differ).
    Record with_samples(std::vector<double> samples, std::size_t warmup = 0) const;

private:
    std::string channel_id_;
    Unit unit_;
    double fs_;
    double t0_;
    std::size_t warmup_;
    std::vector<double> samples_;
};

/// Channels sharing a single sampling rate.
struct RecordSet {
    std::vector<Record> records;
    std::string source;

    /// Throws ConfigError when the records disagree on fs.
    void check_single_rate() const;
};

} // namespace faultseg

#endif

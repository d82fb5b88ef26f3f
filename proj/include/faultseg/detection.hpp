#ifndef FAULTSEG_DETECTION_HPP
#define FAULTSEG_DETECTION_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace faultseg::detection {

/// Consistency constant used for the MAD noise scale.
inline constexpr double default_mad_divisor = 0.6725;

enum class MadCenter { median, zero };

struct ThresholdReport {
    double sigma = 0.0;
    std::size_t n = 0;
    double T = 0.0;
    double mad_divisor = default_mad_divisor;
};

/// median(|d - median(d)|) / divisor. Even-sized medians average the two
/// central order statistics.
double mad_sigma(std::span<const double> d, double divisor = default_mad_divisor,
                 MadCenter center = MadCenter::median);

/// sigma * sqrt(2 ln n).
double universal_threshold(double sigma, std::size_t n);

ThresholdReport make_report(std::span<const double> d, double divisor = default_mad_divisor,
                            MadCenter center = MadCenter::median);

/// Threshold crossings mapped back to original-signal samples.
///
/// Each raw crossing m yields one instant; `run_lengths[i]` is the size of
/// the contiguous |d| > T run that contains `detail_indices[i]`. After
/// clustering (segmentation::merge_close) the same field holds the number
/// of raw crossings the cluster absorbed.
struct ChangePointSet {
    std::vector<std::size_t> instants;
    std::vector<std::size_t> detail_indices;
    std::vector<std::size_t> run_lengths;
    ThresholdReport report;

    std::size_t size() const noexcept { return instants.size(); }
    bool empty() const noexcept { return instants.empty(); }
};

struct DetectOptions {
    /// Detail indices [0, exclude_head) are never crossings (filter warm-up).
    std::size_t exclude_head = 0;
    /// The last `exclude_tail` detail indices are never crossings (wrap).
    std::size_t exclude_tail = 0;
    /// instant = 2 * (m - group_delay), clamped into [0, original_length).
    /// -1 aligns a step at sample p with the db4 coefficient that first
    /// reacts to it.
    long group_delay = -1;
    /// Length of the undecimated signal; 0 means 2 * d.size().
    std::size_t original_length = 0;
    /// Magnitudes at or below this are ignored (guards round-off residue).
    double min_magnitude = 0.0;
};

ChangePointSet detect(std::span<const double> d, const ThresholdReport& report,
                      const DetectOptions& options = {});

/// Exclusion spans for a level-1 detail sequence of a signal whose first
/// `warmup` samples are invalid, for a filter of `taps` coefficients.
DetectOptions level1_exclusions(std::size_t original_length, std::size_t warmup,
                                std::size_t taps);

} // namespace faultseg::detection

#endif

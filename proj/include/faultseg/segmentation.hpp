#ifndef FAULTSEG_SEGMENTATION_HPP
#define FAULTSEG_SEGMENTATION_HPP

#include "faultseg/detection.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace faultseg::segmentation {

using detection::ChangePointSet;

struct SmoothingConfig {
    std::size_t merge_window = 75; ///< samples; pipeline default 3C/2
    std::size_t min_run = 2;       ///< minimum crossings per cluster
    std::size_t expected_events = 3;
    std::size_t min_segment = 25; ///< samples; pipeline default C/2

    void validate() const;
    /// Defaults scaled to C samples per cycle.
    static SmoothingConfig for_cycle(int C);
};

enum class Label { pre_fault, fault, breaker_open, reclose_restore, post_fault, unlabeled };

enum class Classification { fault_sequence, inception_only, transient_or_swing, no_event };

std::string_view to_string(Label label);
std::string_view to_string(Classification c);

struct Segment {
    std::size_t start = 0; ///< inclusive
    std::size_t end = 0;   ///< exclusive
    Label label = Label::unlabeled;

    std::size_t length() const noexcept { return end - start; }
};

struct SegmentList {
    std::vector<Segment> segments;
    Classification classification = Classification::no_event;
    std::vector<std::size_t> event_instants;
};

/// Greedy left-to-right clustering: a point joins the current cluster when
/// its distance to the cluster's first member is < window. Each cluster is
/// represented by its first member; its run_lengths entry becomes the
/// number of raw crossings in the cluster.
ChangePointSet merge_close(const ChangePointSet& points, std::size_t window);

/// Drops points whose run length is below `min_run`.
ChangePointSet remove_glitches(const ChangePointSet& points, std::size_t min_run);

/// Splits [0, record_length) at the instants, folding segments shorter than
/// `min_segment` into their predecessor, then labels and classifies.
SegmentList build_segments(const ChangePointSet& points, std::size_t record_length,
                           const SmoothingConfig& config);

Classification classify(std::size_t event_count, std::size_t expected_events);
Classification classify(const SegmentList& list, const SmoothingConfig& config);

/// merge_close -> remove_glitches -> build_segments.
SegmentList smooth_and_segment(const ChangePointSet& raw, std::size_t record_length,
                               const SmoothingConfig& config);

} // namespace faultseg::segmentation

#endif

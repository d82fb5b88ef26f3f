#include "faultseg/segmentation.hpp"

#include "faultseg/error.hpp"

#include <algorithm>

namespace faultseg::segmentation {

void SmoothingConfig::validate() const
{
    if (merge_window < 1)
        throw ConfigError("merge window must be at least 1 sample");
    if (min_run < 1)
        throw ConfigError("min run must be at least 1");
    if (expected_events < 1)
        throw ConfigError("expected event count must be at least 1");
}

SmoothingConfig SmoothingConfig::for_cycle(int C)
{
    SmoothingConfig cfg;
    const auto c = static_cast<std::size_t>(std::max(C, 2));
    cfg.merge_window = c + c / 2;
    cfg.min_segment = c / 2;
    return cfg;
}

std::string_view to_string(Label label)
{
    switch (label) {
    case Label::pre_fault: return "pre_fault";
    case Label::fault: return "fault";
    case Label::breaker_open: return "breaker_open";
    case Label::reclose_restore: return "reclose_restore";
    case Label::post_fault: return "post_fault";
    case Label::unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

std::string_view to_string(Classification c)
{
    switch (c) {
    case Classification::fault_sequence: return "fault_sequence";
    case Classification::inception_only: return "inception_only";
    case Classification::transient_or_swing: return "transient_or_swing";
    case Classification::no_event: return "no_event";
    }
    return "no_event";
}

ChangePointSet merge_close(const ChangePointSet& points, std::size_t window)
{
    ChangePointSet out;
    out.report = points.report;
    std::size_t first = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t p = points.instants[i];
        if (!out.empty() && p - first < window) {
            ++out.run_lengths.back();
            continue;
        }
        first = p;
        out.instants.push_back(p);
        out.detail_indices.push_back(points.detail_indices[i]);
        out.run_lengths.push_back(1);
    }
    // A lone point keeps the length of the run that produced it.
    for (std::size_t i = 0, j = 0; i < out.size(); ++i) {
        while (points.instants[j] != out.instants[i])
            ++j;
        if (out.run_lengths[i] == 1)
            out.run_lengths[i] = points.run_lengths[j];
    }
    return out;
}

ChangePointSet remove_glitches(const ChangePointSet& points, std::size_t min_run)
{
    ChangePointSet out;
    out.report = points.report;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points.run_lengths[i] < min_run)
            continue;
        out.instants.push_back(points.instants[i]);
        out.detail_indices.push_back(points.detail_indices[i]);
        out.run_lengths.push_back(points.run_lengths[i]);
    }
    return out;
}

Classification classify(std::size_t event_count, std::size_t expected_events)
{
    if (event_count == 0)
        return Classification::no_event;
    if (event_count == 1)
        return Classification::inception_only;
    if (event_count <= expected_events)
        return Classification::fault_sequence;
    return Classification::transient_or_swing;
}

Classification classify(const SegmentList& list, const SmoothingConfig& config)
{
    return classify(list.event_instants.size(), config.expected_events);
}

SegmentList build_segments(const ChangePointSet& points, std::size_t record_length,
                           const SmoothingConfig& config)
{
    config.validate();
    if (record_length == 0)
        throw ConfigError("cannot segment an empty record");

    std::vector<std::size_t> cuts;
    for (auto p : points.instants) {
        if (p > 0 && p < record_length && (cuts.empty() || p > cuts.back()))
            cuts.push_back(p);
    }

    // Fold short segments: an interior one loses its closing instant (the
    // earlier bound is kept), a leading one its first instant, a trailing
    // one its last instant.
    bool changed = true;
    while (changed && !cuts.empty()) {
        changed = false;
        for (std::size_t i = 0; i <= cuts.size(); ++i) {
            const std::size_t start = i == 0 ? 0 : cuts[i - 1];
            const std::size_t end = i == cuts.size() ? record_length : cuts[i];
            if (end - start >= config.min_segment)
                continue;
            if (i == cuts.size())
                cuts.pop_back();
            else
                cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
            break;
        }
    }

    SegmentList list;
    list.event_instants = cuts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
        const std::size_t end = i == cuts.size() ? record_length : cuts[i];
        list.segments.push_back({start, end, Label::unlabeled});
        start = end;
    }

    if (cuts.size() == 1) {
        list.segments[0].label = Label::pre_fault;
        list.segments[1].label = Label::post_fault;
    } else if (cuts.size() == 3 && config.expected_events == 3) {
        constexpr Label sequence[] = {Label::pre_fault, Label::fault, Label::breaker_open,
                                      Label::reclose_restore};
        for (std::size_t i = 0; i < 4; ++i)
            list.segments[i].label = sequence[i];
    }
    list.classification = classify(list, config);
    return list;
}

SegmentList smooth_and_segment(const ChangePointSet& raw, std::size_t record_length,
                               const SmoothingConfig& config)
{
    config.validate();
    const auto merged = merge_close(raw, config.merge_window);
    const auto kept = remove_glitches(merged, config.min_run);
    return build_segments(kept, record_length, config);
}

} // namespace faultseg::segmentation

#include "faultseg/record.hpp"

#include "faultseg/error.hpp"

#include <cmath>

namespace faultseg {

std::string_view to_string(Unit unit)
{
    switch (unit) {
    case Unit::volt: return "volt";
    case Unit::ampere: return "ampere";
    case Unit::dimensionless: return "dimensionless";
    }
    return "dimensionless";
}

Unit unit_from_string(std::string_view text)
{
    if (text == "volt" || text == "V" || text == "kV" || text == "mV")
        return Unit::volt;
    if (text == "ampere" || text == "A" || text == "kA" || text == "mA")
        return Unit::ampere;
    return Unit::dimensionless;
}

Record::Record(std::string channel_id, Unit unit, double fs, std::vector<double> samples,
               double t0, std::size_t warmup)
    : channel_id_(std::move(channel_id))
    , unit_(unit)
    , fs_(fs)
    , t0_(t0)
    , warmup_(warmup)
    , samples_(std::move(samples))
{
    if (!(fs_ > 0.0) || !std::isfinite(fs_))
        throw ConfigError("record '" + channel_id_ + "': sampling rate must be positive");
    if (samples_.empty())
        throw ConfigError("record '" + channel_id_ + "': no samples");
    if (!std::isfinite(t0_))
        throw ConfigError("record '" + channel_id_ + "': non-finite start time");
    if (warmup_ > samples_.size())
        throw ConfigError("record '" + channel_id_ + "': warm-up span exceeds length");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i]))
            throw ConfigError("record '" + channel_id_ + "': non-finite sample at index " +
                              std::to_string(i));
    }
}

Record Record::with_samples(std::vector<double> samples, std::size_t warmup) const
{
    return Record(channel_id_, unit_, fs_, std::move(samples), t0_, warmup);
}

void RecordSet::check_single_rate() const
{
    for (const auto& r : records) {
        if (r.fs() != records.front().fs())
            throw ConfigError("multi-rate record sets are not supported");
    }
}

} // namespace faultseg

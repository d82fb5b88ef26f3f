#include "faultseg/detection.hpp"

#include "faultseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace faultseg::detection {

namespace {

double median_in_place(std::vector<double>& v)
{
    const auto mid = v.size() / 2;
    const auto mid_it = v.begin() + static_cast<std::ptrdiff_t>(mid);
    std::nth_element(v.begin(), mid_it, v.end());
    const double upper = *mid_it;
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), mid_it);
    return 0.5 * (lower + upper);
}

} // namespace

double mad_sigma(std::span<const double> d, double divisor, MadCenter center)
{
    if (d.size() < 2)
        throw ConfigError("MAD needs at least two coefficients");
    if (!(divisor > 0))
        throw ConfigError("MAD divisor must be positive");
    std::vector<double> work(d.begin(), d.end());
    const double c = center == MadCenter::median ? median_in_place(work) : 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        work[i] = std::abs(d[i] - c);
    return median_in_place(work) / divisor;
}

double universal_threshold(double sigma, std::size_t n)
{
    if (n < 2)
        throw ConfigError("universal threshold needs n >= 2");
    if (!(sigma >= 0))
        throw ConfigError("noise scale must be non-negative");
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

ThresholdReport make_report(std::span<const double> d, double divisor, MadCenter center)
{
    ThresholdReport r;
    r.mad_divisor = divisor;
    r.n = d.size();
    r.sigma = mad_sigma(d, divisor, center);
    r.T = universal_threshold(r.sigma, r.n);
    return r;
}

ChangePointSet detect(std::span<const double> d, const ThresholdReport& report,
                      const DetectOptions& options)
{
    ChangePointSet out;
    out.report = report;
    const std::size_t original = options.original_length ? options.original_length : 2 * d.size();
    const std::size_t begin = std::min(options.exclude_head, d.size());
    const std::size_t end = d.size() - std::min(options.exclude_tail, d.size() - begin);

    auto crosses = [&](std::size_t m) {
        const double a = std::abs(d[m]);
        return a > report.T && a > options.min_magnitude;
    };

    for (std::size_t m = begin; m < end;) {
        if (!crosses(m)) {
            ++m;
            continue;
        }
        std::size_t stop = m;
        while (stop < end && crosses(stop))
            ++stop;
        const std::size_t run = stop - m;
        for (std::size_t k = m; k < stop; ++k) {
            const long mapped = 2 * (static_cast<long>(k) - options.group_delay);
            const auto instant = static_cast<std::size_t>(
                std::clamp<long>(mapped, 0, static_cast<long>(original) - 1));
            if (!out.instants.empty() && instant <= out.instants.back()) {
                // Clamping collapsed neighbours onto one sample.
                out.run_lengths.back() = run;
                continue;
            }
            out.instants.push_back(instant);
            out.detail_indices.push_back(k);
            out.run_lengths.push_back(run);
        }
        m = stop;
    }
    return out;
}

DetectOptions level1_exclusions(std::size_t original_length, std::size_t warmup,
                                std::size_t taps)
{
    DetectOptions o;
    o.original_length = original_length;
    const std::size_t half = (original_length + 1) / 2;
    // Coefficient m reads samples [2m, 2m + taps - 1].
    o.exclude_head = std::min(half, (warmup + 1) / 2);
    std::size_t tail = 0;
    for (std::size_t m = half; m-- > 0;) {
        if (2 * m + taps - 1 < original_length)
            break;
        ++tail;
    }
    o.exclude_tail = std::min(tail, half - o.exclude_head);
    return o;
}

} // namespace faultseg::detection

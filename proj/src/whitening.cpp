#include "faultseg/whitening.hpp"

#include "faultseg/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace faultseg::whitening {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// 2*pi*frac(f * n / fs); exact zero for integer cycle counts.
double cycle_angle(double f, double n, double fs)
{
    const double cycles = f * n / fs;
    return two_pi * (cycles - std::floor(cycles));
}

void require_length(const Record& record, int C)
{
    if (record.size() <= static_cast<std::size_t>(C))
        throw ConfigError("record '" + record.channel_id() + "' has " +
                          std::to_string(record.size()) + " samples; whitening needs more than C = " +
                          std::to_string(C));
}

} // namespace

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::none: return "none";
    case Mode::fixed_fourier: return "fixed";
    case Mode::adjusted_fourier: return "adjusted";
    case Mode::adaptive: return "adaptive";
    }
    return "none";
}

Mode mode_from_string(std::string_view text)
{
    if (text == "none") return Mode::none;
    if (text == "fixed") return Mode::fixed_fourier;
    if (text == "adjusted") return Mode::adjusted_fourier;
    if (text == "adaptive") return Mode::adaptive;
    throw ConfigError("unknown whitening mode '" + std::string(text) + "'");
}

void Config::validate() const
{
    if (!(f_fund > 0))
        throw ConfigError("fundamental frequency must be positive");
    if (!(f_pulsation > 0))
        throw ConfigError("pulsation frequency must be positive");
    // mu = 0 is accepted as the degenerate (non-adapting) case.
    if (mode == Mode::adaptive && !(mu >= 0 && std::isfinite(mu)))
        throw ConfigError("LMS step mu must be non-negative in adaptive mode");
}

int samples_per_cycle(double fs, double f_fund)
{
    if (!(f_fund > 0) || !(fs > 2.0 * f_fund))
        throw ConfigError("fundamental above Nyquist");
    return static_cast<int>(std::lround(fs / f_fund));
}

Coefficients adjusted_coefficients(double f_pulsation, double fs, int C)
{
    if (!(f_pulsation > 0) || !(f_pulsation < fs / 2))
        throw ConfigError("pulsation must lie strictly between 0 and fs/2");
    const double wt = cycle_angle(f_pulsation, 1.0, fs);
    const double wtc = cycle_angle(f_pulsation, C, fs);
    const double s = std::sin(wt);
    if (std::abs(s) < 1e-12)
        throw ConfigError("pulsation aliases to DC/Nyquist");
    Coefficients k;
    k.alpha = std::sin(wtc) / s;
    k.beta = std::cos(wtc) - k.alpha * std::cos(wt);
    return k;
}

double root_residual(Coefficients k, double f_pulsation, double fs, int C)
{
    const auto z = std::polar(1.0, cycle_angle(f_pulsation, 1.0, fs));
    const auto zc = std::polar(1.0, cycle_angle(f_pulsation, C, fs));
    return std::abs(zc - k.alpha * z - k.beta);
}

Coefficients project_dc_null(Coefficients k) noexcept
{
    const double delta = k.alpha + k.beta - 1.0;
    k.alpha -= 0.5 * delta;
    k.beta = 1.0 - k.alpha;
    return k;
}

Record apply_fixed(const Record& record, Coefficients k, int C)
{
    if (C < 2)
        throw ConfigError("whitening delay C must be at least 2");
    require_length(record, C);
    const auto x = record.samples();
    const auto uc = static_cast<std::size_t>(C);
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = uc; i < x.size(); ++i)
        y[i] = x[i] - k.alpha * x[i - uc + 1] - k.beta * x[i - uc];
    return record.with_samples(std::move(y), uc);
}

AdaptiveResult apply_adaptive(const Record& record, const Config& config)
{
    config.validate();
    if (config.mode != Mode::adaptive)
        throw ConfigError("apply_adaptive requires adaptive mode");
    const int C = samples_per_cycle(record.fs(), config.f_fund);
    if (C < 2)
        throw ConfigError("whitening delay C must be at least 2");
    require_length(record, C);

    const auto x = record.samples();
    const auto uc = static_cast<std::size_t>(C);

    // Step size is specified for unit-power signals.
    double power = 0.0;
    for (double v : x)
        power += v * v;
    power /= static_cast<double>(x.size());
    const double mu = power > 0 ? config.mu / power : config.mu;

    Coefficients k = adjusted_coefficients(config.f_pulsation, record.fs(), C);
    if (config.enforce_dc_null)
        k = project_dc_null(k);

    std::vector<double> e(x.size(), 0.0);
    std::vector<Coefficients> trajectory(x.size(), k);
    for (std::size_t i = uc; i < x.size(); ++i) {
        const double near = x[i - uc + 1];
        const double far = x[i - uc];
        trajectory[i] = k;
        const double err = x[i] - k.alpha * near - k.beta * far;
        e[i] = err;
        k.alpha += mu * err * near;
        k.beta += mu * err * far;
        if (config.enforce_dc_null)
            k = project_dc_null(k);
        if (!std::isfinite(err) || !std::isfinite(k.alpha) || !std::isfinite(k.beta))
            throw NumericalError("LMS diverged at sample " + std::to_string(i) + "; reduce mu");
    }
    return {record.with_samples(std::move(e), uc), std::move(trajectory)};
}

std::vector<double> frequency_response(Coefficients k, int C, std::span<const double> freqs,
                                       double fs)
{
    std::vector<double> mag;
    mag.reserve(freqs.size());
    for (double f : freqs) {
        if (f < 0 || f > fs / 2)
            throw ConfigError("frequency " + std::to_string(f) + " Hz outside [0, fs/2]");
        const auto near = std::polar(1.0, -cycle_angle(f, C - 1, fs));
        const auto far = std::polar(1.0, -cycle_angle(f, C, fs));
        mag.push_back(std::abs(1.0 - k.alpha * near - k.beta * far));
    }
    return mag;
}

Record apply(const Record& record, const Config& config)
{
    config.validate();
    switch (config.mode) {
    case Mode::none:
        return record;
    case Mode::fixed_fourier:
        return apply_fixed(record, {0.0, 1.0}, samples_per_cycle(record.fs(), config.f_fund));
    case Mode::adjusted_fourier: {
        if (!(config.f_pulsation < record.fs() / 2))
            throw ConfigError("pulsation must be below fs/2");
        const int C = samples_per_cycle(record.fs(), config.f_fund);
        return apply_fixed(record, adjusted_coefficients(config.f_pulsation, record.fs(), C), C);
    }
    case Mode::adaptive:
        return apply_adaptive(record, config).residual;
    }
    return record;
}

} // namespace faultseg::whitening

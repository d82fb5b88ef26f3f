#ifndef FAULTSEG_WHITENING_HPP
#define FAULTSEG_WHITENING_HPP

#include "faultseg/record.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace faultseg::whitening {

// Prediction-error filters of the form
//
//     A(z^-1) = 1 - alpha z^-(C-1) - beta z^-C
//
// where C is the number of samples per nominal cycle. (alpha, beta) = (0, 1)
// gives the plain one-cycle difference, which nulls the fundamental, every
// harmonic and DC when fs / f_fund is an integer.

enum class Mode { none, fixed_fourier, adjusted_fourier, adaptive };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

struct Config {
    Mode mode = Mode::adjusted_fourier;
    double f_fund = 50.0;
    double f_pulsation = 51.0;
    /// LMS step for unit-power input; scaled by 1 / mean(x^2) internally.
    double mu = 1e-4;
    bool enforce_dc_null = true;

    void validate() const;
};

struct Coefficients {
    double alpha = 0.0;
    double beta = 1.0;
};

/// round(fs / f_fund), ties away from zero.
int samples_per_cycle(double fs, double f_fund);

/// Places a filter zero at `f_pulsation`.
Coefficients adjusted_coefficients(double f_pulsation, double fs, int C);

/// |e^{j w C Ts} - alpha e^{j w Ts} - beta| at w = 2 pi f_pulsation.
double root_residual(Coefficients k, double f_pulsation, double fs, int C);

/// DC gain 1 - alpha - beta, evaluated so that a projected pair reads 0.
inline double dc_gain(Coefficients k) noexcept { return (1.0 - k.alpha) - k.beta; }

/// Moves (alpha, beta) onto alpha + beta = 1 by splitting the violation.
Coefficients project_dc_null(Coefficients k) noexcept;

/// Residual y[k] = x[k] - alpha x[k-C+1] - beta x[k-C]. The first C outputs
/// are zero and reported as the returned record's warm-up span.
Record apply_fixed(const Record& record, Coefficients k, int C);

struct AdaptiveResult {
    Record residual;
    std::vector<Coefficients> trajectory; ///< coefficients used at each sample
};

/// LMS adaptation of (alpha, beta) starting from the adjusted solution.
AdaptiveResult apply_adaptive(const Record& record, const Config& config);

/// Magnitude response |A(e^{-j w Ts})| at each frequency in Hz.
std::vector<double> frequency_response(Coefficients k, int C, std::span<const double> freqs,
                                       double fs);

/// Applies the configured mode; Mode::none returns the record unchanged.
Record apply(const Record& record, const Config& config);

} // namespace faultseg::whitening

#endif

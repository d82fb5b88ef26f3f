#ifndef FAULTSEG_WAVELET_HPP
#define FAULTSEG_WAVELET_HPP

#include "faultseg/error.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace faultseg::wavelet {

enum class Normalization {
    orthonormal,      ///< sum h = sqrt(2), sum h^2 = 1; analysis filters
    paper_refinement, ///< sum c = 2; refinement-equation coefficients
};

/// Two-channel FIR filter bank. g[k] = (-1)^k h[L-1-k].
struct WaveletBasis {
    std::vector<double> h;
    std::vector<double> g;
    Normalization normalization;

    std::size_t length() const noexcept { return h.size(); }
};

/// Daubechies four-tap basis, c0..c3 = (1+-sqrt3)/4, (3+-sqrt3)/4.
WaveletBasis db4_basis(Normalization normalization = Normalization::orthonormal);

enum class Boundary { periodic, zero };

struct DecompositionLevel {
    int level = 1;
    std::vector<double> approx;
    std::vector<double> detail;
    std::size_t parent_length = 0;
};

struct DecompositionTree {
    std::vector<DecompositionLevel> levels;
    std::size_t original_length = 0;
    WaveletBasis basis;
};

/// One analysis step:
///   approx[n] = sum_k h[k - 2n] x[k],  detail[n] = sum_k g[k - 2n] x[k].
/// Odd-length input is extended by one periodic sample (x[N] = x[0]).
/// Requires an orthonormal basis and at least two samples.
DecompositionLevel decompose_level(std::span<const double> x, const WaveletBasis& basis,
                                   Boundary boundary = Boundary::periodic);

/// Iterated decomposition; level j splits level j-1's approximation.
DecompositionTree msd(std::span<const double> x, const WaveletBasis& basis, int levels,
                      Boundary boundary = Boundary::periodic);

/// Function sampled at x0 + i * step.
struct SampledFunction {
    double x0 = 0.0;
    double step = 1.0;
    std::vector<double> values;

    double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * step; }
    /// Trapezoidal integral over the sampled span.
    double integral() const noexcept;
};

struct CascadeResult {
    SampledFunction phi;
    SampledFunction psi;
    int iterations = 0;
    double final_difference = 0.0;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(int iterations, double sup_difference);
    double sup_difference() const noexcept { return sup_difference_; }

private:
    double sup_difference_;
};

/// Refinement cascade phi_j(x) = sum_k c_k phi_{j-1}(2x - k), starting from
/// the indicator of [0, 1), evaluated on a grid of `grid_density` points per
/// unit over the support [0, L-1]. Stops when the sup-norm change drops
/// below `tolerance`; throws ConvergenceError after `max_iterations`.
/// psi(x) = sum_k (-1)^k c_{L-1-k} phi(2x - k) from the converged phi.
CascadeResult cascade(const WaveletBasis& basis, int max_iterations, int grid_density,
                      double tolerance = 1e-6);

/// Writes `x value` rows for plotting.
void write_two_column(const SampledFunction& f, const std::filesystem::path& path);

} // namespace faultseg::wavelet

#endif

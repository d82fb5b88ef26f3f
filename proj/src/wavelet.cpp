#include "faultseg/wavelet.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace faultseg::wavelet {

WaveletBasis db4_basis(Normalization normalization)
{
    const double s3 = std::sqrt(3.0);
    std::vector<double> c = {(1 + s3) / 4, (3 + s3) / 4, (3 - s3) / 4, (1 - s3) / 4};
    if (normalization == Normalization::orthonormal) {
        for (auto& v : c)
            v /= std::sqrt(2.0);
    }
    std::vector<double> g(c.size());
    const auto last = c.size() - 1;
    for (std::size_t k = 0; k < c.size(); ++k)
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * c[last - k];
    return {std::move(c), std::move(g), normalization};
}

DecompositionLevel decompose_level(std::span<const double> x, const WaveletBasis& basis,
                                   Boundary boundary)
{
    if (x.size() < 2)
        throw ConfigError("wavelet decomposition needs at least two samples");
    if (basis.normalization != Normalization::orthonormal)
        throw ConfigError("decomposition requires the orthonormal filter bank");

    // Odd lengths get one periodic pad sample.
    const std::size_t n = x.size() + (x.size() % 2);
    auto at = [&](std::size_t i) -> double {
        if (i < x.size())
            return x[i];
        if (boundary == Boundary::zero)
            return 0.0;
        return x[(i % n) < x.size() ? i % n : 0];
    };

    DecompositionLevel out;
    out.parent_length = x.size();
    const std::size_t half = n / 2;
    out.approx.resize(half);
    out.detail.resize(half);
    const std::size_t taps = basis.length();
    for (std::size_t m = 0; m < half; ++m) {
        double a = 0.0;
        double d = 0.0;
        for (std::size_t j = 0; j < taps; ++j) {
            const double v = at(2 * m + j);
            a += basis.h[j] * v;
            d += basis.g[j] * v;
        }
        out.approx[m] = a;
        out.detail[m] = d;
    }
    return out;
}

DecompositionTree msd(std::span<const double> x, const WaveletBasis& basis, int levels,
                      Boundary boundary)
{
    if (levels < 1)
        throw ConfigError("decomposition depth must be at least 1");
    if (levels >= 63 || x.size() < (std::size_t{1} << levels))
        throw ConfigError("decomposition depth " + std::to_string(levels) + " too large for " +
                          std::to_string(x.size()) + " samples");

    DecompositionTree tree;
    tree.original_length = x.size();
    tree.basis = basis;
    tree.levels.reserve(static_cast<std::size_t>(levels));
    for (int j = 1; j <= levels; ++j) {
        const std::span<const double> parent =
            j == 1 ? x : std::span<const double>(tree.levels.back().approx);
        auto level = decompose_level(parent, basis, boundary);
        level.level = j;
        tree.levels.push_back(std::move(level));
    }
    return tree;
}

double SampledFunction::integral() const noexcept
{
    if (values.size() < 2)
        return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
        sum += values[i];
    return sum * step;
}

ConvergenceError::ConvergenceError(int iterations, double sup_difference)
    : NumericalError("cascade did not converge after " + std::to_string(iterations) +
                     " iterations (sup difference " + std::to_string(sup_difference) + ")")
    , sup_difference_(sup_difference)
{
}

CascadeResult cascade(const WaveletBasis& basis, int max_iterations, int grid_density,
                      double tolerance)
{
    if (basis.normalization != Normalization::paper_refinement)
        throw ConfigError("cascade requires the refinement coefficients (sum = 2)");
    if (grid_density < 1 || max_iterations < 1)
        throw ConfigError("cascade needs positive grid density and iteration cap");

    const auto taps = static_cast<long>(basis.length());
    const long density = grid_density;
    const long points = (taps - 1) * density + 1; // [0, L-1] inclusive

    // On the grid x_i = i / density the argument 2x - k lands on grid index
    // 2i - k * density, so each iteration is exact at the grid points.
    auto refine = [&](const std::vector<double>& prev, const std::vector<double>& coeffs) {
        std::vector<double> next(static_cast<std::size_t>(points), 0.0);
        for (long i = 0; i < points; ++i) {
            double v = 0.0;
            for (long k = 0; k < taps; ++k) {
                const long idx = 2 * i - k * density;
                if (idx >= 0 && idx < points)
                    v += coeffs[static_cast<std::size_t>(k)] * prev[static_cast<std::size_t>(idx)];
            }
            next[static_cast<std::size_t>(i)] = v;
        }
        return next;
    };

    std::vector<double> phi(static_cast<std::size_t>(points), 0.0);
    for (long i = 0; i < density; ++i)
        phi[static_cast<std::size_t>(i)] = 1.0;

    CascadeResult result;
    double diff = 0.0;
    int it = 0;
    while (true) {
        ++it;
        auto next = refine(phi, basis.h);
        diff = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i)
            diff = std::max(diff, std::abs(next[i] - phi[i]));
        phi = std::move(next);
        if (diff < tolerance)
            break;
        if (it >= max_iterations)
            throw ConvergenceError(it, diff);
    }

    std::vector<double> wavelet_coeffs(basis.length());
    const auto last = basis.length() - 1;
    for (std::size_t k = 0; k < basis.length(); ++k)
        wavelet_coeffs[k] = (k % 2 == 0 ? -1.0 : 1.0) * basis.h[last - k];

    const double step = 1.0 / static_cast<double>(density);
    result.phi = {0.0, step, phi};
    result.psi = {0.0, step, refine(phi, wavelet_coeffs)};
    result.iterations = it;
    result.final_difference = diff;
    return result;
}

void write_two_column(const SampledFunction& f, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "# x value\n";
    char buf[64];
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", f.x(i), f.values[i]);
        out << buf;
    }
}

} // namespace faultseg::wavelet

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "faultseg/detection.hpp"
#include "faultseg/pipeline.hpp"
#include "faultseg/segmentation.hpp"
#include "faultseg/synth.hpp"
#include "faultseg/wavelet.hpp"
#include "faultseg/whitening.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace faultseg;
using segmentation::Classification;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto start = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (budget_s > 0 && secs >= budget_s) {
        o.pass = false;
        o.detail += "; over time budget";
    }
    if (!o.pass)
        ++failures;
    std::printf("criterion %2d %s: %s (%s; %.3f s)\n", id, o.pass ? "PASS" : "FAIL", title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double energy(const std::vector<double>& x, std::size_t from)
{
    long double e = 0;
    for (std::size_t k = from; k < x.size(); ++k)
        e += static_cast<long double>(x[k]) * x[k];
    return static_cast<double>(e);
}

bool within(std::size_t a, std::size_t b, std::size_t tol)
{
    return (a > b ? a - b : b - a) <= tol;
}

bool matches_truth(const pipeline::ChannelResult& ch, const synth::GroundTruth& truth,
                   Classification expected, std::size_t tol)
{
    const auto& got = ch.segments.event_instants;
    if (ch.segments.classification != expected || got.size() != truth.true_instants.size())
        return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (!within(got[i], truth.true_instants[i], tol))
            return false;
    }
    return true;
}

pipeline::ChannelResult process(const Record& rec, whitening::Mode mode = whitening::Mode::adjusted_fourier)
{
    pipeline::PipelineConfig cfg;
    cfg.input = "memory";
    cfg.whitening.mode = mode;
    return pipeline::process_record(rec, cfg);
}

int success_count(const std::string& name, double snr_db, whitening::Mode mode,
                  Classification expected)
{
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto spec = synth::preset(name);
        spec.seed = seed;
        spec.noise_rms = synth::noise_rms_for_snr(spec, snr_db);
        const auto [rec, truth] = synth::generate(name, spec);
        const int C = whitening::samples_per_cycle(rec.fs(), spec.f0);
        if (matches_truth(process(rec, mode), truth, expected, static_cast<std::size_t>(C / 2)))
            ++ok;
    }
    return ok;
}

Outcome harmonic_nulls()
{
    const double fs = 2500, f0 = 50;
    const int C = whitening::samples_per_cycle(fs, f0);
    double worst = 0;
    for (int k = 0; k <= 24; ++k) {
        std::vector<double> x(2500);
        for (std::size_t n = 0; n < x.size(); ++n)
            x[n] = k == 0 ? 1.0
                          : std::sin(2 * std::numbers::pi * k * f0 * static_cast<double>(n) / fs + 0.3);
        const Record in("h", Unit::dimensionless, fs, x);
        const auto out = whitening::apply_fixed(in, {0.0, 1.0}, C);
        std::vector<double> y(out.samples().begin(), out.samples().end());
        worst = std::max(worst, energy(y, out.warmup()) / energy(x, out.warmup()));
    }
    return {worst < 1e-18, fmt("worst residual/input energy %.3g", worst)};
}

Outcome root_placement()
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> rate(1000, 20000), frac(-0.05, 0.05);
    std::uniform_int_distribution<int> cycle(4, 200);
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        const double fs = rate(rng);
        const int C = cycle(rng);
        const double fp = fs / C * (1 + frac(rng));
        const auto k = whitening::adjusted_coefficients(fp, fs, C);
        const double w = 2 * std::numbers::pi * fp / fs;
        const auto r = std::polar(1.0, w * C) - k.alpha * std::polar(1.0, w) - k.beta;
        worst = std::max(worst, std::abs(r));
    }
    return {worst < 1e-10, fmt("worst |residual| %.3g over 200 triples", worst)};
}

Outcome energy_conservation()
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> half(4, 128);
    const auto basis = wavelet::db4_basis();
    double worst_energy = 0, worst_oracle = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto x = oracle::random_signal(2 * half(rng), rng);
        const auto lvl = wavelet::decompose_level(x, basis);
        const double ex = oracle::energy(x);
        const double e = oracle::energy(lvl.approx) + oracle::energy(lvl.detail);
        worst_energy = std::max(worst_energy, std::abs(e - ex) / ex);
        const auto [c, d] = oracle::brute_force_level(x, basis.h, basis.g);
        for (std::size_t n = 0; n < c.size(); ++n) {
            worst_oracle = std::max(worst_oracle, std::abs(lvl.approx[n] - c[n]) / std::max(std::abs(c[n]), 1e-300));
            worst_oracle = std::max(worst_oracle, std::abs(lvl.detail[n] - d[n]) / std::max(std::abs(d[n]), 1e-300));
        }
    }
    return {worst_energy < 1e-9 && worst_oracle < 1e-12,
            fmt("energy rel err %.3g, oracle rel err %.3g", worst_energy, worst_oracle)};
}

Outcome cascade_convergence()
{
    const auto c = wavelet::cascade(wavelet::db4_basis(wavelet::Normalization::paper_refinement), 50, 64);
    const double ip = c.phi.integral(), iq = c.psi.integral();
    const bool ok = c.final_difference < 1e-6 && c.iterations <= 50 && std::abs(ip - 1) <= 1e-4 &&
                    std::abs(iq) <= 1e-4;
    return {ok, fmt("%g iterations, int phi = %.9f, int psi = %.2e", c.iterations, ip, iq)};
}

Outcome threshold_exactness()
{
    const double sig[] = {0.5, 1, 2};
    const std::size_t ns[] = {8, 64, 1024, 4096};
    const long double want[3][4] = {
        {1.01966699016880896777L, 1.44202688660088301706L, 1.86164870552951706638L, 2.03933398033761793554L},
        {2.03933398033761793554L, 2.88405377320176603413L, 3.72329741105903413276L, 4.07866796067523587107L},
        {4.07866796067523587107L, 5.76810754640353206825L, 7.44659482211806826552L, 8.15733592135047174214L}};
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) {
            const double T = detection::universal_threshold(sig[i], ns[j]);
            worst = std::max(worst, static_cast<double>(std::abs((T - want[i][j]) / want[i][j])));
        }
    const std::vector<double> d = {1, 2, 3, 4, 100};
    const double s = detection::mad_sigma(d);
    const bool mad_ok = s == 1.0 / 0.6725;
    return {worst < 1e-12 && mad_ok, fmt("worst rel err %.3g, MAD sigma %.17g", worst, s)};
}

Outcome fault_accuracy()
{
    const int a = success_count("fault-current", 40, whitening::Mode::adjusted_fourier, Classification::fault_sequence);
    const int b = success_count("fault-current", 30, whitening::Mode::adjusted_fourier, Classification::fault_sequence);
    const int c = success_count("fault-current", 20, whitening::Mode::adjusted_fourier, Classification::fault_sequence);
    return {a >= 95 && b >= 95 && c >= 90, fmt("40 dB %g/100, 30 dB %g/100, 20 dB %g/100", a, b, c)};
}

Outcome resistive_decay()
{
    const int with = success_count("resistive-decay", 30, whitening::Mode::adjusted_fourier, Classification::inception_only);
    const int without = success_count("resistive-decay", 30, whitening::Mode::none, Classification::inception_only);
    return {with >= 95 && without < with, fmt("whitened %g/100, unwhitened %g/100", with, without)};
}

Outcome transient_discrimination()
{
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto spec = synth::preset("transient");
        spec.seed = seed;
        spec.noise_rms = synth::noise_rms_for_snr(spec, 30);
        const auto rec = synth::generate("transient", spec).first;
        if (process(rec).segments.classification == Classification::transient_or_swing)
            ++ok;
    }
    return {ok == 100, fmt("%g/100 classified transient_or_swing", ok)};
}

Outcome runtime_anchor()
{
    auto spec = synth::preset("fault-current");
    spec.duration = 4.0;
    spec.noise_rms = synth::noise_rms_for_snr(spec, 30);
    const auto rec = synth::generate("fault-current", spec).first;
    if (rec.size() != 10000)
        return {false, "record is not 10000 samples"};
    double total = 0;
    for (int i = 0; i < 20; ++i)
        total += process(rec).timings_ms.at("total");
    const double mean = total / 20;
    return {mean < 100, fmt("mean %.3f ms over 20 runs", mean)};
}

Outcome segmentation_suite()
{
    const std::size_t N = 14;
    std::size_t cases = 0, bad = 0;
    for (std::size_t mask = 0; mask < (1u << (N - 1)); ++mask) {
        detection::ChangePointSet pts;
        for (std::size_t p = 1; p < N; ++p) {
            if (mask & (1u << (p - 1))) {
                pts.instants.push_back(p);
                pts.detail_indices.push_back(p);
                pts.run_lengths.push_back(1);
            }
        }
        for (std::size_t min_seg = 0; min_seg <= 4; ++min_seg) {
            segmentation::SmoothingConfig cfg;
            cfg.min_segment = min_seg;
            const auto s = segmentation::build_segments(pts, N, cfg);
            ++cases;
            bool ok = !s.segments.empty() && s.segments.front().start == 0 && s.segments.back().end == N &&
                      s.event_instants.size() + 1 == s.segments.size();
            for (std::size_t i = 0; ok && i < s.segments.size(); ++i) {
                ok = s.segments[i].start < s.segments[i].end &&
                     (i == 0 || s.segments[i].start == s.segments[i - 1].end);
            }
            ok = ok && s.classification == segmentation::classify(s.event_instants.size(), 3);
            bad += !ok;
        }
    }
    const Classification want[] = {Classification::no_event, Classification::inception_only,
                                   Classification::fault_sequence, Classification::fault_sequence,
                                   Classification::transient_or_swing, Classification::transient_or_swing,
                                   Classification::transient_or_swing};
    for (std::size_t n = 0; n <= 6; ++n)
        bad += segmentation::classify(n, 3) != want[n];
    return {bad == 0, fmt("%g tilings checked, %g violations", static_cast<double>(cases), static_cast<double>(bad))};
}

} // namespace

int main()
{
    run(1, "whitening harmonic nulls", 1, harmonic_nulls);
    run(2, "adjusted-filter root placement", 1, root_placement);
    run(3, "wavelet energy conservation", 5, energy_conservation);
    run(4, "cascade convergence", 1, cascade_convergence);
    run(5, "universal threshold exactness", 0, threshold_exactness);
    run(6, "fault-current change-point accuracy", 60, fault_accuracy);
    run(7, "resistive-decay inception", 60, resistive_decay);
    run(8, "transient discrimination", 0, transient_discrimination);
    run(9, "runtime on 10000 samples", 0, runtime_anchor);
    run(10, "segmentation tiling and classification", 0, segmentation_suite);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

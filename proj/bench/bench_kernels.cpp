#include "hilite/kernels.hpp"
#include "hilite/learning.hpp"
#include "hilite/random.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace hilite;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
    Rng rng(1);

    // One hour of 48 kHz audio, 0.4 s windows every 0.1 s.
    std::vector<double> audio(48000u * 3600u);
    for (auto& v : audio) v = rng.uniform(-1.0, 1.0);
    std::vector<double> ms_s, ms_p;
    const double ts = best_of(3, [&] { ms_s = kernels::window_mean_square_serial(audio, 19200, 4800); });
    const double tp = best_of(3, [&] { ms_p = kernels::window_mean_square_parallel(audio, 19200, 4800); });
    report("window mean square (1 h)", ts, tp, ms_s == ms_p);

    // Full grid at step 0.05 against 25 games x 40 pairs.
    std::vector<kernels::Cues5> grid;
    for (const auto& w : enumerate_weight_grid(0.05)) grid.push_back(w.values());
    std::vector<kernels::PreparedPair> pairs(1000);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (auto& x : pairs[i].cues_a) x = rng.uniform();
        for (auto& x : pairs[i].cues_b) x = rng.uniform();
        pairs[i].game = static_cast<std::uint32_t>(i / 40);
        pairs[i].majority_a = rng.bernoulli(0.5);
    }
    kernels::MatchTable a, b;
    const double gs = best_of(5, [&] { a = kernels::match_table_serial(grid, pairs, 25); });
    const double gp = best_of(5, [&] { b = kernels::match_table_parallel(grid, pairs, 25); });
    report("match table (10626 x 1000)", gs, gp, a.matches == b.matches && a.min_margin == b.min_margin);
    return 0;
}

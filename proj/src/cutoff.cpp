#include "spectra/error.hpp"
#include "spectra/spectrum.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>

namespace spectra {

KvCutoff kv_nonreal_cutoff(const EquationSystem& sys) {
    if (sys.kind() != EquationKind::KV) throw UnsupportedError("kv_nonreal_cutoff: system is not Kelvin-Voigt");
    const Measure& m = sys.measure();
    const double d0 = m.support_min();
    const double d = m.support_max();
    if (!(d0 > 0.0 && std::isfinite(d))) {
        throw UnsupportedError("kv_nonreal_cutoff: measure support is not compact in (0, inf); "
                               "finiteness of the non-real KV spectrum is open for such measures");
    }
    const double eps = sys.epsilon();

    // f(x) = K(x) - eps x - 1 decreases on (-inf, -d) from +inf to -inf.
    auto f = [&](double x) { return eval_K(m, cplx(x, 0.0)).value.real() - eps * x - 1.0; };

    double hi = -d - 1.0;
    for (int k = 0; f(hi) >= 0.0; ++k) {
        if (k > 200) throw InternalError("kv_nonreal_cutoff: f stays positive next to the support");
        hi = -d - 0.5 * (-d - hi);  // halve the gap to -d
    }
    double lo = -d - 2.0;
    for (int k = 0; f(lo) <= 0.0; ++k) {
        if (k > 200) throw InternalError("kv_nonreal_cutoff: widen-grid: f not positive on the search ray");
        lo = -d - 2.0 * (-d - lo);
    }
    std::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double x_f = br.first;  // f > 0 on (-inf, x_f]

    // g(r) = -r / sqrt(f(r)) blows up at both ends of (-inf, x_f).
    auto g = [&](double r) {
        const double fr = f(r);
        return fr > 0.0 ? -r / std::sqrt(fr) : std::numeric_limits<double>::infinity();
    };
    auto g_of_log = [&](double ls) { return g(x_f - std::exp(ls)); };

    const double unit = 1.0 + std::abs(x_f);
    double log_lo = std::log(1e-8 * unit);
    double log_hi = std::log(1e8 * unit);
    constexpr int kGrid = 64;
    int best = -1;
    std::vector<double> grid(kGrid);
    for (int widen = 0; widen < 4; ++widen) {
        double best_val = std::numeric_limits<double>::infinity();
        for (int j = 0; j < kGrid; ++j) {
            grid[j] = log_lo + (log_hi - log_lo) * j / (kGrid - 1);
            const double v = g_of_log(grid[j]);
            if (v < best_val) {
                best_val = v;
                best = j;
            }
        }
        if (best > 0 && best < kGrid - 1) break;
        log_lo -= std::log(1e4);
        log_hi += std::log(1e4);
        best = -1;
    }
    if (best < 0) throw InternalError("kv_nonreal_cutoff: widen-grid: minimum of -r/sqrt(f(r)) not bracketed");

    const auto mn = boost::math::tools::brent_find_minima(g_of_log, grid[best - 1], grid[best + 1], 52);
    KvCutoff out;
    out.r_star = x_f - std::exp(mn.first);
    out.witness = f(out.r_star);
    const double threshold = -out.r_star / std::sqrt(out.witness);

    // smallest n with n phi(f(r)) < r, i.e. n sqrt(f(r)) > -r
    out.n_star = static_cast<int>(std::floor(threshold * (1.0 + 1e-12))) + 1;
    while (!(out.n_star * std::sqrt(out.witness) > -out.r_star)) ++out.n_star;
    return out;
}

OracleSweep oracle_nonreal_sweep(const EquationSystem& sys, int n_max, const SliceOptions& opts) {
    OracleSweep out;
    int last_bad = 0;
    for (int n = 1; n <= n_max; ++n) {
        const ClearedPolynomial p = clear_denominators(CharacteristicFn(sys, n), opts.seed);
        try {
            if (count_nonreal(all_roots(p, {opts.root_tol, 500}), opts.im_tol) > 0) {
                out.nonreal_modes.push_back(n);
                last_bad = n;
            }
        } catch (const InconclusiveError&) {
            out.ambiguous_modes.push_back(n);
            last_bad = n;
        }
    }
    out.exact_min_n = last_bad + 1;
    return out;
}

}  // namespace spectra

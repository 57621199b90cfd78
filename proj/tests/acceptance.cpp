// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cli.hpp"
#include "spectra/cauchy.hpp"
#include "spectra/dw.hpp"
#include "spectra/error.hpp"
#include "spectra/polyoracle.hpp"
#include "spectra/spectrum.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace spectra;
using test::cplx;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> sorted_reals(const std::vector<cplx>& roots) {
    std::vector<double> re;
    for (cplx z : roots) re.push_back(z.real());
    std::sort(re.begin(), re.end());
    return re;
}

Outcome two_small_atoms() {
    const CharacteristicFn cf(EquationSystem::gp1(Measure::discrete({{0.1, 1}, {0.1, 2}})), 1);
    const ClearedPolynomial p = clear_denominators(cf);
    const auto roots = all_roots(p);
    double worst = 0.0;
    for (cplx z : roots) worst = std::max(worst, relative_residual(p, z));
    const int nonreal = count_nonreal(roots);
    const auto re = sorted_reals(roots);
    const int in_m2_m1 = std::count_if(re.begin(), re.end(), [](double x) { return x > -2 && x < -1; });
    const int in_m1_0 = std::count_if(re.begin(), re.end(), [](double x) { return x > -1 && x < 0; });
    Outcome o;
    o.pass = roots.size() == 3 && nonreal == 0 && in_m2_m1 == 1 && in_m1_0 == 2 && worst < 1e-12;
    o.detail = "real " + std::to_string(roots.size() - nonreal) + ", nonreal " + std::to_string(nonreal) +
               ", in (-2,-1) " + std::to_string(in_m2_m1) + ", in (-1,0) " + std::to_string(in_m1_0) +
               ", max residual " + fmt("%.2e", worst);
    return o;
}

Outcome light_and_heavy_atoms() {
    const CharacteristicFn cf(EquationSystem::gp1(Measure::discrete({{1, 1}, {200, 50}})), 1);
    const auto roots = all_roots(clear_denominators(cf));
    const auto re = sorted_reals(roots);
    const double brackets[3][2] = {{-49, -40}, {-10, -2}, {-1.5, -1.1}};
    Outcome o;
    o.pass = roots.size() == 3 && count_nonreal(roots) == 0;
    for (int i = 0; o.pass && i < 3; ++i) {
        o.pass = re[i] > brackets[i][0] && re[i] < brackets[i][1] && re[i] >= -50 && re[i] <= -1;
    }
    o.detail = "roots";
    for (double x : re) o.detail += " " + fmt("%.6f", x);
    return o;
}

Outcome upper_root_census() {
    std::mt19937_64 rng(1001);
    int failures = 0, with_pair = 0;
    const int ns[3] = {1, 3, 10};
    for (int k = 0; k < 200; ++k) {
        const auto kind = static_cast<EquationKind>(k % 3);
        const EquationSystem sys = test::random_system(rng, kind, test::random_discrete(rng, 8));
        const auto roots = all_roots(clear_denominators(CharacteristicFn(sys, ns[(k / 3) % 3])));
        int upper = 0;
        bool located = true;
        for (cplx z : roots) {
            if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) {
                if (z.imag() > 0) {
                    ++upper;
                    located &= z.real() < 0.0;
                }
            }
        }
        if (upper > 1 || !located) ++failures;
        with_pair += upper;
    }
    return {failures == 0, "200 systems, " + std::to_string(with_pair) + " with an upper root, " +
                               std::to_string(failures) + " failures"};
}

Outcome leading_growth() {
    const EquationSystem gp1 = EquationSystem::gp1(Measure::discrete({{1, 1}}));
    const EquationSystem gp2 = EquationSystem::gp2(1.0, Measure::discrete({{0.5, 1}}));
    Outcome o;
    for (const auto& [name, sys, c] : {std::tuple{"GP1", gp1, 1.0}, std::tuple{"GP2", gp2, 1.0}}) {
        std::vector<double> err;
        for (int n : {10, 100, 1000}) {
            const auto s = compute_slice(sys, n);
            err.push_back(s.nonreal ? std::abs(*s.nonreal - cplx(0.0, c * n)) / (c * n) : 1e300);
        }
        o.pass = o.pass && err[2] < 2e-3 && err[0] > err[1] && err[1] > err[2];
        o.detail += std::string(o.detail.empty() ? "" : "; ") + name + " rel err " + fmt("%.2e", err[0]) + " " +
                    fmt("%.2e", err[1]) + " " + fmt("%.2e", err[2]);
    }
    return o;
}

Outcome power_law_gp1() {
    const EquationSystem sys = EquationSystem::gp1(Measure::power_law(1.0, 0.5));
    std::vector<double> dev;
    double arg_err = 0.0;
    for (int n : {4, 16, 64}) {
        const auto s = compute_slice(sys, n);
        if (!s.nonreal) return {false, "no upper zero at n=" + std::to_string(n)};
        dev.push_back(std::abs(*s.nonreal / predict(sys, n, Formula::T7i).predicted - 1.0));
        arg_err = std::abs(std::arg(*s.nonreal) - 2.0 * std::numbers::pi / 3.0);
    }
    Outcome o;
    o.pass = dev[2] < 1e-2 && dev[0] >= dev[1] && dev[1] >= dev[2] && arg_err < 1e-3;
    o.detail = "|ratio-1| " + fmt("%.2e", dev[0]) + " " + fmt("%.2e", dev[1]) + " " + fmt("%.2e", dev[2]) +
               ", |arg - 2pi/3| " + fmt("%.2e", arg_err);
    return o;
}

Outcome power_law_gp2() {
    const EquationSystem sys = EquationSystem::gp2(1.0, Measure::power_law(1.0, 0.5));
    const double target_arg = -0.75 * std::numbers::pi;
    Outcome o;
    const auto s = compute_slice(sys, 256);
    if (!s.nonreal) return {false, "no upper zero at n=256"};
    const cplx d = *s.nonreal - cplx(0.0, 256.0);
    const double literal = std::abs(d) / (std::numbers::pi / 2.0 * 16.0);
    const double derived = std::abs(d) / t7ii_correction(sys, 256).modulus;
    double arg_err = 0.0;
    for (int n : {256, 1024, 4096, 16384}) {
        const auto t = compute_slice(sys, n);
        if (!t.nonreal) return {false, "no upper zero at n=" + std::to_string(n)};
        arg_err = std::abs(std::arg(*t.nonreal - cplx(0.0, n)) - target_arg);
    }
    o.pass = std::abs(literal - 1.0) < 5e-2 && arg_err < 1e-2;
    o.detail = "n=256 |w-in|/((pi/2) n^1/2) = " + fmt("%.4f", literal) +
               " (|w-in|/(b pi rho/(2 sin pi rho)) n^1/2 = " + fmt("%.4f", derived) + "), |arg(w-in) + 3pi/4| at n=16384 " +
               fmt("%.2e", arg_err);
    return o;
}

Outcome kv_cutoff() {
    const EquationSystem sys = EquationSystem::kv(0.1, Measure::discrete({{1, 1}}));
    const KvCutoff c = kv_nonreal_cutoff(sys);
    Outcome o;
    int violations = 0;
    auto sweep_from = [&](const EquationSystem& s, int n_star) {
        for (int n = n_star; n <= n_star + 30; ++n) {
            try {
                if (count_nonreal(clear_denominators(CharacteristicFn(s, n))) != 0) ++violations;
            } catch (const Error&) {
                ++violations;
            }
        }
    };
    sweep_from(sys, c.n_star);
    const OracleSweep sweep = oracle_nonreal_sweep(sys, c.n_star);
    o.pass = c.n_star == 21 && sweep.exact_min_n <= c.n_star && sweep.ambiguous_modes.empty();
    o.detail = "n_star " + std::to_string(c.n_star) + ", exact_min_n " + std::to_string(sweep.exact_min_n);

    std::mt19937_64 rng(1007);
    for (double eps : {0.05, 0.5, 2.0}) {
        for (int k = 0; k < 20; ++k) {
            const EquationSystem r = EquationSystem::kv(eps, test::random_discrete(rng, 8));
            sweep_from(r, kv_nonreal_cutoff(r).n_star);
        }
    }
    o.pass = o.pass && violations == 0;
    o.detail += ", 61 systems x 31 modes, " + std::to_string(violations) + " violations";
    return o;
}

Outcome cross_agreement() {
    std::mt19937_64 rng(1008);
    int interior = 0, failures = 0;
    for (int k = 0; k < 300; ++k) {
        const auto kind = static_cast<EquationKind>(k % 3);
        const EquationSystem sys = test::random_system(rng, kind, test::random_discrete(rng, 8));
        const CharacteristicFn cf(sys, 1 + k % 12);
        const DwTrace t = iterate(cf);
        if (t.classification != DwClass::InteriorFixedPoint) continue;
        ++interior;
        const auto roots = all_roots(clear_denominators(cf));
        const cplx w = *t.fixed_point;
        const cplx ref = roots.front();
        bool ok = ref.imag() > 0 && test::rel_dist(w, ref) < 1e-8;
        const double R = 4.0 * std::abs(w) + 10.0;
        try {
            const double h = 0.25 * w.imag();
            ok &= certify_upper_zero(cf, {w.real() - h, w.real() + h, w.imag() - h, w.imag() + h}).winding == 1;
            ok &= certify_upper_zero(cf, {0.0, R, 1e-6 * R, R}).winding == 0;
            ok &= certify_upper_zero(cf, {0.0, 1.0, 1e-3, 1.0}).winding == 0;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) ++failures;
    }
    return {interior > 0 && failures == 0, std::to_string(interior) + " interior fixed points, " +
                                               std::to_string(failures) + " disagreements"};
}

Outcome sign_law() {
    std::mt19937_64 rng(1009);
    std::bernoulli_distribution flip(0.5);
    int violations = 0;
    for (int k = 0; k < 10000; ++k) {
        const Measure m = test::random_measure(rng);
        cplx z = test::random_upper(rng);
        if (flip(rng)) z = std::conj(z);
        const cplx K = eval_K(m, z).value;
        if (!(K.imag() * z.imag() < 0.0)) ++violations;
    }
    return {violations == 0, "10000 samples, " + std::to_string(violations) + " violations"};
}

Outcome determinism() {
    Outcome o;
    for (const char* cfg : {"ex2.json", "gp2_powerlaw.json", "kv_single.json"}) {
        std::string outs[2];
        for (auto& s : outs) {
            const std::string path = std::string(SPECTRA_CONFIG_DIR) + "/" + cfg;
            const char* argv[] = {"spectra", "spectrum", "--system", path.c_str(), "--n", "1..12"};
            std::ostringstream out, err;
            cli::run(6, argv, out, err);
            s = out.str() + err.str();
        }
        o.pass = o.pass && outs[0] == outs[1] && !outs[0].empty();
    }
    o.detail = "spectrum on 3 configs, repeated runs byte-identical: " + std::string(o.pass ? "yes" : "no");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"two small atoms, GP1, n=1: three real zeros", two_small_atoms},
        {"atoms (1,1),(200,50), GP1, n=1: three bracketed real roots", light_and_heavy_atoms},
        {"at most one upper root, in the second quadrant", upper_root_census},
        {"i sqrt(A) n and i sqrt(a) n growth", leading_growth},
        {"GP1 power-law asymptotics", power_law_gp1},
        {"GP2 power-law correction term", power_law_gp2},
        {"Kelvin-Voigt non-real cutoff", kv_cutoff},
        {"iteration and oracle cross-agreement", cross_agreement},
        {"sign law of K", sign_law},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

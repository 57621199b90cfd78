#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the root finders or fixed-point engine under test.

#include "spectra/chareq.hpp"
#include "spectra/measure.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace spectra::test {

using cplx = std::complex<double>;

// Roots of an ascending-coefficient real polynomial as eigenvalues of its
// companion matrix.
inline std::vector<cplx> companion_roots(const std::vector<double>& c) {
    const int d = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) m(i, d - 1) = -c[i] / c[d];
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    std::vector<cplx> out;
    for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

// Coefficients of cf(z) * prod (z + b_k) recovered by sampling on a circle
// and inverting the discrete Fourier transform.
inline std::vector<double> interpolated_coefficients(const CharacteristicFn& cf, const std::vector<Atom>& atoms,
                                                     int degree, double radius) {
    const int N = degree + 1;
    std::vector<cplx> samples(N);
    for (int k = 0; k < N; ++k) {
        // small rotation keeps samples off the real axis
        const cplx z = std::polar(radius, 2.0 * std::numbers::pi * (k + 0.25) / N);
        cplx q{1.0, 0.0};
        for (const auto& a : atoms) q *= z + a.location;
        samples[k] = cf.eval(z).value * q;
    }
    std::vector<double> coeffs(N);
    for (int j = 0; j < N; ++j) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < N; ++k) {
            acc += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * j * (k + 0.25) / N);
        }
        coeffs[j] = (acc / static_cast<double>(N)).real() / std::pow(radius, j);
    }
    return coeffs;
}

// K(z) for b t^rho in the variable u = log t, where dmu = b rho e^{rho u} du.
// The window |u - log|z|| <= 8 is integrated by adaptive Gauss-Kronrod, split
// around the near-pole u = log(-Re z); both tails are convergent geometric series.
inline cplx power_law_quadrature(double b, double rho, cplx z) {
    using boost::math::quadrature::gauss_kronrod;
    const double lz = std::log(std::abs(z));
    const double lo = lz - 8.0;
    const double hi = lz + 8.0;
    std::vector<double> cuts{lo, hi};
    if (z.real() < 0.0) {
        const double lc = std::log(-z.real());
        const double w = std::abs(z.imag()) / -z.real();
        for (double d : {-8 * w, -w, 0.0, w, 8 * w}) {
            if (lc + d > lo && lc + d < hi) cuts.push_back(lc + d);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    cplx total{0.0, 0.0};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        for (int part = 0; part < 2; ++part) {
            auto f = [&](double u) {
                const cplx v = b * rho * std::exp(rho * u) / (z + std::exp(u));
                return part == 0 ? v.real() : v.imag();
            };
            const double v = gauss_kronrod<double, 61>::integrate(f, cuts[k], cuts[k + 1], 20, 1e-14);
            total += part == 0 ? cplx(v, 0.0) : cplx(0.0, v);
        }
    }
    // u < lo: 1/(z + e^u) = sum (-e^u)^j / z^{j+1}
    // u > hi: 1/(z + e^u) = sum (-z)^j e^{-(j+1)u}
    cplx head{0.0, 0.0}, tail{0.0, 0.0};
    for (int j = 0; j < 40; ++j) {
        head += std::pow(-std::exp(lo) / z, j) * std::exp(rho * lo) / (z * (rho + j));
        tail += std::pow(-z * std::exp(-hi), j) * std::exp((rho - 1.0) * hi) / (j + 1.0 - rho);
    }
    return total + b * rho * (head + tail);
}

inline cplx direct_K(const std::vector<Atom>& atoms, cplx z) {
    cplx s{0.0, 0.0};
    for (const auto& a : atoms) s += a.mass / (z + a.location);
    return s;
}

inline Measure random_discrete(std::mt19937_64& rng, int max_atoms = 8) {
    std::uniform_int_distribution<int> count(1, max_atoms);
    std::uniform_real_distribution<double> log_loc(std::log(0.1), std::log(50.0));
    std::uniform_real_distribution<double> log_mass(std::log(0.01), std::log(10.0));
    const int N = count(rng);
    std::vector<double> locs;
    while (static_cast<int>(locs.size()) < N) {
        const double b = std::exp(log_loc(rng));
        bool spaced = true;
        for (double x : locs) spaced &= std::abs(x - b) > 1e-3 * b;
        if (spaced) locs.push_back(b);
    }
    std::sort(locs.begin(), locs.end());
    std::vector<Atom> atoms;
    for (double b : locs) atoms.push_back({std::exp(log_mass(rng)), b});
    return Measure::discrete(atoms);
}

inline Measure random_measure(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> rho(0.05, 0.95);
    std::uniform_real_distribution<double> b(0.1, 5.0);
    switch (pick(rng)) {
        case 0: return random_discrete(rng);
        case 1: return Measure::power_law(b(rng), rho(rng));
        default: return Measure::sum({random_discrete(rng, 3), Measure::power_law(b(rng), rho(rng))});
    }
}

inline EquationSystem random_system(std::mt19937_64& rng, EquationKind kind, Measure m) {
    std::uniform_real_distribution<double> par(0.05, 5.0);
    switch (kind) {
        case EquationKind::GP1: return EquationSystem::gp1(std::move(m));
        case EquationKind::GP2: return EquationSystem::gp2(par(rng), std::move(m));
        case EquationKind::KV: return EquationSystem::kv(par(rng), std::move(m));
    }
    return EquationSystem::gp1(std::move(m));
}

// Random point of the upper half-plane spread over several magnitudes.
inline cplx random_upper(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lr(std::log(1e-3), std::log(1e3));
    std::uniform_real_distribution<double> ang(1e-3, std::numbers::pi - 1e-3);
    return std::polar(std::exp(lr(rng)), ang(rng));
}

inline double rel_dist(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace spectra::test

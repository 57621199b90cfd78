#pragma once

#include "spectra/measure.hpp"

#include <complex>

namespace spectra {

using cplx = std::complex<double>;

struct TransformValue {
    cplx value;
    cplx derivative;  // dK/dz
    bool domain_ok = true;
};

struct CauchyOptions {
    // Relative pole / cut guard: points closer than guard*(1+|z|) to a
    // reflected atom or to (-inf,0] (power laws) are rejected.
    double guard = 1e-13;
    // When false, out-of-domain points yield domain_ok=false and NaN values
    // instead of a DomainError.
    bool throw_on_domain = true;
};

/// K(z) = \int dmu(t)/(z+t) and K'(z).
///
/// Discrete parts are summed directly (error bounded by N ulp for N atoms).
/// Power laws use the closed form (b pi rho / sin pi rho) z^{rho-1} with the
/// principal branch, cut along (-inf, 0].
TransformValue eval_K(const Measure& m, cplx z, const CauchyOptions& opts = {});

/// Coefficient b pi rho / sin(pi rho) of the power-law transform.
double power_law_coefficient(const PowerLawMeasure& p);

/// Leading-order model of K at large |z|: A/z for finite-mass parts and the
/// exact closed form for power-law parts. Requires |arg z| <= pi - delta.
cplx asymptotic_K(const Measure& m, cplx z, double delta = 1e-2);

/// Upper bound for |K| on {|z| = r, |arg z| <= pi - delta}:
/// (2 / c(delta)) \int dmu(t)/(r+t), where c(delta) = min(cos delta, sin delta).
/// delta must lie in (0, pi/2).
double sector_bound(const Measure& m, double r, double delta);

}  // namespace spectra

#pragma once

#include "spectra/chareq.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spectra {

enum class DwClass { InteriorFixedPoint, BoundaryAttracted, EllipticDegenerate, Undecided };

std::string to_string(DwClass c);

/// Trajectory of z_{k+1} = f(z_k) for the fixed-point map of a
/// characteristic function, with its verdict.
struct DwTrace {
    std::vector<cplx> iterates;  // z_0, z_1, ...
    DwClass classification = DwClass::Undecided;
    std::optional<cplx> fixed_point;
    std::optional<cplx> multiplier;  // f'(w)
    int iterations_used = 0;
    std::string error;  // domain/internal error that stopped the iteration, if any
};

struct DwOptions {
    cplx z0{0.0, 1.0};
    int max_iter = 10000;
    double tol = 1e-12;                 // step tolerance, relative to max(1, |z|)
    std::optional<double> boundary;     // Im threshold; default 10 * tol * max(1, |z|)
    double ratio_bound = 0.99999;       // q: per-step contraction bound
    int ratio_window = 5;               // steps over which q must hold
    int boundary_window = 20;           // steps of decreasing Im for BoundaryAttracted
};

/// Iterates the fixed-point map from z0 and classifies the limit.
///
/// InteriorFixedPoint: steps fell below tol with Im z above the boundary
/// threshold after a sustained geometric contraction, and |f'(w)| < 1.
/// BoundaryAttracted: Im z fell below the threshold while decreasing over the
/// last boundary_window steps. This verdict is heuristic; callers cross-check
/// it. EllipticDegenerate (single-atom GP1): no iteration is done, the closed
/// form root (if any) is reported. Undecided: max_iter exhausted.
///
/// A map error mid-iteration ends the run as Undecided with the trace so far
/// and the message in `error`.
DwTrace iterate(const CharacteristicFn& cf, const DwOptions& opts = {});

/// Damped complex Newton iteration on cf. Converges when
/// |cf(z)| < tol * cf.scale(z). Steps that would leave the closed upper
/// half-plane, hit a pole or increase |cf| are halved. Throws
/// NoConvergenceError with the last iterate after max_iter.
cplx newton_refine(const CharacteristicFn& cf, cplx z0, double tol = 1e-12, int max_iter = 100);

struct Box {
    double re_min, re_max, im_min, im_max;

    bool contains(cplx z) const {
        return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
    }
};

struct ZeroCertificate {
    Box box{};
    int winding = 0;
    double quadrature_residual = 0.0;  // |raw winding - nearest integer|
};

struct CertifyOptions {
    double boundary_guard = 1e-12;  // relative to cf.scale on the boundary
    double max_residual = 0.1;
    int max_depth = 40;
};

/// Counts zeros of cf inside `box` (which must lie in Im z > 0) by the
/// argument principle, (1/2 pi i) \oint cf'/cf dz, using adaptive composite
/// Gauss-Legendre quadrature on each side. Throws InconclusiveError when the
/// boundary passes too close to a zero or the residual is >= max_residual.
ZeroCertificate certify_upper_zero(const CharacteristicFn& cf, const Box& box, const CertifyOptions& opts = {});

}  // namespace spectra

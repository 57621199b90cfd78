#pragma once

#include "spectra/cauchy.hpp"
#include "spectra/measure.hpp"

#include <string>

namespace spectra {

enum class EquationKind { GP1, GP2, KV };

std::string to_string(EquationKind kind);

/// Which integro-differential equation, its scalar parameters and the memory
/// measure. `a` is used by GP2 only, `epsilon` by KV only.
class EquationSystem {
public:
    static EquationSystem gp1(Measure m);
    static EquationSystem gp2(double a, Measure m);
    static EquationSystem kv(double epsilon, Measure m);

    EquationKind kind() const noexcept { return kind_; }
    double a() const noexcept { return a_; }
    double epsilon() const noexcept { return epsilon_; }
    const Measure& measure() const noexcept { return measure_; }

private:
    EquationSystem(EquationKind kind, double a, double epsilon, Measure m);

    EquationKind kind_;
    double a_ = 0.0;
    double epsilon_ = 0.0;
    Measure measure_;
};

struct CharValue {
    cplx value;
    cplx derivative;
};

/// Characteristic function of mode n:
///   GP1: F_n(z) = z + n^2 K(z)
///   GP2: G_n(z) = z^2 + a n^2 - n^2 K(z)
///   KV:  H_n(z) = z^2 + eps z n^2 + n^2 - n^2 K(z)
class CharacteristicFn {
public:
    CharacteristicFn(EquationSystem system, int n);

    const EquationSystem& system() const noexcept { return system_; }
    int n() const noexcept { return n_; }
    double n2() const noexcept { return static_cast<double>(n_) * n_; }

    CharValue eval(cplx z, const CauchyOptions& opts = {}) const;

    /// Sum of the moduli of the terms of the characteristic function at z,
    /// plus one: the natural size against which |value| is judged.
    double scale(cplx z) const;

private:
    EquationSystem system_;
    int n_;
};

/// Branch of the square root mapping the closed lower half-plane onto the
/// closed second quadrant: phi(w) = -sqrt(w), with w < 0 continued from
/// below so that phi(-x) = i sqrt(x). Throws DomainError if Im w > 0.
cplx phi(cplx w);

/// Fixed-point map of the upper half-plane whose fixed points there are the
/// upper zeros of cf:
///   GP1: -n^2 K(z);  GP2: n phi(K(z) - a);  KV: n phi(K(z) - eps z - 1).
/// Requires Im z > 0; throws InternalError if the image leaves the upper
/// half-plane.
cplx fixed_point_map(const CharacteristicFn& cf, cplx z);

/// Complex derivative of fixed_point_map at z (the multiplier at a fixed point).
cplx fixed_point_map_derivative(const CharacteristicFn& cf, cplx z);

/// True iff the map is fractional-linear: GP1 with a single atom.
bool is_mobius_degenerate(const CharacteristicFn& cf);

}  // namespace spectra

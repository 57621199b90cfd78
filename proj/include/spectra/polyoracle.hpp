#pragma once

#include "spectra/chareq.hpp"

#include <cstdint>
#include <vector>

namespace spectra {

/// Real polynomial obtained by multiplying a characteristic function of a
/// discrete measure by prod_k (z + b_k). Coefficients are stored in
/// ascending order: coefficients[i] multiplies z^i.
struct ClearedPolynomial {
    std::vector<double> coefficients;
    int degree = 0;
    EquationKind kind = EquationKind::GP1;
    int n = 0;
    std::vector<Atom> atoms;  // the cleared poles are -atoms[k].location

    cplx operator()(cplx z) const;
    /// sum_i |c_i| |z|^i, the backward-error scale of Horner evaluation.
    double magnitude(cplx z) const;
};

/// Expands cf(z) * prod_k (z + b_k). The expansion is checked against direct
/// rational evaluation at 16 pseudo-random points and at the cleared poles;
/// a mismatch throws InternalError. Non-discrete measures throw
/// UnsupportedError.
ClearedPolynomial clear_denominators(const CharacteristicFn& cf, std::uint64_t seed = 0x5eed);

struct RootOptions {
    double tol = 1e-12;  // relative backward residual |P(z)| / magnitude(z)
    int max_iter = 500;
};

/// All roots by Aberth-Ehrlich simultaneous iteration, conjugate-paired to
/// exact symmetry, sorted by (Im descending, Re ascending).
std::vector<cplx> all_roots(const ClearedPolynomial& p, const RootOptions& opts = {});

/// Number of roots with |Im z| > im_tol (1 + |z|). Throws InconclusiveError
/// when a root's imaginary part falls inside [0.1, 1] times that band.
int count_nonreal(const std::vector<cplx>& roots, double im_tol = 1e-9);
int count_nonreal(const ClearedPolynomial& p, double im_tol = 1e-9, const RootOptions& opts = {});

/// Newton polishing of roots of the cleared polynomial against cf itself,
/// which is better conditioned than its expansion when atoms cluster. A step
/// is kept only if it lowers |cf| without jumping over a pole; real roots stay
/// real and conjugate pairs stay exact.
std::vector<cplx> polish_roots(const CharacteristicFn& cf, std::vector<cplx> roots, int max_steps = 8);

/// Relative backward residual used by all_roots.
double relative_residual(const ClearedPolynomial& p, cplx z);

}  // namespace spectra

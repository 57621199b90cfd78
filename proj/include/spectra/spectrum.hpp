#pragma once

#include "spectra/chareq.hpp"
#include "spectra/dw.hpp"
#include "spectra/polyoracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spectra {

// ---------------------------------------------------------------------------
// Per-mode spectrum slices
// ---------------------------------------------------------------------------

enum class SliceMethod { PolyOracle, DwNewtonCertified, ClosedForm };
enum class SliceStatus { Ok, Inconclusive };

std::string to_string(SliceMethod m);

struct Interval {
    double lo;
    double hi;
};

struct RealZero {
    double value;
    Interval bracket;  // the pole-free cell of the real axis containing the zero
};

/// Zeros of one characteristic function. At most one upper-half-plane zero
/// exists; it is stored as `nonreal` and its conjugate is implied.
struct SpectrumSlice {
    int n = 0;
    SliceStatus status = SliceStatus::Ok;
    SliceMethod method = SliceMethod::PolyOracle;
    std::optional<cplx> nonreal;
    std::vector<RealZero> real_zeros;  // ascending
    // false for measures whose transform does not extend to the negative
    // real axis (power laws): the real spectrum is not defined there.
    bool real_spectrum_defined = true;
    bool real_zeros_complete = true;
    bool certified = false;
    std::optional<ZeroCertificate> certificate;
    std::optional<DwClass> dw_class;
    std::string note;
};

struct SliceOptions {
    bool force_dw = false;  // use the iteration path even for discrete measures
    double root_tol = 1e-12;
    double im_tol = 1e-9;
    int dw_max_iter = 10000;
    double dw_tol = 1e-12;
    std::uint64_t seed = 0x5eed;
};

SpectrumSlice compute_slice(const EquationSystem& sys, int n, const SliceOptions& opts = {});

/// compute_slice over several modes, optionally on worker threads. The result
/// is ordered like `ns`. Library errors inside a slice turn it Inconclusive.
std::vector<SpectrumSlice> compute_slices(const EquationSystem& sys, const std::vector<int>& ns,
                                          const SliceOptions& opts = {}, unsigned threads = 1);

/// The cells of the real axis cut at the reflected atoms -b_k: (-inf,-b_N),
/// (-b_{k+1},-b_k), (-b_1, 0) and [0, inf).
std::vector<Interval> real_cells(const std::vector<Atom>& atoms);

/// Real zeros of cf on the real axis (discrete measures only), found by a
/// sign-change scan on pole-clustered geometric grids, bracketing root
/// solves and a search for near-tangential double crossings.
std::vector<RealZero> scan_real_zeros(const CharacteristicFn& cf);

// ---------------------------------------------------------------------------
// Asymptotic predictors
// ---------------------------------------------------------------------------

enum class Formula {
    T6ii,   // GP2: i sqrt(a) n
    T6iii,  // GP1, finite mass A: i sqrt(A) n
    T7i,    // GP1, power law b t^rho
    T7ii    // GP2, power law b t^rho
};

std::string to_string(Formula f);

struct AsymptoticPrediction {
    int n = 0;
    cplx predicted;
    Formula formula = Formula::T6ii;
    std::optional<double> expected_error_exponent;
};

/// Leading asymptotics of the upper zero of mode n. Without an explicit
/// formula the most precise applicable one is chosen. `alpha` is the
/// remainder exponent of mu(t) = b t^rho + O(t^alpha); when given, T7i
/// reports the error exponent 2(alpha - rho)/(2 - rho). Throws
/// UnsupportedError naming the failed hypothesis.
AsymptoticPrediction predict(const EquationSystem& sys, int n, std::optional<Formula> formula = std::nullopt,
                             std::optional<double> alpha = std::nullopt);

/// Modulus and argument of the second term of the T7ii expansion:
/// (b pi rho / (2 sin pi rho)) a^{rho/2 - 1} n^rho and pi (rho/2 - 1).
struct CorrectionTerm {
    double modulus;
    double argument;
};
CorrectionTerm t7ii_correction(const EquationSystem& sys, int n);

struct AsymptoticRow {
    int n = 0;
    std::optional<cplx> computed;
    cplx predicted;
    double rel_error = 0.0;
    // T7ii only: |w - i sqrt(a) n| / correction modulus, and arg(w - i sqrt(a) n)
    std::optional<double> normalized_correction;
    std::optional<double> correction_arg;
};

struct AsymptoticReport {
    Formula formula = Formula::T6ii;
    std::vector<AsymptoticRow> rows;
    bool complete = true;  // false if any slice lacked a nonreal zero
    bool trend_ok = false;
};

AsymptoticReport verify_asymptotics(const EquationSystem& sys, const std::vector<int>& ns,
                                    const SliceOptions& opts = {}, std::optional<Formula> formula = std::nullopt,
                                    unsigned threads = 1);

// ---------------------------------------------------------------------------
// Kelvin-Voigt non-real cutoff
// ---------------------------------------------------------------------------

struct KvCutoff {
    int n_star = 0;
    double r_star = 0.0;
    double witness = 0.0;  // f(r_star) = K(r_star) - eps r_star - 1 > 0
};

/// Sufficient mode index beyond which H_n has only real zeros, for KV systems
/// with compactly supported measures. With f(x) = K(x) - eps x - 1 on
/// (-inf, -d), any r with f(r) > 0 and n sqrt(f(r)) > -r forces a real
/// attracting fixed point of n phi(f) left of r. n_star is the smallest
/// such n after minimizing -r / sqrt(f(r)) over r.
KvCutoff kv_nonreal_cutoff(const EquationSystem& sys);

struct OracleSweep {
    int exact_min_n = 1;                // smallest n0 with only real zeros for all n0 <= n <= n_max
    std::vector<int> nonreal_modes;     // modes with a non-real pair
    std::vector<int> ambiguous_modes;   // modes the oracle could not classify
};

/// Polynomial-oracle census of non-real zeros for n = 1..n_max (discrete measures).
OracleSweep oracle_nonreal_sweep(const EquationSystem& sys, int n_max, const SliceOptions& opts = {});

}  // namespace spectra

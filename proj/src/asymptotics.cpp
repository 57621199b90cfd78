#include "spectra/error.hpp"
#include "spectra/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace spectra {

std::string to_string(Formula f) {
    switch (f) {
        case Formula::T6ii: return "T6ii";
        case Formula::T6iii: return "T6iii";
        case Formula::T7i: return "T7i";
        case Formula::T7ii: return "T7ii";
    }
    return "?";
}

namespace {

// The power-law part of mu(t) = b t^rho + O(t^alpha): exactly one power law,
// everything else of finite mass (absorbed into the remainder).
std::optional<PowerLawMeasure> leading_power_law(const Measure& m) {
    std::vector<PowerLawMeasure> found;
    auto walk = [&](const Measure& node, auto&& self) -> void {
        if (const auto* p = node.as_power_law()) {
            found.push_back(*p);
        } else if (const auto* s = node.as_sum()) {
            for (const auto& part : s->parts) self(part, self);
        }
    };
    walk(m, walk);
    if (found.empty()) return std::nullopt;
    if (found.size() > 1) {
        throw UnsupportedError("measure has several power-law parts; the leading term b t^rho is ambiguous");
    }
    return found.front();
}

Formula default_formula(const EquationSystem& sys) {
    const bool power = sys.measure().has_power_law();
    switch (sys.kind()) {
        case EquationKind::GP1: return power ? Formula::T7i : Formula::T6iii;
        case EquationKind::GP2: return power ? Formula::T7ii : Formula::T6ii;
        case EquationKind::KV: break;
    }
    throw UnsupportedError("no asymptotic formula for the Kelvin-Voigt equation");
}

}  // namespace

AsymptoticPrediction predict(const EquationSystem& sys, int n, std::optional<Formula> formula,
                             std::optional<double> alpha) {
    if (n < 1) throw ValidationError("predict: n must be >= 1");
    const Formula f = formula.value_or(default_formula(sys));
    const double nd = n;
    const cplx i{0.0, 1.0};

    AsymptoticPrediction out;
    out.n = n;
    out.formula = f;

    switch (f) {
        case Formula::T6ii: {
            if (sys.kind() != EquationKind::GP2) throw UnsupportedError("T6ii requires a GP2 system");
            out.predicted = i * std::sqrt(sys.a()) * nd;
            return out;
        }
        case Formula::T6iii: {
            if (sys.kind() != EquationKind::GP1) throw UnsupportedError("T6iii requires a GP1 system");
            const double A = sys.measure().total_mass();
            if (!std::isfinite(A)) throw UnsupportedError("T6iii requires finite total mass A (A is infinite)");
            out.predicted = i * std::sqrt(A) * nd;
            return out;
        }
        case Formula::T7i: {
            if (sys.kind() != EquationKind::GP1) throw UnsupportedError("T7i requires a GP1 system");
            const auto pl = leading_power_law(sys.measure());
            if (!pl) throw UnsupportedError("T7i requires mu(t) = b t^rho + O(t^alpha) (no power-law part)");
            const double rho = pl->rho;
            const double e = 1.0 / (2.0 - rho);
            out.predicted = std::pow(power_law_coefficient(*pl), e) * std::polar(1.0, std::numbers::pi * e) *
                            std::pow(nd, 2.0 * e);
            if (alpha) {
                if (!(*alpha > 0.0 && *alpha < rho)) throw ValidationError("predict: alpha must lie in (0, rho)");
                out.expected_error_exponent = 2.0 * (*alpha - rho) / (2.0 - rho);
            }
            return out;
        }
        case Formula::T7ii: {
            if (sys.kind() != EquationKind::GP2) throw UnsupportedError("T7ii requires a GP2 system");
            if (!leading_power_law(sys.measure())) {
                throw UnsupportedError("T7ii requires mu(t) = b t^rho + O(t^alpha) (no power-law part)");
            }
            const CorrectionTerm c = t7ii_correction(sys, n);
            out.predicted = i * std::sqrt(sys.a()) * nd + std::polar(c.modulus, c.argument);
            return out;
        }
    }
    throw InternalError("predict: unknown formula");
}

CorrectionTerm t7ii_correction(const EquationSystem& sys, int n) {
    const auto pl = leading_power_law(sys.measure());
    if (!pl || sys.kind() != EquationKind::GP2) {
        throw UnsupportedError("T7ii correction requires a GP2 system with a power-law part");
    }
    const double rho = pl->rho;
    const double coeff = pl->b * std::numbers::pi * rho / (2.0 * std::sin(std::numbers::pi * rho));
    return {coeff * std::pow(sys.a(), rho / 2.0 - 1.0) * std::pow(static_cast<double>(n), rho),
            std::numbers::pi * (rho / 2.0 - 1.0)};
}

AsymptoticReport verify_asymptotics(const EquationSystem& sys, const std::vector<int>& ns, const SliceOptions& opts,
                                    std::optional<Formula> formula, unsigned threads) {
    AsymptoticReport rep;
    rep.formula = formula.value_or(default_formula(sys));
    // fail early on an inapplicable formula, before any slice work
    (void)predict(sys, ns.empty() ? 1 : ns.front(), rep.formula);

    const auto slices = compute_slices(sys, ns, opts, threads);
    for (std::size_t k = 0; k < ns.size(); ++k) {
        AsymptoticRow row;
        row.n = ns[k];
        row.predicted = predict(sys, ns[k], rep.formula).predicted;
        row.rel_error = std::numeric_limits<double>::quiet_NaN();
        if (slices[k].status == SliceStatus::Ok && slices[k].nonreal) {
            const cplx w = *slices[k].nonreal;
            row.computed = w;
            row.rel_error = std::abs(w - row.predicted) / std::abs(row.predicted);
            if (rep.formula == Formula::T7ii) {
                const cplx d = w - cplx(0.0, std::sqrt(sys.a()) * ns[k]);
                row.normalized_correction = std::abs(d) / t7ii_correction(sys, ns[k]).modulus;
                row.correction_arg = std::arg(d);
            }
        } else {
            rep.complete = false;
        }
        rep.rows.push_back(row);
    }

    // Errors of o(n) / big-O claims decrease along the list, down to a
    // floor where exact formulas meet rounding noise.
    constexpr double kFloor = 1e-10;
    std::vector<const AsymptoticRow*> present;
    for (const auto& r : rep.rows) {
        if (r.computed) present.push_back(&r);
    }
    rep.trend_ok = rep.complete;
    if (present.size() >= 2) {
        if (rep.formula == Formula::T7ii) {
            const double first = std::abs(*present.front()->normalized_correction - 1.0);
            const double last = std::abs(*present.back()->normalized_correction - 1.0);
            rep.trend_ok = rep.trend_ok && (last < first || last <= kFloor);
        } else {
            for (std::size_t k = 1; k < present.size(); ++k) {
                const double prev = present[k - 1]->rel_error;
                const double cur = present[k]->rel_error;
                rep.trend_ok = rep.trend_ok && (cur < prev || cur <= kFloor);
            }
        }
    }
    return rep;
}

}  // namespace spectra

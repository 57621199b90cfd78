#include "spectra/cauchy.hpp"

#include "spectra/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace spectra {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_z(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
}

struct Accum {
    cplx value{0.0, 0.0};
    cplx derivative{0.0, 0.0};
};

// Returns false (and leaves acc untouched) on a domain violation when not throwing.
bool accumulate(const Measure& m, cplx z, const CauchyOptions& opts, Accum& acc) {
    const double guard = opts.guard * (1.0 + std::abs(z));

    if (const auto* d = m.as_discrete()) {
        for (std::size_t k = 0; k < d->atoms.size(); ++k) {
            const Atom& at = d->atoms[k];
            const cplx s = z + at.location;
            if (std::abs(s) < guard) {
                if (!opts.throw_on_domain) return false;
                throw DomainError("eval_K: z=" + fmt_z(z) + " is within the pole guard of atom " +
                                  std::to_string(k) + " at -" + std::to_string(at.location));
            }
            const cplx inv = 1.0 / s;
            acc.value += at.mass * inv;
            acc.derivative -= at.mass * inv * inv;
        }
        return true;
    }

    if (const auto* p = m.as_power_law()) {
        if (std::abs(z) < guard || (z.real() <= 0.0 && std::abs(z.imag()) < guard)) {
            if (!opts.throw_on_domain) return false;
            throw DomainError("eval_K: z=" + fmt_z(z) + " is on or within the guard of the branch cut (-inf,0]");
        }
        const cplx v = power_law_coefficient(*p) * std::pow(z, p->rho - 1.0);
        acc.value += v;
        acc.derivative += (p->rho - 1.0) * v / z;
        return true;
    }

    for (const auto& part : m.as_sum()->parts) {
        if (!accumulate(part, z, opts, acc)) return false;
    }
    return true;
}

}  // namespace

double power_law_coefficient(const PowerLawMeasure& p) {
    return p.b * std::numbers::pi * p.rho / std::sin(std::numbers::pi * p.rho);
}

TransformValue eval_K(const Measure& m, cplx z, const CauchyOptions& opts) {
    Accum acc;
    if (!accumulate(m, z, opts, acc)) {
        return {cplx(kNaN, kNaN), cplx(kNaN, kNaN), false};
    }
    return {acc.value, acc.derivative, true};
}

cplx asymptotic_K(const Measure& m, cplx z, double delta) {
    if (std::abs(std::arg(z)) > std::numbers::pi - delta) {
        throw DomainError("asymptotic_K: |arg z| exceeds pi - delta for z=" + fmt_z(z));
    }
    if (std::abs(z) == 0.0) {
        throw DomainError("asymptotic_K: z = 0");
    }
    if (m.as_discrete()) {
        return m.total_mass() / z;
    }
    if (const auto* p = m.as_power_law()) {
        return power_law_coefficient(*p) * std::pow(z, p->rho - 1.0);
    }
    cplx total{0.0, 0.0};
    for (const auto& part : m.as_sum()->parts) total += asymptotic_K(part, z, delta);
    return total;
}

namespace {

// \int dmu(t) / (r + t)
double resolvent_mass(const Measure& m, double r) {
    if (const auto* d = m.as_discrete()) {
        double s = 0.0;
        for (const auto& at : d->atoms) s += at.mass / (r + at.location);
        return s;
    }
    if (const auto* p = m.as_power_law()) {
        return power_law_coefficient(*p) * std::pow(r, p->rho - 1.0);
    }
    double s = 0.0;
    for (const auto& part : m.as_sum()->parts) s += resolvent_mass(part, r);
    return s;
}

}  // namespace

double sector_bound(const Measure& m, double r, double delta) {
    if (!(r > 0.0)) {
        throw DomainError("sector_bound: r must be positive");
    }
    if (!(delta > 0.0 && delta < std::numbers::pi / 2)) {
        throw DomainError("sector_bound: delta must lie in (0, pi/2)");
    }
    // |z + t| >= (|z| + t) * min(cos, sin)(delta) / 2 on the sector.
    const double c = std::min(std::cos(delta), std::sin(delta));
    return 2.0 / c * resolvent_mass(m, r);
}

}  // namespace spectra

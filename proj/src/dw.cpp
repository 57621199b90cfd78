#include "spectra/dw.hpp"

#include "spectra/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

namespace spectra {

std::string to_string(DwClass c) {
    switch (c) {
        case DwClass::InteriorFixedPoint: return "InteriorFixedPoint";
        case DwClass::BoundaryAttracted: return "BoundaryAttracted";
        case DwClass::EllipticDegenerate: return "EllipticDegenerate";
        case DwClass::Undecided: return "Undecided";
    }
    return "?";
}

namespace {

// GP1 with one atom: F_n(z)(z + b) = z^2 + b z + n^2 a.
DwTrace closed_form_mobius(const CharacteristicFn& cf) {
    const Atom at = flatten_atoms(cf.system().measure())->front();
    const double b = at.location;
    const double disc = b * b - 4.0 * cf.n2() * at.mass;
    DwTrace tr;
    tr.classification = DwClass::EllipticDegenerate;
    if (disc < 0.0) {
        const cplx w{-0.5 * b, 0.5 * std::sqrt(-disc)};
        tr.fixed_point = w;
        tr.multiplier = fixed_point_map_derivative(cf, w);
    }
    return tr;
}

bool ratios_contract(const std::vector<double>& steps, int window, double q) {
    const int k = static_cast<int>(steps.size());
    for (int j = k - window; j < k; ++j) {
        if (steps[j - 1] == 0.0) continue;
        if (steps[j] / steps[j - 1] > q) return false;
    }
    return true;
}

}  // namespace

DwTrace iterate(const CharacteristicFn& cf, const DwOptions& opts) {
    if (!(opts.z0.imag() > 0.0)) throw DomainError("iterate: z0 must lie in the open upper half-plane");
    if (opts.max_iter < 1 || !(opts.tol > 0.0)) throw ValidationError("iterate: need max_iter >= 1 and tol > 0");

    if (is_mobius_degenerate(cf)) return closed_form_mobius(cf);

    // relative like the step tolerance, so slow real limits far from 0 are not mistaken for interior ones
    auto boundary_at = [&](cplx z) { return opts.boundary.value_or(10.0 * opts.tol * std::max(1.0, std::abs(z))); };
    DwTrace tr;
    tr.iterates.push_back(opts.z0);
    std::vector<double> steps;
    cplx z = opts.z0;
    int stagnant = 0;

    for (int k = 1; k <= opts.max_iter; ++k) {
        cplx next;
        try {
            next = fixed_point_map(cf, z);
        } catch (const Error& e) {
            tr.error = e.what();
            tr.iterations_used = k - 1;
            return tr;
        }
        steps.push_back(std::abs(next - z));
        z = next;
        tr.iterates.push_back(z);
        tr.iterations_used = k;

        if (z.imag() < boundary_at(z)) {
            const int w = opts.boundary_window;
            if (k >= w && z.imag() < tr.iterates[k - w].imag()) {
                tr.classification = DwClass::BoundaryAttracted;
                return tr;
            }
            continue;
        }

        if (steps.back() < opts.tol * std::max(1.0, std::abs(z))) {
            ++stagnant;
            const int w = opts.ratio_window;
            const bool geometric = k <= w || ratios_contract(steps, w, opts.ratio_bound) || stagnant >= 10;
            if (!geometric) continue;
            cplx mult;
            try {
                mult = fixed_point_map_derivative(cf, z);
            } catch (const Error&) {
                continue;
            }
            if (std::abs(mult) < 1.0) {
                tr.classification = DwClass::InteriorFixedPoint;
                tr.fixed_point = z;
                tr.multiplier = mult;
                return tr;
            }
        } else {
            stagnant = 0;
        }
    }
    return tr;
}

cplx newton_refine(const CharacteristicFn& cf, cplx z0, double tol, int max_iter) {
    cplx z = z0;
    CharValue f = cf.eval(z);
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(f.value) < tol * cf.scale(z)) return z;

        const cplx step = f.value / f.derivative;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            throw NoConvergenceError("newton_refine: vanishing derivative", {z});
        }
        double lambda = 1.0;
        bool accepted = false;
        for (int halvings = 0; halvings < 60 && !accepted; ++halvings, lambda *= 0.5) {
            const cplx cand = z - lambda * step;
            if (cand.imag() < 0.0) continue;
            CharValue fc;
            try {
                fc = cf.eval(cand);
            } catch (const DomainError&) {
                continue;
            }
            if (std::abs(fc.value) < std::abs(f.value)) {
                z = cand;
                f = fc;
                accepted = true;
            }
        }
        if (!accepted) {
            // No descent possible: z is as good as floating point allows.
            if (std::abs(f.value) < 1e3 * tol * cf.scale(z)) return z;
            throw NoConvergenceError("newton_refine: line search failed", {z});
        }
    }
    if (std::abs(f.value) < tol * cf.scale(z)) return z;
    throw NoConvergenceError("newton_refine: no convergence within max_iter", {z});
}

namespace {

class WindingIntegrator {
public:
    WindingIntegrator(const CharacteristicFn& cf, const CertifyOptions& opts) : cf_(cf), opts_(opts) {}

    // \int_seg cf'/cf dz over the straight segment from a to b.
    cplx segment(cplx a, cplx b) {
        const cplx whole = panel(a, b, 0.0, 1.0);
        return refine(a, b, 0.0, 1.0, whole, 0);
    }

private:
    cplx integrand(cplx z) {
        const CharValue f = cf_.eval(z);
        if (std::abs(f.value) < opts_.boundary_guard * cf_.scale(z)) {
            throw InconclusiveError("certify_upper_zero: box boundary passes too close to a zero");
        }
        return f.derivative / f.value;
    }

    cplx panel(cplx a, cplx b, double t0, double t1) {
        using GL = boost::math::quadrature::gauss<double, 20>;
        const cplx dz = b - a;
        const double half = 0.5 * (t1 - t0);
        const double mid = 0.5 * (t0 + t1);
        cplx acc{0.0, 0.0};
        const auto& x = GL::abscissa();
        const auto& w = GL::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                acc += w[i] * integrand(a + mid * dz);
            } else {
                acc += w[i] * (integrand(a + (mid - half * x[i]) * dz) + integrand(a + (mid + half * x[i]) * dz));
            }
        }
        return acc * half * dz;
    }

    cplx refine(cplx a, cplx b, double t0, double t1, cplx whole, int depth) {
        const double tm = 0.5 * (t0 + t1);
        const cplx left = panel(a, b, t0, tm);
        const cplx right = panel(a, b, tm, t1);
        const cplx sum = left + right;
        // 2 pi * 1e-4 of winding budget per unit parameter length
        const double budget = 2e-4 * std::numbers::pi * (t1 - t0);
        if (std::abs(sum - whole) < budget || depth >= opts_.max_depth) return sum;
        return refine(a, b, t0, tm, left, depth + 1) + refine(a, b, tm, t1, right, depth + 1);
    }

    const CharacteristicFn& cf_;
    const CertifyOptions& opts_;
};

}  // namespace

ZeroCertificate certify_upper_zero(const CharacteristicFn& cf, const Box& box, const CertifyOptions& opts) {
    if (!(box.im_min > 0.0) || !(box.re_min < box.re_max) || !(box.im_min < box.im_max)) {
        throw DomainError("certify_upper_zero: box must be non-degenerate and lie in Im z > 0");
    }
    const cplx c1{box.re_min, box.im_min}, c2{box.re_max, box.im_min};
    const cplx c3{box.re_max, box.im_max}, c4{box.re_min, box.im_max};

    WindingIntegrator integ(cf, opts);
    const cplx total = integ.segment(c1, c2) + integ.segment(c2, c3) + integ.segment(c3, c4) + integ.segment(c4, c1);
    const cplx raw = total / cplx(0.0, 2.0 * std::numbers::pi);

    ZeroCertificate cert;
    cert.box = box;
    cert.winding = static_cast<int>(std::lround(raw.real()));
    cert.quadrature_residual = std::abs(raw - cplx(cert.winding, 0.0));
    if (!(cert.quadrature_residual < opts.max_residual)) {
        throw InconclusiveError("certify_upper_zero: quadrature residual " + std::to_string(cert.quadrature_residual) +
                                " too large; shrink or move the box");
    }
    return cert;
}

}  // namespace spectra

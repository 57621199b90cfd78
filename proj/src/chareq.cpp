#include "spectra/chareq.hpp"

#include "spectra/error.hpp"

#include <cmath>

namespace spectra {

std::string to_string(EquationKind kind) {
    switch (kind) {
        case EquationKind::GP1: return "gp1";
        case EquationKind::GP2: return "gp2";
        case EquationKind::KV: return "kv";
    }
    return "?";
}

EquationSystem::EquationSystem(EquationKind kind, double a, double epsilon, Measure m)
    : kind_(kind), a_(a), epsilon_(epsilon), measure_(std::move(m)) {}

EquationSystem EquationSystem::gp1(Measure m) { return {EquationKind::GP1, 0.0, 0.0, std::move(m)}; }

EquationSystem EquationSystem::gp2(double a, Measure m) {
    if (!(std::isfinite(a) && a > 0.0)) throw ValidationError("gp2: a must be a positive finite number");
    return {EquationKind::GP2, a, 0.0, std::move(m)};
}

EquationSystem EquationSystem::kv(double epsilon, Measure m) {
    if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
        throw ValidationError("kv: epsilon must be a positive finite number");
    }
    return {EquationKind::KV, 0.0, epsilon, std::move(m)};
}

CharacteristicFn::CharacteristicFn(EquationSystem system, int n) : system_(std::move(system)), n_(n) {
    if (n < 1) throw ValidationError("mode index n must be >= 1");
}

CharValue CharacteristicFn::eval(cplx z, const CauchyOptions& opts) const {
    const TransformValue k = eval_K(system_.measure(), z, opts);
    const double nn = n2();
    switch (system_.kind()) {
        case EquationKind::GP1:
            return {z + nn * k.value, 1.0 + nn * k.derivative};
        case EquationKind::GP2:
            return {z * z + system_.a() * nn - nn * k.value, 2.0 * z - nn * k.derivative};
        case EquationKind::KV: {
            const double eps = system_.epsilon();
            return {z * z + eps * z * nn + nn - nn * k.value, 2.0 * z + eps * nn - nn * k.derivative};
        }
    }
    throw InternalError("unknown equation kind");
}

double CharacteristicFn::scale(cplx z) const {
    CauchyOptions opts;
    opts.throw_on_domain = false;
    const TransformValue k = eval_K(system_.measure(), z, opts);
    const double nn = n2();
    const double kmod = k.domain_ok ? std::abs(k.value) : 0.0;
    const double az = std::abs(z);
    switch (system_.kind()) {
        case EquationKind::GP1: return 1.0 + az + nn * kmod;
        case EquationKind::GP2: return 1.0 + az * az + system_.a() * nn + nn * kmod;
        case EquationKind::KV: return 1.0 + az * az + system_.epsilon() * az * nn + nn + nn * kmod;
    }
    return 1.0;
}

cplx phi(cplx w) {
    if (w.imag() > 0.0) {
        throw DomainError("phi: argument must lie in the closed lower half-plane");
    }
    if (w.imag() == 0.0 && w.real() < 0.0) {
        return {0.0, std::sqrt(-w.real())};
    }
    return -std::sqrt(w);
}

namespace {

// The argument fed to phi for GP2/KV (unused for GP1).
cplx phi_argument(const CharacteristicFn& cf, cplx z, cplx kval) {
    const auto& sys = cf.system();
    if (sys.kind() == EquationKind::GP2) return kval - sys.a();
    return kval - sys.epsilon() * z - 1.0;
}

}  // namespace

cplx fixed_point_map(const CharacteristicFn& cf, cplx z) {
    if (!(z.imag() > 0.0)) {
        throw DomainError("fixed_point_map: z must lie in the open upper half-plane");
    }
    const TransformValue k = eval_K(cf.system().measure(), z);
    cplx image;
    if (cf.system().kind() == EquationKind::GP1) {
        image = -cf.n2() * k.value;
    } else {
        const cplx w = phi_argument(cf, z, k.value);
        if (w.imag() > 0.0) {
            throw InternalError("fixed_point_map: phi argument left the lower half-plane (sign law violated)");
        }
        image = static_cast<double>(cf.n()) * phi(w);
    }
    if (!(image.imag() > 0.0)) {
        throw InternalError("fixed_point_map: image is not in the upper half-plane");
    }
    return image;
}

cplx fixed_point_map_derivative(const CharacteristicFn& cf, cplx z) {
    const TransformValue k = eval_K(cf.system().measure(), z);
    const auto& sys = cf.system();
    if (sys.kind() == EquationKind::GP1) {
        return -cf.n2() * k.derivative;
    }
    // phi'(w) = 1 / (2 phi(w)) since phi(w)^2 = w
    const cplx p = phi(phi_argument(cf, z, k.value));
    const cplx dw = sys.kind() == EquationKind::GP2 ? k.derivative : k.derivative - sys.epsilon();
    return static_cast<double>(cf.n()) * dw / (2.0 * p);
}

bool is_mobius_degenerate(const CharacteristicFn& cf) {
    if (cf.system().kind() != EquationKind::GP1) return false;
    const auto atoms = flatten_atoms(cf.system().measure());
    return atoms && atoms->size() == 1;
}

}  // namespace spectra

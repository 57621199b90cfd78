#include "spectra/polyoracle.hpp"

#include "spectra/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace spectra {

namespace {

using Poly = std::vector<double>;  // ascending powers

Poly multiply(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    }
    return r;
}

// prod_{k != skip} (z + b_k)
Poly pole_product(const std::vector<Atom>& atoms, std::size_t skip) {
    Poly r{1.0};
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (k == skip) continue;
        r = multiply(r, Poly{atoms[k].location, 1.0});
    }
    return r;
}

void axpy(Poly& y, double alpha, const Poly& x) {
    if (y.size() < x.size()) y.resize(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <class T>
std::complex<T> horner(const Poly& c, std::complex<T> z) {
    std::complex<T> acc{0, 0};
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + static_cast<T>(c[i]);
    return acc;
}

}  // namespace

cplx ClearedPolynomial::operator()(cplx z) const { return horner<double>(coefficients, z); }

double ClearedPolynomial::magnitude(cplx z) const {
    const double az = std::abs(z);
    double acc = 0.0;
    for (std::size_t i = coefficients.size(); i-- > 0;) acc = acc * az + std::abs(coefficients[i]);
    return acc;
}

double relative_residual(const ClearedPolynomial& p, cplx z) {
    // long double Horner keeps the residual itself well below the tolerances used.
    const auto v = horner<long double>(p.coefficients, std::complex<long double>(z.real(), z.imag()));
    const double mag = p.magnitude(z);
    return mag > 0.0 ? static_cast<double>(std::abs(v)) / mag : static_cast<double>(std::abs(v));
}

ClearedPolynomial clear_denominators(const CharacteristicFn& cf, std::uint64_t seed) {
    const auto flat = flatten_atoms(cf.system().measure());
    if (!flat) {
        throw UnsupportedError("clear_denominators: measure is not discrete: " + cf.system().measure().describe());
    }
    const std::vector<Atom>& atoms = *flat;
    const double nn = cf.n2();
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    const Poly q = pole_product(atoms, none);

    Poly leading;
    double sign = -1.0;
    switch (cf.system().kind()) {
        case EquationKind::GP1:
            leading = {0.0, 1.0};
            sign = 1.0;
            break;
        case EquationKind::GP2:
            leading = {cf.system().a() * nn, 0.0, 1.0};
            break;
        case EquationKind::KV:
            leading = {nn, cf.system().epsilon() * nn, 1.0};
            break;
    }

    Poly p = multiply(leading, q);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        axpy(p, sign * nn * atoms[k].mass, pole_product(atoms, k));
    }

    ClearedPolynomial out;
    out.coefficients = std::move(p);
    out.degree = static_cast<int>(out.coefficients.size()) - 1;
    out.kind = cf.system().kind();
    out.n = cf.n();
    out.atoms = atoms;

    // Expansion check against direct rational evaluation.
    const double radius = 1.0 + atoms.back().location;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> rad(0.25, 2.0);
    int accepted = 0;
    for (int tries = 0; accepted < 16 && tries < 1000; ++tries) {
        const cplx z = std::polar(radius * rad(rng), angle(rng));
        bool near_pole = false;
        for (const auto& at : atoms) near_pole |= std::abs(z + at.location) < 1e-3 * radius;
        if (near_pole) continue;
        ++accepted;

        cplx qz{1.0, 0.0};
        double qmag = 1.0;
        for (const auto& at : atoms) {
            qz *= z + at.location;
            qmag *= std::abs(z) + at.location;
        }
        const cplx direct = cf.eval(z).value * qz;
        const double tol = 1e-10 * (out.magnitude(z) + cf.scale(z) * qmag);
        if (std::abs(out(z) - direct) > tol) {
            throw InternalError("clear_denominators: expansion disagrees with rational evaluation");
        }
    }

    // At a cleared pole only the k-th residue term survives:
    // P(-b_k) = sign * n^2 a_k prod_{j != k} (b_j - b_k), never zero.
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        double expected = sign * nn * atoms[k].mass;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (j != k) expected *= atoms[j].location - atoms[k].location;
        }
        const cplx z{-atoms[k].location, 0.0};
        if (expected == 0.0 || std::abs(out(z).real() - expected) > 1e-8 * out.magnitude(z)) {
            throw InternalError("clear_denominators: cleared polynomial vanishes at or mismatches a pole");
        }
    }
    return out;
}

std::vector<cplx> all_roots(const ClearedPolynomial& p, const RootOptions& opts) {
    const int d = p.degree;
    if (d < 1 || p.coefficients.back() == 0.0) {
        throw ValidationError("all_roots: polynomial must have degree >= 1 and nonzero leading coefficient");
    }
    // Exact zero roots are split off first: the relative residual is
    // meaningless at a root of a polynomial with vanishing constant term.
    std::size_t zeros = 0;
    while (p.coefficients[zeros] == 0.0) ++zeros;
    if (zeros > 0) {
        ClearedPolynomial reduced = p;
        reduced.coefficients.erase(reduced.coefficients.begin(), reduced.coefficients.begin() + zeros);
        reduced.degree = d - static_cast<int>(zeros);
        std::vector<cplx> roots = reduced.degree > 0 ? all_roots(reduced, opts) : std::vector<cplx>{};
        roots.insert(roots.end(), zeros, cplx(0.0, 0.0));
        std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
            if (x.imag() != y.imag()) return x.imag() > y.imag();
            return x.real() < y.real();
        });
        return roots;
    }

    Poly monic(p.coefficients);
    const double lead = monic.back();
    for (double& c : monic) c /= lead;

    double bound = 0.0;
    for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(monic[i]));
    const double radius = 1.0 + bound;

    std::vector<cplx> z(d);
    for (int j = 0; j < d; ++j) {
        // offset keeps seeds off the real axis
        z[j] = std::polar(radius, 2.0 * std::numbers::pi * j / d + 0.4);
    }

    Poly dmonic(d);
    for (int i = 1; i <= d; ++i) dmonic[i - 1] = i * monic[i];

    const double eps = std::numeric_limits<double>::epsilon();
    int quiet_sweeps = 0;
    for (int it = 0; it < opts.max_iter && quiet_sweeps < 2; ++it) {
        bool moved = false;
        for (int i = 0; i < d; ++i) {
            const cplx pv = horner<double>(monic, z[i]);
            if (pv == cplx(0.0, 0.0)) continue;
            const cplx dpv = horner<double>(dmonic, z[i]);
            cplx repulsion{0.0, 0.0};
            for (int j = 0; j < d; ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            const cplx ratio = pv / dpv;
            cplx step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                step = dpv == cplx(0.0, 0.0) ? cplx(eps * radius, eps * radius) : ratio;
            }
            z[i] -= step;
            if (std::abs(step) > 4.0 * eps * std::max(1.0, std::abs(z[i]))) moved = true;
        }
        quiet_sweeps = moved ? 0 : quiet_sweeps + 1;
    }

    std::vector<double> residuals(d);
    bool ok = true;
    for (int i = 0; i < d; ++i) {
        residuals[i] = relative_residual(p, z[i]);
        ok &= residuals[i] < opts.tol;
    }
    if (!ok) {
        throw NoConvergenceError("all_roots: Aberth-Ehrlich iteration did not reach the residual tolerance", z,
                                 residuals);
    }

    // Pair each root with its nearest conjugate and average to exact symmetry;
    // a root closer to its own reflection than to any other is real.
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return z[x].imag() > z[y].imag(); });
    std::vector<bool> used(d, false);
    for (int i : order) {
        if (used[i]) continue;
        used[i] = true;
        const cplx target = std::conj(z[i]);
        int best = -1;
        double best_dist = 2.0 * std::abs(z[i].imag());
        for (int j = 0; j < d; ++j) {
            if (used[j]) continue;
            const double dist = std::abs(z[j] - target);
            if (dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        if (best < 0) {
            z[i] = {z[i].real(), 0.0};
            continue;
        }
        used[best] = true;
        cplx upper = 0.5 * (z[i] + std::conj(z[best]));
        if (upper.imag() < 0.0) upper = std::conj(upper);
        z[i] = upper;
        z[best] = std::conj(upper);
    }

    std::sort(z.begin(), z.end(), [](cplx x, cplx y) {
        if (x.imag() != y.imag()) return x.imag() > y.imag();
        return x.real() < y.real();
    });
    return z;
}

std::vector<cplx> polish_roots(const CharacteristicFn& cf, std::vector<cplx> roots, int max_steps) {
    const auto atoms = flatten_atoms(cf.system().measure());
    if (!atoms) throw UnsupportedError("polish_roots: measure is not discrete");
    CauchyOptions quiet;
    quiet.throw_on_domain = false;

    auto pole_gap = [&](cplx z) {
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& at : *atoms) gap = std::min(gap, std::abs(z + at.location));
        return gap;
    };
    auto polish = [&](cplx z) {
        const bool real = z.imag() == 0.0;
        CharValue v = cf.eval(z, quiet);
        if (!std::isfinite(std::abs(v.value))) return z;
        for (int k = 0; k < max_steps && v.value != cplx(0.0, 0.0); ++k) {
            cplx step = v.value / v.derivative;
            if (real) step = {step.real(), 0.0};
            if (!std::isfinite(std::abs(step)) || std::abs(step) >= 0.5 * pole_gap(z)) break;
            const cplx next = z - step;
            if (!real && !(next.imag() > 0.0)) break;
            const CharValue nv = cf.eval(next, quiet);
            if (!(std::abs(nv.value) < std::abs(v.value))) break;
            z = next;
            v = nv;
        }
        return z;
    };

    for (cplx& r : roots) {
        if (r.imag() >= 0.0) r = polish(r);
    }
    // lower roots mirror their (already polished) partners
    for (cplx& r : roots) {
        if (r.imag() < 0.0) {
            cplx best = std::conj(r);
            double dist = std::numeric_limits<double>::infinity();
            for (const cplx& u : roots) {
                if (u.imag() > 0.0 && std::abs(u - std::conj(r)) < dist) {
                    dist = std::abs(u - std::conj(r));
                    best = u;
                }
            }
            r = std::conj(best);
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        if (x.imag() != y.imag()) return x.imag() > y.imag();
        return x.real() < y.real();
    });
    return roots;
}

int count_nonreal(const std::vector<cplx>& roots, double im_tol) {
    int count = 0;
    for (const cplx& r : roots) {
        const double band = im_tol * (1.0 + std::abs(r));
        const double im = std::abs(r.imag());
        if (im > band) {
            ++count;
        } else if (im >= 0.1 * band) {
            throw InconclusiveError("count_nonreal: a root lies in the ambiguity band; tighten im_tol");
        }
    }
    return count;
}

int count_nonreal(const ClearedPolynomial& p, double im_tol, const RootOptions& opts) {
    return count_nonreal(all_roots(p, opts), im_tol);
}

}  // namespace spectra

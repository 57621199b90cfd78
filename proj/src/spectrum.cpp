#include "spectra/spectrum.hpp"

#include "spectra/error.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace spectra {

std::string to_string(SliceMethod m) {
    switch (m) {
        case SliceMethod::PolyOracle: return "PolyOracle";
        case SliceMethod::DwNewtonCertified: return "DwNewtonCertified";
        case SliceMethod::ClosedForm: return "ClosedForm";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double real_value(const CharacteristicFn& cf, double x) { return cf.eval(cplx(x, 0.0)).value.real(); }

Interval cell_of(const std::vector<Interval>& cells, double x) {
    for (const auto& c : cells) {
        if (x > c.lo && x < c.hi) return c;
        if (c.lo == 0.0 && x == 0.0) return c;
    }
    return {x, x};  // on a reflected atom; cannot happen for a zero
}

int cleared_degree(const CharacteristicFn& cf, std::size_t atoms) {
    return static_cast<int>(atoms) + (cf.system().kind() == EquationKind::GP1 ? 1 : 2);
}

// Radius enclosing the upper zero (and, for discrete measures, all real zeros).
double search_radius(const CharacteristicFn& cf) {
    const Measure& m = cf.system().measure();
    const double n = cf.n();
    double finite_mass = 0.0;
    double finite_inv = 0.0;
    double max_loc = 0.0;
    double power = 0.0;
    auto walk = [&](const Measure& node, auto&& self) -> void {
        if (const auto* d = node.as_discrete()) {
            for (const auto& at : d->atoms) {
                finite_mass += at.mass;
                finite_inv += at.mass / at.location;
                max_loc = std::max(max_loc, at.location);
            }
        } else if (const auto* p = node.as_power_law()) {
            power += std::pow(power_law_coefficient(*p) * n * n, 1.0 / (2.0 - p->rho));
        } else {
            for (const auto& part : node.as_sum()->parts) self(part, self);
        }
    };
    walk(m, walk);
    const auto& sys = cf.system();
    const double a = sys.kind() == EquationKind::GP2 ? sys.a() : 0.0;
    const double eps = sys.kind() == EquationKind::KV ? sys.epsilon() : 0.0;
    return 4.0 * (1.0 + max_loc + eps * n * n + n * std::sqrt(1.0 + a + finite_mass + finite_inv) + 4.0 * power);
}

Box certificate_box(cplx w) {
    const double h = std::max(1.0, 0.05 * std::abs(w));
    return {w.real() - h, w.real() + h, std::max(w.imag() - h, 0.5 * w.imag()), w.imag() + h};
}

void attach_certificate(const CharacteristicFn& cf, SpectrumSlice& s) {
    try {
        s.certificate = certify_upper_zero(cf, certificate_box(*s.nonreal));
    } catch (const Error& e) {
        s.note += std::string(s.note.empty() ? "" : "; ") + "certificate unavailable: " + e.what();
    }
}

void assign_real(SpectrumSlice& s, std::vector<double> xs, const std::vector<Atom>& atoms) {
    std::sort(xs.begin(), xs.end());
    const auto cells = real_cells(atoms);
    s.real_zeros.clear();
    for (double x : xs) s.real_zeros.push_back({x, cell_of(cells, x)});
}

SpectrumSlice closed_form_slice(const CharacteristicFn& cf, const Atom& at) {
    SpectrumSlice s;
    s.n = cf.n();
    s.method = SliceMethod::ClosedForm;
    s.certified = true;
    const double b = at.location;
    const double c = cf.n2() * at.mass;  // z^2 + b z + c
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) {
        s.nonreal = cplx(-0.5 * b, 0.5 * std::sqrt(-disc));
        attach_certificate(cf, s);
    } else {
        const double q = -0.5 * (b + std::sqrt(disc));
        assign_real(s, {q, c / q}, {at});
    }
    return s;
}

SpectrumSlice oracle_slice(const CharacteristicFn& cf, const std::vector<Atom>& atoms, const SliceOptions& opts) {
    SpectrumSlice s;
    s.n = cf.n();
    s.method = SliceMethod::PolyOracle;
    const ClearedPolynomial p = clear_denominators(cf, opts.seed);
    const std::vector<cplx> roots = polish_roots(cf, all_roots(p, {opts.root_tol, 500}));
    int nonreal = 0;
    try {
        nonreal = count_nonreal(roots, opts.im_tol);
    } catch (const InconclusiveError& e) {
        s.status = SliceStatus::Inconclusive;
        s.note = e.what();
        return s;
    }
    if (nonreal > 2) {
        s.status = SliceStatus::Inconclusive;
        s.note = "oracle found more than one upper zero";
        return s;
    }
    std::vector<double> reals;
    for (const cplx& r : roots) {
        const double band = opts.im_tol * (1.0 + std::abs(r));
        if (r.imag() > band) {
            s.nonreal = r;
        } else if (std::abs(r.imag()) <= band) {
            reals.push_back(r.real());
        }
    }
    assign_real(s, std::move(reals), atoms);
    s.certified = true;
    if (s.nonreal) attach_certificate(cf, s);
    return s;
}

// Quadrisection of a box with winding 1 down to a small box, then Newton.
cplx locate_in_box(const CharacteristicFn& cf, Box box, double tol) {
    for (int depth = 0; depth < 60; ++depth) {
        const double w = box.re_max - box.re_min;
        const double h = box.im_max - box.im_min;
        const cplx centre{box.re_min + 0.5 * w, box.im_min + 0.5 * h};
        if (std::max(w, h) < 1e-6 * (1.0 + std::abs(centre))) break;
        bool found = false;
        // off-centre splits avoid a zero sitting exactly on the cut lines
        for (double frac : {0.5, 0.43, 0.57}) {
            const double xm = box.re_min + frac * w;
            const double ym = box.im_min + frac * h;
            const Box quads[4] = {{box.re_min, xm, box.im_min, ym},
                                  {xm, box.re_max, box.im_min, ym},
                                  {box.re_min, xm, ym, box.im_max},
                                  {xm, box.re_max, ym, box.im_max}};
            try {
                for (const Box& q : quads) {
                    if (certify_upper_zero(cf, q).winding == 1) {
                        box = q;
                        found = true;
                        break;
                    }
                }
            } catch (const InconclusiveError&) {
                continue;
            }
            if (found) break;
        }
        if (!found) break;
    }
    const cplx centre{0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max)};
    return newton_refine(cf, centre, tol);
}

SpectrumSlice dw_slice(const CharacteristicFn& cf, const std::optional<std::vector<Atom>>& atoms,
                       const SliceOptions& opts) {
    SpectrumSlice s;
    s.n = cf.n();
    s.method = SliceMethod::DwNewtonCertified;
    s.real_spectrum_defined = atoms.has_value();

    DwOptions dopt;
    dopt.max_iter = opts.dw_max_iter;
    dopt.tol = opts.dw_tol;
    const DwTrace tr = iterate(cf, dopt);
    s.dw_class = tr.classification;

    std::optional<cplx> refined;
    if (tr.fixed_point) {
        refined = newton_refine(cf, *tr.fixed_point, opts.root_tol);
        // a limit inside the real band is a real zero approached from above
        if (refined->imag() <= opts.im_tol * (1.0 + std::abs(*refined))) refined.reset();
    }

    if (refined) {
        const cplx w = *refined;
        if (!(w.real() < 0.0 && w.imag() > 0.0)) {
            throw InternalError("refined fixed point left the second quadrant");
        }
        s.nonreal = w;
        attach_certificate(cf, s);
        s.certified = s.certificate && s.certificate->winding == 1;
    } else if (atoms) {
        // Boundary/undecided verdicts on discrete measures: the oracle decides.
        const ClearedPolynomial p = clear_denominators(cf, opts.seed);
        const auto roots = all_roots(p, {opts.root_tol, 500});
        int nonreal = 0;
        try {
            nonreal = count_nonreal(roots, opts.im_tol);
        } catch (const InconclusiveError& e) {
            s.status = SliceStatus::Inconclusive;
            s.note = std::string("iteration ") + to_string(tr.classification) + ", oracle ambiguous: " + e.what();
            return s;
        }
        if (nonreal > 0) {
            s.nonreal = newton_refine(cf, roots.front(), opts.root_tol);
            attach_certificate(cf, s);
        }
        s.certified = true;
        s.note = std::string("iteration ") + to_string(tr.classification) + ", settled by polynomial oracle";
    } else {
        // Non-discrete: shrinking family of boxes over the second quadrant.
        const double R = search_radius(cf);
        bool decided = false;
        try {
            for (int j = 1; j <= 6 && !decided; ++j) {
                const Box box{-R, 0.0, R * std::pow(10.0, -j), R};
                const ZeroCertificate c = certify_upper_zero(cf, box);
                if (c.winding == 1) {
                    s.nonreal = locate_in_box(cf, box, opts.root_tol);
                    attach_certificate(cf, s);
                    s.certified = s.certificate && s.certificate->winding == 1;
                    decided = true;
                } else if (c.winding != 0) {
                    s.status = SliceStatus::Inconclusive;
                    s.note = "winding " + std::to_string(c.winding) + " over the second quadrant";
                    return s;
                }
            }
        } catch (const InconclusiveError& e) {
            s.status = SliceStatus::Inconclusive;
            s.note = std::string("iteration ") + to_string(tr.classification) + ", certificate failed: " + e.what();
            return s;
        }
        if (!decided) {
            s.certified = true;
            s.note = std::string("iteration ") + to_string(tr.classification) +
                     ", no zero with Im z >= 1e-6 R certified by winding";
        }
    }

    if (atoms) {
        std::vector<double> xs;
        for (const auto& rz : scan_real_zeros(cf)) xs.push_back(rz.value);
        const int expected = cleared_degree(cf, atoms->size()) - (s.nonreal ? 2 : 0);
        if (static_cast<int>(xs.size()) != expected) {
            s.real_zeros_complete = false;
            s.note += std::string(s.note.empty() ? "" : "; ") + "real scan found " + std::to_string(xs.size()) +
                      " of " + std::to_string(expected) + " real zeros";
        }
        assign_real(s, std::move(xs), *atoms);
    }
    return s;
}

}  // namespace

std::vector<Interval> real_cells(const std::vector<Atom>& atoms) {
    std::vector<Interval> cells;
    double lo = -kInf;
    for (std::size_t k = atoms.size(); k-- > 0;) {
        cells.push_back({lo, -atoms[k].location});
        lo = -atoms[k].location;
    }
    cells.push_back({lo, 0.0});
    cells.push_back({0.0, kInf});
    return cells;
}

std::vector<RealZero> scan_real_zeros(const CharacteristicFn& cf) {
    const auto atoms = flatten_atoms(cf.system().measure());
    if (!atoms) throw UnsupportedError("scan_real_zeros: real spectrum is only defined for discrete measures");

    const double R = search_radius(cf);
    std::vector<double> poles;
    for (std::size_t k = atoms->size(); k-- > 0;) poles.push_back(-(*atoms)[k].location);

    // pole-free segments (the split at 0 is irrelevant here)
    std::vector<std::pair<double, double>> segments;
    double lo = -R;
    for (double p : poles) {
        segments.emplace_back(lo, p);
        lo = p;
    }
    segments.emplace_back(lo, R);

    boost::math::tools::eps_tolerance<double> tolerance(52);
    std::vector<double> found;
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const auto [l, h] = segments[si];
        const bool left_pole = si > 0;
        const bool right_pole = si + 1 < segments.size();
        const double width = h - l;

        std::vector<double> grid;
        for (int j = 1; j < 512; ++j) grid.push_back(l + width * j / 512.0);
        for (int m = 1; m <= 48; ++m) {  // m = 0 would land on the opposite pole
            const double off = width * std::pow(10.0, -m / 4.0);
            const double min_off = 1e-12 * (1.0 + std::abs(left_pole ? l : h));
            if (off < min_off) break;
            if (left_pole) grid.push_back(l + off);
            if (right_pole) grid.push_back(h - off);
            if (!right_pole) {
                // the last segment straddles the origin
                grid.push_back(R * std::pow(10.0, -m / 4.0));
                grid.push_back(-R * std::pow(10.0, -m / 4.0));
            }
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        grid.erase(std::remove_if(grid.begin(), grid.end(), [&](double x) { return !(x > l && x < h); }),
                   grid.end());

        std::vector<double> vals(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) vals[j] = real_value(cf, grid[j]);

        auto f = [&](double x) { return real_value(cf, x); };
        auto solve = [&](double a, double b) {
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(f, a, b, tolerance, iters);
            found.push_back(0.5 * (r.first + r.second));
        };

        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            if (vals[j] == 0.0) {
                found.push_back(grid[j]);
            } else if ((vals[j] < 0.0) != (vals[j + 1] < 0.0) && vals[j + 1] != 0.0) {
                solve(grid[j], grid[j + 1]);
            }
        }
        if (!vals.empty() && vals.back() == 0.0) found.push_back(grid.back());

        // Two zeros between neighbouring samples leave no sign change; look for
        // a local extremum that dips across the axis.
        for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
            const double a = vals[j - 1], b = vals[j], c = vals[j + 1];
            if (a == 0.0 || b == 0.0 || c == 0.0) continue;
            if ((a < 0.0) != (b < 0.0) || (b < 0.0) != (c < 0.0)) continue;
            if (!(std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(c))) continue;
            const double sgn = b > 0.0 ? 1.0 : -1.0;
            const auto mn = boost::math::tools::brent_find_minima(
                [&](double x) { return sgn * real_value(cf, x); }, grid[j - 1], grid[j + 1], 52);
            if (mn.second < 0.0) {
                solve(grid[j - 1], mn.first);
                solve(mn.first, grid[j + 1]);
            }
        }
    }

    std::sort(found.begin(), found.end());
    std::vector<double> unique;
    for (double x : found) {
        if (unique.empty() || std::abs(x - unique.back()) > 1e-12 * (1.0 + std::abs(x))) unique.push_back(x);
    }
    const auto cells = real_cells(*atoms);
    std::vector<RealZero> out;
    for (double x : unique) out.push_back({x, cell_of(cells, x)});
    return out;
}

SpectrumSlice compute_slice(const EquationSystem& sys, int n, const SliceOptions& opts) {
    const CharacteristicFn cf(sys, n);
    const auto atoms = flatten_atoms(sys.measure());
    if (atoms && !opts.force_dw) {
        if (sys.kind() == EquationKind::GP1 && atoms->size() == 1) return closed_form_slice(cf, atoms->front());
        return oracle_slice(cf, *atoms, opts);
    }
    return dw_slice(cf, atoms, opts);
}

std::vector<SpectrumSlice> compute_slices(const EquationSystem& sys, const std::vector<int>& ns,
                                          const SliceOptions& opts, unsigned threads) {
    std::vector<SpectrumSlice> out(ns.size());
    auto run_one = [&](std::size_t i) {
        try {
            out[i] = compute_slice(sys, ns[i], opts);
        } catch (const Error& e) {
            SpectrumSlice s;
            s.n = ns[i];
            s.status = SliceStatus::Inconclusive;
            s.real_zeros_complete = false;
            s.note = e.what();
            out[i] = std::move(s);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ns.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < ns.size(); ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < ns.size(); i = next++) run_one(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace spectra

#include "spectra/measure.hpp"

#include "spectra/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace spectra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_structure(const DiscreteMeasure& d) {
    if (d.atoms.empty()) {
        throw ValidationError("discrete measure has no atoms");
    }
    for (std::size_t k = 0; k < d.atoms.size(); ++k) {
        const Atom& at = d.atoms[k];
        if (!(std::isfinite(at.mass) && at.mass > 0.0)) {
            throw ValidationError("atom " + std::to_string(k) + ": mass must be a positive finite number");
        }
        if (!(std::isfinite(at.location) && at.location > 0.0)) {
            throw ValidationError("atom " + std::to_string(k) + ": location must be a positive finite number");
        }
        if (k > 0 && !(d.atoms[k - 1].location < at.location)) {
            throw ValidationError("atom " + std::to_string(k) + ": locations must be strictly increasing");
        }
    }
}

void check_structure(const PowerLawMeasure& p) {
    if (!(std::isfinite(p.b) && p.b > 0.0)) {
        throw ValidationError("power law: b must be a positive finite number");
    }
    if (!(p.rho > 0.0 && p.rho < 1.0)) {
        throw ValidationError("power law: rho must lie in (0,1)");
    }
}

void check_structure(const SumMeasure& s) {
    if (s.parts.empty()) {
        throw ValidationError("sum measure has no parts");
    }
}

}  // namespace

Measure::Measure(DiscreteMeasure d) {
    check_structure(d);
    data_ = std::make_shared<const Variant>(std::move(d));
}

Measure::Measure(PowerLawMeasure p) {
    check_structure(p);
    data_ = std::make_shared<const Variant>(p);
}

Measure::Measure(SumMeasure s) {
    check_structure(s);
    data_ = std::make_shared<const Variant>(std::move(s));
}

double Measure::support_min() const {
    return std::visit(overloaded{
                          [](const DiscreteMeasure& d) { return d.atoms.front().location; },
                          [](const PowerLawMeasure&) { return 0.0; },
                          [](const SumMeasure& s) {
                              double v = kInf;
                              for (const auto& p : s.parts) v = std::min(v, p.support_min());
                              return v;
                          },
                      },
                      *data_);
}

double Measure::support_max() const {
    return std::visit(overloaded{
                          [](const DiscreteMeasure& d) { return d.atoms.back().location; },
                          [](const PowerLawMeasure&) { return kInf; },
                          [](const SumMeasure& s) {
                              double v = 0.0;
                              for (const auto& p : s.parts) v = std::max(v, p.support_max());
                              return v;
                          },
                      },
                      *data_);
}

double Measure::total_mass() const {
    return std::visit(overloaded{
                          [](const DiscreteMeasure& d) {
                              double a = 0.0;
                              for (const auto& at : d.atoms) a += at.mass;
                              return a;
                          },
                          [](const PowerLawMeasure&) { return kInf; },
                          [](const SumMeasure& s) {
                              double a = 0.0;
                              for (const auto& p : s.parts) a += p.total_mass();
                              return a;
                          },
                      },
                      *data_);
}

double Measure::inv_moment() const {
    return std::visit(overloaded{
                          [](const DiscreteMeasure& d) {
                              double a = 0.0;
                              for (const auto& at : d.atoms) a += at.mass / at.location;
                              return a;
                          },
                          // \int_0 rho b t^{rho-2} dt diverges at the origin
                          [](const PowerLawMeasure&) { return kInf; },
                          [](const SumMeasure& s) {
                              double a = 0.0;
                              for (const auto& p : s.parts) a += p.inv_moment();
                              return a;
                          },
                      },
                      *data_);
}

bool Measure::is_purely_discrete() const {
    return std::visit(overloaded{
                          [](const DiscreteMeasure&) { return true; },
                          [](const PowerLawMeasure&) { return false; },
                          [](const SumMeasure& s) {
                              return std::all_of(s.parts.begin(), s.parts.end(),
                                                 [](const Measure& p) { return p.is_purely_discrete(); });
                          },
                      },
                      *data_);
}

bool Measure::has_power_law() const {
    return std::visit(overloaded{
                          [](const DiscreteMeasure&) { return false; },
                          [](const PowerLawMeasure&) { return true; },
                          [](const SumMeasure& s) {
                              return std::any_of(s.parts.begin(), s.parts.end(),
                                                 [](const Measure& p) { return p.has_power_law(); });
                          },
                      },
                      *data_);
}

std::string Measure::describe() const {
    std::ostringstream os;
    os.precision(6);
    std::visit(overloaded{
                   [&](const DiscreteMeasure& d) {
                       os << "Discrete[";
                       for (std::size_t k = 0; k < d.atoms.size(); ++k) {
                           if (k) os << ",";
                           os << "(" << d.atoms[k].mass << "," << d.atoms[k].location << ")";
                       }
                       os << "]";
                   },
                   [&](const PowerLawMeasure& p) { os << "PowerLaw{b=" << p.b << ",rho=" << p.rho << "}"; },
                   [&](const SumMeasure& s) {
                       os << "Sum{";
                       for (std::size_t k = 0; k < s.parts.size(); ++k) {
                           if (k) os << "+";
                           os << s.parts[k].describe();
                       }
                       os << "}";
                   },
               },
               *data_);
    return os.str();
}

std::optional<std::vector<Atom>> flatten_atoms(const Measure& m) {
    if (!m.is_purely_discrete()) return std::nullopt;

    std::map<double, double> merged;
    auto collect = [&](const Measure& node, auto&& self) -> void {
        if (const auto* d = node.as_discrete()) {
            for (const auto& at : d->atoms) merged[at.location] += at.mass;
        } else if (const auto* s = node.as_sum()) {
            for (const auto& p : s->parts) self(p, self);
        }
    };
    collect(m, collect);

    std::vector<Atom> atoms;
    atoms.reserve(merged.size());
    for (const auto& [loc, mass] : merged) atoms.push_back({mass, loc});
    return atoms;
}

ValidationReport validate(const Measure& m, ValidationPolicy policy) {
    // Re-check structure recursively; construction already did this, but a
    // report must never vouch for a malformed measure.
    auto recheck = [](const Measure& node, auto&& self) -> void {
        std::visit(overloaded{
                       [](const DiscreteMeasure& d) { check_structure(d); },
                       [](const PowerLawMeasure& p) { check_structure(p); },
                       [&](const SumMeasure& s) {
                           check_structure(s);
                           for (const auto& p : s.parts) self(p, self);
                       },
                   },
                   node.variant());
    };
    recheck(m, recheck);

    ValidationReport r;
    r.inv_moment_finite = std::isfinite(m.inv_moment());
    r.support_bounded_away = m.support_min() > 0.0;
    r.finite_mass = std::isfinite(m.total_mass());
    r.compact_support = r.support_bounded_away && std::isfinite(m.support_max());

    auto& standing = policy == ValidationPolicy::Strict ? r.errors : r.warnings;
    if (!r.inv_moment_finite) standing.push_back("E1: kernel not integrable (inv_moment infinite)");
    if (!r.support_bounded_away) standing.push_back("E2: support not bounded away from 0");
    if (!r.finite_mass) r.warnings.push_back("E3: total mass infinite");
    if (!r.compact_support) r.warnings.push_back("E4: support not compact");
    r.admissible = r.errors.empty();
    return r;
}

Measure differentiate_kernel(const Measure& m) {
    auto atoms = flatten_atoms(m);
    if (!atoms) {
        throw UnsupportedError("differentiate_kernel: only discrete measures are closed under differentiation, got " +
                               m.describe());
    }
    for (auto& at : *atoms) at.mass *= at.location;
    return Measure::discrete(std::move(*atoms));
}

}  // namespace spectra

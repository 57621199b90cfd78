#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spectra {

/// A point mass `mass` placed at `location` (both strictly positive).
struct Atom {
    double mass = 0.0;
    double location = 0.0;
};

struct DiscreteMeasure {
    std::vector<Atom> atoms;  // locations strictly increasing
};

/// The exact power law mu(t) = b * t^rho, 0 < rho < 1.
struct PowerLawMeasure {
    double b = 0.0;
    double rho = 0.0;
};

class Measure;

struct SumMeasure {
    std::vector<Measure> parts;
};

/// Positive Stieltjes measure defining the memory kernel
/// k(t) = \int e^{-t tau} dmu(tau).
///
/// Immutable value type: the variant payload is shared between copies and
/// never modified after construction, so a Measure can be read from several
/// threads at once. Construction checks the structural invariants (positive
/// masses and locations, strictly increasing locations, rho in (0,1), non-empty
/// sums) and throws ValidationError on violation.
class Measure {
public:
    using Variant = std::variant<DiscreteMeasure, PowerLawMeasure, SumMeasure>;

    explicit Measure(DiscreteMeasure d);
    explicit Measure(PowerLawMeasure p);
    explicit Measure(SumMeasure s);

    static Measure discrete(std::vector<Atom> atoms) { return Measure(DiscreteMeasure{std::move(atoms)}); }
    static Measure power_law(double b, double rho) { return Measure(PowerLawMeasure{b, rho}); }
    static Measure sum(std::vector<Measure> parts) { return Measure(SumMeasure{std::move(parts)}); }

    const Variant& variant() const noexcept { return *data_; }

    const DiscreteMeasure* as_discrete() const noexcept { return std::get_if<DiscreteMeasure>(data_.get()); }
    const PowerLawMeasure* as_power_law() const noexcept { return std::get_if<PowerLawMeasure>(data_.get()); }
    const SumMeasure* as_sum() const noexcept { return std::get_if<SumMeasure>(data_.get()); }

    /// Infimum of the support (d_0 >= 0).
    double support_min() const;
    /// Supremum of the support; +inf for power laws.
    double support_max() const;
    /// A = \int dmu; +inf for power laws.
    double total_mass() const;
    /// \int dmu(t)/t; +inf for power laws.
    double inv_moment() const;

    /// True if the measure (recursively) contains only atoms.
    bool is_purely_discrete() const;
    /// True if the measure (recursively) contains a power-law part.
    bool has_power_law() const;

    std::string describe() const;

private:
    std::shared_ptr<const Variant> data_;
};

/// Atoms of a purely discrete measure, merged across Sum parts, sorted by
/// location, with coincident locations combined. nullopt when any part is not
/// discrete.
std::optional<std::vector<Atom>> flatten_atoms(const Measure& m);

enum class ValidationPolicy {
    Strict,          // standing assumptions (E1, E2) are errors
    AsymptoticModel  // E1/E2 violations are warnings (pure power laws)
};

struct ValidationReport {
    bool inv_moment_finite = false;     // E1
    bool support_bounded_away = false;  // E2
    bool finite_mass = false;           // E3
    bool compact_support = false;       // E4
    bool admissible = false;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Reports which standing assumptions hold. Structural violations throw
/// ValidationError regardless of the policy.
ValidationReport validate(const Measure& m, ValidationPolicy policy);

/// Measure of the differentiated kernel -dk/dt: atoms (a_k b_k, b_k).
/// Only defined for purely discrete measures.
Measure differentiate_kernel(const Measure& m);

}  // namespace spectra

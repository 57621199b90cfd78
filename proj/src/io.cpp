#include "spectra/io.hpp"

#include "spectra/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace spectra {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ValidationError(where + ": missing key \"" + key + "\"");
    if (!j.at(key).is_number()) throw ValidationError(where + ": \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

std::string cnum(cplx z) { return "{\"re\":" + format_number(z.real()) + ",\"im\":" + format_number(z.imag()) + "}"; }

std::string quoted(const std::string& s) { return json(s).dump(); }

}  // namespace

Measure measure_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("measure: expected a JSON object");
    if (!j.contains("type") || !j.at("type").is_string()) throw ValidationError("measure: missing string key \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "discrete") {
        if (!j.contains("atoms") || !j.at("atoms").is_array()) {
            throw ValidationError("discrete measure: \"atoms\" must be an array");
        }
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms")) {
            if (!a.is_object()) throw ValidationError("discrete measure: atoms must be objects");
            atoms.push_back({require_number(a, "mass", "atom"), require_number(a, "loc", "atom")});
        }
        return Measure::discrete(std::move(atoms));
    }
    if (type == "power_law") {
        return Measure::power_law(require_number(j, "b", "power_law"), require_number(j, "rho", "power_law"));
    }
    if (type == "sum") {
        if (!j.contains("parts") || !j.at("parts").is_array()) {
            throw ValidationError("sum measure: \"parts\" must be an array");
        }
        std::vector<Measure> parts;
        for (const auto& p : j.at("parts")) parts.push_back(measure_from_json(p));
        return Measure::sum(std::move(parts));
    }
    throw ValidationError("measure: unknown type \"" + type + "\"");
}

json measure_to_json(const Measure& m) {
    if (const auto* d = m.as_discrete()) {
        json atoms = json::array();
        for (const auto& at : d->atoms) atoms.push_back({{"mass", at.mass}, {"loc", at.location}});
        return {{"type", "discrete"}, {"atoms", atoms}};
    }
    if (const auto* p = m.as_power_law()) {
        return {{"type", "power_law"}, {"b", p->b}, {"rho", p->rho}};
    }
    json parts = json::array();
    for (const auto& part : m.as_sum()->parts) parts.push_back(measure_to_json(part));
    return {{"type", "sum"}, {"parts", parts}};
}

EquationSystem system_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("system: expected a JSON object");
    if (!j.contains("equation") || !j.at("equation").is_string()) {
        throw ValidationError("system: missing string key \"equation\"");
    }
    if (!j.contains("measure")) throw ValidationError("system: missing key \"measure\"");
    const std::string eq = j.at("equation").get<std::string>();
    Measure m = measure_from_json(j.at("measure"));
    if (eq == "gp1") return EquationSystem::gp1(std::move(m));
    if (eq == "gp2") return EquationSystem::gp2(require_number(j, "a", "gp2 system"), std::move(m));
    if (eq == "kv") return EquationSystem::kv(require_number(j, "epsilon", "kv system"), std::move(m));
    throw ValidationError("system: unknown equation \"" + eq + "\"");
}

json system_to_json(const EquationSystem& sys) {
    json j = {{"equation", to_string(sys.kind())}, {"measure", measure_to_json(sys.measure())}};
    if (sys.kind() == EquationKind::GP2) j["a"] = sys.a();
    if (sys.kind() == EquationKind::KV) j["epsilon"] = sys.epsilon();
    return j;
}

EquationSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open system file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    return system_from_json(j);
}

std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumSlice>& slices) {
    os << kSpectrumCsvHeader << '\n';
    for (const auto& s : slices) {
        os << s.n << ',';
        if (s.nonreal) {
            os << format_number(s.nonreal->real()) << ',' << format_number(s.nonreal->imag());
        } else {
            os << ',';
        }
        os << ',' << (s.status == SliceStatus::Inconclusive ? std::string("inconclusive") : to_string(s.method));
        os << ',' << (s.certified ? "true" : "false") << ',';
        if (!s.real_spectrum_defined) {
            os << "null";
        } else {
            os << "\"[";
            for (std::size_t k = 0; k < s.real_zeros.size(); ++k) {
                if (k) os << ',';
                os << format_number(s.real_zeros[k].value);
            }
            os << "]\"";
        }
        os << '\n';
    }
}

void write_spectrum_json(std::ostream& os, const std::vector<SpectrumSlice>& slices) {
    os << "[\n";
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const auto& s = slices[i];
        os << "{\"n\":" << s.n << ",\"status\":" << quoted(s.status == SliceStatus::Ok ? "ok" : "inconclusive")
           << ",\"method\":" << quoted(to_string(s.method))
           << ",\"nonreal\":" << (s.nonreal ? cnum(*s.nonreal) : "null")
           << ",\"certified\":" << (s.certified ? "true" : "false") << ",\"real_zeros\":";
        if (!s.real_spectrum_defined) {
            os << "null";
        } else {
            os << '[';
            for (std::size_t k = 0; k < s.real_zeros.size(); ++k) {
                const auto& z = s.real_zeros[k];
                os << (k ? "," : "") << "{\"value\":" << format_number(z.value)
                   << ",\"bracket\":[" << format_number(z.bracket.lo) << ',' << format_number(z.bracket.hi) << "]}";
            }
            os << ']';
        }
        os << ",\"real_zeros_complete\":" << (s.real_zeros_complete ? "true" : "false");
        if (s.certificate) {
            os << ",\"winding\":" << s.certificate->winding
               << ",\"quadrature_residual\":" << format_number(s.certificate->quadrature_residual);
        }
        if (s.dw_class) os << ",\"dw\":" << quoted(to_string(*s.dw_class));
        os << ",\"note\":" << quoted(s.note) << '}' << (i + 1 < slices.size() ? "," : "") << '\n';
    }
    os << "]\n";
}

void write_report_json(std::ostream& os, const AsymptoticReport& report) {
    os << "{\"formula\":" << quoted(to_string(report.formula)) << ",\"rows\":[";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        os << (i ? "," : "") << "\n{\"n\":" << r.n << ",\"computed\":" << (r.computed ? cnum(*r.computed) : "null")
           << ",\"predicted\":" << cnum(r.predicted) << ",\"rel_error\":" << format_number(r.rel_error);
        if (r.normalized_correction) os << ",\"normalized_correction\":" << format_number(*r.normalized_correction);
        if (r.correction_arg) os << ",\"correction_arg\":" << format_number(*r.correction_arg);
        os << '}';
    }
    os << "\n],\"complete\":" << (report.complete ? "true" : "false")
       << ",\"trend_ok\":" << (report.trend_ok ? "true" : "false") << "}\n";
}

void write_trace_jsonl(std::ostream& os, const DwTrace& trace) {
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        os << "{\"k\":" << k << ",\"re\":" << format_number(trace.iterates[k].real())
           << ",\"im\":" << format_number(trace.iterates[k].imag()) << "}\n";
    }
    os << "{\"classification\":" << quoted(to_string(trace.classification))
       << ",\"iterations\":" << trace.iterations_used
       << ",\"fixed_point\":" << (trace.fixed_point ? cnum(*trace.fixed_point) : "null")
       << ",\"multiplier\":" << (trace.multiplier ? cnum(*trace.multiplier) : "null");
    if (!trace.error.empty()) os << ",\"error\":" << quoted(trace.error);
    os << "}\n";
}

void write_cutoff_json(std::ostream& os, const KvCutoff& cutoff, int exact_min_n) {
    os << "{\"n_star\":" << cutoff.n_star << ",\"r_star\":" << format_number(cutoff.r_star)
       << ",\"witness\":" << format_number(cutoff.witness) << ",\"exact_min_n\":" << exact_min_n << "}\n";
}

namespace {

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

void write_spectrum_svg(std::ostream& os, const EquationSystem& sys, const std::vector<SpectrumSlice>& slices) {
    constexpr double W = 800.0, H = 600.0, M = 40.0;

    std::vector<const SpectrumSlice*> sorted;
    for (const auto& s : slices) sorted.push_back(&s);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->n < b->n; });

    std::vector<std::pair<int, cplx>> curve;
    for (const auto* s : sorted) {
        try {
            curve.emplace_back(s->n, predict(sys, s->n).predicted);
        } catch (const Error&) {
            curve.clear();
            break;
        }
    }

    double xmin = -1.0, xmax = 1.0, ymax = 1.0;
    auto include = [&](cplx z) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymax = std::max(ymax, std::abs(z.imag()));
    };
    for (const auto* s : sorted) {
        if (s->nonreal) include(*s->nonreal);
        for (const auto& r : s->real_zeros) include({r.value, 0.0});
    }
    for (const auto& [n, z] : curve) include(z);
    const double xpad = 0.05 * (xmax - xmin);
    xmin -= xpad;
    xmax += xpad;
    ymax *= 1.05;

    auto X = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
    auto Y = [&](double y) { return H / 2 - y / ymax * (H / 2 - M); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    os << "<title>" << to_string(sys.kind()) << " spectrum</title>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<line class=\"axis\" x1=\"" << px(M) << "\" y1=\"" << px(Y(0)) << "\" x2=\"" << px(W - M) << "\" y2=\""
       << px(Y(0)) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    if (xmin < 0.0 && xmax > 0.0) {
        os << "<line class=\"axis\" x1=\"" << px(X(0)) << "\" y1=\"" << px(M) << "\" x2=\"" << px(X(0)) << "\" y2=\""
           << px(H - M) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    if (curve.size() >= 2) {
        for (int sign : {1, -1}) {
            os << "<polyline class=\"asymptote\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\" points=\"";
            for (std::size_t k = 0; k < curve.size(); ++k) {
                os << (k ? " " : "") << px(X(curve[k].second.real())) << ',' << px(Y(sign * curve[k].second.imag()));
            }
            os << "\"/>\n";
        }
    }
    for (const auto* s : sorted) {
        for (const auto& r : s->real_zeros) {
            os << "<line class=\"real-zero\" data-n=\"" << s->n << "\" x1=\"" << px(X(r.value)) << "\" y1=\""
               << px(Y(0) - 5) << "\" x2=\"" << px(X(r.value)) << "\" y2=\"" << px(Y(0) + 5)
               << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";
        }
        if (s->nonreal) {
            for (const cplx z : {*s->nonreal, std::conj(*s->nonreal)}) {
                os << "<circle class=\"nonreal\" data-n=\"" << s->n << "\" cx=\"" << px(X(z.real())) << "\" cy=\""
                   << px(Y(z.imag())) << "\" r=\"3\" fill=\"#d62728\"><title>n=" << s->n << " "
                   << format_number(z.real()) << (z.imag() < 0 ? "" : "+") << format_number(z.imag())
                   << "i</title></circle>\n";
            }
        }
    }
    os << "</svg>\n";
}

}  // namespace spectra

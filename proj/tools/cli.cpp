#include "cli.hpp"

#include "spectra/error.hpp"
#include "spectra/io.hpp"
#include "spectra/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace spectra::cli {

namespace {

struct RunConfig {
    std::string system_path;
    std::string modes = "1";
    std::string out_format = "csv";
    std::string output;  // empty: stdout
    std::string formula;
    double root_tol = 1e-12;
    double im_tol = 1e-9;
    int dw_max_iter = 10000;
    std::uint64_t seed = 0x5eed;
    bool force_dw = false;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("usage_error", what) {}
};

void error_record(std::ostream& err, const std::string& kind, const std::string& message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECTRA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw UsageError("SPECTRA_THREADS must be a positive integer");
        }
    }
    return n;
}

SliceOptions slice_options(const RunConfig& cfg) {
    if (!(cfg.root_tol > 0.0) || !(cfg.im_tol > 0.0) || cfg.dw_max_iter < 1) {
        throw UsageError("tolerances and --max-iter must be positive");
    }
    SliceOptions o;
    o.root_tol = cfg.root_tol;
    o.im_tol = cfg.im_tol;
    o.dw_max_iter = cfg.dw_max_iter;
    o.seed = cfg.seed;
    o.force_dw = cfg.force_dw;
    return o;
}

// Everything is rendered into memory first; the destination is written once.
void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw UsageError("cannot open output file: " + cfg.output);
    f << text;
}

std::optional<Formula> parse_formula(const std::string& s) {
    if (s.empty()) return std::nullopt;
    for (Formula f : {Formula::T6ii, Formula::T6iii, Formula::T7i, Formula::T7ii}) {
        if (to_string(f) == s) return f;
    }
    throw UsageError("unknown formula: " + s + " (expected T6ii, T6iii, T7i or T7ii)");
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const EquationSystem sys = load_system(cfg.system_path);
    const auto slices = compute_slices(sys, parse_modes(cfg.modes), slice_options(cfg), thread_cap());
    std::ostringstream buf;
    if (cfg.out_format == "csv") {
        write_spectrum_csv(buf, slices);
    } else {
        write_spectrum_json(buf, slices);
    }
    emit(cfg, buf.str(), out);
    const bool undecided = std::any_of(slices.begin(), slices.end(),
                                       [](const SpectrumSlice& s) { return s.status == SliceStatus::Inconclusive; });
    return undecided ? kInconclusive : kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const EquationSystem sys = load_system(cfg.system_path);
    const auto report =
        verify_asymptotics(sys, parse_modes(cfg.modes), slice_options(cfg), parse_formula(cfg.formula), thread_cap());
    std::ostringstream buf;
    write_report_json(buf, report);
    emit(cfg, buf.str(), out);
    return report.trend_ok ? kOk : kTrendFailed;
}

int cmd_kv_cutoff(const RunConfig& cfg, std::ostream& out) {
    const EquationSystem sys = load_system(cfg.system_path);
    const KvCutoff c = kv_nonreal_cutoff(sys);
    int exact = c.n_star;
    bool ambiguous = false;
    if (sys.measure().is_purely_discrete()) {
        const OracleSweep sweep = oracle_nonreal_sweep(sys, c.n_star, slice_options(cfg));
        exact = sweep.exact_min_n;
        ambiguous = !sweep.ambiguous_modes.empty();
    }
    std::ostringstream buf;
    write_cutoff_json(buf, c, exact);
    emit(cfg, buf.str(), out);
    return ambiguous ? kInconclusive : kOk;
}

int cmd_dw_trace(const RunConfig& cfg, std::ostream& out) {
    const EquationSystem sys = load_system(cfg.system_path);
    const auto modes = parse_modes(cfg.modes);
    if (modes.size() != 1) throw UsageError("dw-trace takes a single mode index");
    DwOptions o;
    o.max_iter = cfg.dw_max_iter;
    const DwTrace tr = iterate(CharacteristicFn(sys, modes.front()), o);
    std::ostringstream buf;
    write_trace_jsonl(buf, tr);
    emit(cfg, buf.str(), out);
    return tr.classification == DwClass::Undecided ? kInconclusive : kOk;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
    const EquationSystem sys = load_system(cfg.system_path);
    const auto slices = compute_slices(sys, parse_modes(cfg.modes), slice_options(cfg), thread_cap());
    std::ostringstream buf;
    write_spectrum_svg(buf, sys, slices);
    emit(cfg, buf.str(), out);
    return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--system", cfg.system_path, "System JSON file")->required();
    sub->add_option("--n", cfg.modes, "Mode indices: a..b or a comma list");
    sub->add_option("--tol", cfg.root_tol, "Root residual tolerance");
    sub->add_option("--im-tol", cfg.im_tol, "Relative imaginary-part threshold for non-real roots");
    sub->add_option("--max-iter", cfg.dw_max_iter, "Iteration cap of the fixed-point engine");
    sub->add_option("--seed", cfg.seed, "Seed for randomized checks");
    sub->add_option("-o,--output", cfg.output, "Output file (default: stdout)");
}

}  // namespace

std::vector<int> parse_modes(const std::string& spec) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || v < 1) throw UsageError("invalid mode index in --n: \"" + s + "\"");
        return v;
    };
    std::vector<int> modes;
    if (const auto dots = spec.find(".."); dots != std::string::npos) {
        const int a = to_int(spec.substr(0, dots));
        const int b = to_int(spec.substr(dots + 2));
        if (b < a) throw UsageError("empty mode range: " + spec);
        for (int n = a; n <= b; ++n) modes.push_back(n);
        return modes;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) modes.push_back(to_int(item));
    if (modes.empty()) throw UsageError("empty mode list");
    // rows always come out by ascending n
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    return modes;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra of Gurtin-Pipkin and Kelvin-Voigt integro-differential equations", "spectra"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto* spectrum = app.add_subcommand("spectrum", "Per-mode spectrum table");
    add_common(spectrum, cfg);
    spectrum->add_option("--out", cfg.out_format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    spectrum->add_flag("--force-dw", cfg.force_dw, "Use fixed-point iteration even for discrete measures");

    auto* verify = app.add_subcommand("verify", "Compare computed zeros with asymptotic formulas");
    add_common(verify, cfg);
    verify->add_option("--formula", cfg.formula, "T6ii | T6iii | T7i | T7ii (default: most precise applicable)");

    auto* cutoff = app.add_subcommand("kv-cutoff", "Mode index beyond which the KV spectrum is real");
    add_common(cutoff, cfg);

    auto* trace = app.add_subcommand("dw-trace", "Fixed-point iteration trajectory as JSON lines");
    add_common(trace, cfg);

    auto* plot = app.add_subcommand("plot", "SVG figure of the spectrum");
    add_common(plot, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_record(err, "usage_error", e.what());
        return kError;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
        if (cutoff->parsed()) return cmd_kv_cutoff(cfg, out);
        if (trace->parsed()) return cmd_dw_trace(cfg, out);
        if (plot->parsed()) return cmd_plot(cfg, out);
    } catch (const Error& e) {
        error_record(err, e.kind(), e.what());
        return kError;
    } catch (const std::exception& e) {
        error_record(err, "error", e.what());
        return kError;
    }
    return kError;
}

}  // namespace spectra::cli

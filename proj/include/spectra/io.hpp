#pragma once

#include "spectra/chareq.hpp"
#include "spectra/dw.hpp"
#include "spectra/spectrum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace spectra {

// Measure JSON:
//   {"type":"discrete","atoms":[{"mass":m,"loc":b},...]}
//   {"type":"power_law","b":b,"rho":rho}
//   {"type":"sum","parts":[<measure>,...]}
Measure measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const Measure& m);

// System JSON: {"equation":"gp1"|"gp2"|"kv","a":num?,"epsilon":num?,"measure":<measure>}
EquationSystem system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const EquationSystem& sys);

/// Reads and parses a system file; malformed input throws ValidationError.
EquationSystem load_system(const std::string& path);

/// 17 significant digits (round-trip safe); non-finite values print as null.
std::string format_number(double x);

inline constexpr const char* kSpectrumCsvHeader = "n,re_w,im_w,method,certified,real_zeros_json";

/// One row per slice under kSpectrumCsvHeader. The w columns hold the
/// upper-half-plane zero (empty when there is none); real_zeros_json is a
/// JSON array, or null when the real spectrum is not defined.
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumSlice>& slices);

/// Slices as a JSON array with full status information.
void write_spectrum_json(std::ostream& os, const std::vector<SpectrumSlice>& slices);

void write_report_json(std::ostream& os, const AsymptoticReport& report);

/// JSON lines {"k":k,"re":x,"im":y} per iterate, then a classification record.
/// EllipticDegenerate traces carry no iterates.
void write_trace_jsonl(std::ostream& os, const DwTrace& trace);

void write_cutoff_json(std::ostream& os, const KvCutoff& cutoff, int exact_min_n);

/// Static figure of the spectrum: real zeros as ticks on the real axis,
/// non-real pairs as mirrored points, and the asymptotic curve when a
/// predictor applies. Fixed viewBox and element order; byte-identical for
/// identical input.
void write_spectrum_svg(std::ostream& os, const EquationSystem& sys, const std::vector<SpectrumSlice>& slices);

}  // namespace spectra

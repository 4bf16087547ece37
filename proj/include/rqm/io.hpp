#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rqm/assumptions.hpp"
#include "rqm/entropic.hpp"
#include "rqm/fluctuation.hpp"
#include "rqm/hypotest.hpp"

namespace rqm::io {

using nlohmann::json;

/// Operators travel as row-major arrays of [re, im] pairs.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// Instrument file: {dim, alphabet, kraus: {label: [matrices]}, rho (optional),
/// theta (optional list of [label, label] pairs)}.
json instrument_to_json(const Instrument& instr);
Instrument instrument_from_json(const json& j);

/// Full process from an instrument file; rho defaults to the invariant state,
/// theta to the identity involution.
Process process_from_json(const json& j, bool attach_or = true);
Process load_process(const std::string& path);
void save_process(const Process& p, const std::string& path);

/// "builtin:bernoulli(0.7)" / "builtin:cycle(3,0.8)" / a file path.
Process resolve_process_source(const std::string& source);

json validation_to_json(const ValidationReport& rep);
json certificate_to_json(const AssumptionCertificate& cert);
json spectral_to_json(const SpectralReport& rep);

/// Deterministic number formatting used by every emitter (%.17g).
std::string fmt(double x);

void write_path_table_csv(std::ostream& os, const PathTable& table,
                          const std::vector<std::string>& alphabet);
void write_pressure_csv(std::ostream& os, const PressureCurve& curve);
void write_sigma_law_csv(std::ostream& os, const SigmaLaw& law);
void write_rate_function_csv(std::ostream& os, const RateFunction& rf);
void write_ldp_csv(std::ostream& os, const LdpReport& rep);
void write_hoeffding_csv(std::ostream& os, const HoeffdingCurve& h);

json trajectory_to_json(const Trajectory& tr, const std::vector<std::string>& alphabet);

}  // namespace rqm::io

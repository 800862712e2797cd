#pragma once

// JSON reports. Keys keep insertion order so identical runs produce identical
// text apart from wall_time.

#include <string>

#include "json.hpp"
#include "robinfb/certificates.hpp"
#include "robinfb/outer_loop.hpp"

namespace robinfb {

using Json = nlohmann::ordered_json;

inline Json to_json(const EnergyBreakdown& e) {
    return Json{{"dirichlet", e.dirichlet},
                {"surface", e.surface},
                {"beta", e.beta},
                {"total", e.total},
                {"epsilon", e.epsilon}};
}

inline Json pairs_to_json(const std::vector<std::pair<std::string, double>>& pairs) {
    Json j = Json::object();
    for (const auto& [k, v] : pairs) j[k] = v;
    return j;
}

inline Json to_json(const CertificateRecord& r) {
    return Json{{"check", r.check},     {"inputs", pairs_to_json(r.inputs)},
                {"lhs", r.lhs},         {"rhs", r.rhs},
                {"margin", r.margin},   {"pass", r.pass},
                {"gating", r.gating}};
}

inline Json to_json(const CertificateReport& r) {
    Json records = Json::array();
    for (const auto& rec : r.records) records.push_back(to_json(rec));
    return Json{{"check", r.check},
                {"status", to_string(r.status)},
                {"pass", r.pass()},
                {"note", r.note},
                {"summary", pairs_to_json(r.summary)},
                {"tolerances", pairs_to_json(r.tolerances)},
                {"records", records}};
}

inline Json to_json(const SolveReport& rep) {
    Json trace = Json::array();
    for (const auto& t : rep.energy_trace) {
        Json e = to_json(t.energy);
        e["level"] = t.level;
        e["step"] = to_string(t.kind);
        trace.push_back(e);
    }
    return Json{{"energy_trace", trace},
                {"final_energy", to_json(rep.final_energy)},
                {"eps_levels", rep.eps_levels},
                {"iters", rep.iters},
                {"level_termination", rep.level_termination},
                {"level_final_energy", rep.level_final_energy},
                {"state_iterations", rep.state_iterations},
                {"degenerate_set_step", rep.degenerate_set_step},
                {"termination", rep.termination},
                {"wall_time", rep.wall_time_s}};
}

inline Json to_json(const CertificateSuite& s) {
    Json list = Json::array();
    for (const auto& r : s.reports) list.push_back(to_json(r));
    return list;
}

} // namespace robinfb

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace finsler {

using json = nlohmann::json;  // keys are sorted, which keeps reports byte-stable

struct CaseRow {
    json inputs;
    double computed = 0;
    double oracle = 0;
    double abs_err = 0;
    double rel_err = 0;
    bool pass = false;
};

inline void fill_errors(CaseRow& row) {
    row.abs_err = std::abs(row.computed - row.oracle);
    row.rel_err = row.oracle != 0.0 ? row.abs_err / std::abs(row.oracle) : row.abs_err;
}

/// Structured record of a reproduction run. Wall time lives in a sidecar
/// file so identical config + seed gives byte-identical reports.
struct ExperimentReport {
    std::string id;
    std::string operation;
    json config;
    std::uint64_t seed = 0;
    double tolerance = 0;
    std::string tolerance_kind;  // "relative", "absolute", ...
    std::vector<std::string> oracle_expressions;
    std::vector<CaseRow> rows;
    json extra;
    std::string error;  // nonempty when the stage aborted
    double wall_seconds = 0;  // sidecar only

    bool overall_pass() const {
        if (!error.empty()) return false;
        for (const auto& r : rows)
            if (!r.pass) return false;
        return !rows.empty();
    }

    json to_json() const {
        json j;
        j["operation"] = operation;
        j["id"] = id;
        j["config"] = config;
        j["seed"] = seed;
        j["tolerance"] = tolerance;
        j["tolerance_kind"] = tolerance_kind;
        j["oracles"] = oracle_expressions;
        j["verdict"] = overall_pass() ? "pass" : "fail";
        if (!error.empty()) j["error"] = error;
        json rows_json = json::array();
        for (const auto& r : rows) {
            json rj;
            rj["inputs"] = r.inputs;
            rj["computed"] = r.computed;
            rj["oracle"] = r.oracle;
            rj["abs_err"] = r.abs_err;
            rj["rel_err"] = r.rel_err;
            rj["verdict"] = r.pass ? "pass" : "fail";
            rows_json.push_back(rj);
        }
        j["rows"] = rows_json;
        if (!extra.is_null()) j["extra"] = extra;
        return j;
    }

    void write(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        {
            std::ofstream out(dir / (id + ".json"));
            out << to_json().dump(2) << '\n';
        }
        {
            json side;
            side["id"] = id;
            side["wall_seconds"] = wall_seconds;
            std::ofstream out(dir / (id + ".walltime.json"));
            out << side.dump(2) << '\n';
        }
    }
};

/// Minimal RFC-4180 field quoting.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace finsler

#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include <json.hpp>

#include "gammadyn/linalg.hpp"
#include "gammadyn/report.hpp"
#include "gammadyn/tolerances.hpp"

namespace gammadyn {

using Json = nlohmann::ordered_json;

// Matrix interchange format:
//   {"n": 2, "rows": [[[re, im], [re, im]], [[re, im], [re, im]]]}
// Parse errors carry one of the codes: malformed-structure,
// numeric-parse, shape-mismatch, non-finite-value.

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    Json doc;
    doc["n"] = m.rows();
    doc["rows"] = std::move(rows);
    return doc;
}

inline ComplexMatrix matrix_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows")) {
        throw ParseError("matrix file: expected object with keys \"n\" and \"rows\"",
                         "malformed-structure");
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0) {
        throw ParseError("matrix file: \"n\" must be a positive integer", "numeric-parse");
    }
    const Eigen::Index n = doc["n"].get<Eigen::Index>();
    const Json& rows = doc["rows"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
        throw ParseError("matrix file: \"rows\" must hold exactly n rows", "shape-mismatch");
    }

    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ParseError("matrix file: row " + std::to_string(i) +
                                 " must hold exactly n entries",
                             "shape-mismatch");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const Json& entry = row[static_cast<std::size_t>(j)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                throw ParseError("matrix file: entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") must be a [re, im] number pair",
                                 "numeric-parse");
            }
            const double re = entry[0].get<double>();
            const double im = entry[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw ParseError("matrix file: non-finite entry at (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")",
                                 "non-finite-value");
            }
            m(i, j) = ComplexScalar{re, im};
        }
    }
    return m;
}

inline ComplexMatrix parse_matrix_file(std::istream& in) {
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::out_of_range& e) {
        // numbers beyond double range surface here during parsing
        throw ParseError(std::string("matrix file: ") + e.what(), "non-finite-value");
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("matrix file: invalid JSON: ") + e.what(),
                         "malformed-structure");
    }
    return matrix_from_json(doc);
}

inline ComplexMatrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("matrix file: cannot open " + path, "malformed-structure");
    }
    return parse_matrix_file(in);
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    out << matrix_to_json(m).dump(2) << "\n";
}

/// Top-level CLI result: tolerance echo, named residuals, optional
/// command-specific results payload, and the conjunction verdict.
struct ReportDocument {
    std::string tool_version;
    std::string command;
    ToleranceConfig tolerances;
    DiagnosticReport diagnostics;
    Json results = Json(nullptr);
    bool verdict = true;

    void absorb(const DiagnosticReport& report, const std::string& prefix = "") {
        for (const auto& e : report.entries) {
            diagnostics.entries.push_back(e);
            if (!prefix.empty()) {
                diagnostics.entries.back().name = prefix + e.name;
            }
        }
    }

    void finalize() { verdict = diagnostics.all_pass(); }
};

inline Json report_to_json(const ReportDocument& doc) {
    Json j;
    j["tool_version"] = doc.tool_version;
    j["command"] = doc.command;
    Json tols;
    tols["reality_tol"] = doc.tolerances.reality_tol;
    tols["gap_tol"] = doc.tolerances.gap_tol;
    tols["residual_tol"] = doc.tolerances.residual_tol;
    tols["series_tol"] = doc.tolerances.series_tol;
    tols["rank_tol"] = doc.tolerances.rank_tol;
    j["tolerances"] = std::move(tols);
    Json entries = Json::array();
    for (const auto& e : doc.diagnostics.entries) {
        Json je;
        je["name"] = e.name;
        je["residual"] = e.residual;
        je["threshold"] = e.threshold;
        je["pass"] = e.pass;
        je["anchor"] = e.anchor;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    if (!doc.results.is_null()) {
        j["results"] = doc.results;
    }
    j["verdict"] = doc.verdict;
    return j;
}

inline ReportDocument report_from_json(const Json& j) {
    ReportDocument doc;
    try {
        doc.tool_version = j.at("tool_version").get<std::string>();
        doc.command = j.at("command").get<std::string>();
        const Json& tols = j.at("tolerances");
        doc.tolerances.reality_tol = tols.at("reality_tol").get<double>();
        doc.tolerances.gap_tol = tols.at("gap_tol").get<double>();
        doc.tolerances.residual_tol = tols.at("residual_tol").get<double>();
        doc.tolerances.series_tol = tols.at("series_tol").get<double>();
        doc.tolerances.rank_tol = tols.at("rank_tol").get<double>();
        for (const Json& je : j.at("entries")) {
            DiagnosticEntry e;
            e.name = je.at("name").get<std::string>();
            e.residual = je.at("residual").get<double>();
            e.threshold = je.at("threshold").get<double>();
            e.pass = je.at("pass").get<bool>();
            e.anchor = je.at("anchor").get<std::string>();
            doc.diagnostics.entries.push_back(std::move(e));
        }
        if (j.contains("results")) {
            doc.results = j.at("results");
        }
        doc.verdict = j.at("verdict").get<bool>();
    } catch (const Json::exception& e) {
        throw ParseError(std::string("report document: ") + e.what(), "malformed-structure");
    }
    return doc;
}

enum class ReportFormat { json, text };

inline std::string emit_report(const ReportDocument& doc, ReportFormat format) {
    if (format == ReportFormat::json) {
        return report_to_json(doc).dump(2) + "\n";
    }
    std::string out;
    out += doc.command + " (version " + doc.tool_version + ")\n";
    for (const auto& e : doc.diagnostics.entries) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-36s %-4s residual %.3e  threshold %.3e  [%s]\n",
                      e.name.c_str(), e.pass ? "ok" : "FAIL", e.residual, e.threshold,
                      e.anchor.c_str());
        out += buf;
    }
    out += std::string("verdict: ") + (doc.verdict ? "pass" : "fail") + "\n";
    return out;
}

} // namespace gammadyn

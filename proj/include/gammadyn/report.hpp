#pragma once

#include <string>
#include <vector>

namespace gammadyn {

/// One named residual with its threshold and a textual anchor naming
/// the identity it checks.
struct DiagnosticEntry {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string anchor;
};

struct DiagnosticReport {
    std::vector<DiagnosticEntry> entries;

    void add(std::string name, double residual, double threshold, std::string anchor) {
        entries.push_back({std::move(name), residual, threshold,
                           residual <= threshold, std::move(anchor)});
    }

    bool all_pass() const {
        for (const auto& e : entries) {
            if (!e.pass) return false;
        }
        return true;
    }

    const DiagnosticEntry* find(const std::string& name) const {
        for (const auto& e : entries) {
            if (e.name == name) return &e;
        }
        return nullptr;
    }
};

} // namespace gammadyn

#pragma once

#include "gammadyn/errors.hpp"

namespace gammadyn {

/// All numerical thresholds in one place. Defaults are calibrated to
/// double precision at desk scale (N up to a few hundred).
struct ToleranceConfig {
    double reality_tol = 1e-9;  ///< relative bound on eigenvalue imaginary parts
    double gap_tol = 1e-9;      ///< relative bound on eigenvalue distinctness
    double residual_tol = 1e-9; ///< relative bound on diagnostic residuals
    double series_tol = 1e-12;  ///< absolute truncation target for series sums
    double rank_tol = 1e-10;    ///< singular-value cutoff for kernel extraction
    int series_max_terms = 512; ///< hard cap on series truncation index

    void validate() const {
        if (!(reality_tol > 0.0 && gap_tol > 0.0 && residual_tol > 0.0 &&
              series_tol > 0.0 && rank_tol > 0.0)) {
            throw ContractError("ToleranceConfig: all thresholds must be strictly positive");
        }
        if (series_max_terms < 1) {
            throw ContractError("ToleranceConfig: series_max_terms must be >= 1");
        }
    }
};

} // namespace gammadyn

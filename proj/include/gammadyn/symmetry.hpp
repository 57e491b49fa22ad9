#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gammadyn/biortho.hpp"
#include "gammadyn/dynamics.hpp"
#include "gammadyn/linalg.hpp"

namespace gammadyn {

inline const std::vector<double>& default_t_samples() {
    static const std::vector<double> samples{0.1, 0.5, 1.0, 2.0};
    return samples;
}

/// The five equivalent characterizations of a conserved operator under
/// the evolution, each as a Frobenius residual. They are predicted to
/// pass or fail together; `inconsistent` flags a split at the chosen
/// tolerance instead of silently picking a side.
struct SymmetryReport {
    double residual_def = 0.0;        ///< ||[H, S^{-1}X]||_F
    double residual_conj = 0.0;       ///< ||[H^dag, X^dag S^{-1}]||_F
    double residual_intertwine = 0.0; ///< ||H^dag X - X H||_F
    double residual_derivation = 0.0; ///< ||i(H^dag X - X H)||_F
    double residual_evolution = 0.0;  ///< max_t ||gamma^t(X) - X||_F
    double scale = 1.0;
    double threshold = 0.0;
    bool verdict = false;
    bool inconsistent = false;

    std::vector<double> residuals() const {
        return {residual_def, residual_conj, residual_intertwine,
                residual_derivation, residual_evolution};
    }
};

inline SymmetryReport symmetry_report(const ComplexMatrix& h, const MetricPair& metric,
                                      const ComplexMatrix& x,
                                      const std::vector<double>& t_samples = default_t_samples(),
                                      const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(h, "symmetry_report");
    require_same_shape(h, x, "symmetry_report");
    require_same_shape(h, metric.s_psi, "symmetry_report");
    if (t_samples.empty()) {
        throw ContractError("symmetry_report: t_samples must be nonempty");
    }

    const ComplexMatrix& s_inv = metric.s_phi;
    SymmetryReport report;
    report.residual_def = (h * (s_inv * x) - (s_inv * x) * h).norm();
    report.residual_conj =
        (h.adjoint() * (x.adjoint() * s_inv) - (x.adjoint() * s_inv) * h.adjoint()).norm();
    report.residual_intertwine = (h.adjoint() * x - x * h).norm();
    report.residual_derivation = delta_gamma(h, x).norm();
    for (double t : t_samples) {
        report.residual_evolution =
            std::max(report.residual_evolution, (gamma_t(h, x, t) - x).norm());
    }

    report.scale = (1.0 + operator_norm(h)) * (1.0 + operator_norm(x)) *
                   (1.0 + operator_norm(s_inv));
    report.threshold = tol.residual_tol * report.scale;

    int passes = 0;
    for (double r : report.residuals()) {
        if (r <= report.threshold) ++passes;
    }
    report.verdict = passes == 5;
    report.inconsistent = passes != 0 && passes != 5;
    return report;
}

/// An intertwiner sum_k x_k |psi_k><psi_k| and, when every coefficient
/// is nonzero, its explicit inverse sum_k x_k^{-1} |phi_k><phi_k|.
struct Intertwiner {
    ComplexMatrix matrix;
    std::optional<ComplexMatrix> inverse;
};

inline Intertwiner build_intertwiner(const BiorthogonalSystem& sys,
                                     const std::vector<ComplexScalar>& coeffs,
                                     const ToleranceConfig& tol = {}) {
    tol.validate();
    const Eigen::Index n = sys.dimension;
    if (static_cast<Eigen::Index>(coeffs.size()) != n) {
        throw DimensionError("build_intertwiner: coefficient count must equal the dimension");
    }

    Intertwiner out;
    out.matrix = ComplexMatrix::Zero(n, n);
    bool invertible = true;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& psi = sys.psi[static_cast<std::size_t>(k)];
        out.matrix += coeffs[static_cast<std::size_t>(k)] * (psi * psi.adjoint());
        if (coeffs[static_cast<std::size_t>(k)] == ComplexScalar{0.0, 0.0}) invertible = false;
    }
    if (invertible) {
        ComplexMatrix inv = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& phi = sys.phi[static_cast<std::size_t>(k)];
            inv += (1.0 / coeffs[static_cast<std::size_t>(k)]) * (phi * phi.adjoint());
        }
        const double defect =
            (out.matrix * inv - ComplexMatrix::Identity(n, n)).norm();
        const double scale =
            (1.0 + operator_norm(out.matrix)) * (1.0 + operator_norm(inv));
        if (defect > tol.residual_tol * scale) {
            throw InternalConsistencyError(
                "build_intertwiner: explicit inverse fails verification, defect " +
                std::to_string(defect));
        }
        out.inverse = std::move(inv);
    }
    return out;
}

/// Orthonormal basis of { X : H^dag X = X H }. For a simple real
/// spectrum its dimension is exactly N.
inline std::vector<ComplexMatrix> symmetry_space(const ComplexMatrix& h,
                                                 const ToleranceConfig& tol = {}) {
    return sylvester_kernel(h.adjoint(), h, tol);
}

/// Deform a conserved X by an operator Y commuting with H; the product
/// XY is conserved again.
inline std::pair<ComplexMatrix, SymmetryReport>
deform_symmetry(const ComplexMatrix& h, const MetricPair& metric,
                const ComplexMatrix& x, const ComplexMatrix& y,
                const ToleranceConfig& tol = {}) {
    tol.validate();
    require_same_shape(h, y, "deform_symmetry");

    const SymmetryReport x_report = symmetry_report(h, metric, x, default_t_samples(), tol);
    if (!x_report.verdict) {
        const std::vector<double> residuals = x_report.residuals();
        throw ContractError("deform_symmetry: X fails the symmetry check, worst residual " +
                            std::to_string(*std::max_element(residuals.begin(),
                                                             residuals.end())));
    }
    const double commutator = (h * y - y * h).norm();
    const double commutator_bound =
        tol.residual_tol * (1.0 + operator_norm(h)) * (1.0 + operator_norm(y));
    if (commutator > commutator_bound) {
        throw ContractError("deform_symmetry: [H, Y] residual " + std::to_string(commutator) +
                            " exceeds its bound " + std::to_string(commutator_bound));
    }

    ComplexMatrix product = x * y;
    SymmetryReport report = symmetry_report(h, metric, product, default_t_samples(), tol);
    return {std::move(product), report};
}

} // namespace gammadyn

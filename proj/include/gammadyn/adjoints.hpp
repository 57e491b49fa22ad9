#pragma once

#include <string>
#include <vector>

#include "gammadyn/biortho.hpp"
#include "gammadyn/report.hpp"
#include "gammadyn/rng.hpp"
#include "gammadyn/symmetry.hpp"

namespace gammadyn {

/// Which metric-weighted scalar product / adjoint to use:
/// flat weights by S^{-1}, sharp weights by S (S = S_psi).
enum class AdjointVariant { flat, sharp };

/// <f, g>_flat = <S^{-1} f, g>,  <f, g>_sharp = <S f, g>.
inline ComplexScalar inner_product_variant(const MetricPair& metric, AdjointVariant variant,
                                           const ComplexVector& f, const ComplexVector& g) {
    if (f.size() != g.size() || f.size() != metric.s_psi.rows()) {
        throw DimensionError("inner_product_variant: dimension mismatch");
    }
    const ComplexMatrix& w = variant == AdjointVariant::flat ? metric.s_phi : metric.s_psi;
    return (w * f).dot(g);
}

/// X^flat = S X^dag S^{-1},  X^sharp = S^{-1} X^dag S.
inline ComplexMatrix adjoint_variant(const MetricPair& metric, AdjointVariant variant,
                                     const ComplexMatrix& x) {
    require_same_shape(metric.s_psi, x, "adjoint_variant");
    if (variant == AdjointVariant::flat) {
        return metric.s_psi * x.adjoint() * metric.s_phi;
    }
    return metric.s_phi * x.adjoint() * metric.s_psi;
}

/// Self-adjointness of H in the sharp product, of H^dag in the flat
/// product, the dagger/flat/sharp interchange rule, and spot checks of
/// the two weighted products on seeded random vectors.
inline DiagnosticReport adjoint_diagnostics(const ComplexMatrix& h, const MetricPair& metric,
                                            const ToleranceConfig& tol = {},
                                            std::uint64_t seed = 42) {
    tol.validate();
    require_square(h, "adjoint_diagnostics");
    require_same_shape(h, metric.s_psi, "adjoint_diagnostics");

    const Eigen::Index n = h.rows();
    const double nh = operator_norm(h);
    const double metric_scale =
        (1.0 + operator_norm(metric.s_psi)) * (1.0 + operator_norm(metric.s_phi));

    DiagnosticReport report;
    report.add("h_sharp_self_adjoint",
               (h - adjoint_variant(metric, AdjointVariant::sharp, h)).norm(),
               tol.residual_tol * (1.0 + nh) * metric_scale, "H = H^sharp");
    report.add("h_dag_flat_self_adjoint",
               (h.adjoint() - adjoint_variant(metric, AdjointVariant::flat, h.adjoint())).norm(),
               tol.residual_tol * (1.0 + nh) * metric_scale, "H^dag = (H^dag)^flat");

    Rng rng(seed);
    double worst_interchange = 0.0;
    double worst_involution = 0.0;
    double worst_defining = 0.0;
    double worst_sesquilinear = 0.0;
    double min_positivity = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix x = rng.complex_matrix(n);
        const double nx = 1.0 + operator_norm(x);
        worst_interchange = std::max(
            worst_interchange,
            (adjoint_variant(metric, AdjointVariant::flat, x).adjoint() -
             adjoint_variant(metric, AdjointVariant::sharp, x.adjoint())).norm() /
                (nx * metric_scale));
        worst_involution = std::max(
            worst_involution,
            (adjoint_variant(metric, AdjointVariant::flat,
                             adjoint_variant(metric, AdjointVariant::flat, x)) - x).norm() /
                (nx * metric_scale));
        worst_involution = std::max(
            worst_involution,
            (adjoint_variant(metric, AdjointVariant::sharp,
                             adjoint_variant(metric, AdjointVariant::sharp, x)) - x).norm() /
                (nx * metric_scale));

        for (AdjointVariant variant : {AdjointVariant::flat, AdjointVariant::sharp}) {
            const ComplexVector f = rng.complex_vector(n);
            const ComplexVector g = rng.complex_vector(n);
            const ComplexScalar lambda = rng.complex_uniform();
            worst_defining = std::max(
                worst_defining,
                std::abs(inner_product_variant(metric, variant, x * f, g) -
                         inner_product_variant(metric, variant, f,
                                               adjoint_variant(metric, variant, x) * g)) /
                    (nx * metric_scale * f.norm() * g.norm()));
            worst_sesquilinear = std::max(
                worst_sesquilinear,
                std::abs(inner_product_variant(metric, variant, lambda * f, g) -
                         std::conj(lambda) * inner_product_variant(metric, variant, f, g)) /
                    (metric_scale * f.norm() * g.norm()));
            min_positivity =
                std::min(min_positivity,
                         inner_product_variant(metric, variant, f, f).real() / f.squaredNorm());
        }
    }
    report.add("dagger_interchange", worst_interchange, tol.residual_tol,
               "(X^flat)^dag = (X^dag)^sharp");
    report.add("involution", worst_involution, tol.residual_tol,
               "(X^flat)^flat = (X^sharp)^sharp = X");
    report.add("adjoint_defining_property", worst_defining, tol.residual_tol,
               "<Xf, g>_v = <f, X^v g>_v");
    report.add("sesquilinearity", worst_sesquilinear, tol.residual_tol,
               "<lambda f, g>_v = conj(lambda) <f, g>_v");
    // positivity: residual is how far the worst Rayleigh quotient dips below zero
    report.add("positivity", std::max(0.0, -min_positivity), tol.residual_tol,
               "<f, f>_v > 0 for f != 0");
    return report;
}

/// Eigenbases of H^flat and (H^flat)^dag: xi_n = S psi_n, eta_n = S^{-1} phi_n.
struct AdjointBases {
    std::vector<ComplexVector> xi;
    std::vector<ComplexVector> eta;
};

struct FlatSpectralResult {
    AdjointBases bases;
    DiagnosticReport report;
};

/// Build the xi/eta bases, verify the four eigen-equation chains and
/// their biorthonormality, and check the intertwining criterion
/// H^flat (S X) = (S X) H against the direct symmetry verdict on a test
/// battery of known conserved and non-conserved operators.
inline FlatSpectralResult flat_spectral_system(const BiorthogonalSystem& sys,
                                               const MetricPair& metric,
                                               const ToleranceConfig& tol = {},
                                               std::vector<ComplexMatrix> extra_tests = {}) {
    tol.validate();
    const Eigen::Index n = sys.dimension;
    require_same_shape(sys.hamiltonian, metric.s_psi, "flat_spectral_system");

    const ComplexMatrix& h = sys.hamiltonian;
    const ComplexMatrix& s = metric.s_psi;
    const ComplexMatrix& s_inv = metric.s_phi;
    const ComplexMatrix h_flat = adjoint_variant(metric, AdjointVariant::flat, h);
    const double nh = std::max(operator_norm(h), 1e-300);

    FlatSpectralResult result;
    result.bases.xi.reserve(static_cast<std::size_t>(n));
    result.bases.eta.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        result.bases.xi.push_back(s * sys.psi[static_cast<std::size_t>(k)]);
        result.bases.eta.push_back(s_inv * sys.phi[static_cast<std::size_t>(k)]);
    }

    double r_phi = 0.0, r_psi = 0.0, r_xi = 0.0, r_eta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double e = sys.eigenvalues[static_cast<std::size_t>(k)];
        const auto& phi = sys.phi[static_cast<std::size_t>(k)];
        const auto& psi = sys.psi[static_cast<std::size_t>(k)];
        const auto& xi = result.bases.xi[static_cast<std::size_t>(k)];
        const auto& eta = result.bases.eta[static_cast<std::size_t>(k)];
        r_phi = std::max(r_phi, (h * phi - e * phi).norm() / (nh * phi.norm()));
        r_psi = std::max(r_psi, (h.adjoint() * psi - e * psi).norm() / (nh * psi.norm()));
        r_xi = std::max(r_xi, (h_flat * xi - e * xi).norm() / (nh * xi.norm()));
        r_eta = std::max(r_eta,
                         (h_flat.adjoint() * eta - e * eta).norm() / (nh * eta.norm()));
    }
    result.report.add("eigen_h", r_phi, tol.residual_tol, "H phi_n = E_n phi_n");
    result.report.add("eigen_h_dag", r_psi, tol.residual_tol, "H^dag psi_n = E_n psi_n");
    result.report.add("eigen_h_flat", r_xi, tol.residual_tol, "H^flat xi_n = E_n xi_n");
    result.report.add("eigen_h_flat_dag", r_eta, tol.residual_tol,
                      "(H^flat)^dag eta_n = E_n eta_n");

    double r_biortho = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const ComplexScalar ip = inner(result.bases.eta[static_cast<std::size_t>(a)],
                                           result.bases.xi[static_cast<std::size_t>(b)]);
            r_biortho = std::max(r_biortho, std::abs(ip - (a == b ? 1.0 : 0.0)));
        }
    }
    result.report.add("xi_eta_biorthonormality", r_biortho, tol.residual_tol,
                      "<eta_n, xi_m> = delta_{nm}");

    // Intertwining criterion vs direct verdict on known positives and negatives.
    std::vector<ComplexMatrix> tests;
    tests.push_back(s);
    {
        std::vector<ComplexScalar> coeffs(static_cast<std::size_t>(n), ComplexScalar{0.0, 0.0});
        coeffs[0] = ComplexScalar{1.0, 0.0};
        tests.push_back(build_intertwiner(sys, coeffs, tol).matrix);
    }
    tests.push_back(ComplexMatrix::Identity(n, n));
    tests.push_back(Rng(42).complex_matrix(n));
    for (auto& x : extra_tests) tests.push_back(std::move(x));

    for (std::size_t i = 0; i < tests.size(); ++i) {
        const ComplexMatrix& x = tests[i];
        const SymmetryReport direct = symmetry_report(h, metric, x, default_t_samples(), tol);
        const double flat_residual = (h_flat * (s * x) - (s * x) * h).norm();
        const double flat_scale = (1.0 + operator_norm(h_flat)) *
                                  (1.0 + operator_norm(s)) * (1.0 + operator_norm(x));
        const bool flat_pass = flat_residual <= tol.residual_tol * flat_scale;
        result.report.add("intertwine_agreement_" + std::to_string(i),
                          flat_pass == direct.verdict ? 0.0 : 1.0, 0.5,
                          "H^flat (SX) = (SX) H iff gamma^t(X) = X");
    }
    return result;
}

} // namespace gammadyn

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gammadyn/linalg.hpp"
#include "gammadyn/report.hpp"

namespace gammadyn {

/// Eigenstructure of a non-Hermitian H with real, simple spectrum:
/// right eigenvectors phi_k of H paired with eigenvectors psi_k of
/// H^dag, normalized so that <phi_k, psi_l> = delta_{kl}.
struct BiorthogonalSystem {
    Eigen::Index dimension = 0;
    ComplexMatrix hamiltonian;
    std::vector<double> eigenvalues;        ///< strictly increasing
    std::vector<ComplexVector> phi;         ///< unit norm, leading entry real positive
    std::vector<ComplexVector> psi;         ///< scaled so <phi_k, psi_k> = 1
};

/// S_psi = sum_k |psi_k><psi_k| and its inverse S_phi = sum_k |phi_k><phi_k|,
/// with the smallest eigenvalue of S_psi as positivity certificate.
struct MetricPair {
    ComplexMatrix s_psi;
    ComplexMatrix s_phi;
    double min_eigenvalue = 0.0;
};

inline ComplexScalar inner(const ComplexVector& f, const ComplexVector& g) {
    // conjugate-linear in the first argument
    return f.dot(g);
}

namespace detail {

// Rotate the phase so the first component of magnitude above eps is
// real and positive. Deterministic for unit-norm input.
inline ComplexVector fix_phase(const ComplexVector& v, double eps = 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > eps) {
            return v * (std::abs(v(i)) / v(i));
        }
    }
    return v;
}

} // namespace detail

/// Diagonalize H, reject non-real or clustered spectra, and build the
/// biorthonormal pair of eigenbases. phi_k are unit-norm with a fixed
/// phase; all remaining scale freedom is pushed into psi_k.
inline BiorthogonalSystem analyze_hamiltonian(const ComplexMatrix& h,
                                              const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(h, "analyze_hamiltonian");
    require_finite(h, "analyze_hamiltonian");

    const Eigen::Index n = h.rows();
    const double norm_h = operator_norm(h);
    const double scale = norm_h > 0.0 ? norm_h : 1.0;

    EigenPairs right = eig_right(h, tol);
    for (const auto& e : right.eigenvalues) {
        if (std::abs(e.imag()) > tol.reality_tol * scale) {
            throw SpectrumRealityError(
                "analyze_hamiltonian: eigenvalue " + std::to_string(e.real()) + "+" +
                std::to_string(e.imag()) + "i has non-real part beyond reality_tol");
        }
    }
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const double gap = right.eigenvalues[k + 1].real() - right.eigenvalues[k].real();
        if (gap < tol.gap_tol * scale) {
            throw DegeneracyError("analyze_hamiltonian: eigenvalue gap " +
                                  std::to_string(gap) + " below gap_tol threshold");
        }
    }

    BiorthogonalSystem sys;
    sys.dimension = n;
    sys.hamiltonian = h;
    sys.eigenvalues.reserve(static_cast<std::size_t>(n));
    sys.phi.reserve(static_cast<std::size_t>(n));
    sys.psi.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        sys.eigenvalues.push_back(right.eigenvalues[static_cast<std::size_t>(k)].real());
        sys.phi.push_back(detail::fix_phase(right.right_vectors[static_cast<std::size_t>(k)]));
    }

    // Left eigenvectors via H^dag; same real spectrum, same ordering.
    EigenPairs left = eig_right(h.adjoint(), tol);
    for (Eigen::Index k = 0; k < n; ++k) {
        const ComplexVector& w = left.right_vectors[static_cast<std::size_t>(k)];
        const ComplexScalar overlap = inner(sys.phi[static_cast<std::size_t>(k)], w);
        if (std::abs(overlap) < 1e-14) {
            throw InternalConsistencyError(
                "analyze_hamiltonian: vanishing <phi_k, psi_k> overlap at index " +
                std::to_string(k));
        }
        sys.psi.push_back(w / overlap);
    }
    return sys;
}

/// Build S_psi and S_phi as rank-one sums over the two eigenbases.
inline MetricPair metric_operators(const BiorthogonalSystem& sys) {
    const Eigen::Index n = sys.dimension;
    MetricPair metric;
    metric.s_psi = ComplexMatrix::Zero(n, n);
    metric.s_phi = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        metric.s_psi += sys.psi[static_cast<std::size_t>(k)] *
                        sys.psi[static_cast<std::size_t>(k)].adjoint();
        metric.s_phi += sys.phi[static_cast<std::size_t>(k)] *
                        sys.phi[static_cast<std::size_t>(k)].adjoint();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        (metric.s_psi + metric.s_psi.adjoint().eval()) / 2.0);
    metric.min_eigenvalue = es.eigenvalues().minCoeff();
    if (metric.min_eigenvalue <= 0.0) {
        throw InternalConsistencyError(
            "metric_operators: S_psi lost positivity (upstream eigensolver bug)");
    }
    return metric;
}

/// All defining residuals of the biorthogonal structure and the metric
/// pair, each relative to the natural scale of its identity.
inline DiagnosticReport validate_system(const BiorthogonalSystem& sys,
                                        const MetricPair& metric,
                                        const ToleranceConfig& tol = {}) {
    tol.validate();
    const Eigen::Index n = sys.dimension;
    if (metric.s_psi.rows() != n) {
        throw DimensionError("validate_system: system/metric dimension mismatch");
    }
    const ComplexMatrix& h = sys.hamiltonian;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const double norm_h = std::max(operator_norm(h), 1e-300);

    ComplexMatrix p(n, n), q(n, n); // columns phi_k, psi_k
    for (Eigen::Index k = 0; k < n; ++k) {
        p.col(k) = sys.phi[static_cast<std::size_t>(k)];
        q.col(k) = sys.psi[static_cast<std::size_t>(k)];
    }

    double r_right = 0.0, r_left = 0.0, r_map_pp = 0.0, r_map_qq = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& phi = sys.phi[static_cast<std::size_t>(k)];
        const auto& psi = sys.psi[static_cast<std::size_t>(k)];
        const double e = sys.eigenvalues[static_cast<std::size_t>(k)];
        r_right = std::max(r_right, (h * phi - e * phi).norm() / (norm_h * phi.norm()));
        r_left = std::max(r_left, (h.adjoint() * psi - e * psi).norm() / (norm_h * psi.norm()));
        r_map_pp = std::max(r_map_pp, (metric.s_psi * phi - psi).norm() / psi.norm());
        r_map_qq = std::max(r_map_qq, (metric.s_phi * psi - phi).norm() / phi.norm());
    }

    const double norm_s = std::max(operator_norm(metric.s_psi), 1e-300);
    const double norm_si = std::max(operator_norm(metric.s_phi), 1e-300);

    DiagnosticReport report;
    report.add("eigen_right", r_right, tol.residual_tol, "H phi_k = E_k phi_k");
    report.add("eigen_left", r_left, tol.residual_tol, "H^dag psi_k = E_k psi_k");
    report.add("biorthonormality", (p.adjoint() * q - id).norm(), tol.residual_tol,
               "<phi_k, psi_l> = delta_{kl}");
    report.add("resolution_phi_psi", (p * q.adjoint() - id).norm(), tol.residual_tol,
               "sum_k |phi_k><psi_k| = 1");
    report.add("resolution_psi_phi", (q * p.adjoint() - id).norm(), tol.residual_tol,
               "sum_k |psi_k><phi_k| = 1");
    report.add("intertwine_s_psi",
               (metric.s_psi * h - h.adjoint() * metric.s_psi).norm() / (norm_s * norm_h),
               tol.residual_tol, "S_psi H = H^dag S_psi");
    report.add("intertwine_s_phi",
               (metric.s_phi * h.adjoint() - h * metric.s_phi).norm() / (norm_si * norm_h),
               tol.residual_tol, "S_phi H^dag = H S_phi");
    report.add("metric_inverse", (metric.s_psi * metric.s_phi - id).norm() / (norm_s * norm_si),
               tol.residual_tol, "S_psi S_phi = 1");
    report.add("self_adjoint_s_psi", (metric.s_psi - metric.s_psi.adjoint()).norm() / norm_s,
               tol.residual_tol, "S_psi = S_psi^dag");
    report.add("self_adjoint_s_phi", (metric.s_phi - metric.s_phi.adjoint()).norm() / norm_si,
               tol.residual_tol, "S_phi = S_phi^dag");
    report.add("map_phi_to_psi", r_map_pp, tol.residual_tol, "S_psi phi_n = psi_n");
    report.add("map_psi_to_phi", r_map_qq, tol.residual_tol, "S_phi psi_n = phi_n");
    return report;
}

} // namespace gammadyn

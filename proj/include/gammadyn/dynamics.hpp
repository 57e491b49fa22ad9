#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "gammadyn/biortho.hpp"
#include "gammadyn/linalg.hpp"
#include "gammadyn/report.hpp"

namespace gammadyn {

constexpr ComplexScalar kImaginaryUnit{0.0, 1.0};

/// Heisenberg-like evolution e^{iH^dag t} X e^{-iHt}. Collapses to the
/// standard Heisenberg picture when H is Hermitian.
inline ComplexMatrix gamma_t(const ComplexMatrix& h, const ComplexMatrix& x, double t) {
    require_square(h, "gamma_t");
    require_same_shape(h, x, "gamma_t");
    require_finite(h, "gamma_t");
    require_finite(x, "gamma_t");
    if (t == 0.0) return x;
    const ComplexScalar it = kImaginaryUnit * t;
    return mat_exp(it * h.adjoint()) * x * mat_exp(-it * h);
}

/// Similarity evolution e^{iGt} X e^{-iGt}. G need not be Hermitian; the
/// map is always multiplicative and fixes the identity.
inline ComplexMatrix alpha_t(const ComplexMatrix& g, const ComplexMatrix& x, double t) {
    require_square(g, "alpha_t");
    require_same_shape(g, x, "alpha_t");
    require_finite(g, "alpha_t");
    require_finite(x, "alpha_t");
    if (t == 0.0) return x;
    const ComplexScalar it = kImaginaryUnit * t;
    return mat_exp(it * g) * x * mat_exp(-it * g);
}

/// Image of the identity, e^{iH^dag t} e^{-iHt}; equals 1 only for
/// Hermitian H and encodes the whole multiplicativity defect.
inline ComplexMatrix gamma_identity(const ComplexMatrix& h, double t) {
    require_square(h, "gamma_identity");
    require_finite(h, "gamma_identity");
    const Eigen::Index n = h.rows();
    if (t == 0.0) return ComplexMatrix::Identity(n, n);
    const ComplexScalar it = kImaginaryUnit * t;
    return mat_exp(it * h.adjoint()) * mat_exp(-it * h);
}

/// Generator of the evolution: i (H^dag X - X H).
inline ComplexMatrix delta_gamma(const ComplexMatrix& h, const ComplexMatrix& x) {
    require_square(h, "delta_gamma");
    require_same_shape(h, x, "delta_gamma");
    require_finite(h, "delta_gamma");
    require_finite(x, "delta_gamma");
    return kImaginaryUnit * (h.adjoint() * x - x * h);
}

/// Ordinary commutator derivation i [G, X].
inline ComplexMatrix delta_commutator(const ComplexMatrix& g, const ComplexMatrix& x) {
    require_square(g, "delta_commutator");
    require_same_shape(g, x, "delta_commutator");
    require_finite(g, "delta_commutator");
    require_finite(x, "delta_commutator");
    return kImaginaryUnit * (g * x - x * g);
}

enum class EvolutionMethod { direct_exponential, series, ode };

struct EvolutionResult {
    double t = 0.0;
    ComplexMatrix evolved;
    EvolutionMethod method = EvolutionMethod::direct_exponential;
    int terms_used = 0;
    double truncation_bound = 0.0;
};

namespace detail {

// A priori tail bound: sum_{k>K} r^k/k! <= (r^{K+1}/(K+1)!) e^r, from
// ||delta_gamma^k(X)|| <= (2||H||)^k ||X|| with r = 2||H|| |t|.
inline double series_tail_bound(double r, int k_terms, double norm_x) {
    if (norm_x == 0.0 || r == 0.0) return 0.0;
    const double log_tail = (k_terms + 1) * std::log(r) - std::lgamma(k_terms + 2.0) + r +
                            std::log(norm_x);
    return std::exp(log_tail);
}

} // namespace detail

/// Evolve X by summing the generator series sum_k t^k delta^k(X)/k!,
/// truncated where the analytic tail bound drops below series_tol.
inline EvolutionResult gamma_series(const ComplexMatrix& h, const ComplexMatrix& x,
                                    double t, const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(h, "gamma_series");
    require_same_shape(h, x, "gamma_series");
    require_finite(h, "gamma_series");
    require_finite(x, "gamma_series");

    EvolutionResult result;
    result.t = t;
    result.method = EvolutionMethod::series;

    const double r = 2.0 * operator_norm(h) * std::abs(t);
    const double norm_x = operator_norm(x);
    if (t == 0.0 || r == 0.0 || norm_x == 0.0) {
        result.evolved = x;
        result.terms_used = 1;
        result.truncation_bound = 0.0;
        return result;
    }

    int truncation_index = 0;
    while (detail::series_tail_bound(r, truncation_index, norm_x) > tol.series_tol) {
        if (++truncation_index > tol.series_max_terms) {
            throw TruncationError("gamma_series: truncation index above series_max_terms cap");
        }
    }

    ComplexMatrix term = x; // t^k delta^k(X) / k!
    ComplexMatrix sum = x;
    for (int k = 1; k <= truncation_index; ++k) {
        term = (t / k) * delta_gamma(h, term);
        sum += term;
    }
    result.evolved = sum;
    result.terms_used = truncation_index + 1;
    result.truncation_bound = detail::series_tail_bound(r, truncation_index, norm_x);
    return result;
}

/// Evolve X by fixed-step classical fourth-order integration of
/// dX/dt = i (H^dag X - X H). Global error O(dt^4).
inline EvolutionResult gamma_ode(const ComplexMatrix& h, const ComplexMatrix& x,
                                 double t, double dt) {
    if (!(dt > 0.0)) {
        throw ContractError("gamma_ode: dt must be positive");
    }
    if (!std::isfinite(t)) {
        throw ContractError("gamma_ode: t must be finite");
    }
    require_square(h, "gamma_ode");
    require_same_shape(h, x, "gamma_ode");
    require_finite(h, "gamma_ode");
    require_finite(x, "gamma_ode");

    EvolutionResult result;
    result.t = t;
    result.method = EvolutionMethod::ode;

    const double direction = t >= 0.0 ? 1.0 : -1.0;
    double remaining = std::abs(t);
    auto flow = [&h](const ComplexMatrix& m) {
        return kImaginaryUnit * (h.adjoint() * m - m * h);
    };
    ComplexMatrix state = x;
    while (remaining > 0.0) {
        const double step = direction * std::min(dt, remaining);
        const ComplexMatrix k1 = flow(state);
        const ComplexMatrix k2 = flow(state + (step / 2.0) * k1);
        const ComplexMatrix k3 = flow(state + (step / 2.0) * k2);
        const ComplexMatrix k4 = flow(state + step * k3);
        state += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        remaining -= std::abs(step);
    }
    result.evolved = std::move(state);
    return result;
}

/// All identities relating the evolution to the similarity flow of H,
/// its generator, and (when a metric pair is supplied) the transport of
/// those identities through S_psi.
inline DiagnosticReport dynamics_diagnostics(const ComplexMatrix& h,
                                             const std::optional<MetricPair>& metric,
                                             const ComplexMatrix& x,
                                             const ComplexMatrix& y,
                                             double t,
                                             const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(h, "dynamics_diagnostics");
    require_same_shape(h, x, "dynamics_diagnostics");
    require_same_shape(h, y, "dynamics_diagnostics");

    const Eigen::Index n = h.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const double nh = operator_norm(h);
    const double nx = operator_norm(x);
    const double ny = operator_norm(y);
    const double growth = std::exp(2.0 * std::abs(t) * nh);

    const ComplexMatrix gx = gamma_t(h, x, t);
    const ComplexMatrix gy = gamma_t(h, y, t);
    const ComplexMatrix g1 = gamma_identity(h, t);

    DiagnosticReport report;

    report.add("factorization_left", (gx - g1 * alpha_t(h, x, t)).norm(),
               tol.residual_tol * growth * (1.0 + nx),
               "gamma^t(X) = gamma^t(1) alpha_H^t(X)");
    report.add("factorization_right",
               (gx - alpha_t(h, x.adjoint(), t).adjoint() * g1).norm(),
               tol.residual_tol * growth * (1.0 + nx),
               "gamma^t(X) = (alpha_H^t(X^dag))^dag gamma^t(1)");

    report.add("product_defect", (gamma_t(h, x * y, t) - gx * gy).norm(),
               tol.residual_tol * growth * growth * (1.0 + nx) * (1.0 + ny),
               "gamma^t(XY) = gamma^t(X) gamma^t(Y)");

    const ComplexMatrix leibniz_defect =
        delta_gamma(h, x * y) - x * delta_gamma(h, y) - delta_gamma(h, x) * y;
    report.add("leibniz_identity",
               (leibniz_defect + x * delta_gamma(h, id) * y).norm(),
               tol.residual_tol * (1.0 + nx) * (1.0 + ny) * (1.0 + 2.0 * nh),
               "delta(XY) - X delta(Y) - delta(X) Y = -X delta(1) Y");

    report.add("adjoint_preservation",
               (gamma_t(h, x.adjoint(), t) - gx.adjoint()).norm(),
               tol.residual_tol * growth * (1.0 + nx),
               "gamma^t(X^dag) = (gamma^t(X))^dag");

    {
        const double hstep = 1e-5 * std::max(1.0, std::abs(t));
        const ComplexMatrix fd =
            (gamma_identity(h, t + hstep) - gamma_identity(h, t - hstep)) / (2.0 * hstep);
        const ComplexMatrix analytic = gamma_t(h, delta_gamma(h, id), t);
        // central-difference error dominated by h^2/6 * ||(d/dt)^3 gamma^t(1)||
        const double fd_error =
            hstep * hstep * std::pow(2.0 * nh, 3) *
            std::exp(2.0 * (std::abs(t) + hstep) * nh);
        report.add("ode_identity", (fd - analytic).norm(),
                   tol.residual_tol * growth * (1.0 + 2.0 * nh) + fd_error,
                   "d/dt gamma^t(1) = gamma^t(i(H^dag - H))");
    }

    if (metric) {
        const ComplexMatrix& s = metric->s_psi;
        const ComplexMatrix& s_inv = metric->s_phi;
        require_same_shape(h, s, "dynamics_diagnostics");
        const double ns = operator_norm(s);
        const double nsi = operator_norm(s_inv);
        const double metric_scale = (1.0 + ns) * (1.0 + nsi);

        report.add("metric_factorization_left",
                   (g1 - s * alpha_t(h, s_inv, t)).norm(),
                   tol.residual_tol * growth * metric_scale,
                   "gamma^t(1) = S alpha_H^t(S^{-1})");
        report.add("metric_factorization_right",
                   (g1 - alpha_t(h, s_inv, t).adjoint() * s).norm(),
                   tol.residual_tol * growth * metric_scale,
                   "gamma^t(1) = (alpha_H^t(S^{-1}))^dag S");

        ComplexMatrix dg = x;       // delta_gamma^l(X)
        ComplexMatrix dh = s_inv * x; // delta_H^l(S^{-1} X)
        for (int l = 1; l <= 3; ++l) {
            dg = delta_gamma(h, dg);
            dh = delta_commutator(h, dh);
            report.add("derivation_transport_l" + std::to_string(l),
                       (dg - s * dh).norm(),
                       tol.residual_tol * metric_scale * (1.0 + nx) *
                           (1.0 + std::pow(2.0 * nh, l)),
                       "delta_gamma^" + std::to_string(l) +
                           "(X) = S delta_H^" + std::to_string(l) + "(S^{-1} X)");
        }
    }
    return report;
}

} // namespace gammadyn

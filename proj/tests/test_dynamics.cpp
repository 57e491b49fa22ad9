#include <doctest.h>

#include "gammadyn/biortho.hpp"
#include "gammadyn/dynamics.hpp"
#include "gammadyn/rng.hpp"

using namespace gammadyn;

namespace {

ComplexMatrix fixture_h() {
    ComplexMatrix h(2, 2);
    h << 0.0, 1.0, 0.0, 1.0;
    return h;
}

} // namespace

TEST_CASE("gamma_t at t = 0 is the identity map") {
    Rng rng(10);
    const ComplexMatrix h = rng.complex_matrix(3);
    const ComplexMatrix x = rng.complex_matrix(3);
    CHECK((gamma_t(h, x, 0.0) - x).norm() == 0.0);
}

TEST_CASE("gamma_t phase oracle on a diagonal Hermitian generator") {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    ComplexMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const double t = 0.83;
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 1) = std::exp(ComplexScalar{0.0, -t});
    expected(1, 0) = std::exp(ComplexScalar{0.0, t});
    CHECK((gamma_t(h, x, t) - expected).norm() < 1e-13);
}

TEST_CASE("the metric operator does not evolve") {
    BiorthogonalSystem sys = analyze_hamiltonian(fixture_h());
    MetricPair metric = metric_operators(sys);
    for (double t : {0.3, 1.0, 2.5}) {
        CHECK((gamma_t(fixture_h(), metric.s_psi, t) - metric.s_psi).norm() < 1e-12);
    }
}

TEST_CASE("alpha_t fixes the identity and is multiplicative") {
    Rng rng(11);
    const ComplexMatrix g = rng.complex_matrix(3);
    const ComplexMatrix x = rng.complex_matrix(3);
    const ComplexMatrix y = rng.complex_matrix(3);
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    for (double t : {0.4, 1.7}) {
        CHECK((alpha_t(g, id, t) - id).norm() < 1e-11);
        CHECK((alpha_t(g, x * y, t) - alpha_t(g, x, t) * alpha_t(g, y, t)).norm() < 1e-10);
    }
}

TEST_CASE("alpha_t fixes operators commuting with the generator") {
    ComplexMatrix g = ComplexMatrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 0) = 5.0;
    x(1, 1) = 7.0;
    CHECK((alpha_t(g, x, 1.3) - x).norm() < 1e-13);
}

TEST_CASE("gamma_identity basics") {
    const ComplexMatrix h = fixture_h();
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    CHECK((gamma_identity(h, 0.0) - id).norm() == 0.0);

    Rng rng(12);
    const ComplexMatrix hermitian = rng.hermitian_matrix(3);
    CHECK((gamma_identity(hermitian, 1.7) - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);

    // derivative at zero is i(H^dag - H), finite-difference oracle
    const double step = 1e-6;
    const ComplexMatrix fd = (gamma_identity(h, step) - gamma_identity(h, -step)) / (2.0 * step);
    CHECK((fd - kImaginaryUnit * (h.adjoint() - h)).norm() < 1e-9);
}

TEST_CASE("delta_gamma closed forms") {
    const ComplexMatrix h = fixture_h();
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    ComplexMatrix expected(2, 2);
    expected << 0.0, ComplexScalar{0.0, -1.0}, ComplexScalar{0.0, 1.0}, 0.0;
    CHECK((delta_gamma(h, id) - expected).norm() < 1e-15);

    // Hermitian generator, commuting observable
    ComplexMatrix g = ComplexMatrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    CHECK(delta_gamma(g, g).norm() == 0.0);

    // the metric operator is annihilated
    MetricPair metric = metric_operators(analyze_hamiltonian(h));
    CHECK(delta_gamma(h, metric.s_psi).norm() < 1e-12);
}

TEST_CASE("delta_commutator closed forms") {
    ComplexMatrix g = ComplexMatrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    CHECK(delta_commutator(g, g).norm() == 0.0);
    CHECK(delta_commutator(g, ComplexMatrix::Identity(2, 2)).norm() == 0.0);

    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = 1.0;
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 1) = ComplexScalar{0.0, -1.0};
    CHECK((delta_commutator(g, x) - expected).norm() < 1e-15);
}

TEST_CASE("delta_gamma adjoint symmetry and continuity bound") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix h = rng.complex_matrix(4);
        const ComplexMatrix x = rng.complex_matrix(4);
        const ComplexMatrix y = rng.complex_matrix(4);
        CHECK((delta_gamma(h, x.adjoint()) - delta_gamma(h, x).adjoint()).norm() < 1e-14);
        CHECK(operator_norm(delta_gamma(h, x) - delta_gamma(h, y)) <=
              2.0 * operator_norm(h) * operator_norm(x - y) * (1.0 + 1e-12));
    }
}

TEST_CASE("gamma_series trivial cases") {
    Rng rng(14);
    const ComplexMatrix h = rng.complex_matrix(3);
    const ComplexMatrix x = rng.complex_matrix(3);
    EvolutionResult at_zero = gamma_series(h, x, 0.0);
    CHECK(at_zero.terms_used == 1);
    CHECK((at_zero.evolved - x).norm() == 0.0);

    // Hermitian commuting case: every derivation power vanishes
    ComplexMatrix g = ComplexMatrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = 2.0;
    EvolutionResult fixed = gamma_series(g, g, 1.9);
    CHECK((fixed.evolved - g).norm() < 1e-13);
}

TEST_CASE("gamma_series matches the exact exponential on the fixture") {
    const ComplexMatrix h = fixture_h();
    EvolutionResult series = gamma_series(h, ComplexMatrix::Identity(2, 2), 0.5);
    CHECK((series.evolved - gamma_identity(h, 0.5)).norm() < 1e-10);
    CHECK(series.truncation_bound <= 1e-12);
}

TEST_CASE("gamma_series agrees with gamma_t on random inputs") {
    Rng rng(15);
    ToleranceConfig tol;
    for (int trial = 0; trial < 15; ++trial) {
        const Eigen::Index n = rng.uniform_int(2, 5);
        ComplexMatrix h = rng.complex_matrix(n);
        h *= rng.uniform(0.2, 5.0) / operator_norm(h);
        ComplexMatrix x = rng.complex_matrix(n);
        const double t = rng.uniform(-2.0, 2.0);
        EvolutionResult series = gamma_series(h, x, t, tol);
        const double growth = std::exp(2.0 * std::abs(t) * operator_norm(h));
        CHECK((series.evolved - gamma_t(h, x, t)).norm() <=
              tol.series_tol + tol.residual_tol * growth * (1.0 + operator_norm(x)));
    }
}

TEST_CASE("gamma_series truncation cap raises") {
    ToleranceConfig tol;
    tol.series_max_terms = 3;
    Rng rng(16);
    ComplexMatrix h = rng.complex_matrix(3);
    h *= 5.0 / operator_norm(h);
    CHECK_THROWS_AS(gamma_series(h, rng.complex_matrix(3), 2.0, tol), TruncationError);
}

TEST_CASE("one-parameter group law and adjoint preservation") {
    Rng rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::Index n = rng.uniform_int(2, 5);
        ComplexMatrix h = rng.complex_matrix(n);
        const ComplexMatrix x = rng.complex_matrix(n);
        const double s = rng.uniform(-2.0, 2.0);
        const double t = rng.uniform(-2.0, 2.0);
        const double growth =
            std::exp(2.0 * (std::abs(s) + std::abs(t)) * operator_norm(h));
        CHECK((gamma_t(h, gamma_t(h, x, s), t) - gamma_t(h, x, s + t)).norm() <=
              1e-9 * growth * (1.0 + operator_norm(x)));
        CHECK((gamma_t(h, x.adjoint(), t) - gamma_t(h, x, t).adjoint()).norm() <=
              1e-9 * growth * (1.0 + operator_norm(x)));
        CHECK(operator_norm(gamma_t(h, x, t)) <=
              std::exp(2.0 * std::abs(t) * operator_norm(h)) * operator_norm(x) *
                  (1.0 + 1e-9));
    }
}

TEST_CASE("derivative identity: both orderings of flow and generator") {
    Rng rng(18);
    const ComplexMatrix h = rng.complex_matrix(3);
    const ComplexMatrix x = rng.complex_matrix(3);
    const double t = 0.8;
    const double step = 1e-5;
    const ComplexMatrix fd = (gamma_t(h, x, t + step) - gamma_t(h, x, t - step)) / (2.0 * step);
    const double bound = 1e-6 + 10.0 * step * step * std::pow(2.0 * operator_norm(h), 3) *
                                    std::exp(2.0 * (t + step) * operator_norm(h));
    CHECK((fd - gamma_t(h, delta_gamma(h, x), t)).norm() < bound);
    CHECK((fd - delta_gamma(h, gamma_t(h, x, t))).norm() < bound);
}

TEST_CASE("dynamics_diagnostics passes across the board for Hermitian generators") {
    Rng rng(19);
    const ComplexMatrix h = rng.hermitian_matrix(4);
    const ComplexMatrix x = rng.complex_matrix(4);
    const ComplexMatrix y = rng.complex_matrix(4);
    DiagnosticReport report = dynamics_diagnostics(h, std::nullopt, x, y, 1.0);
    for (const auto& e : report.entries) {
        CAPTURE(e.name);
        CHECK(e.pass);
    }
}

TEST_CASE("dynamics_diagnostics: the automorphism property fails on the fixture") {
    const ComplexMatrix h = fixture_h();
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    BiorthogonalSystem sys = analyze_hamiltonian(h);
    MetricPair metric = metric_operators(sys);
    DiagnosticReport report = dynamics_diagnostics(h, metric, id, id, 1.0);

    // gamma^1(1) != gamma^1(1)^2, exact-exponential oracle
    const ComplexMatrix g1 = gamma_identity(h, 1.0);
    CHECK((g1 - g1 * g1).norm() > 1e-3);
    CHECK(report.find("product_defect")->residual > 1e-3);
    CHECK_FALSE(report.find("product_defect")->pass);

    // everything that is an algebraic identity still holds
    CHECK(report.find("factorization_left")->pass);
    CHECK(report.find("factorization_right")->pass);
    CHECK(report.find("leibniz_identity")->residual < 1e-10);
    CHECK(report.find("adjoint_preservation")->pass);
    CHECK(report.find("ode_identity")->pass);
    CHECK(report.find("metric_factorization_left")->pass);
    CHECK(report.find("metric_factorization_right")->pass);
    CHECK(report.find("derivation_transport_l1")->pass);
    CHECK(report.find("derivation_transport_l2")->pass);
    CHECK(report.find("derivation_transport_l3")->pass);
}

TEST_CASE("equivalence chain: the three defects vanish together") {
    Rng rng(20);
    const ComplexMatrix id4 = ComplexMatrix::Identity(4, 4);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix hermitian = rng.hermitian_matrix(4);
        const ComplexMatrix x = rng.complex_matrix(4);
        const ComplexMatrix y = rng.complex_matrix(4);
        CHECK((gamma_t(hermitian, x * y, 1.0) -
               gamma_t(hermitian, x, 1.0) * gamma_t(hermitian, y, 1.0)).norm() <
              1e-9 * std::exp(4.0 * operator_norm(hermitian)));
        CHECK(delta_gamma(hermitian, id4).norm() < 1e-12);
        CHECK((gamma_identity(hermitian, 1.0) - id4).norm() < 1e-12);

        ComplexMatrix skewed = rng.complex_matrix(4);
        skewed += 0.3 * kImaginaryUnit * ComplexMatrix::Identity(4, 4); // force H != H^dag
        bool some_t_breaks = false;
        for (double t : {0.1, 1.0, 2.0}) {
            const ComplexMatrix g1 = gamma_identity(skewed, t);
            if ((gamma_t(skewed, x * y, t) -
                 gamma_t(skewed, x, t) * gamma_t(skewed, y, t)).norm() > 1e-9 &&
                (g1 - id4).norm() > 1e-9) {
                some_t_breaks = true;
            }
        }
        CHECK(delta_gamma(skewed, id4).norm() > 1e-9);
        CHECK(some_t_breaks);
    }
}

TEST_CASE("gamma_ode matches the exact evolution") {
    Rng rng(21);
    const ComplexMatrix h = rng.complex_matrix(3);
    const ComplexMatrix x = rng.complex_matrix(3);
    EvolutionResult ode = gamma_ode(h, x, 1.5, 1e-3);
    CHECK((ode.evolved - gamma_t(h, x, 1.5)).norm() < 1e-8);
    CHECK_THROWS_AS(gamma_ode(h, x, 1.0, 0.0), ContractError);
}

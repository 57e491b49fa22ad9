#include <doctest.h>

#include "gammadyn/adjoints.hpp"
#include "gammadyn/rng.hpp"

using namespace gammadyn;

namespace {

ComplexMatrix fixture_h() {
    ComplexMatrix h(2, 2);
    h << 0.0, 1.0, 0.0, 1.0;
    return h;
}

MetricPair identity_metric(Eigen::Index n) {
    MetricPair m;
    m.s_psi = ComplexMatrix::Identity(n, n);
    m.s_phi = ComplexMatrix::Identity(n, n);
    m.min_eigenvalue = 1.0;
    return m;
}

} // namespace

TEST_CASE("identity metric collapses both products and adjoints to the standard ones") {
    Rng rng(26);
    MetricPair metric = identity_metric(3);
    const ComplexVector f = rng.complex_vector(3);
    const ComplexVector g = rng.complex_vector(3);
    const ComplexMatrix x = rng.complex_matrix(3);
    for (AdjointVariant v : {AdjointVariant::flat, AdjointVariant::sharp}) {
        CHECK(std::abs(inner_product_variant(metric, v, f, g) - f.dot(g)) < 1e-14);
        CHECK((adjoint_variant(metric, v, x) - x.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("fixture evaluation of the two weighted products") {
    MetricPair metric = metric_operators(analyze_hamiltonian(fixture_h()));
    ComplexVector f(2);
    f << 1.0, 0.0;
    CHECK(std::abs(inner_product_variant(metric, AdjointVariant::sharp, f, f) - 1.0) < 1e-12);
    CHECK(std::abs(inner_product_variant(metric, AdjointVariant::flat, f, f) - 1.5) < 1e-12);
}

TEST_CASE("both weighted products are positive definite") {
    MetricPair metric = metric_operators(analyze_hamiltonian(fixture_h()));
    Rng rng(27);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexVector f = rng.complex_vector(2);
        if (f.norm() == 0.0) continue;
        CHECK(inner_product_variant(metric, AdjointVariant::flat, f, f).real() > 0.0);
        CHECK(inner_product_variant(metric, AdjointVariant::sharp, f, f).real() > 0.0);
    }
}

TEST_CASE("involution and the dagger interchange rule") {
    Rng rng(28);
    const ComplexMatrix h = rng.real_spectrum_matrix(4);
    MetricPair metric = metric_operators(analyze_hamiltonian(h));
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix x = rng.complex_matrix(4);
        CHECK((adjoint_variant(metric, AdjointVariant::flat,
                               adjoint_variant(metric, AdjointVariant::flat, x)) - x).norm() <
              1e-12 * (1.0 + operator_norm(x)));
        CHECK((adjoint_variant(metric, AdjointVariant::sharp,
                               adjoint_variant(metric, AdjointVariant::sharp, x)) - x).norm() <
              1e-12 * (1.0 + operator_norm(x)));
        CHECK((adjoint_variant(metric, AdjointVariant::flat, x).adjoint() -
               adjoint_variant(metric, AdjointVariant::sharp, x.adjoint())).norm() <
              1e-12 * (1.0 + operator_norm(x)));
    }
}

TEST_CASE("each adjoint satisfies its defining property on 100 random pairs") {
    Rng rng(29);
    const ComplexMatrix h = rng.real_spectrum_matrix(3);
    MetricPair metric = metric_operators(analyze_hamiltonian(h));
    const ComplexMatrix x = rng.complex_matrix(3);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexVector f = rng.complex_vector(3);
        const ComplexVector g = rng.complex_vector(3);
        for (AdjointVariant v : {AdjointVariant::flat, AdjointVariant::sharp}) {
            CHECK(std::abs(inner_product_variant(metric, v, x * f, g) -
                           inner_product_variant(metric, v, f,
                                                 adjoint_variant(metric, v, x) * g)) <=
                  1e-9 * operator_norm(x) * f.norm() * g.norm());
        }
    }
}

TEST_CASE("adjoint_diagnostics passes on the fixture and on Hermitian input") {
    MetricPair fixture_metric = metric_operators(analyze_hamiltonian(fixture_h()));
    DiagnosticReport fixture_report = adjoint_diagnostics(fixture_h(), fixture_metric);
    for (const auto& e : fixture_report.entries) {
        CAPTURE(e.name);
        CHECK(e.pass);
    }
    // direct multiplication oracle with the hand-computed metric
    ComplexMatrix s(2, 2), s_inv(2, 2);
    s << 1.0, -1.0, -1.0, 3.0;
    s_inv << 1.5, 0.5, 0.5, 0.5;
    CHECK((fixture_h() - s_inv * fixture_h().adjoint() * s).norm() < 1e-9);

    Rng rng(30);
    ComplexMatrix hermitian = rng.hermitian_matrix(3);
    hermitian += ComplexMatrix(Eigen::Vector3d(0.0, 4.0, 8.0).cast<ComplexScalar>().asDiagonal());
    DiagnosticReport hermitian_report =
        adjoint_diagnostics(hermitian, metric_operators(analyze_hamiltonian(hermitian)));
    for (const auto& e : hermitian_report.entries) {
        CAPTURE(e.name);
        CHECK(e.pass);
    }
}

TEST_CASE("the two self-adjointness residuals are equal to machine precision") {
    Rng rng(31);
    const ComplexMatrix h = rng.real_spectrum_matrix(4);
    MetricPair metric = metric_operators(analyze_hamiltonian(h));
    const double r_sharp = (h - adjoint_variant(metric, AdjointVariant::sharp, h)).norm();
    const double r_flat =
        (h.adjoint() - adjoint_variant(metric, AdjointVariant::flat, h.adjoint())).norm();
    CHECK(r_sharp == doctest::Approx(r_flat).epsilon(1e-12));
}

TEST_CASE("adjoint_diagnostics flags a corrupted metric") {
    MetricPair metric = metric_operators(analyze_hamiltonian(fixture_h()));
    metric.s_psi(0, 1) += 0.1;
    metric.s_psi(1, 0) += 0.1;
    metric.s_phi = invert(metric.s_psi);
    DiagnosticReport report = adjoint_diagnostics(fixture_h(), metric);
    CHECK_FALSE(report.find("h_sharp_self_adjoint")->pass);
}

TEST_CASE("flat_spectral_system: Hermitian collapse and fixture residuals") {
    Rng rng(32);
    ComplexMatrix hermitian = rng.hermitian_matrix(3);
    hermitian += ComplexMatrix(Eigen::Vector3d(0.0, 4.0, 8.0).cast<ComplexScalar>().asDiagonal());
    BiorthogonalSystem hsys = analyze_hamiltonian(hermitian);
    FlatSpectralResult hres =
        flat_spectral_system(hsys, metric_operators(hsys));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK((hres.bases.xi[k] - hsys.psi[k]).norm() < 1e-9);
        CHECK((hres.bases.eta[k] - hsys.phi[k]).norm() < 1e-9);
    }
    CHECK(hres.report.all_pass());

    BiorthogonalSystem fsys = analyze_hamiltonian(fixture_h());
    MetricPair fmetric = metric_operators(fsys);
    FlatSpectralResult fres = flat_spectral_system(fsys, fmetric);
    CHECK(fres.report.all_pass());
    // eigen-residual of xi_0 = S psi_0 under H^flat, checked directly
    const ComplexMatrix h_flat = adjoint_variant(fmetric, AdjointVariant::flat, fixture_h());
    const ComplexVector xi0 = fmetric.s_psi * fsys.psi[0];
    CHECK((h_flat * xi0).norm() <= 1e-9 * xi0.norm());
}

TEST_CASE("flat intertwining criterion agrees with the direct verdict on extra tests") {
    Rng rng(33);
    const ComplexMatrix h = rng.real_spectrum_matrix(4);
    BiorthogonalSystem sys = analyze_hamiltonian(h);
    MetricPair metric = metric_operators(sys);
    std::vector<ComplexMatrix> extras;
    std::vector<ComplexScalar> coeffs;
    for (int k = 0; k < 4; ++k) coeffs.push_back(rng.complex_uniform());
    extras.push_back(build_intertwiner(sys, coeffs).matrix);
    extras.push_back(rng.complex_matrix(4));
    FlatSpectralResult res = flat_spectral_system(sys, metric, {}, std::move(extras));
    CHECK(res.report.all_pass());
}

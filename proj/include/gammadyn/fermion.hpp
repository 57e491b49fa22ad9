#pragma once

#include <cmath>

#include "gammadyn/dynamics.hpp"
#include "gammadyn/linalg.hpp"

namespace gammadyn {

/// Two fermionic modes on C^4 in the Jordan-Wigner realization
/// a1 = sigma^- (x) 1, a2 = sigma_z (x) sigma^-, with the nilpotent
/// generator H = N1 a2.
struct FermionAlgebra {
    ComplexMatrix a1, a2;
    ComplexMatrix a1_dag, a2_dag;
    ComplexMatrix n1, n2;
    ComplexMatrix h;     ///< N1 a2, squares to zero
    ComplexMatrix h_dag; ///< N1 a2^dag
};

inline FermionAlgebra build_fermion_algebra() {
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2); // annihilator on C^2
    lower(0, 1) = 1.0;
    ComplexMatrix sigma_z = ComplexMatrix::Zero(2, 2);
    sigma_z(0, 0) = 1.0;
    sigma_z(1, 1) = -1.0;
    const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);

    auto kron = [](const ComplexMatrix& a, const ComplexMatrix& b) {
        ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    };

    FermionAlgebra alg;
    alg.a1 = kron(lower, id2);
    alg.a2 = kron(sigma_z, lower);
    alg.a1_dag = alg.a1.adjoint();
    alg.a2_dag = alg.a2.adjoint();
    alg.n1 = alg.a1_dag * alg.a1;
    alg.n2 = alg.a2_dag * alg.a2;
    alg.h = alg.n1 * alg.a2;
    alg.h_dag = alg.h.adjoint();
    return alg;
}

/// The closed-form evolutions of the model: the products a1 a2 and
/// N1 N2 are stationary, and a1, a2 move linearly in t.
struct ClosedFormGamma {
    double t = 0.0;
    ComplexMatrix a1;   ///< a1 - i t a1 a2
    ComplexMatrix a2;   ///< a2 + i t N1 N2
    ComplexMatrix a1a2; ///< stationary
    ComplexMatrix n1n2; ///< stationary
};

inline ClosedFormGamma closed_form_gamma(const FermionAlgebra& alg, double t) {
    ClosedFormGamma out;
    out.t = t;
    out.a1a2 = alg.a1 * alg.a2;
    out.n1n2 = alg.n1 * alg.n2;
    out.a1 = alg.a1 - kImaginaryUnit * t * out.a1a2;
    out.a2 = alg.a2 + kImaginaryUnit * t * out.n1n2;
    return out;
}

/// Classical fourth-order fixed-step integration of the operator flow
/// dX/dt = i (H^dag X - X H). Exists as an independent verification
/// path next to the closed forms and the exact exponentials.
inline ComplexMatrix heisenberg_ode_integrate(const FermionAlgebra& alg,
                                              const ComplexMatrix& x0,
                                              double t_final, double dt) {
    return gamma_ode(alg.h, x0, t_final, dt).evolved;
}

/// ||gamma^t(a1 a2) - gamma^t(a1) gamma^t(a2)||_F from exact
/// exponentials: zero at t = 0 and strictly positive otherwise.
inline double nonfactorization_defect(const FermionAlgebra& alg, double t) {
    const ComplexMatrix lhs = gamma_t(alg.h, alg.a1 * alg.a2, t);
    const ComplexMatrix rhs = gamma_t(alg.h, alg.a1, t) * gamma_t(alg.h, alg.a2, t);
    return (lhs - rhs).norm();
}

} // namespace gammadyn

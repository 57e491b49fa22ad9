#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "gammadyn/errors.hpp"
#include "gammadyn/tolerances.hpp"

namespace gammadyn {

using ComplexScalar = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline bool is_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

inline void require_finite(const ComplexMatrix& a, const char* who) {
    if (!is_finite(a)) {
        throw NonFiniteError(std::string(who) + ": non-finite entry in input");
    }
}

inline void require_square(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols()) {
        throw DimensionError(std::string(who) + ": matrix is not square (" +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
    }
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(who) + ": dimension mismatch");
    }
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& a) {
    require_finite(a, "operator_norm");
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
}

inline double frobenius_norm(const ComplexMatrix& a) {
    return a.norm();
}

namespace detail {

// (3,3) through (13,13) diagonal Pade cores for expm, applied after
// scaling so that the 1-norm is below the order-specific threshold.
inline void expm_pade_uv(const ComplexMatrix& a, int order,
                         ComplexMatrix& u, ComplexMatrix& v) {
    const Eigen::Index n = a.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    switch (order) {
    case 3: {
        static const double b[] = {120., 60., 12., 1.};
        u = a * (b[3] * a2 + b[1] * id);
        v = b[2] * a2 + b[0] * id;
        return;
    }
    case 5: {
        static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
        const ComplexMatrix a4 = a2 * a2;
        u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
        v = b[4] * a4 + b[2] * a2 + b[0] * id;
        return;
    }
    case 7: {
        static const double b[] = {17297280., 8648640., 1995840., 277200.,
                                   25200., 1512., 56., 1.};
        const ComplexMatrix a4 = a2 * a2;
        const ComplexMatrix a6 = a4 * a2;
        u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
        v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
        return;
    }
    case 9: {
        static const double b[] = {17643225600., 8821612800., 2075673600.,
                                   302702400., 30270240., 2162160., 110880.,
                                   3960., 90., 1.};
        const ComplexMatrix a4 = a2 * a2;
        const ComplexMatrix a6 = a4 * a2;
        const ComplexMatrix a8 = a6 * a2;
        u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
        v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
        return;
    }
    default: { // 13
        static const double b[] = {64764752532480000., 32382376266240000.,
                                   7771770303897600.,  1187353796428800.,
                                   129060195264000.,   10559470521600.,
                                   670442572800.,      33522128640.,
                                   1323241920.,        40840800.,
                                   960960.,            16380.,
                                   182.,               1.};
        const ComplexMatrix a4 = a2 * a2;
        const ComplexMatrix a6 = a4 * a2;
        u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                 b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
        v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
        return;
    }
    }
}

} // namespace detail

/// Matrix exponential by scaling and squaring with a diagonal Pade core.
/// Makes no diagonalizability assumption, so nilpotent and defective
/// inputs are handled exactly as well as normal ones.
inline ComplexMatrix mat_exp(const ComplexMatrix& a) {
    require_square(a, "mat_exp");
    require_finite(a, "mat_exp");
    const Eigen::Index n = a.rows();
    if (n == 0) return a;

    // Order-selection thresholds on the 1-norm (double precision).
    constexpr double theta3 = 1.495585217958292e-2;
    constexpr double theta5 = 2.539398330063230e-1;
    constexpr double theta7 = 9.504178996162932e-1;
    constexpr double theta9 = 2.097847961257068e0;
    constexpr double theta13 = 5.371920351148152e0;

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

    int order = 13;
    int squarings = 0;
    ComplexMatrix scaled = a;
    if (norm1 <= theta3) {
        order = 3;
    } else if (norm1 <= theta5) {
        order = 5;
    } else if (norm1 <= theta7) {
        order = 7;
    } else if (norm1 <= theta9) {
        order = 9;
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
        scaled = a / std::pow(2.0, squarings);
    }

    ComplexMatrix u, v;
    detail::expm_pade_uv(scaled, order, u, v);
    ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
    }
    return result;
}

/// Eigendecomposition of a general (non-normal) complex matrix. Pairs
/// are sorted by ascending real part, ties broken by ascending
/// imaginary part; eigenvectors have unit Euclidean norm.
struct EigenPairs {
    std::vector<ComplexScalar> eigenvalues;
    std::vector<ComplexVector> right_vectors;
};

inline EigenPairs eig_right(const ComplexMatrix& a, const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(a, "eig_right");
    require_finite(a, "eig_right");

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eig_right: QR iteration failed to converge");
    }

    const Eigen::Index n = a.rows();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    const auto& vals = solver.eigenvalues();
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (vals(i).real() != vals(j).real()) return vals(i).real() < vals(j).real();
        return vals(i).imag() < vals(j).imag();
    });

    EigenPairs out;
    out.eigenvalues.reserve(static_cast<std::size_t>(n));
    out.right_vectors.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k : idx) {
        out.eigenvalues.push_back(vals(k));
        ComplexVector v = solver.eigenvectors().col(k);
        out.right_vectors.push_back(v / v.norm());
    }
    return out;
}

/// Inverse with an explicit condition guard: rejects inputs whose
/// smallest singular value falls below rank_tol times the largest.
inline ComplexMatrix invert(const ComplexMatrix& a, const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(a, "invert");
    require_finite(a, "invert");
    if (a.size() == 0) return a;

    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(a.rows() - 1);
    if (smax == 0.0 || smin <= tol.rank_tol * smax) {
        throw SingularMatrixError("invert: matrix numerically singular (condition beyond 1/rank_tol)");
    }
    return a.partialPivLu().inverse();
}

/// Orthonormal (Frobenius) basis of { X : A X - X B = 0 }, extracted as
/// the numerical kernel of the N^2 x N^2 linearized map
/// kron(I, A) - kron(B^T, I) acting on column-stacked X.
inline std::vector<ComplexMatrix> sylvester_kernel(const ComplexMatrix& a,
                                                   const ComplexMatrix& b,
                                                   const ToleranceConfig& tol = {}) {
    tol.validate();
    require_square(a, "sylvester_kernel");
    require_square(b, "sylvester_kernel");
    if (a.rows() != b.rows()) {
        throw DimensionError("sylvester_kernel: A and B must have equal dimension");
    }
    require_finite(a, "sylvester_kernel");
    require_finite(b, "sylvester_kernel");

    const Eigen::Index n = a.rows();
    const Eigen::Index nn = n * n;
    ComplexMatrix m = ComplexMatrix::Zero(nn, nn);
    // vec(AX) = kron(I, A) vec(X);  vec(XB) = kron(B^T, I) vec(X)
    for (Eigen::Index j = 0; j < n; ++j) {
        m.block(j * n, j * n, n, n) += a;
        for (Eigen::Index i = 0; i < n; ++i) {
            m.block(i * n, j * n, n, n).diagonal().array() -= b(j, i);
        }
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = tol.rank_tol * smax;

    std::vector<ComplexMatrix> basis;
    for (Eigen::Index k = 0; k < nn; ++k) {
        if (sv(k) <= cutoff) {
            ComplexVector col = svd.matrixV().col(k);
            basis.push_back(Eigen::Map<const ComplexMatrix>(col.data(), n, n));
        }
    }
    return basis;
}

} // namespace gammadyn

#pragma once

#include <cstdint>

#include "gammadyn/linalg.hpp"

namespace gammadyn {

/// Deterministic 64-bit generator (splitmix64). Bit-identical streams
/// on every platform, unlike the distributions in <random>.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    ComplexScalar complex_uniform(double scale = 1.0) {
        return {scale * uniform(-1.0, 1.0), scale * uniform(-1.0, 1.0)};
    }

    ComplexMatrix complex_matrix(Eigen::Index n, double scale = 1.0) {
        ComplexMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                m(i, j) = complex_uniform(scale);
            }
        }
        return m;
    }

    ComplexVector complex_vector(Eigen::Index n, double scale = 1.0) {
        ComplexVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = complex_uniform(scale);
        }
        return v;
    }

    ComplexMatrix hermitian_matrix(Eigen::Index n, double scale = 1.0) {
        ComplexMatrix m = complex_matrix(n, scale);
        return (m + m.adjoint().eval()) / 2.0;
    }

    /// Non-Hermitian matrix with real, well-separated spectrum:
    /// V diag(E) V^{-1} with V kept well conditioned by mixing in the
    /// identity. Eigenvalues are spaced at least min_gap apart.
    ComplexMatrix real_spectrum_matrix(Eigen::Index n, double min_gap = 0.2) {
        Eigen::VectorXd evals(n);
        double e = uniform(-2.0, -1.0);
        for (Eigen::Index k = 0; k < n; ++k) {
            evals(k) = e;
            e += min_gap + uniform(0.0, 0.5);
        }
        // perturbation below 1 in norm keeps cond(V) modest at every n
        ComplexMatrix v = ComplexMatrix::Identity(n, n) +
                          (0.5 / std::sqrt(static_cast<double>(n))) * complex_matrix(n);
        return v * evals.cast<ComplexScalar>().asDiagonal() * v.partialPivLu().inverse();
    }

private:
    std::uint64_t state_ = 0;
};

} // namespace gammadyn

// Test-only brute-force oracles. These deliberately avoid the strided
// kernels in qgcn_core: unitaries are assembled column-by-column by applying
// gates to basis states, so any kernel bug shows up as a matrix mismatch.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qgcn/statevector.hpp"

namespace qgcn::test {

using Matrix = std::vector<std::vector<complex>>;

inline Matrix identity(std::size_t dim) {
    Matrix m(dim, std::vector<complex>(dim, complex(0, 0)));
    for (std::size_t i = 0; i < dim; ++i) {
        m[i][i] = complex(1, 0);
    }
    return m;
}

/// Full 2^n x 2^n matrix of a gate sequence, one basis-state application per
/// column.
inline Matrix build_unitary(std::span<const GateInstance> gates, int n_qubits,
                            std::span<const double> params = {}) {
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    Matrix m(dim, std::vector<complex>(dim, complex(0, 0)));
    for (std::uint64_t col = 0; col < dim; ++col) {
        StateVector s = StateVector::basis_state(n_qubits, col);
        apply_gates(s, gates, params);
        for (std::uint64_t row = 0; row < dim; ++row) {
            m[row][col] = s[row];
        }
    }
    return m;
}

inline Matrix matmul(const Matrix &a, const Matrix &b) {
    const std::size_t dim = a.size();
    Matrix out(dim, std::vector<complex>(dim, complex(0, 0)));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t j = 0; j < dim; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

inline Matrix dagger(const Matrix &a) {
    const std::size_t dim = a.size();
    Matrix out(dim, std::vector<complex>(dim, complex(0, 0)));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out[i][j] = std::conj(a[j][i]);
        }
    }
    return out;
}

inline std::vector<complex> matvec(const Matrix &a, std::span<const complex> v) {
    std::vector<complex> out(a.size(), complex(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[i] += a[i][j] * v[j];
        }
    }
    return out;
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
        }
    }
    return worst;
}

inline double deviation_from_unitarity(const Matrix &u) {
    return max_abs_diff(matmul(dagger(u), u), identity(u.size()));
}

/// <psi| Z_q |psi> through the explicit matrix element, no amplitude
/// shortcuts.
inline double expectation_z_matrix(const StateVector &state, int qubit) {
    const std::uint64_t dim = state.size();
    Matrix z(dim, std::vector<complex>(dim, complex(0, 0)));
    for (std::uint64_t i = 0; i < dim; ++i) {
        z[i][i] = (i >> qubit) & 1 ? complex(-1, 0) : complex(1, 0);
    }
    const auto zv = matvec(z, state.amplitudes());
    complex sum(0, 0);
    for (std::uint64_t i = 0; i < dim; ++i) {
        sum += std::conj(state[i]) * zv[i];
    }
    return sum.real();
}

inline StateVector random_state(int n_qubits, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<complex> amps(std::uint64_t{1} << n_qubits);
    double norm_sq = 0.0;
    for (auto &a : amps) {
        a = complex(gauss(rng), gauss(rng));
        norm_sq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto &a : amps) {
        a *= inv;
    }
    return StateVector(n_qubits, std::move(amps));
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937_64 &rng,
                                         double lo = -3.141592653589793,
                                         double hi = 3.141592653589793) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (double &v : out) {
        v = dist(rng);
    }
    return out;
}

} // namespace qgcn::test

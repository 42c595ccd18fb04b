#pragma once

#include <cstdint>
#include <Eigen/Dense>

#include "torusbie/geometry.hpp"

namespace torusbie {

struct InvalidN : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OperatorKind { K, Kstar, S, S0, X, M, Composite };

struct DenseOperator {
    Eigen::MatrixXd mat;
    OperatorKind kind = OperatorKind::Composite;
    std::uint64_t fingerprint = 0;

    // flat binary: two uint64 little-endian dims, then row-major little-endian doubles
    void dump(const std::string& path) const;
    static Eigen::MatrixXd load(const std::string& path);
};

std::uint64_t grid_fingerprint(const QuadratureGrid& grid, const Torus& torus);

/* Quadrature weights R(s_i, t_j) for integrals of log(4 sin^2((s-t)/2)) f(t) over
 * [0, 2pi) at N equispaced nodes, exact for trigonometric f up to degree N/2:
 *   R_ij = -(4pi/N) sum_{m=1}^{N/2-1} cos(m (s_i - t_j))/m - (4pi/N^2) cos(N (s_i - t_j)/2). */
Eigen::MatrixXd kress_log_weights(int N);

// the same rule's row at an arbitrary target parameter s (used off the grid nodes)
Eigen::VectorXd kress_log_weights_at(double s, int N);

// double-layer matrix; diagonal is the continuous kernel limit -kappa/(4pi) times the weight
DenseOperator assemble_K(const QuadratureGrid& grid, const Torus& torus);

// adjoint double-layer matrix (normal at the target); same diagonal limit
DenseOperator assemble_Kstar(const QuadratureGrid& grid, const Torus& torus);

/* Single-layer matrix.  Same-hole blocks split the kernel into the periodic log
 * singularity (handled by the Kress rule) and a smooth remainder integrated by the
 * trapezoid rule; cross-hole blocks are plain trapezoid on the smooth kernel. */
DenseOperator assemble_S(const QuadratureGrid& grid, const Torus& torus);

// rank-one weighted-mean projection: every row is w^T / sum(w)
DenseOperator assemble_M(const QuadratureGrid& grid);

/* Characteristic operator: (X phi)_i = integral of phi over the hole containing
 * node i, for holes 1..M-1; rows on the last hole vanish; identically zero for M=1. */
DenseOperator assemble_X(const QuadratureGrid& grid);

// modified single layer S0 = S (I - M) + M; maps constants to themselves
DenseOperator assemble_S0(const QuadratureGrid& grid, const Torus& torus);

} // namespace torusbie

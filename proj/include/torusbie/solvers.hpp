#pragma once

#include <optional>

#include "torusbie/operators.hpp"

namespace torusbie {

struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonZeroMeanData : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EigensolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* u(z) = D[phi](z) + sum_j fluxes[j] G(z - betas[j]); fluxes sum to zero and phi
 * has zero weighted mean on every hole but the last (enforced as solved rows). */
struct DirichletSolution {
    Eigen::VectorXd phi;
    std::vector<double> fluxes;
    std::vector<cplx> betas;
    double rcond = 0.0;
};

// u(z) = S[phi](z) + constant; phi has exact zero weighted mean
struct NeumannSolution {
    Eigen::VectorXd phi;
    Eigen::VectorXd trace;      // boundary values of u at the nodes
    double constant = 0.0;      // the additive constant already folded into trace
    std::vector<double> fluxes; // per-hole integral of phi, equal to the hole flux
    std::string convention = "zero_mean";
    double rcond = 0.0;
};

/* u_k(z) = S[phi_k - mean](z) + mean, normalized to unit discrete L2(w) boundary
 * trace.  normal_deriv holds (K* + I/2)(I - M) phi at the nodes, i.e. the
 * outward (into-hole) normal derivative of u_k on the boundary. */
struct SteklovEigenpair {
    double sigma = 0.0;
    Eigen::VectorXd phi;
    Eigen::VectorXd trace;
    Eigen::VectorXd normal_deriv;
    double residual = 0.0; // algebraic GEVP residual; see steklov_residual for the refined one
};

DirichletSolution solve_dirichlet(const QuadratureGrid& grid, const Torus& torus,
                                  const Eigen::VectorXd& g,
                                  const std::optional<std::vector<cplx>>& betas = std::nullopt);

NeumannSolution solve_neumann(const QuadratureGrid& grid, const Torus& torus,
                              const Eigen::VectorXd& g, double mean_tol = 1e-4);

// (I - M) S (I/2 + K*)^{-1} g: zero-mean Dirichlet boundary values of the Neumann solution
Eigen::VectorXd neumann_to_dirichlet(const QuadratureGrid& grid, const Torus& torus,
                                     const Eigen::VectorXd& g, double mean_tol = 1e-4);

/* Generalized eigenproblem (K* + I/2)(I - M) phi = sigma S0 phi, solved densely;
 * keeps real nonnegative pairs, sorted ascending.  sigma_1 = 0 with constant
 * trace is always present. */
std::vector<SteklovEigenpair> solve_steklov(const QuadratureGrid& grid, const Torus& torus,
                                            int k_max);

// flux of the eigenfunction across hole j
double steklov_flux(const SteklovEigenpair& pair, const QuadratureGrid& grid, int hole);

} // namespace torusbie

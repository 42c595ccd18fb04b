#pragma once

#include <functional>

#include "torusbie/solvers.hpp"

namespace torusbie {

// plain trapezoid sums; accurate for targets a few node spacings away from the boundary
double eval_double_layer(const Eigen::VectorXd& phi, const QuadratureGrid& grid,
                         const Torus& torus, cplx z);
double eval_single_layer(const Eigen::VectorXd& phi, const QuadratureGrid& grid,
                         const Torus& torus, cplx z);

// same holes, factor times the nodes; used to evaluate close to the boundary
QuadratureGrid refine_grid(const QuadratureGrid& grid, int factor);

/* Band-limited (trigonometric) interpolation of per-hole node values onto the
 * refined grid's nodes; spectrally accurate for smooth densities. */
Eigen::VectorXd trig_upsample(const Eigen::VectorXd& phi, const QuadratureGrid& coarse,
                              const QuadratureGrid& fine);

// value of the trigonometric interpolant of one hole's block at parameter s
double trig_interp(const Eigen::VectorXd& phi, const QuadratureGrid& grid, int hole, double s);

/* Boundary value of the single layer at parameter s on the given hole, s off the
 * nodes: the log singularity goes through the Kress rule evaluated at s, the
 * smooth remainder and the other holes through the trapezoid rule. */
double eval_single_layer_on_boundary(const Eigen::VectorXd& phi, const QuadratureGrid& grid,
                                     const Torus& torus, int hole, double s);

double eval_solution(const DirichletSolution& sol, const QuadratureGrid& grid, const Torus& torus,
                     cplx z);
double eval_solution(const NeumannSolution& sol, const QuadratureGrid& grid, const Torus& torus,
                     cplx z);
double eval_solution(const SteklovEigenpair& pair, const QuadratureGrid& grid, const Torus& torus,
                     cplx z);

double flux(const DirichletSolution& sol, const QuadratureGrid& grid, int hole);
double flux(const NeumannSolution& sol, const QuadratureGrid& grid, int hole);
double flux(const SteklovEigenpair& pair, const QuadratureGrid& grid, int hole);

/* sup of |d_nu u_k - sigma_k u_k| sampled at the midpoints between grid nodes:
 * the normal derivative comes from the jump relation of the single layer, the
 * trace from the log-split quadrature evaluated off the nodes. */
double steklov_residual(const SteklovEigenpair& pair, const QuadratureGrid& grid,
                        const Torus& torus);

// same check for many modes at once; the kernel rows are shared across modes,
// so this costs one mode's kernel evaluations regardless of pairs.size()
std::vector<double> steklov_residuals(const std::vector<SteklovEigenpair>& pairs,
                                      const QuadratureGrid& grid, const Torus& torus);

struct ConvergenceProblem {
    Torus torus{cplx(0.0, 1.0)};
    std::vector<Hole> holes;
    std::string problem = "dirichlet"; // or "neumann"
    std::function<Eigen::VectorXd(const QuadratureGrid&)> data;
    std::vector<cplx> contour;
    std::function<double(cplx)> exact; // empty: self-reference against a refined solve
    int reference_factor = 4;
};

struct ConvergenceRow {
    int nodes_per_hole = 0;
    double error = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0; // least-squares slope of log10(error) vs nodes, above the 1e-12 floor
};

ConvergenceResult convergence_study(const ConvergenceProblem& prob, const std::vector<int>& Ns);

struct FieldGrid {
    int resolution = 0;
    std::vector<double> x, y, value;
    std::vector<RegionTag> mask;
};

/* Samples value_at on an n x n grid of cell midpoints in lattice coordinates,
 * z = (i+1/2)/n + (j+1/2)/n tau, and classifies every sample point. */
FieldGrid sample_field(const std::function<double(cplx)>& value_at, const QuadratureGrid& grid,
                       const Torus& torus, int n);

} // namespace torusbie

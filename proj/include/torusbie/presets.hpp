#pragma once

#include "torusbie/fields.hpp"

namespace torusbie {

/* Boundary data with a known solution, produced on any grid over the same holes.
 * exact may be empty; for Neumann presets it is defined up to a constant. */
struct ManufacturedData {
    std::function<Eigen::VectorXd(const QuadratureGrid&)> data;
    std::function<double(cplx)> exact;
    std::vector<double> expected_fluxes;
};

// Dirichlet data: trace of S[psi], psi = amplitude[j] sin(mode[j] t) on hole j.
// exact evaluates the same single layer on a grid with exact_nodes nodes per hole.
ManufacturedData single_layer_sine(const std::vector<Hole>& holes, const Torus& torus,
                                   const std::vector<double>& amplitude,
                                   const std::vector<int>& mode, int exact_nodes = 1000);

// Dirichlet data: trace of S[psi] + sum_j c_j G(z - a_j), sources at hole centers.
// The solver recovers c_j as the hole fluxes.
ManufacturedData green_combination(const std::vector<Hole>& holes, const Torus& torus,
                                   const std::vector<double>& coefficients,
                                   const std::vector<double>& amplitude,
                                   const std::vector<int>& mode, int exact_nodes = 1000);

// Neumann data: normal derivative of sum_j c_j G(z - a_j); coefficients must sum
// to zero for solvability. exact returns the raw potential (constant not fixed).
ManufacturedData green_normal_combination(const std::vector<Hole>& holes, const Torus& torus,
                                          const std::vector<double>& coefficients);

} // namespace torusbie

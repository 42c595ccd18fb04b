#pragma once

#include <string>
#include <vector>

#include "torusbie/green.hpp"

namespace torusbie {

struct InvalidCurve : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverlapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AreaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Star-shaped hole boundary z(t) = center + rho(t) e^{it}, t in [0, 2pi), traversed
 * counterclockwise around the center.  rho must stay strictly positive. */
struct Hole {
    enum class Kind { Circle, Trefoil, Oscillatory, Fourier };

    cplx center{0.0, 0.0};
    Kind kind = Kind::Circle;
    double r = 0.0;    // circle/trefoil/oscillatory size parameter
    int omega = 0;     // oscillatory lobe count
    // fourier: rho(t) = sum_k cos_coeffs[k] cos(kt) + sum_k sin_coeffs[k] sin((k+1)t)
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double rho(double t) const;
    double drho(double t) const;
    double ddrho(double t) const;
    double max_radius() const;

    static Hole circle(cplx center, double r);
    static Hole trefoil(cplx center, double r);    // rho = r (1 + 0.3 cos 3t)
    static Hole oscillatory(cplx center, double r, int omega); // rho = r/(r+1) (1 + r cos wt)
    static Hole fourier(cplx center, std::vector<double> cos_coeffs,
                        std::vector<double> sin_coeffs);
};

// position, tangent frame, speed and signed curvature at parameter t
KernelPoint curve_eval(const Hole& hole, double t);

/* Trapezoid quadrature data for all hole boundaries: equispaced parameters per
 * hole, arclength weights w_i = (2pi/N_j) |z'(t_i)|, plus per-hole areas (shoelace)
 * and perimeters.  Immutable after construction. */
struct QuadratureGrid {
    Torus torus{cplx(0.0, 1.0)};
    std::vector<Hole> holes;
    std::vector<int> counts;      // nodes per hole, each even
    std::vector<int> offsets;     // start index of each hole's block
    int total = 0;

    std::vector<cplx> z;
    std::vector<cplx> nu;
    std::vector<double> speed;
    std::vector<double> kappa;
    std::vector<double> w;
    std::vector<double> t;
    std::vector<int> hole_of;

    std::vector<double> areas;
    std::vector<double> perims;
    double total_area = 0.0;

    int hole_count() const { return int(holes.size()); }
};

QuadratureGrid build_grid(const std::vector<Hole>& holes, const std::vector<int>& nodes_per_hole,
                          const Torus& torus);

enum class Region { Omega, Hole, NearBoundary };

struct RegionTag {
    Region region = Region::Omega;
    int hole = -1;
};

// lattice-invariant region test; band < 0 means the default 2 * max node spacing
RegionTag classify_point(cplx z, const QuadratureGrid& grid, double band = -1.0);

std::string region_name(Region r);

} // namespace torusbie

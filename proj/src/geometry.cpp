#include "torusbie/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace torusbie {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;
} // namespace

Hole Hole::circle(cplx center, double r) {
    Hole h;
    h.center = center;
    h.kind = Kind::Circle;
    h.r = r;
    if (r <= 0.0)
        throw InvalidCurve("circle: radius must be positive");
    return h;
}

Hole Hole::trefoil(cplx center, double r) {
    Hole h;
    h.center = center;
    h.kind = Kind::Trefoil;
    h.r = r;
    if (r <= 0.0)
        throw InvalidCurve("trefoil: size must be positive");
    return h;
}

Hole Hole::oscillatory(cplx center, double r, int omega) {
    Hole h;
    h.center = center;
    h.kind = Kind::Oscillatory;
    h.r = r;
    h.omega = omega;
    if (r <= 0.0 || r >= 1.0)
        throw InvalidCurve("oscillatory: need 0 < r < 1 so rho stays positive");
    if (omega < 0)
        throw InvalidCurve("oscillatory: omega must be nonnegative");
    return h;
}

Hole Hole::fourier(cplx center, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    Hole h;
    h.center = center;
    h.kind = Kind::Fourier;
    h.cos_coeffs = std::move(cos_coeffs);
    h.sin_coeffs = std::move(sin_coeffs);
    if (h.cos_coeffs.empty())
        throw InvalidCurve("fourier: need at least the constant cosine coefficient");
    for (int k = 0; k < 2048; ++k) {
        if (h.rho(two_pi * k / 2048.0) <= 0.0)
            throw InvalidCurve("fourier: rho(t) must stay positive");
    }
    return h;
}

double Hole::rho(double t) const {
    switch (kind) {
    case Kind::Circle:
        return r;
    case Kind::Trefoil:
        return r * (1.0 + 0.3 * std::cos(3.0 * t));
    case Kind::Oscillatory:
        return r / (r + 1.0) * (1.0 + r * std::cos(omega * t));
    case Kind::Fourier: {
        double v = 0.0;
        for (size_t k = 0; k < cos_coeffs.size(); ++k)
            v += cos_coeffs[k] * std::cos(double(k) * t);
        for (size_t k = 0; k < sin_coeffs.size(); ++k)
            v += sin_coeffs[k] * std::sin(double(k + 1) * t);
        return v;
    }
    }
    return 0.0;
}

double Hole::drho(double t) const {
    switch (kind) {
    case Kind::Circle:
        return 0.0;
    case Kind::Trefoil:
        return -0.9 * r * std::sin(3.0 * t);
    case Kind::Oscillatory:
        return -r / (r + 1.0) * r * omega * std::sin(omega * t);
    case Kind::Fourier: {
        double v = 0.0;
        for (size_t k = 1; k < cos_coeffs.size(); ++k)
            v -= cos_coeffs[k] * double(k) * std::sin(double(k) * t);
        for (size_t k = 0; k < sin_coeffs.size(); ++k)
            v += sin_coeffs[k] * double(k + 1) * std::cos(double(k + 1) * t);
        return v;
    }
    }
    return 0.0;
}

double Hole::ddrho(double t) const {
    switch (kind) {
    case Kind::Circle:
        return 0.0;
    case Kind::Trefoil:
        return -2.7 * r * std::cos(3.0 * t);
    case Kind::Oscillatory:
        return -r / (r + 1.0) * r * omega * omega * std::cos(omega * t);
    case Kind::Fourier: {
        double v = 0.0;
        for (size_t k = 1; k < cos_coeffs.size(); ++k)
            v -= cos_coeffs[k] * double(k * k) * std::cos(double(k) * t);
        for (size_t k = 0; k < sin_coeffs.size(); ++k)
            v -= sin_coeffs[k] * double((k + 1) * (k + 1)) * std::sin(double(k + 1) * t);
        return v;
    }
    }
    return 0.0;
}

double Hole::max_radius() const {
    switch (kind) {
    case Kind::Circle:
        return r;
    case Kind::Trefoil:
        return 1.3 * r;
    case Kind::Oscillatory:
        return r / (r + 1.0) * (1.0 + r);
    case Kind::Fourier: {
        double v = 0.0;
        for (int k = 0; k < 2048; ++k)
            v = std::max(v, rho(two_pi * k / 2048.0));
        return v;
    }
    }
    return 0.0;
}

namespace {

struct CurveFrame {
    cplx z, dz;
    double speed;
    cplx nu;
    double kappa;
};

CurveFrame frame_at(const Hole& hole, double t) {
    const double rho = hole.rho(t);
    if (rho <= 0.0)
        throw InvalidCurve("curve_eval: rho(t) <= 0");
    const double dr = hole.drho(t);
    const double ddr = hole.ddrho(t);
    const cplx e = std::exp(cplx(0.0, t));
    const cplx z = hole.center + rho * e;
    const cplx dz = (cplx(dr, rho)) * e;
    const cplx ddz = (cplx(ddr - rho, 2.0 * dr)) * e;
    const double speed = std::abs(dz);
    const cplx nu = cplx(0.0, 1.0) * dz / speed;
    const double kappa =
        (dz.imag() * ddz.real() - dz.real() * ddz.imag()) / (speed * speed * speed);
    return {z, dz, speed, nu, kappa};
}

} // namespace

KernelPoint curve_eval(const Hole& hole, double t) {
    const CurveFrame f = frame_at(hole, t);
    return {f.z, f.nu, f.speed, f.kappa};
}

QuadratureGrid build_grid(const std::vector<Hole>& holes, const std::vector<int>& nodes_per_hole,
                          const Torus& torus) {
    if (holes.empty())
        throw std::invalid_argument("build_grid: need at least one hole");
    if (nodes_per_hole.size() != holes.size())
        throw std::invalid_argument("build_grid: one node count per hole required");
    for (int n : nodes_per_hole) {
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("build_grid: node counts must be even and >= 4");
    }

    QuadratureGrid g;
    g.torus = torus;
    g.holes = holes;
    g.counts = nodes_per_hole;

    int off = 0;
    for (size_t j = 0; j < holes.size(); ++j) {
        const int N = nodes_per_hole[j];
        g.offsets.push_back(off);
        double area = 0.0, perim = 0.0;
        for (int k = 0; k < N; ++k) {
            const double tk = two_pi * k / N;
            const CurveFrame f = frame_at(holes[j], tk);
            g.z.push_back(f.z);
            g.nu.push_back(f.nu);
            g.speed.push_back(f.speed);
            g.kappa.push_back(f.kappa);
            g.t.push_back(tk);
            const double wk = two_pi / N * f.speed;
            g.w.push_back(wk);
            g.hole_of.push_back(int(j));
            const cplx rel = f.z - holes[j].center;
            area += 0.5 * (rel.real() * f.dz.imag() - rel.imag() * f.dz.real()) * two_pi / N;
            perim += wk;
        }
        g.areas.push_back(area);
        g.perims.push_back(perim);
        g.total_area += area;
        off += N;
    }
    g.total = off;

    // every hole must fit strictly inside one fundamental cell around its center
    for (size_t j = 0; j < holes.size(); ++j) {
        for (int k = 0; k < g.counts[j]; ++k) {
            const cplx d = g.z[g.offsets[j] + k] - holes[j].center;
            const double y = d.imag() / torus.b();
            const double x = d.real() - y * torus.tau().real();
            if (std::abs(x) >= 0.5 || std::abs(y) >= 0.5)
                throw OverlapError("build_grid: hole does not fit inside one cell");
        }
    }

    // pairwise disjointness, measured with lattice-reduced distances
    for (size_t i = 0; i < holes.size(); ++i) {
        for (size_t jj = i + 1; jj < holes.size(); ++jj) {
            const double gap_bound = std::abs(reduce_to_cell(holes[i].center - holes[jj].center,
                                                             torus).z) -
                                     holes[i].max_radius() - holes[jj].max_radius();
            if (gap_bound > 1e-2)
                continue;
            double dmin = 1e300;
            for (int a = g.offsets[i]; a < g.offsets[i] + g.counts[i]; ++a)
                for (int c = g.offsets[jj]; c < g.offsets[jj] + g.counts[jj]; ++c)
                    dmin = std::min(dmin, std::abs(reduce_to_cell(g.z[a] - g.z[c], torus).z));
            if (dmin <= 1e-6)
                throw OverlapError("build_grid: holes intersect or touch");
        }
    }

    if (g.total_area >= torus.b())
        throw AreaError("build_grid: holes cover the whole torus");
    return g;
}

RegionTag classify_point(cplx z, const QuadratureGrid& grid, double band) {
    if (band < 0.0) {
        double spacing = 0.0;
        for (size_t j = 0; j < grid.holes.size(); ++j)
            spacing = std::max(spacing, grid.perims[j] / grid.counts[j]);
        band = 2.0 * spacing;
    }

    double dmin = 1e300;
    int jmin = -1;
    for (int i = 0; i < grid.total; ++i) {
        const double d = std::abs(reduce_to_cell(z - grid.z[i], grid.torus).z);
        if (d < dmin) {
            dmin = d;
            jmin = grid.hole_of[i];
        }
    }
    if (dmin <= band)
        return {Region::NearBoundary, jmin};

    for (size_t j = 0; j < grid.holes.size(); ++j) {
        const cplx d = reduce_to_cell(z - grid.holes[j].center, grid.torus).z;
        const double th = std::atan2(d.imag(), d.real());
        if (std::abs(d) < grid.holes[j].rho(th))
            return {Region::Hole, int(j)};
    }
    return {Region::Omega, -1};
}

std::string region_name(Region r) {
    switch (r) {
    case Region::Omega:
        return "omega";
    case Region::Hole:
        return "hole";
    case Region::NearBoundary:
        return "near_boundary";
    }
    return "unknown";
}

} // namespace torusbie

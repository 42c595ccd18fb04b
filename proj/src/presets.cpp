#include "torusbie/presets.hpp"

#include <cmath>
#include <memory>

namespace torusbie {

namespace {

Eigen::VectorXd sine_density(const QuadratureGrid& grid, const std::vector<double>& amplitude,
                             const std::vector<int>& mode) {
    Eigen::VectorXd psi(grid.total);
    for (int i = 0; i < grid.total; ++i) {
        const int h = grid.hole_of[i];
        psi[i] = amplitude[h] * std::sin(mode[h] * grid.t[i]);
    }
    return psi;
}

void check_per_hole(std::size_t holes, std::size_t amps, std::size_t modes) {
    if (amps != holes || modes != holes)
        throw std::invalid_argument("preset: need one amplitude and one mode per hole");
}

} // namespace

ManufacturedData single_layer_sine(const std::vector<Hole>& holes, const Torus& torus,
                                   const std::vector<double>& amplitude,
                                   const std::vector<int>& mode, int exact_nodes) {
    check_per_hole(holes.size(), amplitude.size(), mode.size());
    ManufacturedData out;
    out.data = [holes, torus, amplitude, mode](const QuadratureGrid& grid) {
        return Eigen::VectorXd(assemble_S(grid, torus).mat * sine_density(grid, amplitude, mode));
    };
    auto fine = std::make_shared<QuadratureGrid>(
        build_grid(holes, std::vector<int>(holes.size(), exact_nodes), torus));
    auto psi = std::make_shared<Eigen::VectorXd>(sine_density(*fine, amplitude, mode));
    out.exact = [fine, psi, torus](cplx z) { return eval_single_layer(*psi, *fine, torus, z); };
    out.expected_fluxes.assign(holes.size(), 0.0);
    return out;
}

ManufacturedData green_combination(const std::vector<Hole>& holes, const Torus& torus,
                                   const std::vector<double>& coefficients,
                                   const std::vector<double>& amplitude,
                                   const std::vector<int>& mode, int exact_nodes) {
    check_per_hole(holes.size(), amplitude.size(), mode.size());
    if (coefficients.size() != holes.size())
        throw std::invalid_argument("preset: need one coefficient per hole");
    double csum = 0.0;
    for (double c : coefficients) csum += c;
    if (std::abs(csum) > 1e-12)
        throw std::invalid_argument("preset: source coefficients must sum to zero");

    std::vector<cplx> sources;
    for (const Hole& h : holes) sources.push_back(h.center);

    ManufacturedData out;
    out.data = [holes, torus, coefficients, amplitude, mode, sources](const QuadratureGrid& grid) {
        Eigen::VectorXd g = assemble_S(grid, torus).mat * sine_density(grid, amplitude, mode);
        for (int i = 0; i < grid.total; ++i)
            for (std::size_t j = 0; j < sources.size(); ++j)
                g[i] += coefficients[j] * green(grid.z[i] - sources[j], torus);
        return g;
    };
    auto fine = std::make_shared<QuadratureGrid>(
        build_grid(holes, std::vector<int>(holes.size(), exact_nodes), torus));
    auto psi = std::make_shared<Eigen::VectorXd>(sine_density(*fine, amplitude, mode));
    out.exact = [fine, psi, torus, coefficients, sources](cplx z) {
        double u = eval_single_layer(*psi, *fine, torus, z);
        for (std::size_t j = 0; j < sources.size(); ++j)
            u += coefficients[j] * green(z - sources[j], torus);
        return u;
    };
    out.expected_fluxes = coefficients;
    return out;
}

ManufacturedData green_normal_combination(const std::vector<Hole>& holes, const Torus& torus,
                                          const std::vector<double>& coefficients) {
    if (coefficients.size() != holes.size())
        throw std::invalid_argument("preset: need one coefficient per hole");
    double csum = 0.0;
    for (double c : coefficients) csum += c;
    if (std::abs(csum) > 1e-12)
        throw std::invalid_argument("preset: source coefficients must sum to zero");

    std::vector<cplx> sources;
    for (const Hole& h : holes) sources.push_back(h.center);

    ManufacturedData out;
    out.data = [torus, coefficients, sources](const QuadratureGrid& grid) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(grid.total);
        for (int i = 0; i < grid.total; ++i) {
            KernelPoint at{grid.z[i], grid.nu[i], grid.speed[i], grid.kappa[i]};
            for (std::size_t j = 0; j < sources.size(); ++j)
                g[i] += coefficients[j] * normal_deriv_target(at, sources[j], torus);
        }
        return g;
    };
    out.exact = [torus, coefficients, sources](cplx z) {
        double u = 0.0;
        for (std::size_t j = 0; j < sources.size(); ++j)
            u += coefficients[j] * green(z - sources[j], torus);
        return u;
    };
    out.expected_fluxes = coefficients;
    return out;
}

} // namespace torusbie

#include "torusbie/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "torusbie/operators.hpp"

namespace torusbie {

namespace {

constexpr double kPi = 3.14159265358979323846;

double weighted_mean_all(const Eigen::VectorXd& v, const QuadratureGrid& grid) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.total; ++i) {
        num += grid.w[i] * v[i];
        den += grid.w[i];
    }
    return num / den;
}

template <typename F>
void parallel_for_points(int n, F&& body) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

} // namespace

double eval_double_layer(const Eigen::VectorXd& phi, const QuadratureGrid& grid,
                         const Torus& torus, cplx z) {
    double sum = 0.0;
    for (int k = 0; k < grid.total; ++k) {
        KernelPoint xi{grid.z[k], grid.nu[k], grid.speed[k], grid.kappa[k]};
        sum += normal_deriv_source(z, xi, torus) * grid.w[k] * phi[k];
    }
    return sum;
}

double eval_single_layer(const Eigen::VectorXd& phi, const QuadratureGrid& grid,
                         const Torus& torus, cplx z) {
    double sum = 0.0;
    for (int k = 0; k < grid.total; ++k)
        sum += green(z - grid.z[k], torus) * grid.w[k] * phi[k];
    return sum;
}

QuadratureGrid refine_grid(const QuadratureGrid& grid, int factor) {
    if (factor < 1) throw std::invalid_argument("refine_grid: factor must be >= 1");
    std::vector<int> counts(grid.counts);
    for (int& c : counts) c *= factor;
    return build_grid(grid.holes, counts, grid.torus);
}

double trig_interp(const Eigen::VectorXd& phi, const QuadratureGrid& grid, int hole, double s) {
    const int N = grid.counts[hole];
    const int off = grid.offsets[hole];
    double out = 0.0;
    for (int j = 0; j < N; ++j) {
        double d = s - grid.t[off + j];
        // kernel sin(N d/2) cot(d/2) / N, equal to 1 at d = 0 mod 2pi (N even)
        double r = std::remainder(d, 2.0 * kPi);
        if (std::abs(r) < 1e-13) {
            out += phi[off + j];
        } else {
            out += phi[off + j] * std::sin(0.5 * N * d) / std::tan(0.5 * d) / N;
        }
    }
    return out;
}

Eigen::VectorXd trig_upsample(const Eigen::VectorXd& phi, const QuadratureGrid& coarse,
                              const QuadratureGrid& fine) {
    if (coarse.hole_count() != fine.hole_count())
        throw std::invalid_argument("trig_upsample: grids have different hole counts");
    Eigen::VectorXd out(fine.total);
    for (int h = 0; h < coarse.hole_count(); ++h) {
        const int offF = fine.offsets[h];
        for (int i = 0; i < fine.counts[h]; ++i)
            out[offF + i] = trig_interp(phi, coarse, h, fine.t[offF + i]);
    }
    return out;
}

double eval_solution(const DirichletSolution& sol, const QuadratureGrid& grid, const Torus& torus,
                     cplx z) {
    double u = eval_double_layer(sol.phi, grid, torus, z);
    for (std::size_t j = 0; j < sol.fluxes.size(); ++j) {
        if (sol.fluxes[j] == 0.0) continue;
        u += sol.fluxes[j] * green(z - sol.betas[j], torus);
    }
    return u;
}

double eval_solution(const NeumannSolution& sol, const QuadratureGrid& grid, const Torus& torus,
                     cplx z) {
    return eval_single_layer(sol.phi, grid, torus, z) + sol.constant;
}

double eval_solution(const SteklovEigenpair& pair, const QuadratureGrid& grid, const Torus& torus,
                     cplx z) {
    double mean = weighted_mean_all(pair.phi, grid);
    Eigen::VectorXd psi = pair.phi.array() - mean;
    return eval_single_layer(psi, grid, torus, z) + mean;
}

double flux(const DirichletSolution& sol, const QuadratureGrid& grid, int hole) {
    (void)grid;
    return sol.fluxes.at(hole);
}

double flux(const NeumannSolution& sol, const QuadratureGrid& grid, int hole) {
    (void)grid;
    return sol.fluxes.at(hole);
}

double flux(const SteklovEigenpair& pair, const QuadratureGrid& grid, int hole) {
    return steklov_flux(pair, grid, hole);
}

double eval_single_layer_on_boundary(const Eigen::VectorXd& phi, const QuadratureGrid& grid,
                                     const Torus& torus, int hole, double s) {
    const int N = grid.counts[hole];
    const int off = grid.offsets[hole];
    const KernelPoint at_s = curve_eval(grid.holes[hole], s);
    const Eigen::VectorXd row = kress_log_weights_at(s, N);
    double u = 0.0;
    for (int j = 0; j < N; ++j) {
        KernelPoint at_j{grid.z[off + j], grid.nu[off + j], grid.speed[off + j],
                         grid.kappa[off + j]};
        double rem = single_layer_remainder(s, grid.t[off + j], at_s, at_j, torus);
        u += (-row[j] / (4.0 * kPi) * grid.speed[off + j] + rem * grid.w[off + j]) * phi[off + j];
    }
    for (int k = 0; k < grid.total; ++k) {
        if (grid.hole_of[k] == hole) continue;
        u += green(at_s.position - grid.z[k], torus) * grid.w[k] * phi[k];
    }
    return u;
}

double steklov_residual(const SteklovEigenpair& pair, const QuadratureGrid& grid,
                        const Torus& torus) {
    return steklov_residuals({pair}, grid, torus)[0];
}

std::vector<double> steklov_residuals(const std::vector<SteklovEigenpair>& pairs,
                                      const QuadratureGrid& grid, const Torus& torus) {
    const int modes = int(pairs.size());
    std::vector<double> means(modes);
    std::vector<Eigen::VectorXd> psis(modes);
    for (int m = 0; m < modes; ++m) {
        means[m] = weighted_mean_all(pairs[m].phi, grid);
        psis[m] = pairs[m].phi.array() - means[m];
    }

    // local[idx][m] = |d_nu u_m - sigma_m u_m| at midpoint idx
    std::vector<std::vector<double>> local(grid.total, std::vector<double>(modes, 0.0));

    // sample at the midpoints between nodes; nothing there is prediscretized
    parallel_for_points(grid.total, [&](int idx) {
        const int h = grid.hole_of[idx];
        const int N = grid.counts[h];
        const int off = grid.offsets[h];
        const double tm = 2.0 * kPi * (idx - off + 0.5) / N;
        KernelPoint mid = curve_eval(grid.holes[h], tm);

        // kernel rows, independent of the mode
        Eigen::VectorXd dn_row(grid.total), u_row(grid.total);
        for (int k = 0; k < grid.total; ++k)
            dn_row[k] = normal_deriv_target(mid, grid.z[k], torus) * grid.w[k];
        const Eigen::VectorXd kress = kress_log_weights_at(tm, N);
        for (int j = 0; j < N; ++j) {
            KernelPoint at_j{grid.z[off + j], grid.nu[off + j], grid.speed[off + j],
                             grid.kappa[off + j]};
            double rem = single_layer_remainder(tm, grid.t[off + j], mid, at_j, torus);
            u_row[off + j] = -kress[j] / (4.0 * kPi) * grid.speed[off + j] + rem * grid.w[off + j];
        }
        for (int k = 0; k < grid.total; ++k)
            if (grid.hole_of[k] != h) u_row[k] = green(mid.position - grid.z[k], torus) * grid.w[k];

        for (int m = 0; m < modes; ++m) {
            const Eigen::VectorXd& psi = psis[m];
            // normal derivative from the domain-side jump relation of the single layer
            double dn = 0.0;
            for (int k = 0; k < grid.total; ++k) dn += dn_row[k] * psi[k];
            dn += 0.5 * trig_interp(psi, grid, h, tm);

            double trace = 0.0;
            for (int j = 0; j < N; ++j) trace += u_row[off + j] * psi[off + j];
            for (int k = 0; k < grid.total; ++k)
                if (grid.hole_of[k] != h) trace += u_row[k] * psi[k];
            const double u = means[m] + trace;
            local[idx][m] = std::abs(dn - pairs[m].sigma * u);
        }
    });

    std::vector<double> worst(modes, 0.0);
    for (const auto& row : local)
        for (int m = 0; m < modes; ++m) worst[m] = std::max(worst[m], row[m]);
    return worst;
}

namespace {

struct SolvedEvaluator {
    std::shared_ptr<QuadratureGrid> grid;
    std::shared_ptr<Torus> torus;
    std::shared_ptr<DirichletSolution> dir;
    std::shared_ptr<NeumannSolution> neu;

    double operator()(cplx z) const {
        if (dir) return eval_solution(*dir, *grid, *torus, z);
        return eval_solution(*neu, *grid, *torus, z);
    }
};

SolvedEvaluator solve_at(const ConvergenceProblem& prob, int nodes) {
    SolvedEvaluator ev;
    std::vector<int> counts(prob.holes.size(), nodes);
    ev.grid = std::make_shared<QuadratureGrid>(build_grid(prob.holes, counts, prob.torus));
    ev.torus = std::make_shared<Torus>(prob.torus);
    Eigen::VectorXd g = prob.data(*ev.grid);
    if (prob.problem == "neumann") {
        ev.neu = std::make_shared<NeumannSolution>(solve_neumann(*ev.grid, *ev.torus, g));
    } else {
        ev.dir = std::make_shared<DirichletSolution>(solve_dirichlet(*ev.grid, *ev.torus, g));
    }
    return ev;
}

} // namespace

ConvergenceResult convergence_study(const ConvergenceProblem& prob, const std::vector<int>& Ns) {
    if (Ns.empty()) throw std::invalid_argument("convergence_study: empty node list");
    if (prob.contour.empty()) throw std::invalid_argument("convergence_study: empty contour");

    std::function<double(cplx)> ref = prob.exact;
    if (!ref) {
        int nref = prob.reference_factor * *std::max_element(Ns.begin(), Ns.end());
        ref = solve_at(prob, nref);
    }
    // Neumann solutions are defined up to a constant: compare contour values centered
    // on their contour mean so the metric is convention independent
    const bool center = prob.problem == "neumann";
    auto centered = [&](std::vector<double> v) {
        if (!center) return v;
        double m = 0.0;
        for (double x : v) m += x;
        m /= v.size();
        for (double& x : v) x -= m;
        return v;
    };

    std::vector<double> ref_vals(prob.contour.size());
    for (std::size_t i = 0; i < prob.contour.size(); ++i) ref_vals[i] = ref(prob.contour[i]);
    ref_vals = centered(ref_vals);

    ConvergenceResult res;
    for (int N : Ns) {
        SolvedEvaluator ev = solve_at(prob, N);
        std::vector<double> vals(prob.contour.size());
        for (std::size_t i = 0; i < prob.contour.size(); ++i) vals[i] = ev(prob.contour[i]);
        vals = centered(vals);
        double err = 0.0;
        for (std::size_t i = 0; i < prob.contour.size(); ++i)
            err = std::max(err, std::abs(vals[i] - ref_vals[i]));
        res.rows.push_back({N, err});
    }

    // fit log10(error) against nodes over the prefix that sits above rounding noise
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : res.rows) {
        if (row.error < 1e-12) break;
        pts.emplace_back(row.nodes_per_hole, std::log10(std::max(row.error, 1e-300)));
    }
    while (pts.size() < 2 && pts.size() < res.rows.size()) {
        const auto& row = res.rows[pts.size()];
        pts.emplace_back(row.nodes_per_hole, std::log10(std::max(row.error, 1e-300)));
    }
    double mx = 0.0, my = 0.0;
    for (auto& p : pts) {
        mx += p.first;
        my += p.second;
    }
    mx /= pts.size();
    my /= pts.size();
    double num = 0.0, den = 0.0;
    for (auto& p : pts) {
        num += (p.first - mx) * (p.second - my);
        den += (p.first - mx) * (p.first - mx);
    }
    res.slope = den > 0 ? num / den : 0.0;
    return res;
}

FieldGrid sample_field(const std::function<double(cplx)>& value_at, const QuadratureGrid& grid,
                       const Torus& torus, int n) {
    if (n < 1) throw std::invalid_argument("sample_field: resolution must be >= 1");
    FieldGrid out;
    out.resolution = n;
    out.x.resize(std::size_t(n) * n);
    out.y.resize(std::size_t(n) * n);
    out.value.resize(std::size_t(n) * n);
    out.mask.resize(std::size_t(n) * n);

    parallel_for_points(n * n, [&](int idx) {
        const int i = idx % n;
        const int j = idx / n;
        cplx z = (i + 0.5) / n + ((j + 0.5) / n) * torus.tau();
        out.x[idx] = z.real();
        out.y[idx] = z.imag();
        out.mask[idx] = classify_point(z, grid);
        try {
            out.value[idx] = value_at(z);
        } catch (const SingularArgument&) {
            out.value[idx] = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return out;
}

} // namespace torusbie

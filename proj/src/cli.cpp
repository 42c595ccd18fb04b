#include "torusbie/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "torusbie/config.hpp"
#include "torusbie/expr.hpp"
#include "torusbie/fields.hpp"

namespace torusbie {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";
constexpr double kPi = 3.14159265358979323846;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'", "");
    f << content;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file '" + path + "'", "");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

fs::path resolve_out(const std::string& flag, const ProblemConfig& cfg) {
    if (!flag.empty()) return flag;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("TORUSBIE_OUT"))
        if (*env) return env;
    return "out";
}

std::string mask_name(const RegionTag& tag) {
    switch (tag.region) {
    case Region::Omega: return "omega";
    case Region::Hole: return "hole:" + std::to_string(tag.hole);
    default: return "near:" + std::to_string(tag.hole);
    }
}

std::string boundary_csv(const QuadratureGrid& grid, const Eigen::VectorXd& phi,
                         const Eigen::VectorXd& g) {
    std::string out = "hole,t,x,y,phi,g\n";
    for (int i = 0; i < grid.total; ++i) {
        out += std::to_string(grid.hole_of[i]);
        out += ',';
        out += fmt17(grid.t[i]);
        out += ',';
        out += fmt17(grid.z[i].real());
        out += ',';
        out += fmt17(grid.z[i].imag());
        out += ',';
        out += fmt17(phi[i]);
        out += ',';
        out += fmt17(g[i]);
        out += '\n';
    }
    return out;
}

std::string field_csv(const FieldGrid& fg) {
    std::string out = "x,y,value,mask\n";
    for (std::size_t i = 0; i < fg.value.size(); ++i) {
        out += fmt17(fg.x[i]);
        out += ',';
        out += fmt17(fg.y[i]);
        out += ',';
        out += fmt17(fg.value[i]);
        out += ',';
        out += mask_name(fg.mask[i]);
        out += '\n';
    }
    return out;
}

ojson base_summary(const ProblemConfig& cfg, const std::vector<int>& counts,
                   const QuadratureGrid& grid, const std::string& config_text) {
    ojson s;
    s["version"] = kVersion;
    s["problem"] = cfg.problem;
    s["tau"] = {cfg.tau.real(), cfg.tau.imag()};
    s["hole_count"] = grid.hole_count();
    s["nodes_per_hole"] = counts;
    s["node_count"] = grid.total;
    s["total_boundary_length"] = [&] {
        double L = 0.0;
        for (double p : grid.perims) L += p;
        return L;
    }();
    s["hole_area_total"] = grid.total_area;
    s["config"] = nlohmann::ordered_json::parse(config_text);
    return s;
}

int run_solve(const ProblemConfig& cfg, const std::string& config_text, const fs::path& outdir,
              bool quiet) {
    Timer total;
    Torus torus(cfg.tau);
    const std::vector<Hole> holes = resolve_holes(cfg, torus);
    const std::vector<int> counts = resolve_nodes(cfg, holes.size());
    const QuadratureGrid grid = build_grid(holes, counts, torus);
    ManufacturedData md = resolve_boundary_data(cfg, holes, torus);

    fs::create_directories(outdir);
    ojson summary = base_summary(cfg, counts, grid, config_text);
    ojson timings;

    Eigen::VectorXd phi_out, g_out;
    std::function<double(cplx)> value_at;

    if (cfg.problem == "steklov") {
        Timer ts;
        std::vector<SteklovEigenpair> pairs = solve_steklov(grid, torus, cfg.k_max);
        timings["solve_s"] = ts.s();

        Timer tr;
        std::vector<double> sigma, sigma_scaled, resid_alg;
        std::vector<std::vector<double>> fluxes;
        double total_flux = 0.0;
        std::vector<double> resid = steklov_residuals(pairs, grid, torus);
        for (const SteklovEigenpair& p : pairs) {
            sigma.push_back(p.sigma);
            sigma_scaled.push_back(cfg.eigenvalue_scale * p.sigma);
            resid_alg.push_back(p.residual);
            std::vector<double> fx;
            double sum = 0.0;
            for (int j = 0; j < grid.hole_count(); ++j) {
                fx.push_back(flux(p, grid, j));
                sum += fx.back();
            }
            fluxes.push_back(std::move(fx));
            total_flux = std::max(total_flux, std::abs(sum));
        }
        timings["residual_s"] = tr.s();

        summary["eigenvalues"] = sigma_scaled;
        summary["eigenvalues_raw"] = sigma;
        summary["eigenvalue_scale"] = cfg.eigenvalue_scale;
        summary["residuals"] = resid;
        summary["algebraic_residuals"] = resid_alg;
        summary["eigen_fluxes"] = fluxes;
        summary["total_flux"] = total_flux;
        summary["rcond"] = nullptr;

        if (pairs.empty()) throw EigensolverFailure("no eigenvalues kept");
        std::size_t mode = 0;
        while (mode + 1 < pairs.size() && pairs[mode].sigma <= 1e-8) ++mode;
        summary["reported_mode"] = mode;
        phi_out = pairs[mode].phi;
        g_out = pairs[mode].normal_deriv;
        auto rep = std::make_shared<SteklovEigenpair>(pairs[mode]);
        auto gridp = std::make_shared<QuadratureGrid>(grid);
        value_at = [rep, gridp, torus](cplx z) { return eval_solution(*rep, *gridp, torus, z); };

        if (!quiet) {
            std::string line = "eigenvalues:";
            for (std::size_t k = 0; k < sigma_scaled.size() && k < 8; ++k)
                line += " " + std::to_string(sigma_scaled[k]);
            std::puts(line.c_str());
        }
    } else {
        Eigen::VectorXd g = md.data(grid);
        g_out = g;
        std::vector<double> fluxes;
        double total_flux = 0.0;

        if (cfg.problem == "dirichlet") {
            Timer ts;
            DirichletSolution sol = solve_dirichlet(grid, torus, g, cfg.betas);
            timings["solve_s"] = ts.s();
            summary["rcond"] = sol.rcond;
            fluxes = sol.fluxes;
            phi_out = sol.phi;
            auto solp = std::make_shared<DirichletSolution>(std::move(sol));
            auto gridp = std::make_shared<QuadratureGrid>(grid);
            value_at = [solp, gridp, torus](cplx z) {
                return eval_solution(*solp, *gridp, torus, z);
            };
        } else {
            Timer ts;
            NeumannSolution sol = solve_neumann(grid, torus, g, cfg.mean_tol);
            timings["solve_s"] = ts.s();
            if (cfg.pin) {
                auto probe = sol;
                double shift = cfg.pin->value - eval_solution(probe, grid, torus, cfg.pin->point);
                sol.constant += shift;
                sol.trace.array() += shift;
                sol.convention = "pinned";
            }
            summary["rcond"] = sol.rcond;
            summary["constant"] = sol.constant;
            summary["convention"] = sol.convention;
            fluxes = sol.fluxes;
            phi_out = sol.phi;
            auto solp = std::make_shared<NeumannSolution>(std::move(sol));
            auto gridp = std::make_shared<QuadratureGrid>(grid);
            value_at = [solp, gridp, torus](cplx z) {
                return eval_solution(*solp, *gridp, torus, z);
            };
        }

        for (double f : fluxes) total_flux += f;
        summary["fluxes"] = fluxes;
        summary["total_flux"] = total_flux;
        if (!md.expected_fluxes.empty()) {
            double worst = 0.0;
            for (std::size_t j = 0; j < fluxes.size(); ++j)
                worst = std::max(worst, std::abs(fluxes[j] - md.expected_fluxes[j]));
            summary["flux_error"] = worst;
        }

        if (cfg.contour && md.exact) {
            const std::vector<cplx> pts = contour_points(*cfg.contour, holes);
            // Neumann solutions are compared up to a constant (centered on the contour)
            const bool center = cfg.problem == "neumann";
            std::vector<double> have(pts.size()), want(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) {
                have[i] = value_at(pts[i]);
                want[i] = md.exact(pts[i]);
            }
            if (center) {
                double mh = 0.0, mw = 0.0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    mh += have[i];
                    mw += want[i];
                }
                mh /= double(pts.size());
                mw /= double(pts.size());
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    have[i] -= mh;
                    want[i] -= mw;
                }
            }
            double sup = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                sup = std::max(sup, std::abs(have[i] - want[i]));
            summary["sup_error"] = sup;
            summary["contour_samples"] = int(pts.size());
            if (!quiet) std::printf("sup_error %.3e on %zu contour points\n", sup, pts.size());
        }
        if (!quiet) {
            std::string line = "fluxes:";
            for (double f : fluxes) line += " " + std::to_string(f);
            std::puts(line.c_str());
        }
    }

    write_file(outdir / "boundary.csv", boundary_csv(grid, phi_out, g_out));
    if (cfg.field_resolution > 0) {
        Timer tf;
        FieldGrid fg = sample_field(value_at, grid, torus, cfg.field_resolution);
        timings["field_s"] = tf.s();
        write_file(outdir / "field.csv", field_csv(fg));
    }
    timings["total_s"] = total.s();
    summary["timings"] = timings;
    write_file(outdir / "summary.json", summary.dump(2) + "\n");
    if (!quiet) std::printf("wrote %s\n", (outdir / "summary.json").string().c_str());
    return 0;
}

int run_converge(const ProblemConfig& cfg, const std::string& config_text, const fs::path& outdir,
                 bool quiet) {
    Timer total;
    if (cfg.problem == "steklov")
        throw ConfigError("converge supports dirichlet and neumann problems", "/problem");
    if (cfg.n_list.empty()) throw ConfigError("converge requires n_list", "/n_list");
    if (!cfg.contour) throw ConfigError("converge requires a contour", "/contour");

    Torus torus(cfg.tau);
    const std::vector<Hole> holes = resolve_holes(cfg, torus);
    ManufacturedData md = resolve_boundary_data(cfg, holes, torus);

    ConvergenceProblem prob;
    prob.torus = torus;
    prob.holes = holes;
    prob.problem = cfg.problem;
    prob.data = md.data;
    prob.exact = md.exact;
    prob.contour = contour_points(*cfg.contour, holes);
    prob.reference_factor = cfg.reference_factor;

    ConvergenceResult res = convergence_study(prob, cfg.n_list);

    fs::create_directories(outdir);
    std::string csv = "nodes,error\n";
    ojson rows = ojson::array();
    for (const ConvergenceRow& row : res.rows) {
        csv += std::to_string(row.nodes_per_hole);
        csv += ',';
        csv += fmt17(row.error);
        csv += '\n';
        rows.push_back({{"nodes", row.nodes_per_hole}, {"error", row.error}});
        if (!quiet) std::printf("N=%4d  error %.6e\n", row.nodes_per_hole, row.error);
    }
    write_file(outdir / "convergence.csv", csv);

    std::vector<int> counts(holes.size(), cfg.n_list.front());
    QuadratureGrid grid = build_grid(holes, counts, torus);
    ojson summary = base_summary(cfg, counts, grid, config_text);
    summary["rows"] = rows;
    summary["slope"] = res.slope;
    summary["reference"] = md.exact ? "exact" : "refined_solve";
    summary["rcond"] = nullptr;
    summary["total_flux"] = nullptr;
    ojson timings;
    timings["total_s"] = total.s();
    summary["timings"] = timings;
    write_file(outdir / "summary.json", summary.dump(2) + "\n");
    if (!quiet) {
        std::printf("slope %.4f\n", res.slope);
        std::printf("wrote %s\n", (outdir / "summary.json").string().c_str());
    }
    return 0;
}

// polynomial extrapolation of (h_i, f_i) to h = 0
double neville_to_zero(const std::vector<double>& h, std::vector<double> f) {
    const int n = int(h.size());
    for (int m = 1; m < n; ++m)
        for (int i = 0; i < n - m; ++i)
            f[std::size_t(i)] = (h[std::size_t(i + m)] * f[std::size_t(i)] -
                                 h[std::size_t(i)] * f[std::size_t(i + 1)]) /
                                (h[std::size_t(i + m)] - h[std::size_t(i)]);
    return f[0];
}

int run_selftest(bool quiet) {
    int failures = 0;
    auto check = [&](const char* name, double value, double bound) {
        const bool ok = std::isfinite(value) && value <= bound;
        if (!ok) ++failures;
        if (!quiet || !ok)
            std::printf("%-4s %-42s %.3e (bound %.1e)\n", ok ? "ok" : "FAIL", name, value, bound);
    };

    const Torus square{cplx(0.0, 1.0)};
    const Torus hexa{cplx(0.5, 0.8660254037844386)};

    for (const Torus& T : {square, hexa}) {
        std::mt19937_64 rng(12345);
        auto uni = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
        double worst_theta = 0.0, worst_green = 0.0;
        for (int it = 0; it < 100; ++it) {
            cplx z = (2.0 * uni() - 1.0) + (2.0 * uni() - 1.0) * T.tau();
            if (lattice_distance(z, T) < 1e-3) continue;
            const cplx th = theta1(z, T);
            const double scale = std::max(std::abs(th), 1e-30);
            worst_theta = std::max(worst_theta, std::abs(theta1(z + 1.0, T) + th) / scale);
            const cplx factor = -std::exp(cplx(0, -kPi) * T.tau() - cplx(0, 2.0 * kPi) * z);
            worst_theta =
                std::max(worst_theta, std::abs(theta1(z + T.tau(), T) - factor * th) /
                                          std::max(std::abs(factor * th), 1e-30));
            worst_theta = std::max(worst_theta, std::abs(theta1(-z, T) + th) / scale);

            const double G = green(z, T);
            worst_green = std::max(worst_green, std::abs(green(z + 1.0, T) - G));
            worst_green = std::max(worst_green, std::abs(green(z + T.tau(), T) - G));
            worst_green = std::max(worst_green, std::abs(green(-z, T) - G));
        }
        const bool sq = T.tau().real() == 0.0;
        check(sq ? "theta quasi-periodicity/oddness (square)"
                 : "theta quasi-periodicity/oddness (hexagonal)",
              worst_theta, 1e-12);
        check(sq ? "green periodicity/evenness (square)" : "green periodicity/evenness (hexagonal)",
              worst_green, 1e-12);
    }

    {
        // winding sums of the double-layer kernel: inside a hole, in the domain, on a node
        std::vector<Hole> holes{Hole::circle(cplx(0.7, 0.5), 0.1), Hole::circle(cplx(0.3, 0.3), 0.15)};
        QuadratureGrid grid = build_grid(holes, {100, 100}, square);
        auto branch = [&](cplx x, int hole) {
            double s = 0.0;
            for (int i = grid.offsets[hole]; i < grid.offsets[hole] + grid.counts[hole]; ++i) {
                KernelPoint xi{grid.z[i], grid.nu[i], grid.speed[i], grid.kappa[i]};
                s += normal_deriv_source(x, xi, square) * grid.w[i];
            }
            return s;
        };
        const double b = square.b();
        double worst = 0.0;
        worst = std::max(worst, std::abs(branch(cplx(0.7, 0.5), 0) - (1.0 - grid.areas[0] / b)));
        worst = std::max(worst, std::abs(branch(cplx(0.7, 0.5), 1) - (-grid.areas[1] / b)));
        worst = std::max(worst, std::abs(branch(cplx(0.05, 0.85), 0) - (-grid.areas[0] / b)));
        worst = std::max(worst, std::abs(branch(cplx(0.05, 0.85), 1) - (-grid.areas[1] / b)));
        const DenseOperator K = assemble_K(grid, square);
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.total);
        Eigen::VectorXd want =
            (0.5 - grid.total_area / b) * ones;
        worst = std::max(worst, (K.mat * ones - want).cwiseAbs().maxCoeff());
        check("winding sums in/out/on the boundary", worst, 1e-9);
    }

    {
        // extrapolated one-sided limits match the jump relations on a dense circle
        const Hole hole = Hole::circle(cplx(0.5, 0.5), 0.2);
        const int N = 3000;
        QuadratureGrid grid = build_grid({hole}, {N}, square);
        Eigen::VectorXd phi(N);
        for (int i = 0; i < N; ++i)
            phi[i] = std::cos(grid.t[i]) + 0.3 * std::sin(2.0 * grid.t[i]);
        const int i0 = int(std::lround(0.7 * N / (2.0 * kPi))) % N;
        const double t0 = grid.t[i0];
        const KernelPoint at0{grid.z[i0], grid.nu[i0], grid.speed[i0], grid.kappa[i0]};

        double Krow = 0.0, Ksrow = 0.0;
        for (int j = 0; j < N; ++j) {
            if (j == i0) {
                Krow += -grid.kappa[i0] / (4.0 * kPi) * grid.w[i0] * phi[i0];
                Ksrow += -grid.kappa[i0] / (4.0 * kPi) * grid.w[i0] * phi[i0];
            } else {
                KernelPoint xj{grid.z[j], grid.nu[j], grid.speed[j], grid.kappa[j]};
                Krow += normal_deriv_source(grid.z[i0], xj, square) * grid.w[j] * phi[j];
                Ksrow += normal_deriv_target(at0, grid.z[j], square) * grid.w[j] * phi[j];
            }
        }
        const double d_limit = Krow - 0.5 * phi[i0];   // double layer from the domain side
        const double s_limit = Ksrow + 0.5 * phi[i0];  // normal derivative of the single layer

        const std::vector<double> hs{0.16 * 0.2, 0.08 * 0.2, 0.04 * 0.2, 0.02 * 0.2, 0.01 * 0.2};
        std::vector<double> dv, sv;
        const cplx dir = std::exp(cplx(0.0, t0));
        for (double h : hs) {
            const cplx zh = hole.center + (0.2 + h) * dir;
            dv.push_back(eval_double_layer(phi, grid, square, zh));
            KernelPoint tgt{zh, at0.normal, 1.0, 0.0};
            double s = 0.0;
            for (int j = 0; j < N; ++j)
                s += normal_deriv_target(tgt, grid.z[j], square) * grid.w[j] * phi[j];
            sv.push_back(s);
        }
        const double djump = std::abs(neville_to_zero(hs, dv) - d_limit);
        const double sjump = std::abs(neville_to_zero(hs, sv) - s_limit);
        check("double-layer jump extrapolation", djump, 1e-6);
        check("single-layer normal-derivative jump", sjump, 1e-6);
    }

    {
        // null-space dimensions of the discretized jump operators
        const std::vector<std::vector<Hole>> geoms{
            {Hole::circle(cplx(0.5, 0.5), 0.2)},
            {Hole::circle(cplx(0.7, 0.5), 0.1), Hole::circle(cplx(0.3, 0.3), 0.15)},
            {Hole::circle(cplx(0.7, 0.5), 0.1), Hole::circle(cplx(0.3, 0.3), 0.1),
             Hole::circle(cplx(0.0, 0.0), 0.1)}};
        double worst = 0.0;
        for (const auto& holes : geoms) {
            const int M = int(holes.size());
            QuadratureGrid grid = build_grid(holes, std::vector<int>(holes.size(), 64), square);
            const DenseOperator K = assemble_K(grid, square);
            const DenseOperator Ks = assemble_Kstar(grid, square);
            Eigen::MatrixXd I = Eigen::MatrixXd::Identity(grid.total, grid.total);
            auto nullity = [](const Eigen::MatrixXd& A) {
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
                const auto& sv = svd.singularValues();
                int count = 0;
                for (int i = 0; i < sv.size(); ++i)
                    if (sv[i] < 1e-10 * sv[0]) ++count;
                return count;
            };
            worst = std::max(worst, double(std::abs(nullity(K.mat - 0.5 * I) - (M - 1))));
            worst = std::max(worst, double(nullity(Ks.mat + 0.5 * I)));
        }
        check("interior/exterior null-space dimensions", worst, 0.5);
    }

    if (failures) std::printf("%d selftest failure(s)\n", failures);
    else if (!quiet) std::puts("selftest passed");
    return failures ? 1 : 0;
}

struct ExampleFile {
    const char* name;
    const char* body;
};

constexpr const char* kEx1Square = R"json({
  "comment": "one circular hole; Dirichlet data is the trace of a single-layer potential",
  "torus": {"tau": [0.0, 1.0]},
  "problem": "dirichlet",
  "holes": [{"kind": "circle", "center": [0.5, 0.5], "r": 0.2}],
  "nodes_per_hole": 50,
  "boundary_data": {"preset": "single_layer_sine", "amplitude": [1.0], "mode": [1]},
  "contour": {"radius": 0.35, "samples": 200, "hole": 0, "profile": "circle"},
  "field_resolution": 60
}
)json";

constexpr const char* kEx1Equilateral = R"json({
  "comment": "one circular hole; Dirichlet data is the trace of a single-layer potential",
  "torus": {"tau": [0.5, 0.8660254037844386]},
  "problem": "dirichlet",
  "holes": [{"kind": "circle", "center": [0.5, 0.5], "r": 0.2}],
  "nodes_per_hole": 50,
  "boundary_data": {"preset": "single_layer_sine", "amplitude": [1.0], "mode": [1]},
  "contour": {"radius": 0.35, "samples": 200, "hole": 0, "profile": "circle"},
  "field_resolution": 60
}
)json";

constexpr const char* kEx2Square = R"json({
  "comment": "three trefoil holes; lattice Green sources give each hole a prescribed flux",
  "torus": {"tau": [0.0, 1.0]},
  "problem": "dirichlet",
  "holes": [
    {"kind": "trefoil", "center": [0.7, 0.5], "r": 0.1},
    {"kind": "trefoil", "center": [0.3, 0.3], "r": 0.1},
    {"kind": "trefoil", "center": [0.0, 0.0], "r": 0.1}
  ],
  "nodes_per_hole": 50,
  "boundary_data": {
    "preset": "green_combination",
    "coefficients": [3.0, -1.0, -2.0],
    "amplitude": [-10.0, 10.0, -10.0],
    "mode": [1, 3, 1]
  },
  "contour": {"radius": 0.18, "samples": 48, "profile": "match"},
  "n_list": [4, 10, 16, 22, 28, 34, 40, 46, 52, 58, 64, 70, 76, 82, 88, 94, 100, 106,
             112, 118, 124, 130, 136, 142, 148, 154, 160, 166, 172, 178, 184, 190, 196,
             202, 208, 214, 220, 226, 232, 238, 244, 250],
  "field_resolution": 60
}
)json";

constexpr const char* kEx2Equilateral = R"json({
  "comment": "three trefoil holes; lattice Green sources give each hole a prescribed flux",
  "torus": {"tau": [0.5, 0.8660254037844386]},
  "problem": "dirichlet",
  "holes": [
    {"kind": "trefoil", "center": [0.7, 0.5], "r": 0.1},
    {"kind": "trefoil", "center": [0.3, 0.3], "r": 0.1},
    {"kind": "trefoil", "center": [0.0, 0.0], "r": 0.1}
  ],
  "nodes_per_hole": 50,
  "boundary_data": {
    "preset": "green_combination",
    "coefficients": [3.0, -1.0, -2.0],
    "amplitude": [-10.0, 10.0, -10.0],
    "mode": [1, 3, 1]
  },
  "contour": {"radius": 0.18, "samples": 48, "profile": "match"},
  "n_list": [4, 10, 16, 22, 28, 34, 40, 46, 52, 58, 64, 70, 76, 82, 88, 94, 100, 106,
             112, 118, 124, 130, 136, 142, 148, 154, 160, 166, 172, 178, 184, 190, 196,
             202, 208, 214, 220, 226, 232, 238, 244, 250],
  "field_resolution": 60
}
)json";

constexpr const char* kEx3Square = R"json({
  "comment": "eight oscillatory holes; Neumann data from lattice Green sources at the centers",
  "torus": {"tau": [0.0, 1.0]},
  "problem": "neumann",
  "holes": [
    {"kind": "oscillatory", "center": [0.720, 0.353], "r": 0.126, "omega": 6},
    {"kind": "oscillatory", "center": [0.320, 0.420], "r": 0.081, "omega": 5},
    {"kind": "oscillatory", "center": [0.540, 0.508], "r": 0.082, "omega": 3},
    {"kind": "oscillatory", "center": [0.749, 0.704], "r": 0.135, "omega": 3},
    {"kind": "oscillatory", "center": [0.408, 0.725], "r": 0.118, "omega": 6},
    {"kind": "oscillatory", "center": [0.130, 0.276], "r": 0.108, "omega": 5},
    {"kind": "oscillatory", "center": [0.133, 0.907], "r": 0.071, "omega": 6},
    {"kind": "oscillatory", "center": [0.369, 0.169], "r": 0.071, "omega": 7}
  ],
  "nodes_per_hole": 50,
  "boundary_data": {
    "preset": "green_normal_combination",
    "coefficients": [1.0, 2.0, 3.0, 4.0, -5.0, -2.0, -3.0, 0.0]
  },
  "field_resolution": 60
}
)json";

constexpr const char* kEx3Equilateral = R"json({
  "comment": "eight oscillatory holes; Neumann data from lattice Green sources at the centers",
  "torus": {"tau": [0.5, 0.8660254037844386]},
  "problem": "neumann",
  "holes": [
    {"kind": "oscillatory", "center": [0.720, 0.353], "r": 0.126, "omega": 6},
    {"kind": "oscillatory", "center": [0.320, 0.420], "r": 0.081, "omega": 5},
    {"kind": "oscillatory", "center": [0.540, 0.508], "r": 0.082, "omega": 3},
    {"kind": "oscillatory", "center": [0.749, 0.704], "r": 0.135, "omega": 3},
    {"kind": "oscillatory", "center": [0.408, 0.725], "r": 0.118, "omega": 6},
    {"kind": "oscillatory", "center": [0.130, 0.276], "r": 0.108, "omega": 5},
    {"kind": "oscillatory", "center": [0.133, 0.907], "r": 0.071, "omega": 6},
    {"kind": "oscillatory", "center": [0.369, 0.169], "r": 0.071, "omega": 7}
  ],
  "nodes_per_hole": 50,
  "boundary_data": {
    "preset": "green_normal_combination",
    "coefficients": [1.0, 2.0, 3.0, 4.0, -5.0, -2.0, -3.0, 0.0]
  },
  "field_resolution": 60
}
)json";

constexpr const char* kEx4Square = R"json({
  "comment": "Steklov spectrum of one circular hole; eigenvalues reported at half the pencil value",
  "torus": {"tau": [0.0, 1.0]},
  "problem": "steklov",
  "holes": [{"kind": "circle", "center": [0.5, 0.5], "r": 0.2}],
  "nodes_per_hole": 50,
  "k_max": 7,
  "eigenvalue_scale": 0.5,
  "field_resolution": 60
}
)json";

constexpr const char* kEx4Equilateral = R"json({
  "comment": "Steklov spectrum of one circular hole; eigenvalues reported at half the pencil value",
  "torus": {"tau": [0.5, 0.8660254037844386]},
  "problem": "steklov",
  "holes": [{"kind": "circle", "center": [0.5, 0.5], "r": 0.2}],
  "nodes_per_hole": 50,
  "k_max": 7,
  "eigenvalue_scale": 0.5,
  "field_resolution": 60
}
)json";

constexpr const char* kEx5Square = R"json({
  "comment": "Steklov spectrum of two small circular holes",
  "torus": {"tau": [0.0, 1.0]},
  "problem": "steklov",
  "holes": [
    {"kind": "circle", "center": [0.6, 0.5], "r": 0.05},
    {"kind": "circle", "center": [0.4, 0.6], "r": 0.05}
  ],
  "nodes_per_hole": 50,
  "k_max": 7,
  "eigenvalue_scale": 0.5,
  "field_resolution": 60
}
)json";

constexpr const char* kEx5Equilateral = R"json({
  "comment": "Steklov spectrum of two small circular holes",
  "torus": {"tau": [0.5, 0.8660254037844386]},
  "problem": "steklov",
  "holes": [
    {"kind": "circle", "center": [0.6, 0.5], "r": 0.05},
    {"kind": "circle", "center": [0.4, 0.6], "r": 0.05}
  ],
  "nodes_per_hole": 50,
  "k_max": 7,
  "eigenvalue_scale": 0.5,
  "field_resolution": 60
}
)json";

constexpr const char* kEx6Square = R"json({
  "comment": "random 25-hole Steklov run from the seeded generator; slow",
  "torus": {"tau": [0.0, 1.0]},
  "problem": "steklov",
  "hole_generator": {
    "count": 25,
    "seed": 2026,
    "r_min": 0.04,
    "r_max": 0.08,
    "omega_min": 3,
    "omega_max": 8,
    "clearance": 0.03
  },
  "nodes_per_hole": 200,
  "k_max": 60,
  "eigenvalue_scale": 0.5
}
)json";

constexpr ExampleFile kExamples[] = {
    {"example1_square.json", kEx1Square},
    {"example1_equilateral.json", kEx1Equilateral},
    {"example2_square.json", kEx2Square},
    {"example2_equilateral.json", kEx2Equilateral},
    {"example3_square.json", kEx3Square},
    {"example3_equilateral.json", kEx3Equilateral},
    {"example4_square.json", kEx4Square},
    {"example4_equilateral.json", kEx4Equilateral},
    {"example5_square.json", kEx5Square},
    {"example5_equilateral.json", kEx5Equilateral},
    {"example6_square.json", kEx6Square},
};

int run_examples(const fs::path& outdir, bool quiet) {
    fs::create_directories(outdir);
    for (const ExampleFile& ex : kExamples) {
        write_file(outdir / ex.name, ex.body);
        if (!quiet) std::printf("wrote %s\n", (outdir / ex.name).string().c_str());
    }
    return 0;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"boundary integral solver for Laplace problems on flat tori with holes"};
    app.require_subcommand(1);

    std::string config_path, out_flag;
    int nodes_override = 0;
    int threads = 0;
    bool quiet = false;

    CLI::App* solve = app.add_subcommand("solve", "solve the configured boundary value problem");
    CLI::App* stek = app.add_subcommand("steklov", "solve the configured Steklov eigenproblem");
    CLI::App* conv = app.add_subcommand("converge", "run the configured grid refinement study");
    CLI::App* self = app.add_subcommand("selftest", "run the built-in property checks");
    CLI::App* ex = app.add_subcommand("examples", "write the bundled example configurations");

    for (CLI::App* sub : {solve, stek, conv}) {
        sub->add_option("--config", config_path, "problem configuration (JSON)")->required();
        sub->add_option("--out", out_flag, "output directory");
        sub->add_option("--nodes", nodes_override, "override nodes per hole");
        sub->add_option("--threads", threads, "worker thread count");
        sub->add_flag("--quiet", quiet, "suppress progress output");
    }
    self->add_option("--threads", threads, "worker thread count");
    self->add_flag("--quiet", quiet, "suppress passing checks");
    ex->add_option("--out", out_flag, "output directory");
    ex->add_flag("--quiet", quiet, "suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif

    try {
        if (self->parsed()) return run_selftest(quiet);
        if (ex->parsed()) return run_examples(out_flag.empty() ? fs::path(".") : fs::path(out_flag),
                                              quiet);

        const std::string text = slurp(config_path);
        ProblemConfig cfg = parse_config(text);
        if (nodes_override > 0) cfg.nodes_per_hole = {nodes_override};
        if (stek->parsed() && cfg.problem != "steklov")
            throw ConfigError("the steklov subcommand requires problem = steklov", "/problem");
        const fs::path outdir = resolve_out(out_flag, cfg);
        if (conv->parsed()) return run_converge(cfg, text, outdir, quiet);
        return run_solve(cfg, text, outdir, quiet);
    } catch (const SingularSystem& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const NonZeroMeanData& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const EigensolverFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const NonConvergent& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const SingularArgument& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const OverlapError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const AreaError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const InvalidCurve& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const InvalidN& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

} // namespace torusbie

#include "torusbie/solvers.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

namespace torusbie {

namespace {

double weighted_sum(const QuadratureGrid& g, const Eigen::VectorXd& v, int hole) {
    double s = 0.0;
    for (int i = g.offsets[hole]; i < g.offsets[hole] + g.counts[hole]; ++i)
        s += g.w[i] * v[i];
    return s;
}

double weighted_mean(const QuadratureGrid& g, const Eigen::VectorXd& v) {
    double s = 0.0, L = 0.0;
    for (int i = 0; i < g.total; ++i) {
        s += g.w[i] * v[i];
        L += g.w[i];
    }
    return s / L;
}

} // namespace

DirichletSolution solve_dirichlet(const QuadratureGrid& g, const Torus& torus,
                                  const Eigen::VectorXd& data,
                                  const std::optional<std::vector<cplx>>& betas_opt) {
    if (data.size() != g.total)
        throw std::invalid_argument("solve_dirichlet: data size mismatch");
    const int n = g.total;
    const int M = g.hole_count();
    const DenseOperator K = assemble_K(g, torus);

    if (M == 1) {
        Eigen::MatrixXd A = K.mat - 0.5 * Eigen::MatrixXd::Identity(n, n);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        const double rc = lu.rcond();
        if (!(rc > 1e-15))
            throw SingularSystem("solve_dirichlet: system numerically singular");
        DirichletSolution sol;
        sol.phi = lu.solve(data);
        sol.fluxes = {0.0};
        sol.betas = {g.holes[0].center};
        sol.rcond = rc;
        return sol;
    }

    std::vector<cplx> betas = betas_opt.value_or(std::vector<cplx>{});
    if (betas.empty())
        for (const Hole& h : g.holes)
            betas.push_back(h.center);
    if (int(betas.size()) != M)
        throw std::invalid_argument("solve_dirichlet: need one beta per hole");

    /* Bordered system: density rows carry the flux sources G(z_i - beta_j); one
     * zero-mean constraint per hole except the last; the final row pins the total
     * flux to zero. */
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + M, n + M);
    A.topLeftCorner(n, n) = K.mat - 0.5 * Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < n; ++i)
            A(i, n + j) = green(g.z[i] - betas[j], torus);
    for (int j = 0; j < M - 1; ++j)
        for (int i = g.offsets[j]; i < g.offsets[j] + g.counts[j]; ++i)
            A(n + j, i) = g.w[i];
    for (int j = 0; j < M; ++j)
        A(n + M - 1, n + j) = 1.0;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + M);
    rhs.head(n) = data;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1e-15))
        throw SingularSystem("solve_dirichlet: block system numerically singular");
    const Eigen::VectorXd sol = lu.solve(rhs);

    DirichletSolution out;
    out.phi = sol.head(n);
    out.fluxes.assign(sol.data() + n, sol.data() + n + M);
    out.betas = betas;
    out.rcond = rc;
    return out;
}

NeumannSolution solve_neumann(const QuadratureGrid& g, const Torus& torus,
                              const Eigen::VectorXd& data, double mean_tol) {
    if (data.size() != g.total)
        throw std::invalid_argument("solve_neumann: data size mismatch");
    const int n = g.total;

    double mean = 0.0;
    for (int i = 0; i < n; ++i)
        mean += g.w[i] * data[i];
    const double scale = data.size() ? data.cwiseAbs().maxCoeff() : 0.0;
    if (std::abs(mean) > mean_tol * std::max(scale, 1e-30))
        throw NonZeroMeanData("solve_neumann: boundary data has nonzero weighted mean " +
                              std::to_string(mean));

    const DenseOperator Ks = assemble_Kstar(g, torus);
    Eigen::MatrixXd A = Ks.mat + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1e-15))
        throw SingularSystem("solve_neumann: system numerically singular");

    NeumannSolution sol;
    sol.phi = lu.solve(data);
    sol.phi.array() -= weighted_mean(g, sol.phi); // project onto exact zero mean
    sol.rcond = rc;
    /* With a zero-mean density the winding sums collapse the jump relation to
     * flux_j = integral of phi over hole j; this avoids requadrating the data. */
    for (int j = 0; j < g.hole_count(); ++j)
        sol.fluxes.push_back(weighted_sum(g, sol.phi, j));

    const DenseOperator S = assemble_S(g, torus);
    Eigen::VectorXd raw = S.mat * sol.phi;
    sol.constant = -weighted_mean(g, raw);
    sol.trace = raw.array() + sol.constant;
    return sol;
}

Eigen::VectorXd neumann_to_dirichlet(const QuadratureGrid& g, const Torus& torus,
                                     const Eigen::VectorXd& data, double mean_tol) {
    return solve_neumann(g, torus, data, mean_tol).trace;
}

std::vector<SteklovEigenpair> solve_steklov(const QuadratureGrid& g, const Torus& torus,
                                            int k_max) {
    const int n = g.total;
    if (k_max < 1 || k_max > n)
        throw std::invalid_argument("solve_steklov: k_max out of range");

    const DenseOperator Ks = assemble_Kstar(g, torus);
    const DenseOperator S0 = assemble_S0(g, torus);
    // (K* + I/2)(I - M) with the rank-one M folded in as an outer product
    double L = 0.0;
    for (int i = 0; i < n; ++i) L += g.w[i];
    Eigen::VectorXd wrow(n);
    for (int i = 0; i < n; ++i) wrow[i] = g.w[i] / L;
    Eigen::MatrixXd A = Ks.mat + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd Aones = A * Eigen::VectorXd::Ones(n);
    A.noalias() -= Aones * wrow.transpose();

    Eigen::MatrixXd a = A, b = S0.mat; // dggev overwrites its inputs
    Eigen::VectorXd alphar(n), alphai(n), beta(n);
    Eigen::MatrixXd vr(n, n);
    const lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, b.data(), n,
                                          alphar.data(), alphai.data(), beta.data(), nullptr, 1,
                                          vr.data(), n);
    if (info != 0)
        throw EigensolverFailure("solve_steklov: dggev failed with info " + std::to_string(info));

    std::vector<int> keep;
    std::vector<double> sigma(n);
    for (int k = 0; k < n; ++k) {
        if (beta[k] == 0.0)
            continue;
        const double re = alphar[k] / beta[k];
        const double im = alphai[k] / beta[k];
        if (!std::isfinite(re) || !std::isfinite(im))
            continue;
        if (std::abs(im) > 1e-8 * (1.0 + std::abs(re)))
            continue;
        if (re < -1e-8)
            continue;
        sigma[k] = re;
        keep.push_back(k);
    }
    std::sort(keep.begin(), keep.end(), [&](int a_, int b_) { return sigma[a_] < sigma[b_]; });
    if (int(keep.size()) > k_max)
        keep.resize(k_max);

    std::vector<SteklovEigenpair> out;
    out.reserve(keep.size());
    for (int k : keep) {
        Eigen::VectorXd v = vr.col(k);
        int imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        v /= v[imax];
        Eigen::VectorXd u = S0.mat * v;
        double nrm = 0.0;
        for (int i = 0; i < n; ++i)
            nrm += g.w[i] * u[i] * u[i];
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0))
            throw EigensolverFailure("solve_steklov: degenerate eigenvector trace");

        SteklovEigenpair pair;
        pair.sigma = sigma[k];
        pair.phi = v / nrm;
        pair.trace = u / nrm;
        pair.normal_deriv = A * pair.phi;
        pair.residual = (pair.normal_deriv - pair.sigma * pair.trace).cwiseAbs().maxCoeff();
        out.push_back(std::move(pair));
    }
    return out;
}

double steklov_flux(const SteklovEigenpair& pair, const QuadratureGrid& g, int hole) {
    if (hole < 0 || hole >= g.hole_count())
        throw std::invalid_argument("steklov_flux: hole index out of range");
    return weighted_sum(g, pair.normal_deriv, hole);
}

} // namespace torusbie

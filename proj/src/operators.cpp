#include "torusbie/operators.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace torusbie {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;

void fnv1a(std::uint64_t& h, const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}
} // namespace

std::uint64_t grid_fingerprint(const QuadratureGrid& grid, const Torus& torus) {
    std::uint64_t h = 1469598103934665603ULL;
    const double tr = torus.tau().real(), ti = torus.tau().imag();
    fnv1a(h, &tr, sizeof tr);
    fnv1a(h, &ti, sizeof ti);
    for (int n : grid.counts)
        fnv1a(h, &n, sizeof n);
    for (const Hole& hole : grid.holes) {
        const double cr = hole.center.real(), ci = hole.center.imag();
        fnv1a(h, &cr, sizeof cr);
        fnv1a(h, &ci, sizeof ci);
        fnv1a(h, &hole.r, sizeof hole.r);
    }
    return h;
}

void DenseOperator::dump(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("dump: cannot open " + path);
    const std::uint64_t dims[2] = {std::uint64_t(mat.rows()), std::uint64_t(mat.cols())};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index j = 0; j < mat.cols(); ++j) {
            const double v = mat(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    }
}

Eigen::MatrixXd DenseOperator::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load: cannot open " + path);
    std::uint64_t dims[2];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(dims[0]), static_cast<Eigen::Index>(dims[1]));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), sizeof v);
            m(i, j) = v;
        }
    if (!in)
        throw std::runtime_error("load: truncated file " + path);
    return m;
}

Eigen::VectorXd kress_log_weights_at(double s, int N) {
    if (N < 4 || N % 2 != 0)
        throw InvalidN("kress rule needs even N >= 4");
    Eigen::VectorXd row(N);
    for (int j = 0; j < N; ++j) {
        const double d = s - two_pi * j / N;
        double acc = 0.0;
        for (int m = 1; m < N / 2; ++m)
            acc += std::cos(m * d) / m;
        row[j] = -(4.0 * pi / N) * acc - (4.0 * pi / (double(N) * N)) * std::cos(N * d / 2.0);
    }
    return row;
}

Eigen::MatrixXd kress_log_weights(int N) {
    if (N < 4 || N % 2 != 0)
        throw InvalidN("kress rule needs even N >= 4");
    // circulant: only N distinct values R(s_i - t_j)
    const Eigen::VectorXd first = kress_log_weights_at(0.0, N);
    Eigen::MatrixXd R(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            R(i, j) = first[(j - i + N) % N];
    return R;
}

namespace {

/* Row-parallel fill.  Entries are computed independently with no cross-entry
 * reductions, so the result is bit-identical for any thread count.  Exceptions
 * may not escape the parallel region; the first one is stashed and rethrown. */
template <typename EntryFn>
Eigen::MatrixXd fill_rows(int n, EntryFn&& entry) {
    Eigen::MatrixXd m(n, n);
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        try {
            for (int j = 0; j < n; ++j)
                m(i, j) = entry(i, j);
        } catch (...) {
#pragma omp critical
            if (!err)
                err = std::current_exception();
        }
    }
    if (err)
        std::rethrow_exception(err);
    return m;
}

} // namespace

DenseOperator assemble_K(const QuadratureGrid& g, const Torus& torus) {
    Eigen::MatrixXd m = fill_rows(g.total, [&](int i, int j) {
        if (i == j)
            return -g.kappa[i] / (4.0 * pi) * g.w[i];
        const KernelPoint src{g.z[j], g.nu[j], g.speed[j], g.kappa[j]};
        return normal_deriv_source(g.z[i], src, torus) * g.w[j];
    });
    return {std::move(m), OperatorKind::K, grid_fingerprint(g, torus)};
}

DenseOperator assemble_Kstar(const QuadratureGrid& g, const Torus& torus) {
    Eigen::MatrixXd m = fill_rows(g.total, [&](int i, int j) {
        if (i == j)
            return -g.kappa[i] / (4.0 * pi) * g.w[i];
        const KernelPoint tgt{g.z[i], g.nu[i], g.speed[i], g.kappa[i]};
        return normal_deriv_target(tgt, g.z[j], torus) * g.w[j];
    });
    return {std::move(m), OperatorKind::Kstar, grid_fingerprint(g, torus)};
}

DenseOperator assemble_S(const QuadratureGrid& g, const Torus& torus) {
    // per-hole circulant log-rule blocks, precomputed once
    std::vector<Eigen::VectorXd> first_row(g.holes.size());
    for (size_t h = 0; h < g.holes.size(); ++h)
        first_row[h] = kress_log_weights_at(0.0, g.counts[h]);

    Eigen::MatrixXd m = fill_rows(g.total, [&](int i, int j) {
        if (g.hole_of[i] != g.hole_of[j])
            return green(g.z[i] - g.z[j], torus) * g.w[j];
        const int h = g.hole_of[i];
        const int N = g.counts[h];
        const int ii = i - g.offsets[h], jj = j - g.offsets[h];
        const double R = first_row[h][(jj - ii + N) % N];
        const KernelPoint at_s{g.z[i], g.nu[i], g.speed[i], g.kappa[i]};
        const KernelPoint at_t{g.z[j], g.nu[j], g.speed[j], g.kappa[j]};
        const double rem = single_layer_remainder(g.t[i], g.t[j], at_s, at_t, torus);
        return -R / (4.0 * pi) * g.speed[j] + rem * g.w[j];
    });
    return {std::move(m), OperatorKind::S, grid_fingerprint(g, torus)};
}

DenseOperator assemble_M(const QuadratureGrid& g) {
    double L = 0.0;
    for (double wi : g.w)
        L += wi;
    Eigen::MatrixXd m(g.total, g.total);
    for (int i = 0; i < g.total; ++i)
        for (int j = 0; j < g.total; ++j)
            m(i, j) = g.w[j] / L;
    return {std::move(m), OperatorKind::M, grid_fingerprint(g, g.torus)};
}

DenseOperator assemble_X(const QuadratureGrid& g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.total, g.total);
    const int M = g.hole_count();
    for (int i = 0; i < g.total; ++i) {
        const int h = g.hole_of[i];
        if (h == M - 1)
            continue; // rows on the last hole stay zero (and the whole matrix for M = 1)
        for (int j = g.offsets[h]; j < g.offsets[h] + g.counts[h]; ++j)
            m(i, j) = g.w[j];
    }
    return {std::move(m), OperatorKind::X, grid_fingerprint(g, g.torus)};
}

DenseOperator assemble_S0(const QuadratureGrid& g, const Torus& torus) {
    const DenseOperator S = assemble_S(g, torus);
    // M = ones * w^T / L has rank one, so S(I - M) + M needs no dense product
    double L = 0.0;
    for (int i = 0; i < g.total; ++i) L += g.w[i];
    Eigen::VectorXd wrow(g.total);
    for (int i = 0; i < g.total; ++i) wrow[i] = g.w[i] / L;
    Eigen::VectorXd Sones = S.mat * Eigen::VectorXd::Ones(g.total);
    Eigen::MatrixXd m = S.mat;
    m.noalias() -= (Sones - Eigen::VectorXd::Ones(g.total)) * wrow.transpose();
    return {std::move(m), OperatorKind::S0, S.fingerprint};
}

} // namespace torusbie

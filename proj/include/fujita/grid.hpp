/// Radial space grids with shell-measure quadrature weights, discrete
/// space-time scalar fields, and the discrete W^{L,q}-style functional.
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "fujita/coefficients.hpp"

namespace fujita {

/// Surface area of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
inline double unit_sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("unit_sphere_area: n must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

struct RadialGrid {
    enum class Stretch { Uniform, Geometric };

    int n = 1;
    Stretch stretch = Stretch::Uniform;
    double ratio = 1.0;
    std::vector<double> r;       // strictly increasing, r[0] = 0
    std::vector<double> weight;  // trapezoid weights including omega_{n-1} r^{n-1}

    static RadialGrid uniform(int n, double r_max, int nodes) {
        if (nodes < 2 || !(r_max > 0)) throw std::invalid_argument("RadialGrid: bad extent");
        RadialGrid g;
        g.n = n;
        g.stretch = Stretch::Uniform;
        g.r.resize(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i) g.r[static_cast<std::size_t>(i)] = r_max * i / (nodes - 1);
        g.build_weights();
        return g;
    }

    /// Spacing grows by `ratio` per cell toward large r; used when the
    /// coefficient grows at infinity (alpha < 2).
    static RadialGrid geometric(int n, double r_max, int nodes, double ratio) {
        if (nodes < 2 || !(r_max > 0)) throw std::invalid_argument("RadialGrid: bad extent");
        if (!(ratio >= 1.0)) throw std::invalid_argument("RadialGrid: ratio must be >= 1");
        RadialGrid g;
        g.n = n;
        g.stretch = Stretch::Geometric;
        g.ratio = ratio;
        const int cells = nodes - 1;
        double total = 0, h = 1;
        for (int i = 0; i < cells; ++i, h *= ratio) total += h;
        g.r.assign(static_cast<std::size_t>(nodes), 0.0);
        h = r_max / total;
        for (int i = 1; i < nodes; ++i) {
            g.r[static_cast<std::size_t>(i)] = g.r[static_cast<std::size_t>(i - 1)] + h;
            h *= ratio;
        }
        g.r.back() = r_max;
        g.build_weights();
        return g;
    }

    int nodes() const { return static_cast<int>(r.size()); }
    double r_max() const { return r.back(); }
    double max_spacing() const {
        double h = 0;
        for (std::size_t i = 1; i < r.size(); ++i) h = std::max(h, r[i] - r[i - 1]);
        return h;
    }

    /// Trapezoid-in-r weights against the measure omega_{n-1} r^{n-1} dr.
    void build_weights() {
        const std::size_t m = r.size();
        const double omega = unit_sphere_area(n);
        weight.assign(m, 0.0);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double h = r[i + 1] - r[i];
            if (!(h > 0)) throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
            weight[i] += 0.5 * h * omega * std::pow(r[i], n - 1);
            weight[i + 1] += 0.5 * h * omega * std::pow(r[i + 1], n - 1);
        }
    }
};

/// Scalar field sampled on a time x radius tensor grid, row-major in time.
struct GridFunction {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> t;
    std::vector<double> v;  // size t.size() * grid->nodes()

    static GridFunction zeros(std::shared_ptr<const RadialGrid> grid, std::vector<double> t_nodes) {
        if (!grid) throw std::invalid_argument("GridFunction: null grid");
        if (t_nodes.size() < 1) throw std::invalid_argument("GridFunction: need time nodes");
        for (std::size_t k = 1; k < t_nodes.size(); ++k)
            if (!(t_nodes[k] > t_nodes[k - 1]))
                throw std::invalid_argument("GridFunction: time nodes must increase");
        GridFunction f;
        f.grid = std::move(grid);
        f.t = std::move(t_nodes);
        f.v.assign(f.t.size() * static_cast<std::size_t>(f.grid->nodes()), 0.0);
        return f;
    }

    static GridFunction sample(std::shared_ptr<const RadialGrid> grid, std::vector<double> t_nodes,
                               const std::function<double(double, double)>& fn) {
        GridFunction f = zeros(std::move(grid), std::move(t_nodes));
        for (std::size_t k = 0; k < f.t.size(); ++k)
            for (int i = 0; i < f.grid->nodes(); ++i)
                f.at(k, i) = fn(f.t[k], f.grid->r[static_cast<std::size_t>(i)]);
        return f;
    }

    std::size_t n_time() const { return t.size(); }
    int n_r() const { return grid->nodes(); }

    double& at(std::size_t it, int ir) { return v[it * static_cast<std::size_t>(grid->nodes()) + static_cast<std::size_t>(ir)]; }
    double operator()(std::size_t it, int ir) const {
        return v[it * static_cast<std::size_t>(grid->nodes()) + static_cast<std::size_t>(ir)];
    }

    void write_csv(std::ostream& os) const;  // (t, r, value) rows; defined in csv.hpp
};

/// Tensor-product quadrature: trapezoid in t, shell-weighted trapezoid in r.
/// `pointwise` multiplies the integrand when provided.
inline double integrate_spacetime(const GridFunction& f,
                                  const std::function<double(double, double)>& pointwise = {}) {
    const std::size_t nt = f.n_time();
    if (nt < 2) throw std::invalid_argument("integrate_spacetime: need >= 2 time nodes");
    const int nr = f.n_r();
    std::vector<double> slice(nt, 0.0);
    for (std::size_t k = 0; k < nt; ++k) {
        double s = 0;
        for (int i = 0; i < nr; ++i) {
            double val = f(k, i);
            if (pointwise) val *= pointwise(f.t[k], f.grid->r[static_cast<std::size_t>(i)]);
            s += val * f.grid->weight[static_cast<std::size_t>(i)];
        }
        slice[k] = s;
    }
    double total = 0;
    for (std::size_t k = 0; k + 1 < nt; ++k)
        total += 0.5 * (f.t[k + 1] - f.t[k]) * (slice[k] + slice[k + 1]);
    return total;
}

namespace detail {

/// Centered differences in the interior, one-sided second order at the ends.
inline double diff_nodes(std::span<const double> x, std::span<const double> y, std::size_t i) {
    const std::size_t m = x.size();
    if (m < 3) throw std::invalid_argument("diff_nodes: need >= 3 nodes");
    if (i == 0) {
        const double h0 = x[1] - x[0], h1 = x[2] - x[1];
        return (-(2 * h0 + h1) / (h0 * (h0 + h1))) * y[0] + ((h0 + h1) / (h0 * h1)) * y[1] -
               (h0 / (h1 * (h0 + h1))) * y[2];
    }
    if (i + 1 == m) {
        const double h0 = x[m - 2] - x[m - 3], h1 = x[m - 1] - x[m - 2];
        return (h1 / (h0 * (h0 + h1))) * y[m - 3] - ((h0 + h1) / (h0 * h1)) * y[m - 2] +
               ((h0 + 2 * h1) / (h1 * (h0 + h1))) * y[m - 1];
    }
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    // three-point formula, exact for quadratics on nonuniform spacing
    return (y[i + 1] * hl * hl - y[i - 1] * hr * hr + y[i] * (hr * hr - hl * hl)) /
           (hl * hr * (hl + hr));
}

}  // namespace detail

/// Discrete analog of
///   int |w_t| + ( int sum a_ij d_i w d_j w )^{1/2} + ( int |w|^qhat )^{1/qhat},
/// qhat = max(1, q), with difference-quotient derivatives.
inline double wlq_norm(const GridFunction& w, const CoefficientField& field, double q) {
    if (!(q > 0)) throw std::invalid_argument("wlq_norm: q must be > 0");
    if (w.n_time() < 3) throw std::invalid_argument("wlq_norm: need >= 3 time nodes");
    if (w.grid->n != field.n) throw std::invalid_argument("wlq_norm: dimension mismatch");
    const double qhat = std::max(1.0, q);
    const std::size_t nt = w.n_time();
    const int nr = w.n_r();

    GridFunction abs_wt = GridFunction::zeros(w.grid, w.t);
    GridFunction grad_term = GridFunction::zeros(w.grid, w.t);
    GridFunction pow_term = GridFunction::zeros(w.grid, w.t);

    std::vector<double> col(nt);
    for (int i = 0; i < nr; ++i) {
        for (std::size_t k = 0; k < nt; ++k) col[k] = w(k, i);
        for (std::size_t k = 0; k < nt; ++k)
            abs_wt.at(k, i) = std::abs(detail::diff_nodes(w.t, col, k));
    }
    std::vector<double> row(static_cast<std::size_t>(nr));
    for (std::size_t k = 0; k < nt; ++k) {
        for (int i = 0; i < nr; ++i) row[static_cast<std::size_t>(i)] = w(k, i);
        for (int i = 0; i < nr; ++i) {
            const double wr = detail::diff_nodes(w.grid->r, row, static_cast<std::size_t>(i));
            const double a = field.scalar(w.t[k], w.grid->r[static_cast<std::size_t>(i)]);
            grad_term.at(k, i) = a * wr * wr;
            pow_term.at(k, i) = std::pow(std::abs(w(k, i)), qhat);
        }
    }
    const double term1 = integrate_spacetime(abs_wt);
    const double term2 = std::sqrt(std::max(0.0, integrate_spacetime(grad_term)));
    const double term3 = std::pow(std::max(0.0, integrate_spacetime(pow_term)), 1.0 / qhat);
    return term1 + term2 + term3;
}

}  // namespace fujita

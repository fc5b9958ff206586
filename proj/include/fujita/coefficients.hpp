/// Diffusion coefficient fields a_ij(t,x) = a(t,|x|) * I, their quadratic-form
/// envelope A(t,x), the annulus supremum A(R), and the growth bound
/// A(R) <= c * R^(2-alpha) for R > 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fujita/numerics.hpp"

namespace fujita {

enum class FieldKind { PowerIsotropic, Constant, Tabulated };

/// Dense symmetric matrix value returned by coefficient evaluation.
struct SymMatrix {
    int n = 0;
    std::vector<double> a;  // row-major n*n

    SymMatrix() = default;
    explicit SymMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static SymMatrix scaled_identity(int dim, double s) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = s;
        return m;
    }

    double quadratic_form(std::span<const double> xi) const {
        if (static_cast<int>(xi.size()) != n)
            throw std::invalid_argument("SymMatrix::quadratic_form: dimension mismatch");
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += (*this)(i, j) * xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)];
        return s;
    }
};

/// Isotropic coefficient family. PowerIsotropic is a(x) = (1+|x|^2)^((2-alpha)/2) * I;
/// Constant is v * I (v = 0 gives the admissible degenerate operator); Tabulated
/// interpolates a(r) linearly from (r, value) samples.
struct CoefficientField {
    FieldKind kind = FieldKind::PowerIsotropic;
    int n = 1;                // spatial dimension
    double alpha = 2.0;       // growth parameter; sign unrestricted
    double c_growth = 1.0;    // constant in the growth bound, > 0
    double constant_value = 0.0;
    std::vector<std::pair<double, double>> table;  // sorted (r, value)

    static CoefficientField power_isotropic(int n, double alpha) {
        CoefficientField f;
        f.kind = FieldKind::PowerIsotropic;
        f.n = n;
        f.alpha = alpha;
        // minimal c valid for all R > 1: sup over R of envelope(R) / R^(2-alpha)
        f.c_growth = alpha <= 2.0 ? std::pow(2.0, (2.0 - alpha) / 2.0)
                                  : std::pow(2.0, alpha - 2.0);
        f.validate();
        return f;
    }

    static CoefficientField constant(int n, double value, double alpha = 2.0) {
        if (value < 0) throw std::invalid_argument("CoefficientField::constant: value must be >= 0");
        CoefficientField f;
        f.kind = FieldKind::Constant;
        f.n = n;
        f.alpha = alpha;
        f.constant_value = value;
        f.c_growth = std::max(value, 1.0);
        f.validate();
        return f;
    }

    static CoefficientField tabulated(int n, std::vector<std::pair<double, double>> samples,
                                      double alpha, double c_growth) {
        CoefficientField f;
        f.kind = FieldKind::Tabulated;
        f.n = n;
        f.alpha = alpha;
        f.c_growth = c_growth;
        f.table = std::move(samples);
        std::sort(f.table.begin(), f.table.end());
        f.validate();
        return f;
    }

    void validate() const {
        if (n < 1) throw std::invalid_argument("CoefficientField: dimension must be >= 1");
        if (!(c_growth > 0)) throw std::invalid_argument("CoefficientField: c_growth must be > 0");
        if (kind == FieldKind::Tabulated) {
            if (table.size() < 2)
                throw std::invalid_argument("CoefficientField: tabulated field needs >= 2 samples");
            for (const auto& [r, v] : table) {
                if (r < 0 || v < 0)
                    throw std::invalid_argument("CoefficientField: tabulated samples must be nonnegative");
            }
        }
    }

    /// Scalar radial value a(t, r). Tabulated evaluation outside the sampled
    /// range refuses to extrapolate. t is accepted so that time-varying
    /// tabulated fields stay representable; the provided families ignore it.
    double scalar(double t, double r) const {
        (void)t;
        switch (kind) {
            case FieldKind::PowerIsotropic:
                return std::pow(1.0 + r * r, (2.0 - alpha) / 2.0);
            case FieldKind::Constant:
                return constant_value;
            case FieldKind::Tabulated: {
                if (r < table.front().first || r > table.back().first)
                    throw std::domain_error("CoefficientField: tabulated evaluation outside sampled range");
                auto it = std::lower_bound(table.begin(), table.end(), r,
                                           [](const auto& p, double v) { return p.first < v; });
                if (it == table.begin()) return it->second;
                const auto [r1, v1] = *it;
                const auto [r0, v0] = *(it - 1);
                if (r1 == r0) return v1;
                const double w = (r - r0) / (r1 - r0);
                return v0 + w * (v1 - v0);
            }
        }
        throw std::logic_error("CoefficientField: unknown kind");
    }
};

inline double norm2(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

/// Coefficient matrix at (t, x).
inline SymMatrix eval_a(const CoefficientField& field, double t, std::span<const double> x) {
    if (static_cast<int>(x.size()) != field.n)
        throw std::invalid_argument("eval_a: point dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("eval_a: point must be finite");
    return SymMatrix::scaled_identity(field.n, field.scalar(t, norm2(x)));
}

struct SamplingSpec {
    int radial_samples = 257;  // used for tabulated fields only
};

/// sup of A(t,x) over the annulus R/2 < |x| < R. Closed form for the monotone
/// analytic families; dense sampling plus segment nodes for tabulated data.
inline double envelope(const CoefficientField& field, double R, SamplingSpec sampling = {}) {
    if (!(R > 0)) throw std::domain_error("envelope: R must be > 0");
    switch (field.kind) {
        case FieldKind::Constant:
            return field.constant_value;
        case FieldKind::PowerIsotropic: {
            // (1+r^2)^((2-alpha)/2) is monotone in r; sup sits at r = R for
            // alpha < 2 and at r = R/2 for alpha > 2.
            const double r_sup = field.alpha <= 2.0 ? R : R / 2.0;
            return std::pow(1.0 + r_sup * r_sup, (2.0 - field.alpha) / 2.0);
        }
        case FieldKind::Tabulated: {
            const double lo = R / 2.0, hi = R;
            double sup = std::max(field.scalar(0.0, lo), field.scalar(0.0, hi));
            for (const auto& [r, v] : field.table)
                if (r > lo && r < hi) sup = std::max(sup, v);
            const int m = std::max(2, sampling.radial_samples);
            for (int i = 1; i + 1 < m; ++i) {
                const double r = lo + (hi - lo) * i / (m - 1);
                sup = std::max(sup, field.scalar(0.0, r));
            }
            return sup;
        }
    }
    throw std::logic_error("envelope: unknown kind");
}

struct GrowthReport {
    double alpha = 0;
    double c_fitted = 0;  // minimal c with envelope(R) <= c * R^(2-alpha) on the grid
    std::vector<double> R_samples;
    std::vector<double> envelope_values;
    bool satisfied = false;  // envelope(R) <= c_growth * R^(2-alpha) at every sampled R
};

/// Evaluates the envelope on a grid of radii > 1 and checks the growth bound
/// against the field's declared constant.
inline GrowthReport check_growth(const CoefficientField& field, std::span<const double> R_grid,
                                 SamplingSpec sampling = {}) {
    if (R_grid.empty()) throw std::invalid_argument("check_growth: empty radius grid");
    for (double R : R_grid)
        if (!(R > 1)) throw std::invalid_argument("check_growth: all radii must be > 1");
    GrowthReport rep;
    rep.alpha = field.alpha;
    rep.satisfied = true;
    rep.c_fitted = 0;
    for (double R : R_grid) {
        const double env = envelope(field, R, sampling);
        const double pow_term = std::pow(R, 2.0 - field.alpha);
        rep.R_samples.push_back(R);
        rep.envelope_values.push_back(env);
        rep.c_fitted = std::max(rep.c_fitted, env / pow_term);
        if (env > field.c_growth * pow_term) rep.satisfied = false;
    }
    return rep;
}

}  // namespace fujita

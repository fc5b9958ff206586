/// Explicit entire classical supersolutions
///     u(t,x) = kappa (t+1)^(-beta) exp(-gamma (1+|x|^2)^(ah/2) / (t+1)),
/// their admissible parameter boxes, closed-form derivatives for the paired
/// field a(x) = (1+|x|^2)^((2-ah)/2) I, and pointwise residual verification of
/// u_t >= Lu + |u|^{q-1} u.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

#include "fujita/coefficients.hpp"
#include "fujita/numerics.hpp"

namespace fujita {

/// Threshold exponent 1 + alpha/n separating blow-up from small-data global
/// existence.
inline double critical_exponent(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("critical_exponent: n must be >= 1");
    return 1.0 + alpha / n;
}

/// Admissible (beta, gamma, kappa) region for given (n, alpha_hat, q).
/// gamma ranges over (gamma_min, gamma_max]; kappa over (0, kappa_max(gamma)].
struct ParameterBox {
    int n = 1;
    double alpha_hat = 0;
    double q = 0;
    bool empty = true;
    double beta = 0;
    double gamma_min = 0;  // exclusive
    double gamma_max = 0;  // inclusive

    double kappa_max(double gamma) const {
        if (empty) throw std::domain_error("ParameterBox: empty box has no kappa bound");
        if (!(gamma > gamma_min && gamma <= gamma_max))
            throw std::domain_error("ParameterBox: gamma outside admissible interval");
        return std::pow(alpha_hat * n * (gamma - gamma_min), 1.0 / (q - 1.0));
    }
};

/// The box is empty exactly when q <= 1 + alpha_hat/n; the comparison is done
/// on that expression verbatim so the emptiness boundary matches the caller's
/// floating-point critical exponent to the last ulp.
inline ParameterBox admissible_params(int n, double alpha_hat, double q) {
    if (n < 1) throw std::invalid_argument("admissible_params: n must be >= 1");
    if (!(alpha_hat > 0)) throw std::domain_error("admissible_params: alpha_hat must be > 0");
    if (!(q > 1)) throw std::invalid_argument("admissible_params: q must be > 1");
    ParameterBox box;
    box.n = n;
    box.alpha_hat = alpha_hat;
    box.q = q;
    box.beta = 1.0 / (q - 1.0);
    box.empty = (q <= 1.0 + alpha_hat / n);
    if (!box.empty) {
        box.gamma_min = 1.0 / (alpha_hat * n * (q - 1.0));
        box.gamma_max = 1.0 / (alpha_hat * alpha_hat);
    }
    return box;
}

/// Surrogate alpha_hat used when the declared alpha is nonpositive: any
/// positive value with q > 1 + alpha_hat/n works; the midpoint n(q-1)/2 is the
/// default.
inline double surrogate_alpha_hat(int n, double q) {
    if (!(q > 1)) throw std::invalid_argument("surrogate_alpha_hat: q must be > 1");
    return n * (q - 1.0) / 2.0;
}

struct ExactSolutionParams {
    int n = 1;
    double alpha_hat = 0;  // > 0
    double q = 0;          // > 1
    double beta = 0;       // 1/(q-1)
    double gamma = 0;
    double kappa = 0;
};

inline ExactSolutionParams make_params(int n, double alpha_hat, double q, double gamma,
                                       double kappa) {
    const ParameterBox box = admissible_params(n, alpha_hat, q);
    if (box.empty)
        throw std::domain_error("make_params: no admissible parameters (q <= 1 + alpha_hat/n)");
    if (!(gamma > box.gamma_min && gamma <= box.gamma_max))
        throw std::domain_error("make_params: gamma outside (gamma_min, gamma_max]");
    if (!(kappa > 0 && kappa <= box.kappa_max(gamma)))
        throw std::domain_error("make_params: kappa outside (0, kappa_max]");
    return ExactSolutionParams{n, alpha_hat, q, box.beta, gamma, kappa};
}

/// Sharpest admissible corner: gamma at its upper bound, kappa at kappa_max.
inline ExactSolutionParams default_params(int n, double alpha_hat, double q) {
    const ParameterBox box = admissible_params(n, alpha_hat, q);
    if (box.empty)
        throw std::domain_error("default_params: no admissible parameters (q <= 1 + alpha_hat/n)");
    return make_params(n, alpha_hat, q, box.gamma_max, box.kappa_max(box.gamma_max));
}

inline double eval_u_radial(const ExactSolutionParams& p, double t, double r) {
    if (t < 0) throw std::invalid_argument("eval_u: t must be >= 0");
    const double s = t + 1.0;
    const double rho = std::pow(1.0 + r * r, p.alpha_hat / 2.0);
    return p.kappa * std::exp(-p.beta * std::log(s) - p.gamma * rho / s);
}

inline double eval_u(const ExactSolutionParams& p, double t, std::span<const double> x) {
    if (static_cast<int>(x.size()) != p.n)
        throw std::invalid_argument("eval_u: point dimension mismatch");
    return eval_u_radial(p, t, norm2(x));
}

/// Closed-form partial derivatives of u and of Lu for the paired power field.
/// With s = t+1, m = r^2, rho = (1+m)^(ah/2):
///   u_t = u (-beta/s + gamma rho / s^2)
///   u_r = -u (gamma ah / s) r (1+m)^(ah/2 - 1)
///   Lu  = u (-(gamma ah n)/s + (gamma ah / s)^2 m (1+m)^(ah/2 - 1))
/// The flux a u_r collapses to -(gamma ah / s) u x, which makes Lu exact.
struct ExactDerivs {
    double u = 0;
    double u_t = 0;
    double u_r = 0;
    double lu = 0;        // Lu for the paired field
    double residual = 0;  // u_t - Lu - u^q
};

inline ExactDerivs exact_derivs(const ExactSolutionParams& p, double t, double r) {
    const double s = t + 1.0;
    const double m = r * r;
    const double pw = std::pow(1.0 + m, p.alpha_hat / 2.0 - 1.0);
    const double rho = pw * (1.0 + m);
    ExactDerivs d;
    d.u = p.kappa * std::exp(-p.beta * std::log(s) - p.gamma * rho / s);
    const double ga = p.gamma * p.alpha_hat / s;
    d.u_t = d.u * (-p.beta / s + p.gamma * rho / (s * s));
    d.u_r = -d.u * ga * r * pw;
    d.lu = d.u * (-ga * p.n + ga * ga * m * pw);
    d.residual = d.u_t - d.lu - std::pow(d.u, p.q);
    return d;
}

/// r = u_t - Lu - u^q at (t, x); >= 0 on all of S for admissible parameters.
/// The field must be the paired PowerIsotropic family with the same alpha_hat.
inline double residual_ineq4(const ExactSolutionParams& p, const CoefficientField& field,
                             double t, std::span<const double> x) {
    if (field.kind != FieldKind::PowerIsotropic || field.alpha != p.alpha_hat ||
        field.n != p.n)
        throw std::invalid_argument(
            "residual_ineq4: field must be the paired power family (matching alpha_hat, n)");
    if (static_cast<int>(x.size()) != p.n)
        throw std::invalid_argument("residual_ineq4: point dimension mismatch");
    return exact_derivs(p, t, norm2(x)).residual;
}

inline double residual_ineq4_radial(const ExactSolutionParams& p, double t, double r) {
    return exact_derivs(p, t, r).residual;
}

/// Residual e^t - e^{qt} of u(t,x) = e^t for the sublinear range q <= 1
/// (Lu = 0 for x-constant u); nonnegative for all t >= 0.
inline double residual_example1(double q, double t) {
    if (q > 1) throw std::domain_error("residual_example1: only covers q <= 1");
    if (t < 0) throw std::invalid_argument("residual_example1: t must be >= 0");
    return std::exp(t) - std::exp(q * t);
}

struct ResidualReport {
    double min_residual = std::numeric_limits<double>::infinity();
    double argmin_t = 0;
    double argmin_r = 0;
    std::size_t samples = 0;
    double tolerance = 1e-10;
    bool verdict = false;  // min_residual >= -tolerance
};

struct SampleBox {
    double t_max = 10.0;
    double r_max = 20.0;
};

/// Randomized residual sweep over [0, t_max] x {|x| <= r_max}. Radial symmetry
/// makes sampling r = |x| exhaustive for the families here.
inline ResidualReport residual_sweep(const ExactSolutionParams& p, const CoefficientField& field,
                                     SampleBox box, std::size_t count, std::uint64_t seed,
                                     double tolerance = 1e-10) {
    if (field.kind != FieldKind::PowerIsotropic || field.alpha != p.alpha_hat ||
        field.n != p.n)
        throw std::invalid_argument(
            "residual_sweep: field must be the paired power family (matching alpha_hat, n)");
    Rng rng(seed);
    ResidualReport rep;
    rep.samples = count;
    rep.tolerance = tolerance;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = rng.uniform(0.0, box.t_max);
        const double r = rng.uniform(0.0, box.r_max);
        const double res = exact_derivs(p, t, r).residual;
        if (res < rep.min_residual) {
            rep.min_residual = res;
            rep.argmin_t = t;
            rep.argmin_r = r;
        }
    }
    rep.verdict = rep.min_residual >= -tolerance;
    return rep;
}

/// v = -u solves the reversed inequality iff u solves (4): the odd nonlinearity
/// flips the residual sign exactly, so this checks residual_ineq4 >= 0 on the
/// given samples.
inline bool sign_flip_check(const ExactSolutionParams& p, const CoefficientField& field,
                            std::span<const std::pair<double, double>> samples_tr,
                            double tolerance = 1e-10) {
    if (field.kind != FieldKind::PowerIsotropic || field.alpha != p.alpha_hat ||
        field.n != p.n)
        throw std::invalid_argument(
            "sign_flip_check: field must be the paired power family (matching alpha_hat, n)");
    for (const auto& [t, r] : samples_tr) {
        const ExactDerivs d = exact_derivs(p, t, r);
        // v-side residual of (5): v_t - Lv - |v|^{q-1} v with v = -u.
        const double res5 = -d.u_t + d.lu + std::pow(d.u, p.q);
        if (!(res5 <= tolerance)) return false;
        if (d.residual < -tolerance) return false;
    }
    return true;
}

}  // namespace fujita

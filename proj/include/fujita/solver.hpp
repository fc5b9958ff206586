/// Time-stepping for u_t = Lu + |u|^{q-1} u on a truncated radial domain, with
/// blow-up detection via (max u)^{1-q} extrapolation, supersolution sandwich
/// checks, and dichotomy sweeps across the critical exponent.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fujita/coefficients.hpp"
#include "fujita/exact_solutions.hpp"
#include "fujita/grid.hpp"
#include "fujita/numerics.hpp"

namespace fujita {

enum class InitKind { Gaussian, ExactAt0, Constant };
enum class OuterBC { Dirichlet0, Neumann0 };
enum class Integrator { ExplicitRK2, IMEX };

struct InitSpec {
    InitKind kind = InitKind::Gaussian;
    double amplitude = 1.0;  // Gaussian peak / Constant value / ExactAt0 scale
    double width = 1.0;      // Gaussian only
    std::optional<ExactSolutionParams> params;  // ExactAt0 only

    double value(double r) const {
        switch (kind) {
            case InitKind::Gaussian:
                return amplitude * std::exp(-(r / width) * (r / width));
            case InitKind::Constant:
                return amplitude;
            case InitKind::ExactAt0:
                if (!params) throw std::invalid_argument("InitSpec: ExactAt0 needs parameters");
                return amplitude * eval_u_radial(*params, 0.0, r);
        }
        throw std::logic_error("InitSpec: unknown kind");
    }
};

struct DtControl {
    double cfl = 0.8;   // fraction of the explicit diffusion stability limit, in (0,1)
    double max = 0.05;  // absolute step cap
};

struct SolverConfig {
    CoefficientField field = CoefficientField::power_isotropic(1, 2.0);
    double q = 2.0;
    double r_max = 50.0;
    int grid_nodes = 1001;
    RadialGrid::Stretch stretch = RadialGrid::Stretch::Uniform;
    double stretch_ratio = 1.0;
    double t_end = 200.0;
    InitSpec init;
    OuterBC bc = OuterBC::Dirichlet0;
    Integrator integrator = Integrator::ExplicitRK2;
    DtControl dt;
    double blowup_threshold = 1e8;
    bool reaction = true;  // false disables the source term (pure diffusion)
    int store_frames = 65;

    void validate() const {
        if (!(r_max > 0)) throw std::invalid_argument("SolverConfig: r_max must be > 0");
        if (!(t_end > 0)) throw std::invalid_argument("SolverConfig: t_end must be > 0");
        if (!(dt.cfl > 0 && dt.cfl < 1))
            throw std::invalid_argument("SolverConfig: cfl fraction must be in (0,1)");
        if (!(dt.max > 0)) throw std::invalid_argument("SolverConfig: dt.max must be > 0");
        if (grid_nodes < 3) throw std::invalid_argument("SolverConfig: need >= 3 grid nodes");
        if (!(q > 0)) throw std::invalid_argument("SolverConfig: q must be > 0");
        field.validate();
    }

    RadialGrid make_grid() const {
        return stretch == RadialGrid::Stretch::Geometric
                   ? RadialGrid::geometric(field.n, r_max, grid_nodes, stretch_ratio)
                   : RadialGrid::uniform(field.n, r_max, grid_nodes);
    }

    /// Canonical key=value rendering; basis of the reproducible config hash.
    std::string canonical_string() const {
        std::ostringstream os;
        os.precision(17);
        os << "bc=" << (bc == OuterBC::Dirichlet0 ? "dirichlet" : "neumann") << '\n'
           << "blowup.threshold=" << blowup_threshold << '\n'
           << "dt.cfl=" << dt.cfl << '\n'
           << "dt.max=" << dt.max << '\n'
           << "field.alpha=" << field.alpha << '\n'
           << "field.c=" << field.c_growth << '\n'
           << "field.kind="
           << (field.kind == FieldKind::PowerIsotropic
                   ? "power"
                   : (field.kind == FieldKind::Constant ? "constant" : "tabulated"))
           << '\n'
           << "field.value=" << field.constant_value << '\n'
           << "frames=" << store_frames << '\n'
           << "grid.nodes=" << grid_nodes << '\n'
           << "grid.ratio=" << stretch_ratio << '\n'
           << "grid.rmax=" << r_max << '\n'
           << "grid.stretch="
           << (stretch == RadialGrid::Stretch::Geometric ? "geometric" : "uniform") << '\n'
           << "init.amplitude=" << init.amplitude << '\n'
           << "init.kind="
           << (init.kind == InitKind::Gaussian
                   ? "gaussian"
                   : (init.kind == InitKind::Constant ? "constant" : "exact"))
           << '\n'
           << "init.width=" << init.width << '\n'
           << "integrator=" << (integrator == Integrator::ExplicitRK2 ? "rk2" : "imex") << '\n'
           << "n=" << field.n << '\n'
           << "q=" << q << '\n'
           << "reaction.enabled=" << (reaction ? 1 : 0) << '\n'
           << "tend=" << t_end << '\n';
        if (init.params) {
            os << "init.gamma=" << init.params->gamma << '\n'
               << "init.kappa=" << init.params->kappa << '\n';
        }
        return os.str();
    }

    std::uint64_t hash() const { return fnv1a64(canonical_string()); }
};

enum class Outcome { BlowUp, GlobalUpToHorizon, Decayed };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::BlowUp: return "BlowUp";
        case Outcome::GlobalUpToHorizon: return "GlobalUpToHorizon";
        case Outcome::Decayed: return "Decayed";
    }
    return "?";
}

struct Frame {
    double t = 0;
    std::vector<double> u;
};

struct RunResult {
    Outcome outcome = Outcome::GlobalUpToHorizon;
    double t_star = 0;       // BlowUp: extrapolated blow-up time
    double fit_quality = 0;  // BlowUp: R^2 of the (max u)^{1-q} line fit
    double final_max = 0;
    double decay_time = 0;  // Decayed: first time max|u| < 1e-12
    std::vector<std::pair<double, double>> trajectory;  // (t, max|u|), thinned
    std::vector<Frame> frames;
    std::shared_ptr<const RadialGrid> grid;
    std::uint64_t steps = 0;
    double dt_min_used = std::numeric_limits<double>::infinity();
    bool warning = false;
    std::string warning_text;
    std::uint64_t config_hash = 0;
};

namespace detail {

/// signed power source |u|^{q-1} u, safe at u = 0 for every q > 0
inline double source(double u, double q) {
    return std::copysign(std::pow(std::abs(u), q), u);
}

struct Discretization {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> cond;  // face conductance a(r_half) r_half^{n-1} / dr
    std::vector<double> vol;   // cell shell volumes (r_half^n - r_half^n)/n
    double dt_diffusion = 0;   // explicit Euler stability limit

    Discretization(const SolverConfig& cfg) {
        grid = std::make_shared<const RadialGrid>(cfg.make_grid());
        const auto& r = grid->r;
        const int m = grid->nodes();
        const int n = cfg.field.n;
        cond.resize(static_cast<std::size_t>(m) - 1);
        vol.resize(static_cast<std::size_t>(m));
        std::vector<double> rh(static_cast<std::size_t>(m) + 1);
        rh[0] = 0.0;
        for (int i = 0; i + 1 < m; ++i)
            rh[static_cast<std::size_t>(i) + 1] = 0.5 * (r[static_cast<std::size_t>(i)] + r[static_cast<std::size_t>(i) + 1]);
        rh[static_cast<std::size_t>(m)] = r.back();
        for (int i = 0; i < m; ++i)
            vol[static_cast<std::size_t>(i)] =
                (std::pow(rh[static_cast<std::size_t>(i) + 1], n) - std::pow(rh[static_cast<std::size_t>(i)], n)) / n;
        dt_diffusion = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < m; ++i) {
            const double rmid = rh[static_cast<std::size_t>(i) + 1];
            const double a = cfg.field.scalar(0.0, rmid);
            cond[static_cast<std::size_t>(i)] =
                a * std::pow(rmid, n - 1) / (r[static_cast<std::size_t>(i) + 1] - r[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < m; ++i) {
            const double wl = i > 0 ? cond[static_cast<std::size_t>(i) - 1] : 0.0;
            const double wr = i + 1 < m ? cond[static_cast<std::size_t>(i)] : 0.0;
            if (wl + wr > 0)
                dt_diffusion = std::min(dt_diffusion, vol[static_cast<std::size_t>(i)] / (wl + wr));
        }
    }
};

}  // namespace detail

/// Conservative right-hand side: r^{1-n} d_r(r^{n-1} a(r) d_r u) via half-node
/// fluxes, plus |u|^{q-1} u. Exposed for direct testing.
inline void rhs(std::span<const double> u, const RadialGrid& grid, const CoefficientField& field,
                double q, OuterBC bc, bool reaction, std::span<double> out) {
    const int m = grid.nodes();
    if (static_cast<int>(u.size()) != m || static_cast<int>(out.size()) != m)
        throw std::invalid_argument("rhs: state size mismatch");
    for (double v : u)
        if (!std::isfinite(v))
            throw std::runtime_error("rhs: non-finite state (diverged or corrupted input)");
    const auto& r = grid.r;
    const int n = grid.n;
    std::vector<double> rh(static_cast<std::size_t>(m) + 1);
    rh[0] = 0.0;
    for (int i = 0; i + 1 < m; ++i) rh[static_cast<std::size_t>(i) + 1] = 0.5 * (r[static_cast<std::size_t>(i)] + r[static_cast<std::size_t>(i) + 1]);
    rh[static_cast<std::size_t>(m)] = r.back();
    std::vector<double> flux(static_cast<std::size_t>(m) - 1);
    for (int i = 0; i + 1 < m; ++i) {
        const double rmid = rh[static_cast<std::size_t>(i) + 1];
        flux[static_cast<std::size_t>(i)] = field.scalar(0.0, rmid) * std::pow(rmid, n - 1) *
                                            (u[static_cast<std::size_t>(i) + 1] - u[static_cast<std::size_t>(i)]) /
                                            (r[static_cast<std::size_t>(i) + 1] - r[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < m; ++i) {
        const double vol = (std::pow(rh[static_cast<std::size_t>(i) + 1], n) - std::pow(rh[static_cast<std::size_t>(i)], n)) / n;
        const double f_in = i > 0 ? flux[static_cast<std::size_t>(i) - 1] : 0.0;  // symmetry at r = 0
        double f_out;
        if (i + 1 < m)
            f_out = flux[static_cast<std::size_t>(i)];
        else
            f_out = bc == OuterBC::Neumann0 ? 0.0 : f_in;  // Dirichlet row unused (node held at 0)
        out[static_cast<std::size_t>(i)] = (f_out - f_in) / vol;
        if (reaction) out[static_cast<std::size_t>(i)] += detail::source(u[static_cast<std::size_t>(i)], q);
    }
}

/// Integrates the configured problem until t_end, blow-up, or decay below
/// 1e-12. Blow-up time is estimated by the linear-in-t extrapolation of
/// (max u)^{1-q} to zero, which is exact in the ODE limit.
inline RunResult run(const SolverConfig& cfg) {
    cfg.validate();
    detail::Discretization disc(cfg);
    const int m = disc.grid->nodes();
    const auto& r = disc.grid->r;

    std::vector<double> u(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) u[static_cast<std::size_t>(i)] = cfg.init.value(r[static_cast<std::size_t>(i)]);
    const bool dirichlet = cfg.bc == OuterBC::Dirichlet0;
    if (dirichlet) u.back() = 0.0;

    double max0 = 0;
    for (double v : u) max0 = std::max(max0, std::abs(v));
    if (!(cfg.blowup_threshold > max0))
        throw std::invalid_argument("SolverConfig: blow-up threshold must exceed initial max");

    RunResult res;
    res.grid = disc.grid;
    res.config_hash = cfg.hash();

    const int nframes = std::max(2, cfg.store_frames);
    double next_frame_t = 0.0;
    const double frame_dt = cfg.t_end / (nframes - 1);
    auto store_frame = [&](double t) {
        res.frames.push_back(Frame{t, u});
    };

    double t = 0.0;
    std::uint64_t traj_stride = 1;
    auto push_traj = [&](double tt, double mx) {
        if (res.steps % traj_stride == 0) res.trajectory.emplace_back(tt, mx);
        if (res.trajectory.size() > 65536) {
            std::vector<std::pair<double, double>> thin;
            thin.reserve(res.trajectory.size() / 2 + 1);
            for (std::size_t i = 0; i < res.trajectory.size(); i += 2) thin.push_back(res.trajectory[i]);
            res.trajectory = std::move(thin);
            traj_stride *= 2;
        }
    };

    std::vector<double> k1(static_cast<std::size_t>(m)), k2(static_cast<std::size_t>(m)), u1(static_cast<std::size_t>(m));
    // IMEX workspace: Thomas sweep buffers
    std::vector<double> lo(static_cast<std::size_t>(m)), di(static_cast<std::size_t>(m)), up(static_cast<std::size_t>(m)),
        bvec(static_cast<std::size_t>(m)), cp(static_cast<std::size_t>(m)), dp(static_cast<std::size_t>(m));

    auto finish_blowup = [&](double t_now, double maxu) -> bool {
        // Fit (max u)^{1-q} against t over the last growth decades. The window
        // is keyed to the threshold, not to maxu: the final reaction steps can
        // overshoot the threshold by many orders of magnitude.
        const double lo_cut = std::min(maxu, cfg.blowup_threshold) * 1e-4;
        std::vector<double> xs, ys;
        for (const auto& [tt, mm] : res.trajectory) {
            if (mm >= lo_cut && mm > 0) {
                xs.push_back(tt);
                ys.push_back(std::pow(mm, 1.0 - cfg.q));
            }
        }
        xs.push_back(t_now);
        ys.push_back(std::isfinite(maxu) ? std::pow(maxu, 1.0 - cfg.q) : 0.0);
        if (xs.size() < 5) return false;
        // monotone growth over the fit window is required before reporting blow-up
        for (std::size_t i = 1; i < ys.size(); ++i)
            if (ys[i] > ys[i - 1] * (1.0 + 1e-9)) return false;
        const LinearFit fit = fit_linear(xs, ys);
        if (!(fit.slope < 0)) return false;
        const double t_star = -fit.intercept / fit.slope;
        if (!(t_star <= cfg.t_end)) return false;
        res.outcome = Outcome::BlowUp;
        res.t_star = std::max(t_star, t_now);
        res.fit_quality = fit.r_squared;
        res.final_max = maxu;
        return true;
    };

    while (true) {
        double maxu = 0;
        for (double v : u) maxu = std::max(maxu, std::abs(v));
        push_traj(t, maxu);
        while (t >= next_frame_t - 1e-12 && static_cast<int>(res.frames.size()) < nframes) {
            store_frame(t);
            next_frame_t += frame_dt;
        }
        if (cfg.reaction && cfg.q > 1 && maxu >= cfg.blowup_threshold) {
            if (finish_blowup(t, maxu)) return res;
            res.outcome = Outcome::GlobalUpToHorizon;
            res.final_max = maxu;
            res.warning = true;
            res.warning_text = "threshold crossed without monotone (max u)^{1-q} trend";
            return res;
        }
        if (maxu < 1e-12) {
            res.outcome = Outcome::Decayed;
            res.decay_time = t;
            res.final_max = maxu;
            return res;
        }
        if (t >= cfg.t_end) break;

        double dt = std::min(cfg.dt.max, cfg.t_end - t);
        if (cfg.integrator == Integrator::ExplicitRK2)
            dt = std::min(dt, cfg.dt.cfl * disc.dt_diffusion);
        if (cfg.reaction && cfg.q > 1 && maxu > 0) {
            // growth-limited step: at most ~10% relative growth per step, and
            // dt halves per max-norm doubling once within 1e-2 of the
            // threshold; floored so high-q runs still reach the threshold
            const double u_near = 0.01 * cfg.blowup_threshold;
            const double cap = 0.1 * std::min(std::pow(maxu, 1.0 - cfg.q),
                                              std::pow(u_near, 2.0 - cfg.q) / maxu);
            dt = std::min(dt, std::max(cap, 1e-12));
        }
        if (dt < 1e-14) {
            res.outcome = Outcome::GlobalUpToHorizon;
            res.final_max = maxu;
            res.warning = true;
            res.warning_text = "inconclusive: dt underflow without threshold crossing";
            return res;
        }
        res.dt_min_used = std::min(res.dt_min_used, dt);

        // fast rhs path over the precomputed face conductances; same scheme
        // the public rhs() evaluates, with the field frozen at t = 0
        auto eval_rhs = [&](const std::vector<double>& state, std::vector<double>& out) {
            const std::size_t last = static_cast<std::size_t>(m) - 1;
            double f_in = 0.0;
            for (std::size_t i = 0; i < last; ++i) {
                const double f_out = disc.cond[i] * (state[i + 1] - state[i]);
                out[i] = (f_out - f_in) / disc.vol[i];
                f_in = f_out;
            }
            out[last] = (cfg.bc == OuterBC::Neumann0 ? -f_in : 0.0) / disc.vol[last];
            if (cfg.reaction)
                for (std::size_t i = 0; i <= last; ++i) out[i] += detail::source(state[i], cfg.q);
        };

        if (cfg.integrator == Integrator::ExplicitRK2) {
            eval_rhs(u, k1);
            for (int i = 0; i < m; ++i) u1[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] + dt * k1[static_cast<std::size_t>(i)];
            if (dirichlet) u1.back() = 0.0;
            eval_rhs(u1, k2);
            for (int i = 0; i < m; ++i)
                u[static_cast<std::size_t>(i)] += 0.5 * dt * (k1[static_cast<std::size_t>(i)] + k2[static_cast<std::size_t>(i)]);
        } else {
            // backward Euler diffusion, explicit reaction
            for (int i = 0; i < m; ++i) {
                const double wl = i > 0 ? disc.cond[static_cast<std::size_t>(i) - 1] : 0.0;
                double wr = i + 1 < m ? disc.cond[static_cast<std::size_t>(i)] : 0.0;
                if (i + 1 == m && cfg.bc == OuterBC::Neumann0) wr = 0.0;
                const double vol = disc.vol[static_cast<std::size_t>(i)];
                lo[static_cast<std::size_t>(i)] = -dt * wl / vol;
                up[static_cast<std::size_t>(i)] = -dt * wr / vol;
                di[static_cast<std::size_t>(i)] = 1.0 + dt * (wl + wr) / vol;
                bvec[static_cast<std::size_t>(i)] =
                    u[static_cast<std::size_t>(i)] +
                    (cfg.reaction ? dt * detail::source(u[static_cast<std::size_t>(i)], cfg.q) : 0.0);
            }
            if (dirichlet) {
                di.back() = 1.0;
                lo.back() = 0.0;
                bvec.back() = 0.0;
            }
            cp[0] = up[0] / di[0];
            dp[0] = bvec[0] / di[0];
            for (int i = 1; i < m; ++i) {
                const double den = di[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] * cp[static_cast<std::size_t>(i) - 1];
                cp[static_cast<std::size_t>(i)] = up[static_cast<std::size_t>(i)] / den;
                dp[static_cast<std::size_t>(i)] =
                    (bvec[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] * dp[static_cast<std::size_t>(i) - 1]) / den;
            }
            u[static_cast<std::size_t>(m) - 1] = dp[static_cast<std::size_t>(m) - 1];
            for (int i = m - 2; i >= 0; --i)
                u[static_cast<std::size_t>(i)] = dp[static_cast<std::size_t>(i)] - cp[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i) + 1];
        }
        if (dirichlet) u.back() = 0.0;
        t += dt;
        ++res.steps;
        bool finite = true;
        for (double v : u)
            if (!std::isfinite(v)) finite = false;
        if (!finite) {
            // One reaction step can jump straight past every finite magnitude.
            if (cfg.reaction && cfg.q > 1 &&
                finish_blowup(t, std::numeric_limits<double>::infinity()))
                return res;
            throw std::runtime_error("run: state became non-finite before threshold crossing");
        }
    }

    if (static_cast<int>(res.frames.size()) < nframes) store_frame(t);
    double maxu = 0;
    for (double v : u) maxu = std::max(maxu, std::abs(v));
    res.outcome = Outcome::GlobalUpToHorizon;
    res.final_max = maxu;
    return res;
}

/// True iff the stored trajectory stays below the exact supersolution at every
/// frame, nodewise, within tol = 1e-6 + 1e-3 h^2. The initial frame must be
/// dominated outright; that is the comparison-principle precondition.
inline bool sandwich_check(const RunResult& result, const ExactSolutionParams& p) {
    if (result.frames.empty() || !result.grid)
        throw std::invalid_argument("sandwich_check: result carries no frames");
    const auto& r = result.grid->r;
    const double h = result.grid->max_spacing();
    const double tol = 1e-6 + 1e-3 * h * h;
    const Frame& first = result.frames.front();
    for (std::size_t i = 0; i < r.size(); ++i)
        if (first.u[i] > eval_u_radial(p, first.t, r[i]))
            throw std::invalid_argument("sandwich_check: initial data exceeds the supersolution");
    for (const Frame& fr : result.frames)
        for (std::size_t i = 0; i < r.size(); ++i)
            if (fr.u[i] > eval_u_radial(p, fr.t, r[i]) + tol) return false;
    return true;
}

struct SweepCell {
    double q = 0;
    double amplitude = 0;
    RunResult result;
};

/// One run per (q, amplitude); cells are independent and may execute
/// concurrently, results are stored in deterministic (q major) order.
inline std::vector<SweepCell> dichotomy_sweep(const SolverConfig& base,
                                              std::span<const double> q_list,
                                              std::span<const double> amplitude_list,
                                              int jobs = 1) {
    if (q_list.empty() || amplitude_list.empty())
        throw std::invalid_argument("dichotomy_sweep: empty sweep axes");
    const double qstar = critical_exponent(base.field.n, base.field.alpha);
    const auto [qmin, qmax] = std::minmax_element(q_list.begin(), q_list.end());
    if (q_list.size() > 1 && !(*qmin < qstar && qstar < *qmax))
        std::cerr << "dichotomy_sweep: warning: q list does not straddle the critical exponent "
                  << qstar << "\n";

    std::vector<SweepCell> cells(q_list.size() * amplitude_list.size());
    auto run_cell = [&](std::size_t idx) {
        const double q = q_list[idx / amplitude_list.size()];
        const double amp = amplitude_list[idx % amplitude_list.size()];
        SolverConfig cfg = base;
        cfg.q = q;
        cfg.init.amplitude = amp;
        cells[idx] = SweepCell{q, amp, run(cfg)};
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::vector<std::future<void>> pending;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            pending.push_back(std::async(std::launch::async, run_cell, i));
            if (static_cast<int>(pending.size()) >= jobs) {
                for (auto& f : pending) f.get();
                pending.clear();
            }
        }
        for (auto& f : pending) f.get();
    }
    return cells;
}

}  // namespace fujita

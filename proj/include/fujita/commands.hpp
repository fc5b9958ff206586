/// Subcommand implementations shared by the CLI binary and the test suite:
/// verify-exact, sweep, capacity-check, envelope. Each writes deterministic
/// CSV (fixed iteration order, no wall-clock values in data rows) and appends
/// one catalog entry.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fujita/capacity.hpp"
#include "fujita/catalog.hpp"
#include "fujita/coefficients.hpp"
#include "fujita/config.hpp"
#include "fujita/csv.hpp"
#include "fujita/exact_solutions.hpp"
#include "fujita/grid.hpp"
#include "fujita/solver.hpp"

namespace fujita {

inline CoefficientField field_from_config(const RunConfig& cfg) {
    const int n = static_cast<int>(cfg.get_int("n", 1));
    const std::string kind = cfg.get_string("field.kind", std::string("power"));
    if (kind == "power") {
        CoefficientField f = CoefficientField::power_isotropic(n, cfg.get_double("field.alpha"));
        if (cfg.has("field.c")) f.c_growth = cfg.get_double("field.c");
        f.validate();
        return f;
    }
    if (kind == "constant") {
        CoefficientField f = CoefficientField::constant(n, cfg.get_double("field.value"),
                                                        cfg.get_double("field.alpha", 2.0));
        if (cfg.has("field.c")) f.c_growth = cfg.get_double("field.c");
        f.validate();
        return f;
    }
    if (kind == "tabulated") {
        const std::string path = cfg.get_string("field.table");
        const csv::Table t = csv::read_file(path);
        std::vector<std::pair<double, double>> samples;
        auto parse_row = [&](const std::vector<std::string>& row) {
            if (row.size() != 2)
                throw ConfigError("tabulated field CSV must hold (r,value) pairs: " + path);
            samples.emplace_back(std::stod(row[0]), std::stod(row[1]));
        };
        // header row is optional
        try {
            parse_row(t.header);
        } catch (const std::invalid_argument&) {
        }
        for (const auto& row : t.rows) parse_row(row);
        return CoefficientField::tabulated(n, std::move(samples), cfg.get_double("field.alpha"),
                                           cfg.get_double("field.c"));
    }
    throw ConfigError("malformed config key field.kind: '" + kind + "'");
}

inline SolverConfig solver_from_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.field = field_from_config(cfg);
    sc.q = cfg.get_double("q");
    sc.r_max = cfg.get_double("grid.rmax", 50.0);
    sc.grid_nodes = static_cast<int>(cfg.get_int("grid.nodes", 1001));
    const std::string stretch = cfg.get_string("grid.stretch", std::string("uniform"));
    if (stretch == "geometric") {
        sc.stretch = RadialGrid::Stretch::Geometric;
        sc.stretch_ratio = cfg.get_double("grid.ratio", 1.03);
    } else if (stretch != "uniform") {
        throw ConfigError("malformed config key grid.stretch: '" + stretch + "'");
    }
    sc.t_end = cfg.get_double("tend", 200.0);
    const std::string init = cfg.get_string("init.kind", std::string("gaussian"));
    if (init == "gaussian") {
        sc.init.kind = InitKind::Gaussian;
        sc.init.amplitude = cfg.get_double("init.amplitude", 1.0);
        sc.init.width = cfg.get_double("init.width", 1.0);
    } else if (init == "constant") {
        sc.init.kind = InitKind::Constant;
        sc.init.amplitude = cfg.get_double("init.amplitude", 1.0);
    } else if (init == "exact") {
        sc.init.kind = InitKind::ExactAt0;
        sc.init.amplitude = cfg.get_double("init.scale", cfg.get_double("init.amplitude", 1.0));
        const double ah = cfg.get_double("init.alpha_hat", sc.field.alpha);
        ExactSolutionParams p;
        if (cfg.has("init.gamma") && cfg.has("init.kappa"))
            p = make_params(sc.field.n, ah, sc.q, cfg.get_double("init.gamma"),
                            cfg.get_double("init.kappa"));
        else
            p = default_params(sc.field.n, ah, sc.q);
        sc.init.params = p;
    } else {
        throw ConfigError("malformed config key init.kind: '" + init + "'");
    }
    const std::string bc = cfg.get_string("bc", std::string("dirichlet"));
    if (bc == "neumann")
        sc.bc = OuterBC::Neumann0;
    else if (bc != "dirichlet")
        throw ConfigError("malformed config key bc: '" + bc + "'");
    const std::string integ = cfg.get_string("integrator", std::string("rk2"));
    if (integ == "imex")
        sc.integrator = Integrator::IMEX;
    else if (integ != "rk2")
        throw ConfigError("malformed config key integrator: '" + integ + "'");
    sc.dt.cfl = cfg.get_double("dt.cfl", 0.8);
    sc.dt.max = cfg.get_double("dt.max", 0.05);
    sc.blowup_threshold = cfg.get_double("blowup.threshold", 1e8);
    sc.reaction = cfg.get_bool("reaction.enabled", true);
    sc.store_frames = static_cast<int>(cfg.get_int("frames", 65));
    sc.validate();
    return sc;
}

namespace detail_cmd {

inline std::string num_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    std::string s = buf;
    for (char& c : s)
        if (c == '.' || c == '-' || c == '+') c = 'p';
    return s;
}

}  // namespace detail_cmd

/// Mechanized residual verification of the explicit solutions. Exit 0 iff all
/// sweeps pass; a subcritical (n, alpha_hat, q) tuple exits 2 with a message.
inline int cmd_verify_exact(const RunConfig& cfg, const std::filesystem::path& out_dir,
                            std::uint64_t seed) {
    const std::vector<double> ns = cfg.has("exact.n") ? cfg.get_double_list("exact.n")
                                                      : std::vector<double>{1};
    const std::vector<double> ahs = cfg.get_double_list("exact.alpha_hat");
    const std::vector<double> qs = cfg.get_double_list("exact.q");
    const std::size_t samples = static_cast<std::size_t>(cfg.get_int("exact.samples", 10000));
    const SampleBox box{cfg.get_double("exact.tmax", 10.0), cfg.get_double("exact.rmax", 20.0)};
    const double tol = cfg.get_double("exact.tolerance", 1e-10);

    std::filesystem::create_directories(out_dir);
    bool all_pass = true;
    std::ostringstream summary;
    for (double nd : ns) {
        for (double ah : ahs) {
            for (double q : qs) {
                const int n = static_cast<int>(nd);
                const std::string tag = "n" + detail_cmd::num_tag(nd) + "_ah" +
                                        detail_cmd::num_tag(ah) + "_q" + detail_cmd::num_tag(q);
                const auto out_path = out_dir / ("verify_exact_" + tag + ".csv");
                std::ofstream os(out_path);
                csv::Writer w(os);
                w.row({"t", "r", "u", "residual"});
                if (q <= 1.0) {
                    // sublinear range: u = e^t solves the inequality outright
                    double min_res = std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < samples; ++i) {
                        const double t = box.t_max * static_cast<double>(i) /
                                         static_cast<double>(samples > 1 ? samples - 1 : 1);
                        const double res = residual_example1(q, t);
                        min_res = std::min(min_res, res);
                        w.row({csv::cell(t), csv::cell(0.0), csv::cell(std::exp(t)),
                               csv::cell(res)});
                    }
                    const bool pass = min_res >= -tol;
                    all_pass = all_pass && pass;
                    std::cout << "verify-exact " << tag << ": min residual = " << min_res
                              << (pass ? " [pass]" : " [FAIL]") << "\n";
                    continue;
                }
                const ParameterBox pbox = admissible_params(n, ah, q);
                if (pbox.empty) {
                    std::cout << "subcritical: no admissible parameters (q <= 1+alpha_hat/n)"
                              << " at " << tag << "\n";
                    return 2;
                }
                const double gamma = cfg.has("exact.gamma") ? cfg.get_double("exact.gamma")
                                                            : pbox.gamma_max;
                const double kappa = cfg.has("exact.kappa") ? cfg.get_double("exact.kappa")
                                                            : pbox.kappa_max(gamma);
                const ExactSolutionParams p = make_params(n, ah, q, gamma, kappa);
                const CoefficientField field = CoefficientField::power_isotropic(n, ah);
                Rng rng(seed ^ fnv1a64(tag));
                double min_res = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < samples; ++i) {
                    const double t = rng.uniform(0.0, box.t_max);
                    const double r = rng.uniform(0.0, box.r_max);
                    const ExactDerivs dspec = exact_derivs(p, t, r);
                    min_res = std::min(min_res, dspec.residual);
                    w.row({csv::cell(t), csv::cell(r), csv::cell(dspec.u),
                           csv::cell(dspec.residual)});
                }
                (void)field;
                const bool pass = min_res >= -tol;
                all_pass = all_pass && pass;
                std::cout << "verify-exact " << tag << ": min residual = " << min_res
                          << (pass ? " [pass]" : " [FAIL]") << "\n";
                summary << tag << (pass ? ":pass " : ":fail ");
            }
        }
    }
    append_catalog(out_dir, CatalogEntry{utc_timestamp_now(), "verify-exact",
                                         to_hex(cfg.hash()), out_dir.string(),
                                         all_pass ? "pass" : "fail"});
    return all_pass ? 0 : 1;
}

/// Dichotomy sweep over q x amplitude; exit 0 iff no run aborted.
inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, int jobs) {
    const SolverConfig base = solver_from_config(cfg);
    const std::vector<double> qs = cfg.get_double_list("sweep.q");
    const std::vector<double> amps = cfg.has("sweep.amplitudes")
                                         ? cfg.get_double_list("sweep.amplitudes")
                                         : std::vector<double>{base.init.amplitude};
    std::filesystem::create_directories(out_dir);
    const auto out_path = out_dir / "sweep.csv";

    std::vector<SweepCell> cells;
    try {
        cells = dichotomy_sweep(base, qs, amps, jobs);
    } catch (const std::exception& e) {
        std::cerr << "sweep aborted: " << e.what() << "\n";
        return 1;
    }
    std::ofstream os(out_path);
    csv::Writer w(os);
    w.row({"q", "amplitude", "outcome", "t_star", "final_max", "steps"});
    for (const auto& cell : cells) {
        const RunResult& r = cell.result;
        if (r.warning)
            std::cerr << "sweep warning (q=" << cell.q << ", amplitude=" << cell.amplitude
                      << "): " << r.warning_text << "\n";
        w.row({csv::cell(cell.q), csv::cell(cell.amplitude), outcome_name(r.outcome),
               csv::cell(r.outcome == Outcome::BlowUp ? r.t_star
                                                      : std::numeric_limits<double>::quiet_NaN()),
               csv::cell(r.final_max), csv::cell(static_cast<std::uint64_t>(r.steps))});
        std::cout << "sweep q=" << cell.q << " amplitude=" << cell.amplitude << ": "
                  << outcome_name(r.outcome);
        if (r.outcome == Outcome::BlowUp) std::cout << " t*=" << r.t_star;
        std::cout << "\n";
    }
    append_catalog(out_dir, CatalogEntry{utc_timestamp_now(), "sweep", to_hex(cfg.hash()),
                                         out_path.string(),
                                         std::to_string(cells.size()) + " cells"});
    return 0;
}

/// Frozen reference profile used for certificate columns in capacity-check.
inline double reference_profile(double t, double r) { return std::exp(-r * r) / (1.0 + t); }

/// Capacity integrals, slope fits against the predicted exponents, and
/// reference-profile certificates per R. Exit 0 iff slopes are within 5%.
inline int cmd_capacity(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const CoefficientField field = field_from_config(cfg);
    const double q = cfg.get_double("q");
    const std::vector<double> r_list = cfg.get_double_list("capacity.r_list");
    if (r_list.size() < 3) {
        std::cerr << "need >= 3 radii for slope fit\n";
        return 2;
    }
    QuadratureSpec quad;
    quad.t_nodes = static_cast<int>(cfg.get_int("capacity.t_nodes", 257));
    quad.r_nodes = static_cast<int>(cfg.get_int("capacity.r_nodes", 513));

    CapacityReport rep;
    try {
        rep = capacity_report(field, q, r_list, quad);
    } catch (const std::exception& e) {
        std::cerr << "capacity-check aborted: " << e.what() << "\n";
        return 1;
    }

    std::filesystem::create_directories(out_dir);
    const auto out_path = out_dir / "capacity.csv";
    std::ofstream os(out_path);
    csv::Writer w(os);
    w.row({"R", "J_time", "J_space_d", "J_space_qnu", "lhs", "rhs", "ratio", "slope_time",
           "slope_space_d", "slope_space_qnu"});
    for (const auto& row : rep.rows) {
        const CutoffConfig cut = cutoff_for(q, row.R, field.alpha);
        const int nt = static_cast<int>(cfg.get_int("capacity.cert_t_nodes", 129));
        const int nr = static_cast<int>(cfg.get_int("capacity.cert_r_nodes", 257));
        auto grid = std::make_shared<const RadialGrid>(
            RadialGrid::uniform(field.n, row.R, nr));
        std::vector<double> ts(static_cast<std::size_t>(nt));
        for (int k = 0; k < nt; ++k) ts[static_cast<std::size_t>(k)] = cut.T * k / (nt - 1);
        const GridFunction wref = GridFunction::sample(grid, ts, reference_profile);
        const Certificate cert = certificate(wref, field, q, cut);
        w.row({csv::cell(row.R), csv::cell(row.J_time), csv::cell(row.J_space_d),
               csv::cell(row.J_space_qnu), csv::cell(cert.lhs),
               csv::cell(cert.rhs_time + cert.rhs_space), csv::cell(cert.ratio),
               csv::cell(rep.slope_time), csv::cell(rep.slope_space_d),
               csv::cell(rep.slope_space_qnu)});
    }
    std::cout << "capacity-check: slope_time=" << rep.slope_time << " (predicted "
              << rep.predicted_time << "), slope_space_d=" << rep.slope_space_d << " (predicted "
              << rep.predicted_space_d << "), e1=" << rep.exponents.e1
              << ", e2=" << rep.exponents.e2 << (rep.slopes_ok ? " [pass]" : " [FAIL]") << "\n";
    append_catalog(out_dir, CatalogEntry{utc_timestamp_now(), "capacity-check",
                                         to_hex(cfg.hash()), out_path.string(),
                                         rep.slopes_ok ? "pass" : "fail"});
    return rep.slopes_ok ? 0 : 1;
}

/// Growth-envelope check for the configured field. Exit 0 iff the declared
/// bound holds at every sampled radius.
inline int cmd_envelope(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const CoefficientField field = field_from_config(cfg);
    const std::vector<double> r_list = cfg.get_double_list("envelope.r_list");
    const GrowthReport rep = check_growth(field, r_list);
    std::filesystem::create_directories(out_dir);
    const auto out_path = out_dir / "envelope.csv";
    std::ofstream os(out_path);
    csv::Writer w(os);
    w.row({"R", "envelope", "bound", "satisfied"});
    for (std::size_t i = 0; i < rep.R_samples.size(); ++i) {
        const double R = rep.R_samples[i];
        const double bound = field.c_growth * std::pow(R, 2.0 - field.alpha);
        w.row({csv::cell(R), csv::cell(rep.envelope_values[i]), csv::cell(bound),
               csv::cell(static_cast<long>(rep.envelope_values[i] <= bound ? 1 : 0))});
    }
    std::cout << "envelope: alpha=" << rep.alpha << " c_fitted=" << rep.c_fitted
              << " satisfied=" << (rep.satisfied ? "yes" : "no") << "\n";
    append_catalog(out_dir, CatalogEntry{utc_timestamp_now(), "envelope", to_hex(cfg.hash()),
                                         out_path.string(), rep.satisfied ? "pass" : "fail"});
    return rep.satisfied ? 0 : 1;
}

}  // namespace fujita

#include "fujita/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using namespace fujita;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("fujita_test_" + std::to_string(std::rand()) + std::to_string(std::rand()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST(FieldFromConfig, Kinds) {
    const RunConfig power = RunConfig::parse_string("n=2\nfield.kind=power\nfield.alpha=1.0\n");
    const CoefficientField f = field_from_config(power);
    EXPECT_EQ(f.kind, FieldKind::PowerIsotropic);
    EXPECT_EQ(f.n, 2);
    EXPECT_DOUBLE_EQ(f.alpha, 1.0);

    const RunConfig cst = RunConfig::parse_string("field.kind=constant\nfield.value=0.5\n");
    EXPECT_EQ(field_from_config(cst).kind, FieldKind::Constant);

    const RunConfig bad = RunConfig::parse_string("field.kind=wavelet\n");
    EXPECT_THROW(field_from_config(bad), ConfigError);
}

TEST(FieldFromConfig, TabulatedFromCsv) {
    TempDir tmp;
    const fs::path table = tmp.path() / "field.csv";
    {
        std::ofstream os(table);
        os << "r,value\n0,1\n5,2\n10,1.5\n";
    }
    const RunConfig cfg = RunConfig::parse_string(
        "field.kind=tabulated\nfield.table=" + table.string() + "\nfield.alpha=2\nfield.c=4\n");
    const CoefficientField f = field_from_config(cfg);
    EXPECT_EQ(f.kind, FieldKind::Tabulated);
    EXPECT_DOUBLE_EQ(f.scalar(0.0, 2.5), 1.5);
}

TEST(SolverFromConfig, RoundTrip) {
    const RunConfig cfg = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=2\nq=2\ngrid.rmax=10\ngrid.nodes=101\n"
        "tend=5\ninit.kind=constant\ninit.amplitude=1\nbc=neumann\nintegrator=rk2\n"
        "dt.cfl=0.5\nblowup.threshold=1e6\n");
    const SolverConfig sc = solver_from_config(cfg);
    EXPECT_EQ(sc.bc, OuterBC::Neumann0);
    EXPECT_EQ(sc.init.kind, InitKind::Constant);
    EXPECT_DOUBLE_EQ(sc.blowup_threshold, 1e6);
    EXPECT_THROW(solver_from_config(RunConfig::parse_string("q=2\nbc=open\n")), ConfigError);
}

TEST(CmdVerifyExact, SupercriticalPasses) {
    TempDir out;
    const RunConfig cfg = RunConfig::parse_string(
        "exact.n=1\nexact.alpha_hat=2\nexact.q=4\nexact.samples=2000\n");
    EXPECT_EQ(cmd_verify_exact(cfg, out.path(), 1), 0);
    const csv::Table t = csv::read_file((out.path() / "verify_exact_n1_ah2_q4.csv").string());
    csv::check_schema(t, {"t", "r", "u", "residual"});
    EXPECT_EQ(t.rows.size(), 2000u);
    for (const auto& row : t.rows) EXPECT_GE(std::stod(row[3]), -1e-10);
}

TEST(CmdVerifyExact, SubcriticalExitsWithMessage) {
    TempDir out;
    const RunConfig cfg =
        RunConfig::parse_string("exact.n=1\nexact.alpha_hat=2\nexact.q=3\nexact.samples=100\n");
    EXPECT_EQ(cmd_verify_exact(cfg, out.path(), 1), 2);
}

TEST(CmdVerifyExact, SublinearRoutesToExponentialSolution) {
    TempDir out;
    const RunConfig cfg =
        RunConfig::parse_string("exact.n=1\nexact.alpha_hat=2\nexact.q=0.5\nexact.samples=500\n");
    EXPECT_EQ(cmd_verify_exact(cfg, out.path(), 1), 0);
    const csv::Table t = csv::read_file((out.path() / "verify_exact_n1_ah2_q0p5.csv").string());
    csv::check_schema(t, {"t", "r", "u", "residual"});
}

TEST(CmdSweep, SingleCellOdeLimit) {
    TempDir out;
    const RunConfig cfg = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=2\nq=2\ngrid.rmax=5\ngrid.nodes=51\n"
        "tend=5\ninit.kind=constant\ninit.amplitude=1\nbc=neumann\n"
        "sweep.q=2\nsweep.amplitudes=1\n");
    EXPECT_EQ(cmd_sweep(cfg, out.path(), 1), 0);
    const csv::Table t = csv::read_file((out.path() / "sweep.csv").string());
    csv::check_schema(t, {"q", "amplitude", "outcome", "t_star", "final_max", "steps"});
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][2], "BlowUp");
    EXPECT_NEAR(std::stod(t.rows[0][3]), 1.0, 0.02);
}

TEST(CmdSweep, DeterministicBytes) {
    const RunConfig cfg = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=2\nq=2\ngrid.rmax=5\ngrid.nodes=51\n"
        "tend=3\ninit.kind=constant\ninit.amplitude=1\nbc=neumann\n"
        "sweep.q=1.5,2\nsweep.amplitudes=0.5,1\n");
    TempDir out1, out2;
    EXPECT_EQ(cmd_sweep(cfg, out1.path(), 2), 0);
    EXPECT_EQ(cmd_sweep(cfg, out2.path(), 1), 0);
    EXPECT_EQ(slurp(out1.path() / "sweep.csv"), slurp(out2.path() / "sweep.csv"));
    EXPECT_FALSE(slurp(out1.path() / "sweep.csv").empty());
}

TEST(CmdCapacity, ReferenceCasePasses) {
    TempDir out;
    const RunConfig cfg = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=2\nq=2\ncapacity.r_list=8,16,32\n");
    EXPECT_EQ(cmd_capacity(cfg, out.path()), 0);
    const csv::Table t = csv::read_file((out.path() / "capacity.csv").string());
    csv::check_schema(t, {"R", "J_time", "J_space_d", "J_space_qnu", "lhs", "rhs", "ratio",
                          "slope_time", "slope_space_d", "slope_space_qnu"});
    EXPECT_EQ(t.rows.size(), 3u);
}

TEST(CmdCapacity, NeedsThreeRadii) {
    TempDir out;
    const RunConfig cfg = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=2\nq=2\ncapacity.r_list=8\n");
    EXPECT_EQ(cmd_capacity(cfg, out.path()), 2);
}

TEST(CmdEnvelope, GrowthBoundReport) {
    TempDir out;
    const RunConfig ok = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=1\nfield.c=2\nenvelope.r_list=2,4,8,16,32,64\n");
    EXPECT_EQ(cmd_envelope(ok, out.path()), 0);
    const csv::Table t = csv::read_file((out.path() / "envelope.csv").string());
    csv::check_schema(t, {"R", "envelope", "bound", "satisfied"});
    EXPECT_EQ(t.rows.size(), 6u);

    TempDir out2;
    const RunConfig tight = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=1\nfield.c=1\nenvelope.r_list=2,4\n");
    EXPECT_EQ(cmd_envelope(tight, out2.path()), 1);  // sqrt(1+R^2) > R near R=2
}

TEST(Catalog, AppendsWithStableHash) {
    TempDir out;
    const RunConfig cfg = RunConfig::parse_string(
        "n=1\nfield.kind=power\nfield.alpha=1\nfield.c=2\nenvelope.r_list=2,4\n");
    EXPECT_EQ(cmd_envelope(cfg, out.path()), 0);
    EXPECT_EQ(cmd_envelope(cfg, out.path()), 0);
    const csv::Table t = csv::read_file((out.path() / "catalog.csv").string());
    csv::check_schema(t, {"timestamp", "subcommand", "config_hash", "output", "summary"});
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][2], t.rows[1][2]);  // identical config, identical hash
    EXPECT_EQ(t.rows[0][1], "envelope");
}

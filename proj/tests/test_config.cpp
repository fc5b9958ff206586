#include "fujita/config.hpp"

#include <gtest/gtest.h>

#include "fujita/numerics.hpp"

using namespace fujita;

TEST(Config, ParsesKeysCommentsAndBlanks) {
    const RunConfig cfg = RunConfig::parse_string(
        "# a comment\n"
        "field.alpha = 1.5\n"
        "\n"
        "q=2\n"
        "init.kind =  gaussian  \n");
    EXPECT_DOUBLE_EQ(cfg.get_double("field.alpha"), 1.5);
    EXPECT_DOUBLE_EQ(cfg.get_double("q"), 2.0);
    EXPECT_EQ(cfg.get_string("init.kind"), "gaussian");
    EXPECT_FALSE(cfg.has("grid.rmax"));
    EXPECT_DOUBLE_EQ(cfg.get_double("grid.rmax", 50.0), 50.0);
}

TEST(Config, MalformedLineNamesTheLine) {
    try {
        RunConfig::parse_string("q=2\nthis is not a pair\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Config, MalformedValueNamesTheKey) {
    const RunConfig cfg = RunConfig::parse_string("q=banana\n");
    try {
        cfg.get_double("q");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("q"), std::string::npos);
    }
    EXPECT_THROW(cfg.get_double("missing.key"), ConfigError);
}

TEST(Config, Lists) {
    const RunConfig cfg = RunConfig::parse_string("sweep.q=1.5, 2.5,3.5\n");
    const std::vector<double> want{1.5, 2.5, 3.5};
    EXPECT_EQ(cfg.get_double_list("sweep.q"), want);
}

TEST(Config, BoolValues) {
    const RunConfig cfg = RunConfig::parse_string("a=1\nb=false\nc=maybe\n");
    EXPECT_TRUE(cfg.get_bool("a"));
    EXPECT_FALSE(cfg.get_bool("b"));
    EXPECT_THROW(cfg.get_bool("c"), ConfigError);
    EXPECT_TRUE(cfg.get_bool("missing", true));
}

TEST(Config, CanonicalizationSortsKeys) {
    const RunConfig a = RunConfig::parse_string("b=2\na=1\n");
    const RunConfig b = RunConfig::parse_string("a=1\nb=2\n");
    EXPECT_EQ(a.canonical_string(), "a=1\nb=2\n");
    EXPECT_EQ(a.canonical_string(), b.canonical_string());
    EXPECT_EQ(a.hash(), b.hash());
    const RunConfig c = RunConfig::parse_string("a=1\nb=3\n");
    EXPECT_NE(a.hash(), c.hash());
}

TEST(Fnv, KnownDigest) {
    // offset basis: digest of the empty string
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(to_hex(0xcbf29ce484222325ull), "cbf29ce484222325");
}

TEST(Fit, LineRecovery) {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3.0, 5.0, 7.0, 9.0};
    const LinearFit f = fit_linear(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Fit, LogLogSlope) {
    std::vector<double> x, y;
    for (double v : {2.0, 4.0, 8.0, 16.0}) {
        x.push_back(v);
        y.push_back(5.0 * std::pow(v, -1.5));
    }
    EXPECT_NEAR(fit_loglog(x, y).slope, -1.5, 1e-12);
    EXPECT_THROW(fit_loglog(std::vector<double>{1.0, -2.0}, std::vector<double>{1.0, 1.0}),
                 std::invalid_argument);
}

TEST(Rng, DeterministicStream) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const double va = a.unit(), vb = b.unit();
        EXPECT_DOUBLE_EQ(va, vb);
        EXPECT_GE(va, 0.0);
        EXPECT_LT(va, 1.0);
    }
}

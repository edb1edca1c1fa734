#include <doctest.h>

#include "qhchain/config.hpp"

using namespace qhc;

TEST_CASE("parse: comments, whitespace and lists") {
    const Config c = Config::parse("# header\nn = 64   # trailing\n\n  n_values = 16, 32 ,64\nbeta.kind=constant\nbeta.offset = 2\n", "t");
    CHECK(c.get_int("n", 0) == 64);
    CHECK(c.get_ints("n_values", {}) == std::vector<int>{16, 32, 64});
    const ChainSpec s = chain_spec_from(c);
    CHECK(s.n == 64);
    CHECK(s.beta(0.3) == 2.0);
    CHECK(c.where("n") == "t:2");
}

TEST_CASE("defaults") {
    const ChainSpec s = chain_spec_from(Config::parse(""));
    CHECK(s.n == 256);
    CHECK(s.beta(0.5) == doctest::Approx(1.5));
    CHECK(s.rbar(0.5) == doctest::Approx(0.5));
    CHECK(s.pbar(0.0) == doctest::Approx(0.5));
    const HydroConfig h = hydro_config_from(Config::parse(""));
    CHECK(h.n_values == std::vector<int>{128, 256, 512, 1024});
    CHECK(h.test_functions.size() == 4);
}

TEST_CASE("diagnostics carry file and line") {
    CHECK_THROWS_WITH_AS(Config::parse("n = 4\nfoo = 1\n", "c.cfg"), doctest::Contains("c.cfg:2"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse("n = 4\nn = 5\n", "c.cfg"), doctest::Contains("duplicate"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse("just text\n", "c.cfg"), doctest::Contains("c.cfg:1"), ValidationError);
    CHECK_THROWS_WITH_AS(chain_spec_from(Config::parse("\nn = ten\n", "c.cfg")), doctest::Contains("c.cfg:2"), ValidationError);
    CHECK_THROWS_WITH_AS(chain_spec_from(Config::parse("mass.min = -1\n", "c.cfg")), doctest::Contains("c.cfg:1"), ValidationError);
    CHECK_THROWS_WITH_AS(chain_spec_from(Config::parse("x\n", "c.cfg")), doctest::Contains("c.cfg:1"), ValidationError);
}

TEST_CASE("beta bounds") {
    try {
        chain_spec_from(Config::parse("beta.min = 0\n", "c.cfg"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.key() == "beta.min");
        CHECK(std::string(e.what()).find("beta.min") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(chain_spec_from(Config::parse("beta.kind = sine\nbeta.amplitude = 2\n", "c.cfg")),
                         doctest::Contains("beta"), ValidationError);
    const Config c = Config::parse("beta.min = 0.5\nbeta.max = 2\n");
    CHECK(beta_bounds_from(c, chain_spec_from(c)) == std::pair{0.5, 2.0});
}

TEST_CASE("experiment builders validate") {
    CHECK_THROWS_AS(hydro_config_from(Config::parse("n_values = 64, 32\n")), ValidationError);
    CHECK_THROWS_AS(hydro_config_from(Config::parse("test_functions = one, bogus\n")), ValidationError);
    CHECK_THROWS_AS(cov_decay_config_from(Config::parse("n = 40\ndecay.d_max = 40\n")), ValidationError);
    CHECK_THROWS_AS(slln_config_from(Config::parse("slln.realizations = 1\n")), ValidationError);
    CHECK_THROWS_AS(fmu_options_from(Config::parse("fmu.route = magic\n")), ValidationError);
    CHECK(cov_decay_config_from(Config::parse("")).spec.n == 512);
    const Config t = Config::parse("mass.kind = custom\nmass.density = 0, 1, 0\nrbar.kind = table\nrbar.values = 0, 1, 0\n");
    const ChainSpec s = chain_spec_from(t);
    CHECK(s.mass_law.kind == MassLaw::Kind::custom);
    CHECK(s.rbar(0.5) == 1.0);
}

TEST_CASE("dump is canonical") {
    Config c = Config::parse("seed = 3\nn = 8\n");
    c.set("classical", "true");
    CHECK(c.dump() == "classical = true\nn = 8\nseed = 3\n");
    CHECK_THROWS(c.set("nope", "1"));
}

#include <doctest.h>

#include <sstream>

#include "cqed/config.hpp"
#include "cqed/io.hpp"

using namespace cqed;

TEST_CASE("key = value parsing") {
  std::istringstream in("# comment\npreset = set2\n\n  tilt=0.0097 # trailing\nmode = semiclassical\n");
  const auto kv = parse_key_values(in);
  REQUIRE(kv.size() == 3);
  CHECK(kv[1] == std::pair<std::string, std::string>{"tilt", "0.0097"});
  const RunConfig c = config_from(kv);
  CHECK(c.preset == "set2");
  CHECK(c.physics.tilt == 0.0097);
  CHECK(c.physics.kappa == preset("set2")->kappa);
  CHECK(c.trajectory.mode == RunMode::semiclassical);
}

TEST_CASE("errors") {
  std::istringstream bad_line("just words\n");
  CHECK_THROWS_AS(parse_key_values(bad_line), ConfigError);
  CHECK_THROWS_AS(config_from({{"nope", "1"}}), ConfigError);
  CHECK_THROWS_AS(config_from({{"kappa", "fast"}}), ConfigError);
  CHECK_THROWS_AS(config_from({{"preset", "set9"}}), ConfigError);
  CHECK_THROWS_AS(config_from({{"truncation", "five"}}), ConfigError);
  CHECK_THROWS_AS(config_from({{"workers", "-1"}}), ConfigError);
}

TEST_CASE("manifest round trip") {
  RunConfig c = default_config("set1");
  c.physics.tilt = 0.017;
  c.physics.delta_a = 1234.5678901234567;
  c.physics.cavity_kind = CavityKind::ring;
  c.physics.truncation = Truncation::three_quanta;
  c.trajectory.veto = Veto{3, 0.5};
  c.trajectory.seed = 0xfeedfacecafebeefULL;
  c.trajectory.duration = 1.0 / 3.0;
  c.trajectory.paired_reference = true;
  c.formula = "mc-weighted";
  const std::string text = manifest_text(c);
  std::istringstream in(text);
  const RunConfig back = config_from(parse_key_values(in));
  CHECK(back.physics == c.physics);
  CHECK(back.trajectory == c.trajectory);
  CHECK(back.formula == c.formula);
  CHECK(manifest_text(back) == text);

  // any edit breaks the content hash
  std::string edited = text;
  edited.replace(edited.find("tilt=0.017"), 10, "tilt=0.018");
  std::istringstream in2(edited);
  CHECK_THROWS_AS(config_from(parse_key_values(in2)), ConfigError);
}

TEST_CASE("veto keys") {
  RunConfig c = config_from({{"veto_max_jumps", "2"}, {"veto_window", "1.5"}});
  REQUIRE(c.trajectory.veto);
  CHECK(c.trajectory.veto->max_jumps == 2);
  CHECK(c.trajectory.veto->window == 1.5);
  c = config_from({{"veto_max_jumps", "0"}});
  CHECK(!c.trajectory.veto);
}

TEST_CASE("g2 csv round trip") {
  G2Curve c = make_curve({0.0, 0.5}, 1e7);
  c.g2 = {0.1, 1.0 / 7.0};
  c.std_error = {0.01, 0.02};
  c.n = {10, 20};
  std::stringstream s;
  write_g2_csv(s, c);
  CHECK(s.str().rfind("tau_kappa,tau_ns,g2,stderr,n\n", 0) == 0);
  const G2Curve back = read_g2_csv(s);
  CHECK(back.g2 == c.g2);
  CHECK(back.tau_ns == c.tau_ns);
  CHECK(back.n == c.n);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
}

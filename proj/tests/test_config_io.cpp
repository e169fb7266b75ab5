#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rsde/config.hpp"
#include "rsde/errors.hpp"
#include "rsde/estimate.hpp"
#include "rsde/path_io.hpp"

namespace rsde {
namespace {

const char* kTable1 = R"(# reflected power drift
drift.kind = power
drift.gamma = 0.5
sigma = 0.2
barrier.a = 0
barrier.b = 3
theta.lo = 0
theta.hi = 10
x0 = 1
theta0 = 2
)";

std::string message_of(const std::string& text, const ConfigOverrides& o = {}) {
  try {
    parse_config_text(text, o);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, Table1ParsesToTwoSidedModel) {
  const auto cfg = parse_config_text(kTable1);
  ASSERT_TRUE(cfg.model.has_value());
  const auto& m = *cfg.model;
  ASSERT_NE(m.drift.as_power(), nullptr);
  EXPECT_EQ(m.drift.as_power()->gamma, 0.5);
  EXPECT_EQ(m.sigma, 0.2);
  EXPECT_TRUE(m.barriers.is_two_sided());
  EXPECT_EQ(m.barriers.a, 0.0);
  EXPECT_EQ(m.barriers.b, 3.0);
  EXPECT_EQ(m.x0, 1.0);
  EXPECT_EQ(cfg.require_theta0(), 2.0);
  EXPECT_GT(m.drift.lipschitz_bound(), 0.0);
}

TEST(Config, Defaults) {
  const auto cfg = parse_config_text(kTable1);
  EXPECT_EQ(cfg.plan.n, 200u);
  EXPECT_EQ(cfg.plan.h, 0.01);
  EXPECT_EQ(cfg.plan.alpha, 0.25);
  EXPECT_EQ(cfg.sim.substeps, 10u);
  EXPECT_EQ(cfg.sim.scheme, Scheme::Lepingle);
  EXPECT_EQ(cfg.sim.seed, 0u);
  EXPECT_EQ(cfg.replications, 200u);
  EXPECT_EQ(cfg.n_values, std::vector<std::size_t>{200});
  EXPECT_EQ(cfg.level, 0.95);
}

TEST(Config, OneSidedWithoutUpperBarrier) {
  const std::string text =
      "drift.kind = power\ndrift.gamma = 0.6666666666666666\nsigma = 0.2\n"
      "barrier.kind = one_sided\nbarrier.a = 0\ntheta.lo = 0\ntheta.hi = 10\nx0 = 1\n";
  const auto cfg = parse_config_text(text);
  EXPECT_FALSE(cfg.model->barriers.is_two_sided());
  const auto inferred = parse_config_text(
      "drift.kind = power\ndrift.gamma = 1\nsigma = 0.2\nbarrier.a = 0\ntheta.lo = 0\ntheta.hi = 10\nx0 = 1\n");
  EXPECT_FALSE(inferred.model->barriers.is_two_sided());
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(message_of(kTable1, {{"sigma", "0"}}).find("sigma"), std::string::npos);
  EXPECT_NE(message_of(kTable1, {{"sigma", "abc"}}).find("sigma"), std::string::npos);
  EXPECT_NE(message_of(kTable1, {{"bogus", "1"}}).find("bogus"), std::string::npos);
  EXPECT_NE(message_of(kTable1, {{"drift.gamma", "1.5"}}).find("drift.gamma"), std::string::npos);
  EXPECT_NE(message_of(kTable1, {{"x0", "4"}}).find("x0"), std::string::npos);
  EXPECT_NE(message_of(kTable1, {{"scheme", "rk4"}}).find("scheme"), std::string::npos);
  EXPECT_NE(message_of(kTable1, {{"n", "-3"}}).find("'n'"), std::string::npos);
  EXPECT_NE(message_of("drift.kind = power\nsigma = 0.2\nbarrier.a = 0\ntheta.lo = 0\ntheta.hi = 1\nx0 = 1\n")
                .find("drift.gamma"), std::string::npos);
  EXPECT_NE(message_of("drift.kind = power\nsigma = 0.2\n").find("barrier.a"), std::string::npos);
  EXPECT_NE(message_of(std::string(kTable1) + "sigma = 0.3\n").find("duplicate"), std::string::npos);
  EXPECT_NE(message_of("drift.kind power\n").find("line 1"), std::string::npos);
}

TEST(Config, OverridesReplaceFileValues) {
  const auto cfg = parse_config_text(kTable1, {{"n", "50"}, {"seed", "9"}, {"scheme", "projection"}});
  EXPECT_EQ(cfg.plan.n, 50u);
  EXPECT_EQ(cfg.sim.seed, 9u);
  EXPECT_EQ(cfg.sim.scheme, Scheme::Projection);
}

TEST(Config, TwoFactor) {
  const auto cfg = parse_config_text(
      "drift.kind = two_factor\nsigma = 0.1\nbarrier.a = 0\nbarrier.b = 3\nx0 = 1\n"
      "two_factor.theta1 = 1\ntwo_factor.theta2 = 1\ntwo_factor.r0 = 0.5\nn_values = 500, 1000\n");
  ASSERT_TRUE(cfg.is_two_factor());
  EXPECT_EQ(cfg.two_factor->y0, 1.0);
  EXPECT_EQ(cfg.two_factor->r0, 0.5);
  EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{500, 1000}));
  EXPECT_EQ(cfg.plan.n, 500u);
  EXPECT_THROW(cfg.require_model(), ConfigError);
}

TEST(Config, LongSampleSizeList) {
  const auto cfg = parse_config_text(std::string(kTable1) + "n_values = 500, 1000, 2500, 5000, 10000, 20000\n");
  EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{500, 1000, 2500, 5000, 10000, 20000}));
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(parse_config("/nonexistent/model.cfg"), ConfigError);
}

TEST(PathCsv, RoundTripIsBitExact) {
  const auto cfg = parse_config_text(kTable1);
  const auto& model = *cfg.model;
  const auto path = simulate_path(model, 2.0, {200, 0.01, 0.25}, SimOptions{Scheme::Lepingle, 10, 42});
  std::stringstream ss;
  write_path_csv(ss, path);
  EXPECT_EQ(ss.str().substr(0, 8), "t,x,l,r\n");
  const auto back = read_path_csv(ss, model.barriers);
  EXPECT_EQ(back.x, path.x);
  EXPECT_EQ(back.l, path.l);
  EXPECT_EQ(back.r, path.r);
  EXPECT_EQ(back.hit_lower, path.hit_lower);
  EXPECT_EQ(nlse_closed_form_power(back, 0.5), nlse_closed_form_power(path, 0.5));
  EXPECT_EQ(fit(back, model).theta_hat, fit(path, model).theta_hat);
}

TEST(PathCsv, OneSidedLayoutAndFileHelpers) {
  const auto barriers = BarrierConfig::one_sided_lower(0.0);
  const auto model = make_model(PowerDrift{0.5}, 0.2, barriers, {0.0, 10.0}, 1.0);
  const auto path = simulate_path(model, 2.0, {100, 0.01, 0.25}, SimOptions{Scheme::Lepingle, 10, 1});
  const auto file = std::filesystem::temp_directory_path() / "rsde_one_sided_path.csv";
  save_path_csv(file, path);
  std::ifstream is(file);
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "t,x,l");
  const auto back = load_path_csv(file, barriers);
  EXPECT_EQ(back.x, path.x);
  EXPECT_EQ(back.l, path.l);
  std::filesystem::remove(file);
}

TEST(PathCsv, MalformedInputsAreDataErrors) {
  const auto two = BarrierConfig::two_sided(0.0, 3.0);
  std::istringstream wrong_header("t,x,l\n0,1,0\n0.01,1,0\n");
  EXPECT_THROW(read_path_csv(wrong_header, two), DataError);
  std::istringstream bad_number("t,x,l,r\n0,1,0,0\n0.01,x,0,0\n");
  EXPECT_THROW(read_path_csv(bad_number, two), DataError);
  std::istringstream outside("t,x,l,r\n0,1,0,0\n0.01,3.5,0,0\n");
  EXPECT_THROW(read_path_csv(outside, two), DataError);
  std::istringstream uneven("t,x,l,r\n0,1,0,0\n0.01,1,0,0\n0.05,1,0,0\n");
  EXPECT_THROW(read_path_csv(uneven, two), DataError);
}

TEST(TwoFactorCsv, RoundTrip) {
  const TwoFactorParams params;
  const auto tf = simulate_two_factor(params, {300, 0.01, 0.25}, SimOptions{Scheme::Lepingle, 10, 3});
  std::stringstream ss;
  write_two_factor_csv(ss, tf);
  EXPECT_EQ(ss.str().substr(0, 16), "t,y,l1,u1,r,l2\n0");
  const auto back = read_two_factor_csv(ss, params.a, params.b);
  EXPECT_EQ(back.y.x, tf.y.x);
  EXPECT_EQ(back.y.r, tf.y.r);
  EXPECT_EQ(back.rate.x, tf.rate.x);
  EXPECT_EQ(back.rate.l, tf.rate.l);
  const auto e1 = estimate_two_factor(tf, 0.1);
  const auto e2 = estimate_two_factor(back, 0.1);
  EXPECT_EQ(e1.theta1.theta_hat, e2.theta1.theta_hat);
  EXPECT_EQ(e1.theta2.theta_hat, e2.theta2.theta_hat);
}

}  // namespace
}  // namespace rsde

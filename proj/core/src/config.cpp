#include "rsde/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "rsde/errors.hpp"

namespace rsde {
namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "drift.kind", "drift.gamma", "drift.c", "drift.lipschitz", "sigma", "barrier.kind",
    "barrier.a", "barrier.b", "theta.lo", "theta.hi", "x0", "theta0", "two_factor.theta1",
    "two_factor.theta2", "two_factor.r0", "n", "h", "alpha", "substeps", "scheme", "seed", "reps",
    "n_values", "level"};

class KeyValues {
 public:
  explicit KeyValues(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string text(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const {
    const std::string raw = text(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size() || !std::isfinite(v)) {
      throw ConfigError("key '" + key + "': malformed number '" + raw + "'");
    }
    return v;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const std::string raw = text(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
      throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + raw + "'");
    }
    return v;
  }

  std::vector<std::size_t> integer_list(const std::string& key) const {
    std::vector<std::size_t> out;
    const std::string raw = text(key);
    for (const auto item : csv::split(raw)) {
      const auto s = csv::trim(item);
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("key '" + key + "': malformed integer list '" + raw + "'");
      }
      out.push_back(v);
    }
    return out;
  }

 private:
  std::map<std::string, std::string> entries_;
};

std::map<std::string, std::string> tokenize(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = csv::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(csv::trim(view.substr(0, eq)));
    const std::string value(csv::trim(view.substr(eq + 1)));
    if (!entries.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  return entries;
}

void check_keys(const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (kKnownKeys.count(key) == 0) throw ConfigError("unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("key '" + key + "' has an empty value");
  }
}

BarrierConfig parse_barriers(const KeyValues& kv) {
  const double a = kv.number("barrier.a");
  std::string kind = kv.has("barrier.kind") ? kv.text("barrier.kind")
                                            : (kv.has("barrier.b") ? "two_sided" : "one_sided");
  try {
    if (kind == "two_sided") return BarrierConfig::two_sided(a, kv.number("barrier.b"));
    if (kind == "one_sided") {
      if (kv.has("barrier.b")) throw ConfigError("key 'barrier.b' is not allowed for one_sided");
      return BarrierConfig::one_sided_lower(a);
    }
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("barrier: ") + e.what());
  }
  throw ConfigError("key 'barrier.kind': unknown kind '" + kind + "'");
}

DriftKind parse_drift(const KeyValues& kv, const std::string& kind) {
  if (kind == "power") {
    const double gamma = kv.number("drift.gamma");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("key 'drift.gamma' must lie in (0, 1]");
    return PowerDrift{gamma};
  }
  if (kind == "mean_reversion") return MeanReversionToOne{};
  if (kind == "shifted") return ShiftedCovariate{kv.number_or("drift.c", 0.0)};
  throw ConfigError("key 'drift.kind': unknown kind '" + kind + "'");
}

template <class F>
auto keyed(const char* key, F&& build) {
  try {
    return build();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.find('\'') != std::string::npos) throw;
    throw ConfigError("key '" + std::string(key) + "': " + what);
  }
}

}  // namespace

const ModelConfig& ExperimentConfig::require_model() const {
  if (!model) throw ConfigError("this operation needs a single-equation model (not two_factor)");
  return *model;
}

double ExperimentConfig::require_theta0() const {
  if (!theta0) throw ConfigError("missing required key 'theta0'");
  return *theta0;
}

ExperimentConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides) {
  auto entries = tokenize(text);
  for (const auto& [key, value] : overrides) entries[key] = value;
  check_keys(entries);
  const KeyValues kv(std::move(entries));

  ExperimentConfig cfg;
  const std::string kind = kv.text("drift.kind");
  const double sigma = kv.number("sigma");
  if (!(sigma > 0.0)) throw ConfigError("key 'sigma' must be > 0");

  if (kind == "two_factor") {
    TwoFactorParams p;
    p.sigma = sigma;
    p.a = kv.number("barrier.a");
    p.b = kv.number("barrier.b");
    p.y0 = kv.number("x0");
    p.r0 = kv.number_or("two_factor.r0", 0.5);
    p.theta1 = kv.number("two_factor.theta1");
    p.theta2 = kv.number("two_factor.theta2");
    keyed("barrier", [&] {
      p.validate();
      return 0;
    });
    cfg.two_factor = p;
  } else {
    const BarrierConfig barriers = parse_barriers(kv);
    const ThetaDomain domain{kv.number("theta.lo"), kv.number("theta.hi")};
    keyed("theta.lo", [&] {
      domain.validate();
      return 0;
    });
    DriftKind drift = parse_drift(kv, kind);
    const double bound = kv.has("drift.lipschitz")
                             ? kv.number("drift.lipschitz")
                             : default_lipschitz_bound(drift, barriers, domain);
    ModelConfig model{keyed("drift.lipschitz", [&] { return DriftSpec(std::move(drift), bound); }),
                      sigma, barriers, domain, kv.number("x0")};
    keyed("x0", [&] {
      model.validate();
      return 0;
    });
    cfg.model = std::move(model);
    if (kv.has("theta0")) {
      const double theta0 = kv.number("theta0");
      if (!domain.contains(theta0)) throw ConfigError("key 'theta0' must lie inside (theta.lo, theta.hi)");
      cfg.theta0 = theta0;
    }
  }

  cfg.n_values = kv.has("n_values") ? kv.integer_list("n_values") : std::vector<std::size_t>{};
  const std::size_t default_n = cfg.n_values.empty() ? 200 : cfg.n_values.front();
  cfg.plan.n = kv.has("n") ? kv.unsigned_integer("n") : default_n;
  cfg.plan.h = kv.number_or("h", 0.01);
  cfg.plan.alpha = kv.number_or("alpha", 0.25);
  if (cfg.n_values.empty()) cfg.n_values.push_back(cfg.plan.n);
  keyed("n", [&] {
    cfg.plan.validate();
    return 0;
  });
  for (const std::size_t n : cfg.n_values) {
    if (n < 2) throw ConfigError("key 'n_values': every sample size must be >= 2");
  }

  cfg.sim.substeps = kv.has("substeps") ? kv.unsigned_integer("substeps") : 10;
  if (cfg.sim.substeps < 1) throw ConfigError("key 'substeps' must be >= 1");
  const std::string scheme = kv.has("scheme") ? kv.text("scheme") : "lepingle";
  if (scheme == "lepingle") {
    cfg.sim.scheme = Scheme::Lepingle;
  } else if (scheme == "projection") {
    cfg.sim.scheme = Scheme::Projection;
  } else {
    throw ConfigError("key 'scheme': unknown scheme '" + scheme + "'");
  }
  cfg.sim.seed = kv.has("seed") ? kv.unsigned_integer("seed") : 0;

  cfg.replications = kv.has("reps") ? kv.unsigned_integer("reps") : 200;
  if (cfg.replications < 2) throw ConfigError("key 'reps' must be >= 2");
  cfg.level = kv.number_or("level", 0.95);
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError("key 'level' must lie in (0, 1)");
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& file, const ConfigOverrides& overrides) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot read config file '" + file.string() + "'");
  std::ostringstream text;
  text << is.rdbuf();
  return parse_config_text(text.str(), overrides);
}

}  // namespace rsde

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "simroc/errors.hpp"
#include "simroc/experiment.hpp"
#include "simroc/rng.hpp"

namespace simroc {

using nlohmann::json;

const char* to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::kSphereRoc: return "sphere-roc";
    case ExperimentKind::kFastRates: return "fast-rates";
    case ExperimentKind::kMmcSubsample: return "mmc-subsample";
  }
  return "?";
}

std::string BudgetSpec::label() const {
  if (full()) return "full";
  return format_double(*fraction);
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& key) {
  return seed ^ fnv1a64(key);
}

namespace {

// Collects every problem instead of stopping at the first.
class Checker {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  void keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
      fail(path, "must be an object");
      return;
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : obj.items()) {
      if (!ok.count(k)) fail(path + "." + k, "unknown key");
    }
  }

  std::optional<double> number(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      fail(path + "." + key, "must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::uint64_t> count(const json& obj, const char* key, const std::string& path,
                                     std::uint64_t min = 1) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(path + "." + key, "must be a non-negative integer");
      return std::nullopt;
    }
    const auto c = v.get<std::uint64_t>();
    if (c < min) {
      fail(path + "." + key, "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return c;
  }

  void open_unit(const std::optional<double>& v, const std::string& path) {
    if (v && !(*v > 0.0 && *v < 1.0)) fail(path, "must lie in (0,1)");
  }

  std::vector<double> number_list(const json& obj, const char* key, const std::string& path) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
      fail(path + "." + key, "must be a non-empty array");
      return out;
    }
    for (const auto& e : v) {
      if (!e.is_number()) {
        fail(path + "." + key, "entries must be numbers");
        return {};
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> count_list(const json& obj, const char* key, const std::string& path,
                                      std::size_t min = 1) {
    std::vector<std::size_t> out;
    for (double d : number_list(obj, key, path)) {
      if (d < static_cast<double>(min) || d != std::floor(d)) {
        fail(path + "." + key, "entries must be integers >= " + std::to_string(min));
        return {};
      }
      out.push_back(static_cast<std::size_t>(d));
    }
    return out;
  }
};

ExperimentConfig build(const json& j, Checker& ck) {
  ExperimentConfig c;
  ck.keys(j, "config",
          {"experiment", "seed", "output_dir", "workers", "tolerance", "sphere", "fast_rates", "mmc"});
  if (!j.is_object()) return c;

  if (!j.contains("experiment") || !j.at("experiment").is_string()) {
    ck.fail("config.experiment", "required string: sphere-roc, fast-rates or mmc-subsample");
  } else {
    const auto e = j.at("experiment").get<std::string>();
    if (e == "sphere-roc") c.experiment = ExperimentKind::kSphereRoc;
    else if (e == "fast-rates") c.experiment = ExperimentKind::kFastRates;
    else if (e == "mmc-subsample") c.experiment = ExperimentKind::kMmcSubsample;
    else ck.fail("config.experiment", "unknown experiment '" + e + "'");
  }
  if (auto s = ck.count(j, "seed", "config", 0)) c.seed = *s;
  if (j.contains("output_dir")) {
    if (j.at("output_dir").is_string()) c.output_dir = j.at("output_dir").get<std::string>();
    else ck.fail("config.output_dir", "must be a string");
  }
  if (auto w = ck.count(j, "workers", "config")) c.workers = static_cast<unsigned>(*w);

  if (j.contains("tolerance")) {
    const auto& t = j.at("tolerance");
    ck.keys(t, "config.tolerance", {"vc_dim", "kappa", "universal_c", "delta"});
    if (auto v = ck.number(t, "vc_dim", "config.tolerance")) {
      if (*v > 0.0) c.vc_dim_override = *v;
      else ck.fail("config.tolerance.vc_dim", "must be > 0");
    }
    if (auto v = ck.number(t, "kappa", "config.tolerance")) c.tolerance.kappa = *v;
    if (auto v = ck.number(t, "universal_c", "config.tolerance")) c.tolerance.universal_c = *v;
    if (auto v = ck.number(t, "delta", "config.tolerance")) c.tolerance.delta = *v;
    ck.open_unit(c.tolerance.kappa, "config.tolerance.kappa");
    ck.open_unit(c.tolerance.delta, "config.tolerance.delta");
    if (!(c.tolerance.universal_c > 0.0)) ck.fail("config.tolerance.universal_c", "must be > 0");
  }

  if (j.contains("sphere")) {
    const auto& s = j.at("sphere");
    ck.keys(s, "config.sphere", {"n", "alphas"});
    if (auto n = ck.count(s, "n", "config.sphere", 4)) c.sphere.n = *n;
    if (s.contains("alphas")) c.sphere.alphas = ck.number_list(s, "alphas", "config.sphere");
  }
  for (double a : c.sphere.alphas) ck.open_unit(a, "config.sphere.alphas");

  if (j.contains("fast_rates")) {
    const auto& f = j.at("fast_rates");
    const std::string p = "config.fast_rates";
    ck.keys(f, p, {"alpha", "m", "a", "n", "repetitions", "quantile"});
    if (auto v = ck.number(f, "alpha", p)) c.fast_rates.alpha = *v;
    if (auto v = ck.number(f, "m", p)) c.fast_rates.m = *v;
    if (f.contains("a")) c.fast_rates.a_values = ck.number_list(f, "a", p);
    if (f.contains("n")) c.fast_rates.n_values = ck.count_list(f, "n", p, 4);
    if (auto r = ck.count(f, "repetitions", p)) c.fast_rates.repetitions = *r;
    if (auto q = ck.number(f, "quantile", p)) c.fast_rates.quantile = *q;
  }
  ck.open_unit(c.fast_rates.alpha, "config.fast_rates.alpha");
  ck.open_unit(c.fast_rates.quantile, "config.fast_rates.quantile");
  if (c.experiment == ExperimentKind::kFastRates) {
    for (double a : c.fast_rates.a_values) {
      try {
        (void)fast_rates_C(c.fast_rates.alpha, c.fast_rates.m, a);
      } catch (const Error& e) {
        ck.fail("config.fast_rates", e.what());
      }
    }
    std::set<std::size_t> distinct(c.fast_rates.n_values.begin(), c.fast_rates.n_values.end());
    if (distinct.size() < 2) ck.fail("config.fast_rates.n", "needs >= 2 distinct sample sizes");
  }

  if (j.contains("mmc")) {
    const auto& m = j.at("mmc");
    const std::string p = "config.mmc";
    ck.keys(m, p, {"source", "mixture", "mnist", "n", "budgets", "runs", "n_test", "solver", "write_traces"});
    if (m.contains("source")) {
      const auto src = m.at("source").is_string() ? m.at("source").get<std::string>() : "";
      if (src != "synthetic" && src != "mnist") ck.fail(p + ".source", "must be 'synthetic' or 'mnist'");
      else c.mmc.source = src;
    }
    if (m.contains("mixture")) {
      const auto& x = m.at("mixture");
      ck.keys(x, p + ".mixture", {"num_classes", "dim", "mean_spread", "noise_min", "noise_max", "layout_seed"});
      if (auto v = ck.count(x, "num_classes", p + ".mixture", 2)) c.mmc.mixture.num_classes = static_cast<int>(*v);
      if (auto v = ck.count(x, "dim", p + ".mixture")) c.mmc.mixture.dim = static_cast<int>(*v);
      if (auto v = ck.number(x, "mean_spread", p + ".mixture")) c.mmc.mixture.mean_spread = *v;
      if (auto v = ck.number(x, "noise_min", p + ".mixture")) c.mmc.mixture.noise_min = *v;
      if (auto v = ck.number(x, "noise_max", p + ".mixture")) c.mmc.mixture.noise_max = *v;
      if (auto v = ck.count(x, "layout_seed", p + ".mixture", 0)) c.mmc.mixture.layout_seed = *v;
    }
    try {
      c.mmc.mixture.validate();
    } catch (const Error& e) {
      ck.fail(p + ".mixture", e.what());
    }
    if (m.contains("mnist")) {
      const auto& x = m.at("mnist");
      ck.keys(x, p + ".mnist", {"train_images", "train_labels", "test_images", "test_labels", "pca_explained"});
      MnistSource src;
      auto path = [&](const char* key, std::filesystem::path& out) {
        if (x.is_object() && x.contains(key) && x.at(key).is_string()) out = x.at(key).get<std::string>();
        else ck.fail(p + ".mnist." + key, "required path string");
      };
      path("train_images", src.train_images);
      path("train_labels", src.train_labels);
      path("test_images", src.test_images);
      path("test_labels", src.test_labels);
      if (auto v = ck.number(x, "pca_explained", p + ".mnist")) {
        if (*v > 0.0 && *v <= 1.0) src.pca_explained = *v;
        else ck.fail(p + ".mnist.pca_explained", "must lie in (0,1]");
      }
      c.mmc.mnist = src;
    }
    if (c.mmc.source == "mnist" && !c.mmc.mnist) ck.fail(p + ".mnist", "required when source is 'mnist'");
    if (m.contains("n")) c.mmc.n_values = ck.count_list(m, "n", p, 4);
    if (m.contains("budgets")) {
      c.mmc.budgets.clear();
      const auto& b = m.at("budgets");
      if (!b.is_array() || b.empty()) ck.fail(p + ".budgets", "must be a non-empty array");
      else {
        for (const auto& e : b) {
          if (e.is_string() && e.get<std::string>() == "full") c.mmc.budgets.push_back({std::nullopt});
          else if (e.is_number() && e.get<double>() > 0.0 && e.get<double>() <= 1.0)
            c.mmc.budgets.push_back({e.get<double>()});
          else ck.fail(p + ".budgets", "entries must be fractions in (0,1] or \"full\"");
        }
      }
    }
    if (auto r = ck.count(m, "runs", p)) c.mmc.runs = *r;
    if (auto r = ck.count(m, "n_test", p, 4)) c.mmc.n_test = *r;
    if (m.contains("write_traces")) {
      if (m.at("write_traces").is_boolean()) c.mmc.write_traces = m.at("write_traces").get<bool>();
      else ck.fail(p + ".write_traces", "must be a boolean");
    }
    if (m.contains("solver")) {
      const auto& s = m.at("solver");
      ck.keys(s, p + ".solver", {"step_size", "max_iters", "tol", "init"});
      if (auto v = ck.number(s, "step_size", p + ".solver")) c.mmc.solver.step_size = *v;
      if (auto v = ck.count(s, "max_iters", p + ".solver")) c.mmc.solver.max_iters = *v;
      if (auto v = ck.number(s, "tol", p + ".solver")) c.mmc.solver.tol = *v;
      if (s.is_object() && s.contains("init")) {
        const auto init = s.at("init").is_string() ? s.at("init").get<std::string>() : "";
        if (init == "identity") c.mmc.solver.init = MmcInit::kScaledIdentity;
        else if (init == "zero") c.mmc.solver.init = MmcInit::kZero;
        else ck.fail(p + ".solver.init", "must be 'identity' or 'zero'");
      }
      if (!(c.mmc.solver.step_size > 0.0)) ck.fail(p + ".solver.step_size", "must be > 0");
      if (!(c.mmc.solver.tol > 0.0)) ck.fail(p + ".solver.tol", "must be > 0");
    }
  }
  return c;
}

}  // namespace

std::vector<std::string> validate_config(const json& j) {
  Checker ck;
  (void)build(j, ck);
  return ck.errors;
}

ExperimentConfig parse_config(const json& j) {
  Checker ck;
  ExperimentConfig c = build(j, ck);
  if (!ck.errors.empty()) {
    std::ostringstream msg;
    msg << "invalid config (" << ck.errors.size() << " problem" << (ck.errors.size() > 1 ? "s" : "") << ")";
    for (const auto& e : ck.errors) msg << "\n  " << e;
    throw Error(ErrorCode::kInvalidInput, msg.str());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.string();
  j["workers"] = c.workers;
  j["tolerance"] = {{"kappa", c.tolerance.kappa},
                    {"universal_c", c.tolerance.universal_c},
                    {"delta", c.tolerance.delta}};
  if (c.vc_dim_override) j["tolerance"]["vc_dim"] = *c.vc_dim_override;
  switch (c.experiment) {
    case ExperimentKind::kSphereRoc:
      j["sphere"] = {{"n", c.sphere.n}, {"alphas", c.sphere.alphas}};
      break;
    case ExperimentKind::kFastRates:
      j["fast_rates"] = {{"alpha", c.fast_rates.alpha},
                         {"m", c.fast_rates.m},
                         {"a", c.fast_rates.a_values},
                         {"n", c.fast_rates.n_values},
                         {"repetitions", c.fast_rates.repetitions},
                         {"quantile", c.fast_rates.quantile}};
      break;
    case ExperimentKind::kMmcSubsample: {
      json budgets = json::array();
      for (const auto& b : c.mmc.budgets) {
        budgets.push_back(b.full() ? json("full") : json(*b.fraction));
      }
      j["mmc"] = {{"source", c.mmc.source},
                  {"mixture", to_json(c.mmc.mixture)},
                  {"n", c.mmc.n_values},
                  {"budgets", budgets},
                  {"runs", c.mmc.runs},
                  {"n_test", c.mmc.n_test},
                  {"write_traces", c.mmc.write_traces},
                  {"solver",
                   {{"step_size", c.mmc.solver.step_size},
                    {"max_iters", c.mmc.solver.max_iters},
                    {"tol", c.mmc.solver.tol},
                    {"init", c.mmc.solver.init == MmcInit::kZero ? "zero" : "identity"}}}};
      if (c.mmc.mnist) {
        j["mmc"]["mnist"] = {{"train_images", c.mmc.mnist->train_images.string()},
                             {"train_labels", c.mmc.mnist->train_labels.string()},
                             {"test_images", c.mmc.mnist->test_images.string()},
                             {"test_labels", c.mmc.mnist->test_labels.string()},
                             {"pca_explained", c.mmc.mnist->pca_explained}};
      }
      break;
    }
  }
  return j;
}

}  // namespace simroc

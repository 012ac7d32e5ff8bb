#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <fstream>
#include <sstream>

#include "simroc/errors.hpp"
#include "simroc/eval.hpp"
#include "simroc/experiment.hpp"
#include "simroc/idx.hpp"
#include "simroc/pca.hpp"
#include "simroc/rng.hpp"

using namespace simroc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int code_of(auto f) {
  try {
    f();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return 0;
}

std::string what_of(auto f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

Matrix gaussian(int r, int c, CounterRng& rng) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("simroc-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("idx decode examples") {
  std::vector<std::uint8_t> img{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 1, 2, 3, 4, 5, 6, 7, 255};
  const auto t = parse_idx(img);
  CHECK(t.dims == std::vector<std::uint32_t>{2, 2, 2});
  CHECK(t.count() == 2);
  CHECK(t.item_size() == 4);
  CHECK(t.data.back() == 255);
  CHECK(t.magic() == kIdxImagesMagic);

  std::vector<std::uint8_t> lab{0, 0, 8, 1, 0, 0, 0, 3, 5, 0, 4};
  const auto l = parse_idx(lab);
  CHECK(l.data == std::vector<std::uint8_t>{5, 0, 4});
  CHECK(l.magic() == kIdxLabelsMagic);

  const auto ds = idx_to_dataset(t, parse_idx(std::vector<std::uint8_t>{0, 0, 8, 1, 0, 0, 0, 2, 9, 0}));
  CHECK(ds.size() == 2);
  CHECK(ds.dim() == 4);
  CHECK(ds.class_of(0) == 9);  // digit 9 -> class 10, stored 0-based
  CHECK(ds.row(1)[3] == 1.0);
  CHECK(ds.row(0)[0] == doctest::Approx(1.0 / 255));
  CHECK(code_of([&] { idx_to_dataset(t, l); }) == static_cast<int>(ErrorCode::kFormat));
}

TEST_CASE("idx errors carry offsets") {
  std::vector<std::uint8_t> img{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 1, 2, 3, 4, 5, 6, 7, 8};
  auto bad = img;
  bad[3] = 0x02;
  CHECK(code_of([&] { parse_idx(bad); }) == static_cast<int>(ErrorCode::kFormat));
  CHECK(what_of([&] { parse_idx(bad); }).find("offset 0") != std::string::npos);

  auto cut = std::vector<std::uint8_t>(img.begin(), img.begin() + 20);
  CHECK(code_of([&] { parse_idx(cut); }) == static_cast<int>(ErrorCode::kFormat));
  CHECK(what_of([&] { parse_idx(cut); }).find("offset 20") != std::string::npos);

  cut.assign(img.begin(), img.begin() + 10);
  CHECK(what_of([&] { parse_idx(cut); }).find("offset 10") != std::string::npos);

  CHECK(code_of([&] { parse_idx(std::vector<std::uint8_t>{0, 0}); }) == static_cast<int>(ErrorCode::kFormat));
  auto extra = img;
  extra.push_back(0);
  CHECK(what_of([&] { parse_idx(extra); }).find("offset 24") != std::string::npos);
  CHECK(code_of([] { read_idx("/nonexistent/file.idx"); }) == static_cast<int>(ErrorCode::kIo));
}

TEST_CASE("idx round trip") {
  const auto dir = scratch("idx");
  CounterRng rng(4);
  IdxTensor t;
  t.dims = {7, 3, 5};
  for (int i = 0; i < 105; ++i) t.data.push_back(static_cast<std::uint8_t>(rng.uniform() * 256));
  write_idx(dir / "x.idx", t);
  const auto back = read_idx(dir / "x.idx");
  CHECK(back.dims == t.dims);
  CHECK(back.data == t.data);
  CHECK(encode_idx(back) == encode_idx(t));

  IdxTensor wrong;
  wrong.dims = {2, 2};
  wrong.data = {1, 2, 3, 4};
  CHECK(code_of([&] { encode_idx(wrong); }) == static_cast<int>(ErrorCode::kInvalidInput));
  fs::remove_all(dir);
}

TEST_CASE("pca ranks") {
  CounterRng rng(8);
  const int n = 400;
  // exact 2-D plane in R^10
  const Matrix basis = gaussian(10, 2, rng);
  RowMatrix x(n, 10);
  for (int i = 0; i < n; ++i) {
    x.row(i) = (basis * Eigen::Vector2d(rng.normal(), rng.normal())).transpose();
    x.row(i).array() += 1.5;
  }
  auto r = pca_fit_transform(x, 0.9);
  CHECK(r.model.rank() == 2);
  CHECK(pca_fit_transform(x, 1.0).model.rank() == 2);
  CHECK(r.reduced.rows() == n);
  CHECK(r.reduced.cols() == 2);
  const Matrix gram = r.model.components.transpose() * r.model.components;
  CHECK((gram - Matrix::Identity(2, 2)).norm() < 1e-12);

  // rank 4 covariance, target 1
  const Matrix b4 = gaussian(10, 4, rng);
  for (int i = 0; i < n; ++i) {
    x.row(i) = (b4 * Eigen::Vector4d(rng.normal(), rng.normal(), rng.normal(), rng.normal())).transpose();
  }
  CHECK(pca_fit_transform(x, 1.0).model.rank() == 4);

  RowMatrix iso(20000, 5);
  for (int i = 0; i < iso.rows(); ++i)
    for (int j = 0; j < 5; ++j) iso(i, j) = rng.normal();
  const auto ri = pca_fit_transform(iso, 0.9);
  CHECK(ri.model.rank() == 5);
  double s = 0;
  for (double v : ri.model.explained_variance_ratio) s += v;
  CHECK(s == doctest::Approx(1.0));

  CHECK(pca_fit_transform(RowMatrix::Zero(5, 3), 0.9).model.rank() == 1);
  CHECK(code_of([] { pca_fit_transform(RowMatrix::Zero(1, 3), 0.9); }) == static_cast<int>(ErrorCode::kEmptySample));
  CHECK(code_of([&] { pca_fit_transform(iso, 0.0); }) == static_cast<int>(ErrorCode::kInvalidInput));
}

TEST_CASE("pca reconstruction error equals discarded eigenvalues") {
  CounterRng rng(21);
  const int n = 300, d = 8;
  RowMatrix x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal() * (j + 1);
  for (double target : {0.5, 0.8, 0.95}) {
    const auto r = pca_fit_transform(x, target);
    const RowMatrix back = (r.reduced * r.model.components.transpose()).rowwise() + r.model.mean.transpose();
    const double err = (x - back).squaredNorm() / (n - 1);
    double discarded = 0;
    for (std::size_t k = r.model.rank(); k < r.model.eigenvalues.size(); ++k) discarded += r.model.eigenvalues[k];
    CHECK(std::abs(err - discarded) <= 1e-8 * discarded);
    // smallest rank: one fewer component would fall short
    double cum = 0, total = 0;
    for (double e : r.model.eigenvalues) total += e;
    for (std::size_t k = 0; k + 1 < r.model.rank(); ++k) cum += r.model.eigenvalues[k];
    CHECK(cum / total < target);
    CHECK((cum + r.model.eigenvalues[r.model.rank() - 1]) / total >= target - 1e-12);
  }
}

TEST_CASE("format_double and derive_seed") {
  CHECK(format_double(0.05) == "0.05");
  CHECK(format_double(0.15) == "0.15");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
  CHECK(BudgetSpec{std::nullopt}.label() == "full");
  CHECK(BudgetSpec{0.05}.label() == "0.05");

  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  CHECK((derive_seed(1, "a") ^ derive_seed(2, "a")) == 3);
  // FNV-1a 64 of the empty string is the offset basis
  CHECK(derive_seed(0, "") == 0xcbf29ce484222325ULL);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(json::parse(R"({"experiment": "fast-rates", "seed": 9,
      "fast_rates": {"a": [0.1, 0.9], "n": [64, 128], "repetitions": 10}})"));
  CHECK(c.experiment == ExperimentKind::kFastRates);
  CHECK(c.seed == 9);
  CHECK(c.fast_rates.a_values == std::vector<double>{0.1, 0.9});
  CHECK(c.fast_rates.repetitions == 10);
  CHECK(c.fast_rates.alpha == 0.26);
  const auto round = parse_config(to_json(c));
  CHECK(to_json(round) == to_json(c));

  const auto m = parse_config(json::parse(R"({"experiment": "mmc-subsample",
      "mmc": {"n": [500], "budgets": [0.1, "full"], "runs": 2, "solver": {"init": "zero"}}})"));
  REQUIRE(m.mmc.budgets.size() == 2);
  CHECK(m.mmc.budgets[1].full());
  CHECK(*m.mmc.budgets[0].fraction == 0.1);

  CHECK(validate_config(json::parse(R"({"experiment": "sphere-roc"})")).empty());
  const auto errs = validate_config(json::parse(R"({"experiment": "sphere-roc", "seed": -1, "bogus": 1,
      "sphere": {"n": 0, "alphas": [0.5, 1.5]}, "workers": "x"})"));
  CHECK(errs.size() >= 5);
  CHECK(!validate_config(json::parse(R"({"experiment": "nope"})")).empty());
  CHECK(!validate_config(json::parse(R"({"experiment": "mmc-subsample", "mmc": {"budgets": [0]}})")).empty());
  CHECK(!validate_config(json::parse(R"({"experiment": "mmc-subsample", "mmc": {"budgets": [1.5]}})")).empty());
  CHECK(validate_config(json::parse(R"({"experiment": "mmc-subsample", "mmc": {"budgets": [1]}})")).empty());
  CHECK(!validate_config(json::parse(R"({"experiment": "fast-rates", "fast_rates": {"n": [64, 64]}})")).empty());
  CHECK(!validate_config(json::parse("[1,2]")).empty());
  CHECK(code_of([] { parse_config(json::parse(R"({"experiment": "sphere-roc", "sphere": {"n": 0}})")); }) ==
        static_cast<int>(ErrorCode::kInvalidInput));

  const auto dir = scratch("cfg");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(code_of([&] { load_config(dir / "bad.json"); }) == static_cast<int>(ErrorCode::kFormat));
  CHECK(code_of([&] { load_config(dir / "missing.json"); }) == static_cast<int>(ErrorCode::kIo));
  fs::remove_all(dir);
}

TEST_CASE("runs are reproducible and independent of worker count") {
  const auto dir = scratch("run");
  std::vector<ExperimentConfig> configs(3);
  configs[0].experiment = ExperimentKind::kSphereRoc;
  configs[0].sphere.n = 80;
  configs[0].sphere.alphas = {0.45, 0.6};
  configs[1].experiment = ExperimentKind::kFastRates;
  configs[1].fast_rates.a_values = {0.2, 0.8};
  configs[1].fast_rates.n_values = {32, 64};
  configs[1].fast_rates.repetitions = 12;
  configs[2].experiment = ExperimentKind::kMmcSubsample;
  configs[2].mmc.n_values = {150};
  configs[2].mmc.runs = 2;
  configs[2].mmc.n_test = 150;
  configs[2].mmc.budgets = {{0.2}, {std::nullopt}};
  configs[2].mmc.write_traces = true;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    auto& c = configs[k];
    c.seed = 77;
    std::vector<std::vector<std::string>> bytes;
    for (unsigned w : {1u, 1u, 3u}) {
      c.workers = w;
      c.output_dir = dir / (std::to_string(k) + "-" + std::to_string(bytes.size()));
      const auto b = run_experiment(c);
      CHECK_MESSAGE(b.ok, to_string(c.experiment));
      CHECK(fs::exists(c.output_dir / "run.json"));
      const auto meta = json::parse(slurp(c.output_dir / "run.json"));
      CHECK(meta["seed"] == 77);
      CHECK(meta["status"] == "complete");
      CHECK(meta.contains("decisions"));
      std::vector<std::string> csv;
      for (const auto& f : b.files)
        if (f.extension() == ".csv") csv.push_back(slurp(f));
      CHECK(!csv.empty());
      bytes.push_back(csv);
    }
    CHECK(bytes[0] == bytes[1]);
    CHECK(bytes[0] == bytes[2]);
  }
  const auto mmc_meta = json::parse(slurp(dir / "2-0" / "run.json"));
  CHECK(mmc_meta.dump().find("tolerance_slow") != std::string::npos);
  CHECK(mmc_meta.dump().find("tolerance_incomplete") != std::string::npos);
  CHECK(slurp(dir / "2-0" / "mmc.csv").rfind("n,B,run,test_objective,test_constraint,neg_pairs_per_iter\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("infeasible sphere level is reported as a partial run") {
  const auto dir = scratch("partial");
  ExperimentConfig c;
  c.sphere.n = 60;
  c.sphere.alphas = {0.05, 0.6};
  c.output_dir = dir;
  const auto b = run_experiment(c);
  CHECK(!b.ok);
  REQUIRE(!b.errors.empty());
  CHECK(b.errors[0].find("0.05") != std::string::npos);
  CHECK(json::parse(slurp(dir / "run.json"))["status"] == "partial");
  fs::remove_all(dir);
}

TEST_CASE("sphere study: lower alpha wins at low false positive rates") {
  const auto dir = scratch("sphere");
  ExperimentConfig c;
  c.seed = 2018;
  c.sphere.alphas = {0.32, 0.5};
  c.output_dir = dir;
  REQUIRE(run_experiment(c).ok);

  std::map<double, std::vector<RocPoint>> curves;
  std::istringstream roc(slurp(dir / "sphere_roc.csv"));
  std::string line;
  std::getline(roc, line);
  while (std::getline(roc, line)) {
    double a, f, t;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &f, &t) == 3);
    curves[a].push_back({f, t});
  }
  REQUIRE(curves.size() == 2);
  const RocCurve low(curves[0.32]), high(curves[0.5]);
  double gap = 0, low_fpr_gain = 0;
  for (int k = 0; k <= 100; ++k) gap = std::max(gap, std::abs(roc_at(low, k / 100.0) - roc_at(high, k / 100.0)));
  for (int k = 1; k <= 10; ++k) low_fpr_gain += roc_at(low, k / 100.0) - roc_at(high, k / 100.0);
  CHECK(gap > 0);
  CHECK(low_fpr_gain > 0);

  std::istringstream sols(slurp(dir / "sphere_solutions.csv"));
  std::getline(sols, line);
  int rows = 0;
  while (std::getline(sols, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 10);
    CHECK(std::stod(f[6]) <= std::stod(f[0]) + 1e-9);  // train R- <= alpha
    ++rows;
  }
  CHECK(rows == 2);
  fs::remove_all(dir);
}

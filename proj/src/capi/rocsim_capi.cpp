#include "rocsim/rocsim.h"

#include <cstring>
#include <fstream>
#include <string>

#include "simroc/errors.hpp"
#include "simroc/experiment.hpp"
#include "simroc/idx.hpp"
#include "simroc/risk.hpp"
#include "simroc/solvers.hpp"
#include "simroc/version.hpp"

struct rocsim_dataset {
  simroc::LabeledDataset data;
};

struct rocsim_model {
  simroc::SimilarityModel model;
};

namespace {

thread_local std::string g_last_error;

rocsim_status fail(rocsim_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Converts every exception at the boundary into a status code.
template <class F>
rocsim_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return ROCSIM_OK;
  } catch (const simroc::Error& e) {
    return fail(static_cast<rocsim_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ROCSIM_ERR_FORMAT, e.what());
  } catch (const std::exception& e) {
    return fail(ROCSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ROCSIM_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw simroc::Error(simroc::ErrorCode::kInvalidInput, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

simroc::Matrix square(const double* a, std::size_t d) {
  require(a != nullptr && d > 0, "matrix pointer is null or d = 0");
  return Eigen::Map<const simroc::Matrix>(a, static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

void copy_out(const simroc::Matrix& m, double* out) {
  Eigen::Map<simroc::Matrix>(out, m.rows(), m.cols()) = m;
}

simroc::ExperimentConfig load(const char* path) {
  require(path != nullptr, "config path is null");
  return simroc::load_config(path);
}

}  // namespace

extern "C" {

const char* rocsim_version(void) { return simroc::kVersionString; }

const char* rocsim_status_string(rocsim_status status) {
  if (status == ROCSIM_OK) return "ok";
  if (status == ROCSIM_ERR_INTERNAL) return "internal error";
  if (status >= ROCSIM_ERR_INVALID_INPUT && status <= ROCSIM_ERR_IO) {
    return simroc::to_string(static_cast<simroc::ErrorCode>(static_cast<int>(status)));
  }
  return "unknown status";
}

const char* rocsim_last_error(void) { return g_last_error.c_str(); }

void rocsim_string_free(char* s) { delete[] s; }

rocsim_status rocsim_dataset_create(const double* features, const int* labels, size_t n, size_t d, int num_classes,
                                    rocsim_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(n == 0 || (features != nullptr && labels != nullptr), "features or labels is null");
    simroc::RowMatrix x = Eigen::Map<const simroc::RowMatrix>(features, static_cast<Eigen::Index>(n),
                                                               static_cast<Eigen::Index>(d));
    std::vector<int> y(labels, labels + n);
    *out = new rocsim_dataset{simroc::LabeledDataset(std::move(x), std::move(y), num_classes)};
  });
}

void rocsim_dataset_free(rocsim_dataset* ds) { delete ds; }

rocsim_status rocsim_dataset_shape(const rocsim_dataset* ds, size_t* n, size_t* d, int* num_classes) {
  return guarded([&] {
    require(ds != nullptr, "dataset is null");
    if (n) *n = ds->data.size();
    if (d) *d = ds->data.dim();
    if (num_classes) *num_classes = ds->data.num_classes();
  });
}

rocsim_status rocsim_model_bilinear(const double* a, size_t d, rocsim_model** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new rocsim_model{simroc::make_bilinear(square(a, d))};
  });
}

rocsim_status rocsim_model_threshold(double t, rocsim_model** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new rocsim_model{simroc::make_threshold(t)};
  });
}

rocsim_status rocsim_model_mahalanobis(const double* a, size_t d, rocsim_model** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new rocsim_model{simroc::make_mahalanobis(square(a, d))};
  });
}

void rocsim_model_free(rocsim_model* m) { delete m; }

rocsim_status rocsim_model_score(const rocsim_model* m, const double* x, const double* x_prime, size_t d,
                                 double* out) {
  return guarded([&] {
    require(m && x && x_prime && out, "null argument");
    *out = simroc::score(m->model, {x, d}, {x_prime, d});
  });
}

#define ROCSIM_RISK_ARGS                                    \
  require(ds != nullptr && m != nullptr, "null handle");    \
  require(out != nullptr, "out is null")

rocsim_status rocsim_risk_positive(const rocsim_dataset* ds, const rocsim_model* m, double* out) {
  return guarded([&] {
    ROCSIM_RISK_ARGS;
    *out = simroc::positive_risk_complete(ds->data, m->model).value;
  });
}

rocsim_status rocsim_risk_negative(const rocsim_dataset* ds, const rocsim_model* m, double* out) {
  return guarded([&] {
    ROCSIM_RISK_ARGS;
    *out = simroc::negative_risk_complete(ds->data, m->model).value;
  });
}

rocsim_status rocsim_risk_negative_pair_sampled(const rocsim_dataset* ds, const rocsim_model* m, uint64_t budget,
                                                uint64_t seed, double* out) {
  return guarded([&] {
    ROCSIM_RISK_ARGS;
    *out = simroc::negative_risk_pair_sampled(ds->data, m->model, budget, seed).value;
  });
}

rocsim_status rocsim_risk_negative_tuple_sampled(const rocsim_dataset* ds, const rocsim_model* m, uint64_t budget,
                                                 uint64_t seed, double* out) {
  return guarded([&] {
    ROCSIM_RISK_ARGS;
    *out = simroc::negative_risk_tuple_sampled(ds->data, m->model, budget, seed).value;
  });
}

#undef ROCSIM_RISK_ARGS

rocsim_status rocsim_pair_moments(const rocsim_dataset* ds, double* p_out, double* n_out) {
  return guarded([&] {
    require(ds && p_out && n_out, "null argument");
    const auto pm = simroc::compute_P_N(ds->data);
    copy_out(pm.p, p_out);
    copy_out(pm.n, n_out);
  });
}

rocsim_status rocsim_solve_kkt(const double* p, const double* n, size_t d, double alpha, double* a_out,
                               double* lambda, double* gamma, rocsim_kkt_case* case_tag) {
  return guarded([&] {
    require(a_out != nullptr, "a_out is null");
    const auto sol = simroc::solve_bilinear_kkt(square(p, d), square(n, d), alpha);
    copy_out(sol.a, a_out);
    if (lambda) *lambda = sol.lambda;
    if (gamma) *gamma = sol.gamma;
    if (case_tag) *case_tag = static_cast<rocsim_kkt_case>(static_cast<int>(sol.case_tag));
  });
}

rocsim_status rocsim_threshold_scan(const rocsim_dataset* ds, double alpha, double* t_hat, double* r_plus,
                                    double* r_minus) {
  return guarded([&] {
    require(ds && t_hat, "null argument");
    const auto r = simroc::solve_threshold_scan(ds->data, alpha);
    *t_hat = r.t_hat;
    if (r_plus) *r_plus = r.r_plus_emp;
    if (r_minus) *r_minus = r.r_minus_emp;
  });
}

rocsim_status rocsim_mmc(const rocsim_dataset* ds, const rocsim_mmc_options* opts, double* a_out,
                         uint64_t* iterations, int* converged) {
  return guarded([&] {
    require(ds && a_out, "null argument");
    simroc::MmcConfig cfg;
    if (opts) {
      if (opts->step_size > 0) cfg.step_size = opts->step_size;
      if (opts->max_iters > 0) cfg.max_iters = opts->max_iters;
      if (opts->tol > 0) cfg.tol = opts->tol;
      if (opts->tuple_budget > 0) cfg.tuple_budget = opts->tuple_budget;
      cfg.seed = opts->seed;
    }
    const auto r = simroc::mmc_projected_gradient(ds->data, cfg);
    copy_out(r.a, a_out);
    if (iterations) *iterations = r.iterations;
    if (converged) *converged = r.converged ? 1 : 0;
  });
}

rocsim_status rocsim_validate_config(const char* path, char** report) {
  std::vector<std::string> problems;
  const rocsim_status s = guarded([&] {
    require(path != nullptr && report != nullptr, "null argument");
    std::ifstream in(path);
    if (!in) throw simroc::Error(simroc::ErrorCode::kIo, std::string("cannot open config ") + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw simroc::Error(simroc::ErrorCode::kFormat, std::string("not valid JSON: ") + e.what());
    }
    problems = simroc::validate_config(j);
    std::string text;
    for (const auto& p : problems) text += p + "\n";
    *report = dup_string(text);
  });
  if (s != ROCSIM_OK) return s;
  if (!problems.empty()) return fail(ROCSIM_ERR_INVALID_INPUT, problems.front());
  return ROCSIM_OK;
}

rocsim_status rocsim_run(const char* config_path, const rocsim_run_overrides* overrides, char** summary) {
  simroc::ArtifactBundle bundle;
  const rocsim_status s = guarded([&] {
    require(summary != nullptr, "summary is null");
    auto cfg = load(config_path);
    if (overrides) {
      if (overrides->has_seed) cfg.seed = overrides->seed;
      if (overrides->workers > 0) cfg.workers = overrides->workers;
      if (overrides->output_dir) cfg.output_dir = overrides->output_dir;
    }
    bundle = simroc::run_experiment(cfg);
    *summary = dup_string(bundle.metadata.dump(2));
  });
  if (s != ROCSIM_OK) return s;
  if (!bundle.ok) return fail(ROCSIM_ERR_NUMERICAL, "run is partial: " + bundle.errors.front());
  return ROCSIM_OK;
}

rocsim_status rocsim_idx_info(const char* path, char** info) {
  return guarded([&] {
    require(path != nullptr && info != nullptr, "null argument");
    const auto t = simroc::read_idx(path);
    char magic[11];
    std::snprintf(magic, sizeof magic, "0x%08x", t.magic());
    const nlohmann::json j = {{"path", path},
                              {"magic", magic},
                              {"kind", t.dims.size() == 1 ? "labels" : "images"},
                              {"dims", t.dims},
                              {"count", t.count()},
                              {"item_size", t.item_size()}};
    *info = dup_string(j.dump(2));
  });
}

}  // extern "C"

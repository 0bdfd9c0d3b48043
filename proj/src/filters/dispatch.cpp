#include <chrono>

#include "nano/errors.hpp"
#include "nano/filters.hpp"

namespace nano {

namespace {

struct FilterName {
  FilterId id;
  const char* name;
};

constexpr FilterName kNames[] = {
    {FilterId::kKf, "kf"},          {FilterId::kEkf, "ekf"},
    {FilterId::kIekf, "iekf"},      {FilterId::kUkf, "ukf"},
    {FilterId::kPlf, "plf"},        {FilterId::kNano, "nano"},
    {FilterId::kNanoNoPd, "nano-nopd"}, {FilterId::kNanoEkf, "nano-ekf"},
    {FilterId::kNanoChol, "nano-chol"},
};

bool is_nano(FilterId id) {
  return id == FilterId::kNano || id == FilterId::kNanoNoPd || id == FilterId::kNanoEkf ||
         id == FilterId::kNanoChol;
}

class UpdateTimer {
 public:
  UpdateTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

const std::vector<FilterId>& all_filter_ids() {
  static const std::vector<FilterId> ids = [] {
    std::vector<FilterId> v;
    for (const auto& entry : kNames) v.push_back(entry.id);
    return v;
  }();
  return ids;
}

std::string to_string(FilterId id) {
  for (const auto& entry : kNames) {
    if (entry.id == id) return entry.name;
  }
  return "?";
}

FilterId parse_filter_id(std::string_view text) {
  for (const auto& entry : kNames) {
    if (text == entry.name) return entry.id;
  }
  throw ConfigError("unknown filter '" + std::string(text) + "'");
}

NanoConfig nano_config_for(FilterId id, const NanoConfig& base) {
  NanoConfig cfg = base;
  switch (id) {
    case FilterId::kNano:
      // The configurable variant; its defaults are Gauss–Newton, direct, prior init.
      break;
    case FilterId::kNanoNoPd:
      cfg.hessian = HessianMode::kExact;
      cfg.cov_update = CovUpdate::kDirect;
      cfg.init = InitMode::kPrior;
      break;
    case FilterId::kNanoEkf:
      cfg.hessian = HessianMode::kExact;
      cfg.cov_update = CovUpdate::kDirect;
      cfg.init = InitMode::kEkf;
      break;
    case FilterId::kNanoChol:
      cfg.hessian = HessianMode::kGaussNewton;
      cfg.cov_update = CovUpdate::kCholeskyFactor;
      cfg.init = InitMode::kPrior;
      break;
    default:
      break;
  }
  return cfg;
}

void check_compatible(FilterId id, const StateSpaceModel& model, const NanoConfig& base) {
  if (id == FilterId::kKf && !model.linear_form()) {
    throw ModelNotLinear("filter 'kf' requires a linear-Gaussian model; '" + model.name() +
                         "' is nonlinear");
  }
  const bool needs_exact = is_nano(id) && nano_config_for(id, base).hessian == HessianMode::kExact;
  if (needs_exact && !model.has_measurement_hessian()) {
    throw MissingHessian("filter '" + to_string(id) + "' needs the measurement Hessian of '" +
                         model.name() + "'");
  }
}

StepResult filter_step(FilterId id, const GaussianBelief& belief, const Vector& u, const Vector& y,
                       int t, const FilterContext& ctx) {
  const StateSpaceModel& model = ctx.model;
  const int time_index = t - 1;
  StepResult result;
  UpdateDiagnostics& diag = result.diagnostics;

  switch (id) {
    case FilterId::kKf: {
      check_compatible(id, model);
      const LinearForm form = *model.linear_form();
      GaussianBelief prior;
      prior.mean = form.a * belief.mean;
      if (form.b.cols() > 0) prior.mean += form.b * u;
      prior.cov = symmetrize(form.a * belief.cov * form.a.transpose() + model.process_cov());
      const UpdateTimer timer;
      result.belief = linear_update(prior, y, form.h, Vector::Zero(form.h.rows()), model.measurement_cov());
      diag.update_ms = timer.elapsed_ms();
      diag.iterations = 1;
      break;
    }
    case FilterId::kEkf: {
      const GaussianBelief prior = ekf_predict(belief, u, time_index, model);
      const UpdateTimer timer;
      result.belief = ekf_update(prior, y, model);
      diag.update_ms = timer.elapsed_ms();
      diag.iterations = 1;
      break;
    }
    case FilterId::kIekf: {
      const GaussianBelief prior = ekf_predict(belief, u, time_index, model);
      const UpdateTimer timer;
      result.belief = iekf_update(prior, y, model, ctx.nano.gamma, ctx.nano.max_iters, &diag.iterations);
      diag.update_ms = timer.elapsed_ms();
      break;
    }
    case FilterId::kUkf: {
      const GaussianBelief prior = sigma_point_predict(belief, u, time_index, model, ctx.rule);
      const UpdateTimer timer;
      result.belief = ukf_update(prior, y, model, ctx.rule);
      diag.update_ms = timer.elapsed_ms();
      diag.iterations = 1;
      break;
    }
    case FilterId::kPlf: {
      const GaussianBelief prior = sigma_point_predict(belief, u, time_index, model, ctx.rule);
      const UpdateTimer timer;
      result.belief =
          plf_update(prior, y, model, ctx.rule, ctx.nano.gamma, ctx.nano.max_iters, &diag.iterations);
      diag.update_ms = timer.elapsed_ms();
      break;
    }
    case FilterId::kNano:
    case FilterId::kNanoNoPd:
    case FilterId::kNanoEkf:
    case FilterId::kNanoChol: {
      const GaussianBelief prior = nano_predict(belief, u, time_index, model, ctx.rule);
      const NanoConfig cfg = nano_config_for(id, ctx.nano);
      const UpdateTimer timer;
      try {
        NanoResult r = nano_update(prior, y, model, ctx.rule, cfg);
        result.belief = std::move(r.posterior);
        diag = r.diagnostics;
      } catch (const PDFailure&) {
        result.belief = prior;
        diag.pd_failure = true;
      }
      diag.update_ms = timer.elapsed_ms();
      break;
    }
  }
  return result;
}

}  // namespace nano

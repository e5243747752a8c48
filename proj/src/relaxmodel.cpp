#include "nmrdiscord/relaxmodel.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "nmrdiscord/correlations.hpp"
#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

constexpr double kLogLo = -8.0;
constexpr double kLogHi = 6.0;
constexpr double kStartLo = -5.0;
constexpr double kStartHi = 2.0;
constexpr int kStartsPerAxis = 5;

void require_model_args(double t, const RelaxModelParams& p, const char* who) {
  if (!(t >= 0.0) || !(p.lambda1 > 0.0) || !(p.lambda2 > 0.0)) {
    std::ostringstream os;
    os << who << ": need t >= 0 and positive rates, got t = " << t << ", lambda1 = " << p.lambda1
       << ", lambda2 = " << p.lambda2;
    throw PreconditionError(os.str());
  }
}

struct Problem {
  std::span<const FidelitySeries> data;

  double residual(double u1, double u2) const {
    RelaxModelParams p;
    p.lambda1 = std::pow(10.0, std::clamp(u1, kLogLo, kLogHi));
    p.lambda2 = std::pow(10.0, std::clamp(u2, kLogLo, kLogHi));
    double sum = 0.0;
    for (const auto& s : data) {
      for (const auto& pt : s.points) {
        const double r = model_value(s.kind, pt.t, p) - pt.value;
        sum += r * r;
      }
    }
    return sum;
  }
};

double objective(const gsl_vector* v, void* params) {
  const auto* prob = static_cast<const Problem*>(params);
  return prob->residual(gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

struct Local {
  double u1, u2, residual, start_residual;
};

Local descend(const Problem& prob, double u1, double u2, int max_iter) {
  gsl_multimin_function fn{&objective, 2, const_cast<Problem*>(&prob)};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(2), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(2),
                                                               &gsl_vector_free);
  gsl_vector_set(x.get(), 0, u1);
  gsl_vector_set(x.get(), 1, u2);
  gsl_vector_set_all(step.get(), 0.5);
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2),
      &gsl_multimin_fminimizer_free);
  const double start = prob.residual(u1, u2);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), 1e-12) == GSL_SUCCESS) break;
  }
  const double b1 = std::clamp(gsl_vector_get(s->x, 0), kLogLo, kLogHi);
  const double b2 = std::clamp(gsl_vector_get(s->x, 1), kLogLo, kLogHi);
  return {b1, b2, prob.residual(b1, b2), start};
}

}  // namespace

void FidelitySeries::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].t) || !std::isfinite(points[i].value)) {
      std::ostringstream os;
      os << "FidelitySeries: point " << i << " is not finite";
      throw PreconditionError(os.str());
    }
    if (i > 0 && !(points[i].t > points[i - 1].t)) {
      std::ostringstream os;
      os << "FidelitySeries: times must strictly increase (point " << i << ")";
      throw PreconditionError(os.str());
    }
  }
}

double model_fidelity(double t, const RelaxModelParams& p) {
  require_model_args(t, p, "model_fidelity");
  const double a = std::exp(-p.lambda1 * t);
  return 1.0 / std::sqrt(1.0 + 0.5 * a * a);
}

double model_attenuated_fidelity(double t, const RelaxModelParams& p) {
  require_model_args(t, p, "model_attenuated_fidelity");
  return std::sqrt(2.0 / 3.0) * std::exp(-p.lambda2 * t);
}

double model_discord(double t, const RelaxModelParams& p) {
  require_model_args(t, p, "model_discord");
  return discord_bd(bd_project(relaxation_model_state(t, p)).r);
}

double model_value(SeriesKind kind, double t, const RelaxModelParams& p) {
  return kind == SeriesKind::Fidelity ? model_fidelity(t, p) : model_attenuated_fidelity(t, p);
}

FitResult fit_lambdas(const FidelitySeries& data, double xi, const FitOptions& opt) {
  if (data.kind != SeriesKind::Attenuated) {
    throw PreconditionError("fit_lambdas: expected an attenuated-fidelity series");
  }
  return fit_lambdas(std::span<const FidelitySeries>(&data, 1), xi, opt);
}

FitResult fit_lambdas(std::span<const FidelitySeries> data, double xi, const FitOptions& opt) {
  if (!(xi > 0.0)) throw PreconditionError("fit_lambdas: xi must be positive");
  std::size_t n = 0;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  FitResult out;
  for (const auto& s : data) {
    s.validate();
    n += s.points.size();
    for (const auto& pt : s.points) {
      if (pt.t > 0.0) t_min = std::min(t_min, pt.t);
      t_max = std::max(t_max, pt.t);
    }
    if (s.kind == SeriesKind::Fidelity) out.lambda1_identifiable = true;
    if (s.kind == SeriesKind::Attenuated) out.lambda2_identifiable = true;
  }
  if (n < 4) {
    std::ostringstream os;
    os << "fit_lambdas: need at least 4 data points, got " << n;
    throw PreconditionError(os.str());
  }
  if (!(t_max >= 100.0 * t_min)) {
    throw PreconditionError("fit_lambdas: data must span at least two decades in time");
  }

  gsl_set_error_handler_off();
  const Problem prob{data};
  bool have = false;
  bool improved = false;
  Local best{};
  for (int i = 0; i < kStartsPerAxis; ++i) {
    for (int j = 0; j < kStartsPerAxis; ++j) {
      const double step = (kStartHi - kStartLo) / (kStartsPerAxis - 1);
      const Local l = descend(prob, kStartLo + i * step, kStartLo + j * step, opt.max_iterations);
      if (l.start_residual - l.residual >= 1e-12) improved = true;
      const bool better = !have || l.residual < best.residual ||
                          (l.residual == best.residual &&
                           (l.u1 < best.u1 || (l.u1 == best.u1 && l.u2 < best.u2)));
      if (better) {
        best = l;
        have = true;
      }
    }
  }

  out.lambda1 = std::pow(10.0, best.u1);
  out.lambda2 = std::pow(10.0, best.u2);
  out.residual = best.residual;
  out.rms = std::sqrt(best.residual / static_cast<double>(n));
  if (!improved && out.rms > 10.0 * opt.noise_floor) {
    std::ostringstream os;
    os << "FitDivergence: no start lowered the residual; rms " << out.rms << " exceeds 10 x noise floor "
       << opt.noise_floor;
    throw FitDivergence(os.str());
  }
  const double edge = 1e-6;
  out.lambda1_at_boundary = best.u1 <= kLogLo + edge || best.u1 >= kLogHi - edge;
  out.lambda2_at_boundary = best.u2 <= kLogLo + edge || best.u2 >= kLogHi - edge;
  RelaxModelParams p;
  p.xi = xi;
  p.lambda1 = out.lambda1;
  p.lambda2 = out.lambda2;
  for (const auto& s : data) {
    for (const auto& pt : s.points) {
      const double m = model_value(s.kind, pt.t, p);
      out.model_values.push_back(m);
      out.point_residuals.push_back(m - pt.value);
    }
  }
  return out;
}

}  // namespace nmrdiscord

// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/learners.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

namespace negofs {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char p, char q) {
           return std::tolower(static_cast<unsigned char>(p)) ==
                  std::tolower(static_cast<unsigned char>(q));
         });
}

// x^T diag(sigma) x
double weighted_square(const std::vector<double>& sigma, const SparseVector& x) {
  double v = 0.0;
  for (const auto& e : x) v += sigma[e.index] * e.value * e.value;
  return v;
}

// diag(sigma) x
SparseVector sigma_times(const std::vector<double>& sigma,
                         const SparseVector& x) {
  std::vector<Entry> out;
  out.reserve(x.l0_norm());
  for (const auto& e : x) {
    const double v = sigma[e.index] * e.value;
    if (std::abs(v) >= kZeroTolerance) out.push_back({e.index, v});
  }
  return SparseVector::from_sorted_unchecked(x.dimension(), std::move(out));
}

// sigma_i -= beta * sigma_i^2 * x_i^2, the diagonal of Sigma x x^T Sigma.
void shrink_sigma(std::vector<double>& sigma, const SparseVector& x,
                  double beta) {
  for (const auto& e : x) {
    double& s = sigma[e.index];
    s -= beta * s * s * e.value * e.value;
  }
}

// Closed-form step size shared by CW and SCW-I.
double cw_alpha(double margin, double variance, double phi) {
  const double psi = 1.0 + phi * phi / 2.0;
  const double zeta = 1.0 + phi * phi;
  const double root = std::sqrt(margin * margin * phi * phi * phi * phi / 4.0 +
                                variance * phi * phi * zeta);
  return std::max(0.0, (-margin * psi + root) / (variance * zeta));
}

// Confidence-weighted covariance shrink for the diagonal model. Algebraically
// this is sigma_i -= beta * sigma_i^2 * x_i^2, rewritten so an aggressive step
// cannot cancel a coordinate to exactly zero.
void cw_shrink_sigma(std::vector<double>& sigma, const SparseVector& x,
                     double alpha, double variance, double phi) {
  const double avp = alpha * variance * phi;
  const double sqrt_u =
      2.0 * variance / (avp + std::sqrt(avp * avp + 4.0 * variance));
  const double denom = sqrt_u + avp;
  for (const auto& e : x) {
    double& s = sigma[e.index];
    const double rest = std::max(0.0, variance - s * e.value * e.value);
    s *= std::min(1.0, (sqrt_u + alpha * phi * rest) / denom);
  }
}

void require_dimension(const LearnerState& s, const SparseVector& x) {
  if (s.w.dimension() != x.dimension()) {
    throw std::invalid_argument("instance dimension " +
                                std::to_string(x.dimension()) +
                                " does not match model dimension " +
                                std::to_string(s.w.dimension()));
  }
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kPetrun: return "PETRUN";
    case Variant::kRand: return "RAND";
    case Variant::kFofs: return "FOFS";
    case Variant::kOgd: return "OGD";
    case Variant::kPa: return "PA";
    case Variant::kRomma: return "ROMMA";
    case Variant::kAlma: return "ALMA";
    case Variant::kSop: return "SOP";
    case Variant::kCw: return "CW";
    case Variant::kArow: return "AROW";
    case Variant::kScw: return "SCW";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (iequals(name, variant_name(v))) return v;
  }
  std::string valid;
  for (Variant v : kAllVariants) {
    if (!valid.empty()) valid += ", ";
    valid += variant_name(v);
  }
  throw std::invalid_argument("unknown learner variant '" + std::string(name) +
                              "' (valid: " + valid + ")");
}

bool is_second_order(Variant v) {
  return v == Variant::kSop || v == Variant::kCw || v == Variant::kArow ||
         v == Variant::kScw;
}

void LearnerConfig::validate(std::size_t dimension) const {
  if (budget.value() > dimension) {
    throw std::invalid_argument("budget " + std::to_string(budget.value()) +
                                " exceeds dimension " +
                                std::to_string(dimension));
  }
  if (!(eta > 0.0) || !(lambda > 0.0) || !(r > 0.0) || !(C > 0.0))
    throw std::invalid_argument("learning rates and regularizers must be positive");
  if (!(confidence > 0.5 && confidence < 1.0))
    throw std::invalid_argument("confidence must lie in (0.5, 1)");
  if (!(alpha_margin > 0.0 && alpha_margin <= 1.0))
    throw std::invalid_argument("alpha_margin must lie in (0, 1]");
}

LearnerState initial_state(const LearnerConfig& cfg, std::size_t dimension) {
  cfg.validate(dimension);
  LearnerState s;
  s.w = SparseVector(dimension);
  if (is_second_order(cfg.variant)) s.sigma.assign(dimension, 1.0);
  s.rng = Rng(cfg.seed);
  return s;
}

Prediction predict(const LearnerState& state, const SparseVector& x) {
  require_dimension(state, x);
  const double margin = dot(state.w, x);
  return {sign_of(margin), margin};
}

bool update_petrun(LearnerState& s, const LearnerConfig& cfg,
                   const SparseVector& x, int y) {
  if (x.empty() || y * dot(s.w, x) > 0.0) return false;
  s.w = truncate(add_scaled(s.w, y, x), cfg.budget);
  return true;
}

bool update_rand(LearnerState& s, const LearnerConfig& cfg,
                 const SparseVector& x, int y) {
  if (x.empty() || y * dot(s.w, x) > 0.0) return false;
  const SparseVector candidate = add_scaled(s.w, y, x);
  const auto prefix =
      permutation_prefix(s.w.dimension(), cfg.budget.value(), s.rng);
  std::vector<Index> keep(prefix.begin(), prefix.end());
  s.w = restrict_to(candidate, keep);
  return true;
}

bool update_fofs(LearnerState& s, const LearnerConfig& cfg,
                 const SparseVector& x, int y) {
  if (x.empty()) return false;
  const double ym = y * dot(s.w, x);
  if (cfg.fofs_margin_trigger ? ym >= 1.0 : ym > 0.0) return false;
  const SparseVector stepped =
      add_scaled(scaled(s.w, 1.0 - cfg.lambda * cfg.eta), cfg.eta * y, x);
  s.w = truncate(project_l2_ball(stepped, cfg.lambda), cfg.budget);
  return true;
}

bool update_first_order(LearnerState& s, const LearnerConfig& cfg,
                        const SparseVector& x, int y) {
  if (x.empty()) return false;
  const double m = dot(s.w, x);
  const double ym = y * m;
  switch (cfg.variant) {
    case Variant::kOgd:
      if (ym >= 1.0) return false;
      s.w = add_scaled(s.w, cfg.eta * y, x);
      break;
    case Variant::kPa: {
      const double loss = std::max(0.0, 1.0 - ym);
      if (loss <= 0.0) return false;
      const double tau = std::min(cfg.C, loss / squared_norm(x));
      s.w = add_scaled(s.w, tau * y, x);
      break;
    }
    case Variant::kRomma: {
      if (ym > 0.0) return false;
      const double xx = squared_norm(x);
      const double ww = squared_norm(s.w);
      const double denom = xx * ww - m * m;
      if (s.w.empty() || denom <= 1e-12 * xx * ww) {
        s.w = add_scaled(s.w, y, x);
      } else {
        const double c = (xx * ww - ym) / denom;
        const double d = ww * (1.0 - ym) / denom;
        s.w = add_scaled(scaled(s.w, c), d * y, x);
      }
      break;
    }
    case Variant::kAlma: {
      const double p_minus_1 = 1.0;  // ALMA_2
      const double big_b = 1.0 / cfg.alpha_margin;
      const double big_c = std::sqrt(2.0);
      const double k = static_cast<double>(s.alma_k);
      const double xnorm = l2_norm(x);
      const double threshold =
          (1.0 - cfg.alpha_margin) * big_b * std::sqrt(p_minus_1) / std::sqrt(k);
      if (threshold - ym / xnorm <= 0.0) return false;
      const double eta = big_c / (std::sqrt(p_minus_1) * std::sqrt(k));
      SparseVector w = add_scaled(s.w, eta * y / xnorm, x);
      const double wnorm = l2_norm(w);
      if (wnorm > 1.0) w = scaled(w, 1.0 / wnorm);
      s.w = std::move(w);
      ++s.alma_k;
      break;
    }
    default:
      throw std::invalid_argument("update_first_order: not a first-order variant");
  }
  s.w = truncate(s.w, cfg.budget);
  return true;
}

bool update_second_order(LearnerState& s, const LearnerConfig& cfg,
                         const SparseVector& x, int y) {
  if (x.empty()) return false;
  const double ym = y * dot(s.w, x);
  switch (cfg.variant) {
    case Variant::kSop: {
      if (ym > 0.0) return false;
      for (const auto& e : x) {
        double& sg = s.sigma[e.index];
        sg = sg / (1.0 + sg * e.value * e.value / cfg.r);
      }
      s.w = add_scaled(s.w, y, sigma_times(s.sigma, x));
      break;
    }
    case Variant::kArow: {
      const double v = weighted_square(s.sigma, x);
      const double beta = 1.0 / (v + cfg.r);
      const double alpha = std::max(0.0, 1.0 - ym) * beta;
      if (alpha > 0.0) s.w = add_scaled(s.w, alpha * y, sigma_times(s.sigma, x));
      shrink_sigma(s.sigma, x, beta);
      break;
    }
    case Variant::kCw:
    case Variant::kScw: {
      const double phi = normal_quantile(cfg.confidence);
      const double v = weighted_square(s.sigma, x);
      double alpha;
      if (cfg.variant == Variant::kScw) {
        if (phi * std::sqrt(v) - ym <= 0.0) return false;
        alpha = std::min(cfg.C, cw_alpha(ym, v, phi));
      } else {
        alpha = cw_alpha(ym, v, phi);
      }
      if (alpha <= 0.0) return false;
      s.w = add_scaled(s.w, alpha * y, sigma_times(s.sigma, x));
      cw_shrink_sigma(s.sigma, x, alpha, v, phi);
      break;
    }
    default:
      throw std::invalid_argument("update_second_order: not a second-order variant");
  }
  s.w = truncate(s.w, cfg.budget);
  return true;
}

Prediction step(LearnerState& s, const LearnerConfig& cfg,
                const SparseVector& x, int y) {
  const Prediction p = predict(s, x);
  if (p.sign != y) ++s.mistakes;
  const std::size_t work = s.w.l0_norm() + x.l0_norm();
  CostMeter meter(cfg.timing);
  bool changed = false;
  switch (cfg.variant) {
    case Variant::kPetrun: changed = update_petrun(s, cfg, x, y); break;
    case Variant::kRand: changed = update_rand(s, cfg, x, y); break;
    case Variant::kFofs: changed = update_fofs(s, cfg, x, y); break;
    case Variant::kOgd:
    case Variant::kPa:
    case Variant::kRomma:
    case Variant::kAlma: changed = update_first_order(s, cfg, x, y); break;
    case Variant::kSop:
    case Variant::kCw:
    case Variant::kArow:
    case Variant::kScw: changed = update_second_order(s, cfg, x, y); break;
  }
  if (changed) {
    s.cumulative_time += meter.stop(work);
    ++s.updates;
  }
  ++s.t;
  return p;
}

Learner::Learner(LearnerConfig cfg, std::size_t dimension)
    : cfg_(cfg), state_(initial_state(cfg_, dimension)) {}

void Learner::set_weights(SparseVector w) {
  if (w.dimension() != state_.w.dimension())
    throw std::invalid_argument("broadcast vector dimension mismatch");
  state_.w = std::move(w);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace negofs

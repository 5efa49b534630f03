// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

// Dense straight-line reimplementation of every learner update, written
// against Eigen vectors. Used as an equivalence oracle for the sparse code.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "negofs/learners.hpp"
#include "negofs/random.hpp"
#include "negofs/sparse_vector.hpp"

namespace oracle {

using Eigen::VectorXd;

// Inverse normal CDF at 0.7, from an external table.
inline constexpr double kPhi07 = 0.52440051270804067;

inline VectorXd to_dense(const negofs::SparseVector& v) {
  VectorXd d = VectorXd::Zero(static_cast<Eigen::Index>(v.dimension()));
  for (const auto& e : v) d[e.index] = e.value;
  return d;
}

inline negofs::SparseVector to_sparse(const VectorXd& d) {
  std::vector<negofs::Entry> entries;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] != 0.0) entries.push_back({static_cast<negofs::Index>(i), d[i]});
  }
  return negofs::SparseVector::from_entries(static_cast<std::size_t>(d.size()),
                                            std::move(entries));
}

// Zero tiny entries, then keep the B largest magnitudes, lower index first on
// ties.
// Plain index-order accumulation. ROMMA's ill-conditioned steps amplify
// summation-order rounding, so reductions avoid vectorized reordering.
inline double seq_dot(const VectorXd& a, const VectorXd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double seq_sq(const VectorXd& a) { return seq_dot(a, a); }
inline double seq_norm(const VectorXd& a) { return std::sqrt(seq_sq(a)); }

inline void dense_truncate(VectorXd& w, std::size_t budget) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) < 1e-15) w[i] = 0.0;
  }
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) idx.push_back(i);
  }
  if (idx.size() <= budget) return;
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(w[a]) > std::abs(w[b]);
  });
  for (std::size_t k = budget; k < idx.size(); ++k) w[idx[k]] = 0.0;
}

struct DenseLearner {
  negofs::LearnerConfig cfg;
  VectorXd w;
  VectorXd sigma;
  std::size_t mistakes = 0;
  double alma_k = 1.0;
  negofs::Rng rng;

  DenseLearner(const negofs::LearnerConfig& c, std::size_t d)
      : cfg(c),
        w(VectorXd::Zero(static_cast<Eigen::Index>(d))),
        sigma(VectorXd::Ones(static_cast<Eigen::Index>(d))),
        rng(c.seed) {}

  double phi() const { return cfg.confidence == 0.7 ? kPhi07 : negofs::normal_quantile(cfg.confidence); }

  void step(const VectorXd& x, int y) {
    const double m = seq_dot(w, x);
    const int yhat = m > 0.0 ? 1 : -1;
    if (yhat != y) ++mistakes;
    if (seq_sq(x) == 0.0) return;
    const double ym = y * m;
    const std::size_t B = cfg.budget.value();
    using negofs::Variant;
    switch (cfg.variant) {
      case Variant::kPetrun:
        if (ym <= 0.0) {
          w += y * x;
          dense_truncate(w, B);
        }
        break;
      case Variant::kRand:
        if (ym <= 0.0) {
          w += y * x;
          const std::size_t n = static_cast<std::size_t>(w.size());
          std::vector<std::size_t> perm(n);
          std::iota(perm.begin(), perm.end(), std::size_t{0});
          for (std::size_t i = 0; i < std::min(B, n); ++i) {
            const std::size_t j = i + rng.uniform_below(n - i);
            std::swap(perm[i], perm[j]);
          }
          VectorXd masked = VectorXd::Zero(w.size());
          for (std::size_t i = 0; i < std::min(B, n); ++i) masked[perm[i]] = w[perm[i]];
          w = masked;
          dense_truncate(w, n);
        }
        break;
      case Variant::kFofs: {
        const bool fire = cfg.fofs_margin_trigger ? ym < 1.0 : ym <= 0.0;
        if (fire) {
          VectorXd wt = (1.0 - cfg.lambda * cfg.eta) * w + cfg.eta * y * x;
          const double norm = seq_norm(wt);
          if (norm > 0.0) wt *= std::min(1.0, 1.0 / (std::sqrt(cfg.lambda) * norm));
          w = wt;
          dense_truncate(w, B);
        }
        break;
      }
      case Variant::kOgd:
        if (ym < 1.0) {
          w += cfg.eta * y * x;
          dense_truncate(w, B);
        }
        break;
      case Variant::kPa: {
        const double loss = std::max(0.0, 1.0 - ym);
        if (loss > 0.0) {
          w += std::min(cfg.C, loss / seq_sq(x)) * y * x;
          dense_truncate(w, B);
        }
        break;
      }
      case Variant::kRomma:
        if (ym <= 0.0) {
          const double xx = seq_sq(x);
          const double ww = seq_sq(w);
          const double den = xx * ww - m * m;
          if (ww == 0.0 || den <= 1e-12 * xx * ww) {
            w += y * x;
          } else {
            const double c = (xx * ww - ym) / den;
            const double d = ww * (1.0 - ym) / den;
            w = c * w + d * y * x;
          }
          dense_truncate(w, B);
        }
        break;
      case Variant::kAlma: {
        const double a = cfg.alpha_margin;
        const double xnorm = seq_norm(x);
        const double gamma = (1.0 - a) * (1.0 / a) / std::sqrt(alma_k);
        if (y * seq_dot(w, x) / xnorm < gamma) {
          w += (std::sqrt(2.0) / std::sqrt(alma_k) * y / xnorm) * x;
          const double n = seq_norm(w);
          if (n > 1.0) w *= 1.0 / n;
          alma_k += 1.0;
          dense_truncate(w, B);
        }
        break;
      }
      case Variant::kSop:
        if (ym <= 0.0) {
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] != 0.0) sigma[i] = 1.0 / (1.0 / sigma[i] + x[i] * x[i] / cfg.r);
          }
          w += y * sigma.cwiseProduct(x);
          dense_truncate(w, B);
        }
        break;
      case Variant::kArow: {
        const double v = seq_dot(x.cwiseProduct(x), sigma);
        const double beta = 1.0 / (v + cfg.r);
        const double alpha = std::max(0.0, 1.0 - ym) * beta;
        w += alpha * y * sigma.cwiseProduct(x);
        sigma -= beta * sigma.cwiseProduct(sigma).cwiseProduct(x).cwiseProduct(x);
        dense_truncate(w, B);
        break;
      }
      case Variant::kCw:
      case Variant::kScw: {
        const double p = phi();
        const double v = seq_dot(x.cwiseProduct(x), sigma);
        if (cfg.variant == Variant::kScw && p * std::sqrt(v) - ym <= 0.0) break;
        const double psi = 1.0 + p * p / 2.0;
        const double zeta = 1.0 + p * p;
        double alpha = std::max(
            0.0, (-ym * psi + std::sqrt(ym * ym * std::pow(p, 4) / 4.0 + v * p * p * zeta)) /
                     (v * zeta));
        if (cfg.variant == Variant::kScw) alpha = std::min(cfg.C, alpha);
        if (alpha <= 0.0) break;
        const double root = -alpha * v * p + std::sqrt(alpha * alpha * v * v * p * p + 4.0 * v);
        const double u = root * root / 4.0;
        const double beta = alpha * p / (std::sqrt(u) + v * alpha * p);
        w += alpha * y * sigma.cwiseProduct(x);
        sigma -= beta * sigma.cwiseProduct(sigma).cwiseProduct(x).cwiseProduct(x);
        dense_truncate(w, B);
        break;
      }
    }
  }
};

}  // namespace oracle

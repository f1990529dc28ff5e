// Copyright 2026 The Fedsyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedsyn/privacy/noise.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fedsyn::privacy {

double Delta1Bound() { return 1.0; }

double LocalSensitivity(int64_t n_i) {
  if (n_i < 2) throw std::invalid_argument("participants need n_i >= 2");
  return std::numbers::sqrt2 / static_cast<double>(n_i);
}

double Delta2Bound(const marginals::ProjectionMatrix& p) {
  return p.MaxRowNorm();
}

double LocalProjectedSensitivity(int64_t n_i,
                                 const marginals::ProjectionMatrix& p) {
  if (n_i < 2) throw std::invalid_argument("participants need n_i >= 2");
  return 2.0 * p.MaxRowNorm() / static_cast<double>(n_i + 1);
}

double SigmaOneWay(double delta_1, int d, double rho_1) {
  if (!(rho_1 > 0.0)) throw std::invalid_argument("rho_1 must be positive");
  if (!(delta_1 > 0.0) || d < 1) {
    throw std::invalid_argument("delta_1 and d must be positive");
  }
  return delta_1 * std::sqrt(d / (2.0 * rho_1));
}

double SigmaTwoWay(double delta_2, int d, double rho_2) {
  if (!(rho_2 > 0.0)) throw std::invalid_argument("rho_2 must be positive");
  if (!(delta_2 > 0.0) || d < 2) {
    throw std::invalid_argument("delta_2 must be positive and d >= 2");
  }
  return delta_2 * std::sqrt(d * (d - 1.0) / (4.0 * rho_2));
}

double SigmaSelected(double delta, double rho_marginal) {
  if (!(rho_marginal > 0.0)) {
    throw std::invalid_argument("per-marginal rho must be positive");
  }
  return delta / std::sqrt(2.0 * rho_marginal);
}

std::vector<double> GaussianNoise(size_t length, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  std::vector<double> out(length, 0.0);
  if (sigma == 0.0) return out;
  for (auto& x : out) x = sigma * rng.Normal();
  return out;
}

double ComputeAlpha(std::span<const int64_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("no participant sizes");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int64_t n_i : sizes) {
    if (n_i <= 0) throw std::invalid_argument("participant sizes must be > 0");
    sum += static_cast<double>(n_i);
    sum_sq += static_cast<double>(n_i) * static_cast<double>(n_i);
  }
  return sum_sq / (sum * sum);
}

std::string_view SensitivityModeName(SensitivityMode mode) {
  return mode == SensitivityMode::kUnit ? "unit" : "local";
}

SensitivityMode ParseSensitivityMode(std::string_view name) {
  if (name == "unit") return SensitivityMode::kUnit;
  if (name == "local") return SensitivityMode::kLocal;
  throw std::invalid_argument("unknown sensitivity mode: " + std::string(name));
}

NoiseCalibration NoiseCalibration::FromPlan(const BudgetPlan& plan, int d,
                                            SensitivityMode mode) {
  NoiseCalibration cal;
  cal.mode = mode;
  cal.d = d;
  cal.multiplier_1 = SigmaOneWay(1.0, d, plan.rho_1);
  cal.multiplier_2 = SigmaTwoWay(1.0, d, plan.rho_2);
  cal.multiplier_3 = SigmaSelected(1.0, plan.per_marginal_rho);
  return cal;
}

NoiseCalibration NoiseCalibration::Noiseless(int d) {
  NoiseCalibration cal;
  cal.d = d;
  return cal;
}

double NoiseCalibration::Sensitivity(int64_t n_i) const {
  return mode == SensitivityMode::kUnit ? Delta1Bound() : LocalSensitivity(n_i);
}

double NoiseCalibration::ProjectedSensitivity(
    int64_t n_i, const marginals::ProjectionMatrix& p) const {
  return mode == SensitivityMode::kUnit ? Delta2Bound(p)
                                        : LocalProjectedSensitivity(n_i, p);
}

NoiseScales NoiseScales::For(const NoiseCalibration& calibration, int64_t n_i,
                             const marginals::ProjectionSet& projections,
                             double alpha) {
  NoiseScales scales;
  scales.alpha = alpha;
  // Noise-free runs need no sensitivity, so any n_i >= 1 is acceptable.
  if (calibration.multiplier_1 == 0.0 && calibration.multiplier_2 == 0.0 &&
      calibration.multiplier_3 == 0.0) {
    return scales;
  }
  const double delta = calibration.Sensitivity(n_i);
  scales.sigma_1 = delta * calibration.multiplier_1;
  scales.sigma_3 = delta * calibration.multiplier_3;
  if (calibration.multiplier_2 > 0.0) {
    for (const auto& p : marginals::AllPairs(calibration.d)) {
      scales.sigma_2_by_pair[p] =
          calibration.ProjectedSensitivity(n_i, projections.at(p)) *
          calibration.multiplier_2;
    }
  }
  return scales;
}

}  // namespace fedsyn::privacy

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

#ifndef FEDSYN_PRIVACY_NOISE_H_
#define FEDSYN_PRIVACY_NOISE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "fedsyn/marginals/marginal.h"
#include "fedsyn/marginals/projection.h"
#include "fedsyn/privacy/budget.h"
#include "fedsyn/rng.h"

namespace fedsyn::privacy {

// Worst-case l2 sensitivity of a normalized 1-way marginal under adding one
// row to a participant's dataset.
double Delta1Bound();

// The size-dependent bound sqrt(2)/n_i on the same quantity (n_i >= 2). It
// also bounds an unprojected 2-way marginal.
double LocalSensitivity(int64_t n_i);

// max row norm of P. Adding a row with cell j changes m * P by
// (P[j, :] - m * P) / (n_i + 1), whose norm is at most 2 max_row / (n_i + 1),
// so this bounds the projected sensitivity whenever n_i >= 1.
double Delta2Bound(const marginals::ProjectionMatrix& p);

// The size-dependent form of the same argument: 2 max_row / (n_i + 1).
double LocalProjectedSensitivity(int64_t n_i,
                                 const marginals::ProjectionMatrix& p);

// sigma_1 = delta_1 * sqrt(d / (2 rho_1)): all d one-way marginals at rho_1.
double SigmaOneWay(double delta_1, int d, double rho_1);
// sigma_2 = delta_2 * sqrt(d(d-1) / (4 rho_2)): all pairs at rho_2.
double SigmaTwoWay(double delta_2, int d, double rho_2);
// One stage-2 marginal charged rho_marginal: delta / sqrt(2 rho_marginal).
double SigmaSelected(double delta, double rho_marginal);

// I.i.d. N(0, sigma^2); sigma = 0 gives zeros.
std::vector<double> GaussianNoise(size_t length, double sigma, Rng& rng);

// sum n_i^2 / (sum n_i)^2.
double ComputeAlpha(std::span<const int64_t> sizes);

// Which sensitivity bound calibrates the noise.
//   kUnit   delta = 1 for every frequency-domain marginal
//   kLocal  delta = sqrt(2) / n_i for raw marginals and
//           2 max_row / (n_i + 1) for projected ones, so each participant adds
//           noise of roughly the same magnitude in count space
enum class SensitivityMode { kUnit, kLocal };

std::string_view SensitivityModeName(SensitivityMode mode);
SensitivityMode ParseSensitivityMode(std::string_view name);

// Per-unit-sensitivity noise levels shared by all participants. Multiplying by
// a participant's sensitivity gives its standard deviations.
struct NoiseCalibration {
  SensitivityMode mode = SensitivityMode::kLocal;
  int d = 0;
  double multiplier_1 = 0.0;  // sqrt(d / (2 rho_1))
  double multiplier_2 = 0.0;  // sqrt(d(d-1) / (4 rho_2))
  double multiplier_3 = 0.0;  // 1 / sqrt(2 rho_marginal) for stage 2

  static NoiseCalibration FromPlan(const BudgetPlan& plan, int d,
                                   SensitivityMode mode);
  // All multipliers zero: noise-free runs.
  static NoiseCalibration Noiseless(int d);

  // Sensitivity of a raw (1-way or 2-way) marginal of a participant holding
  // n_i rows, and of its projection through p.
  double Sensitivity(int64_t n_i) const;
  double ProjectedSensitivity(int64_t n_i,
                              const marginals::ProjectionMatrix& p) const;
};

// Standard deviations used by one participant, in the frequency domain.
struct NoiseScales {
  double sigma_1 = 0.0;
  double sigma_2 = 0.0;
  // Per-pair overrides of sigma_2 (the projection sensitivity depends on P).
  std::map<marginals::Pair, double> sigma_2_by_pair;
  double sigma_3 = 0.0;
  // Aggregate share sum n_i^2 / n^2; informational on the client side.
  double alpha = 1.0;

  double Sigma2(marginals::Pair pair) const {
    auto it = sigma_2_by_pair.find(pair);
    return it == sigma_2_by_pair.end() ? sigma_2 : it->second;
  }

  static NoiseScales For(const NoiseCalibration& calibration, int64_t n_i,
                         const marginals::ProjectionSet& projections,
                         double alpha = 1.0);
};

}  // namespace fedsyn::privacy

#endif  // FEDSYN_PRIVACY_NOISE_H_

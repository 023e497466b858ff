//
// Copyright 2026 The pview Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PVIEW_EVALUATION_H_
#define PVIEW_EVALUATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/count_tensor.h"
#include "pview/pview.h"
#include "pview/random_stream.h"
#include "pview/schema.h"
#include "pview/workload.h"

namespace pview {

// sqrt(mean((truth - estimate)^2)); the spans must be nonempty and match.
absl::StatusOr<double> RmseOf(std::span<const double> truth,
                              std::span<const double> estimate);

// True answers of every query. Queries are split across `threads` workers.
absl::StatusOr<std::vector<double>> ExactAnswers(const CountTensor& tensor,
                                                 const Workload& workload,
                                                 int threads = 1);
absl::StatusOr<std::vector<double>> ViewAnswers(const PView& view,
                                                const Workload& workload,
                                                int threads = 1);

absl::StatusOr<double> Rmse(const Workload& workload, const CountTensor& tensor,
                            const PView& view, int threads = 1);

struct IdentityOptions {
  // Largest total domain the baseline will densify.
  double dense_limit = 1e7;
  // Test hook: no noise.
  bool noise_free = false;
};

// Baseline view with one single-cell block per domain cell (zeros included),
// each carrying count + Laplace(1/epsilon). Noise is drawn from `rng` in
// canonical (row-major) order. Refuses domains past the dense limit.
absl::StatusOr<PView> IdentityView(const CountTensor& tensor, double epsilon,
                                   RandomStream& rng,
                                   const IdentityOptions& options = {});

// Schema with attributes x0, x1, ... of `domains[i]` unit bins on
// [0, domains[i]].
Schema SyntheticSchema(const std::vector<int64_t>& domains);

// `n` records around `clusters` Gaussian centers placed uniformly at random;
// each coordinate has standard deviation spread * domain, then is rounded
// and clamped into the domain.
absl::StatusOr<CountTensor> ClusteredData(const std::vector<int64_t>& domains,
                                          int64_t n, int clusters,
                                          double spread, RandomStream& rng);

absl::StatusOr<CountTensor> UniformData(const std::vector<int64_t>& domains,
                                        int64_t n, RandomStream& rng);

// A single tight cluster: low variance data where most of the domain is
// empty.
absl::StatusOr<CountTensor> ConcentratedData(
    const std::vector<int64_t>& domains, int64_t n, RandomStream& rng,
    double spread = 0.02);

}  // namespace pview

#endif  // PVIEW_EVALUATION_H_

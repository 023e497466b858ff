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

#include "pview/evaluation.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "absl/strings/str_cat.h"
#include "pview/mechanisms.h"
#include "pview/query.h"
#include "pview/status_macros.h"

namespace pview {
namespace {

// Runs f(i) for i in [0, n) over `threads` contiguous chunks.
template <typename F>
absl::StatusOr<std::vector<double>> ParallelMap(size_t n, int threads, F f) {
  std::vector<double> out(n);
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(threads > 0 ? threads : 1, n));
  auto run = [&](size_t begin, size_t end) -> absl::Status {
    for (size_t i = begin; i < end; ++i) {
      ASSIGN_OR_RETURN(out[i], f(i));
    }
    return absl::OkStatus();
  };
  if (workers == 1) {
    RETURN_IF_ERROR(run(0, n));
    return out;
  }
  std::vector<std::future<absl::Status>> futures;
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t begin = 0; begin < n; begin += chunk) {
    futures.push_back(std::async(std::launch::async, run, begin,
                                 std::min(n, begin + chunk)));
  }
  absl::Status status;
  for (auto& f : futures) status.Update(f.get());
  RETURN_IF_ERROR(status);
  return out;
}

}  // namespace

absl::StatusOr<double> RmseOf(std::span<const double> truth,
                              std::span<const double> estimate) {
  if (truth.empty() || truth.size() != estimate.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need matching nonempty answer lists, got ", truth.size(), " and ",
        estimate.size()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - estimate[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

absl::StatusOr<std::vector<double>> ExactAnswers(const CountTensor& tensor,
                                                 const Workload& workload,
                                                 int threads) {
  return ParallelMap(workload.queries.size(), threads,
                     [&](size_t i) -> absl::StatusOr<double> {
                       ASSIGN_OR_RETURN(int64_t v,
                                        AnswerExact(tensor, workload.queries[i]));
                       return static_cast<double>(v);
                     });
}

absl::StatusOr<std::vector<double>> ViewAnswers(const PView& view,
                                                const Workload& workload,
                                                int threads) {
  return ParallelMap(workload.queries.size(), threads, [&](size_t i) {
    return Answer(view, workload.queries[i]);
  });
}

absl::StatusOr<double> Rmse(const Workload& workload, const CountTensor& tensor,
                            const PView& view, int threads) {
  if (workload.queries.empty()) {
    return absl::InvalidArgumentError("workload is empty");
  }
  ASSIGN_OR_RETURN(auto truth, ExactAnswers(tensor, workload, threads));
  ASSIGN_OR_RETURN(auto estimate, ViewAnswers(view, workload, threads));
  return RmseOf(truth, estimate);
}

absl::StatusOr<PView> IdentityView(const CountTensor& tensor, double epsilon,
                                   RandomStream& rng,
                                   const IdentityOptions& options) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  const Schema& schema = tensor.schema();
  const double log2_cells = schema.TotalDomainLog2();
  if (log2_cells > std::log2(options.dense_limit)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "identity baseline refuses to densify 2^", log2_cells,
        " cells (limit ", options.dense_limit, ")"));
  }
  const std::vector<int64_t> domains = schema.DomainSizes();
  const uint64_t total = *schema.TotalDomainExact();

  PView view;
  view.schema = schema;
  view.params = IdentityParams(epsilon);
  view.hyperparams.epsilon_b = epsilon;
  view.hyperparams.ratio = 0.0;
  view.meta.mechanism = "identity";
  view.blocks.reserve(total);

  const CellList& cells = tensor.cells();
  size_t next = 0;
  Coord c(domains.size(), 0);
  const double scale = 1.0 / epsilon;
  for (uint64_t n = 0; n < total; ++n) {
    double count = 0.0;
    if (next < cells.size() &&
        std::equal(c.begin(), c.end(), cells.coord(next).begin())) {
      count = static_cast<double>(cells.count(next++));
    }
    double noise = 0.0;
    if (!options.noise_free) {
      ASSIGN_OR_RETURN(noise, SampleLaplace(scale, rng));
    }
    ViewBlock block;
    block.ranges.reserve(c.size());
    for (uint32_t v : c) block.ranges.push_back({v, v});
    block.noisy_sum = count + noise;
    view.blocks.push_back(std::move(block));
    for (size_t axis = c.size(); axis-- > 0;) {
      if (++c[axis] < static_cast<uint32_t>(domains[axis])) break;
      c[axis] = 0;
    }
  }
  return view;
}

Schema SyntheticSchema(const std::vector<int64_t>& domains) {
  std::vector<AttributeSpec> attrs;
  for (size_t i = 0; i < domains.size(); ++i) {
    attrs.push_back(AttributeSpec::EqualWidth(absl::StrCat("x", i), domains[i],
                                              0.0,
                                              static_cast<double>(domains[i])));
  }
  return Schema(std::move(attrs));
}

namespace {

absl::Status CheckShape(const std::vector<int64_t>& domains, int64_t n) {
  if (domains.empty()) return absl::InvalidArgumentError("no attributes");
  for (int64_t d : domains) {
    if (d < 1 || d > (int64_t{1} << 31)) {
      return absl::InvalidArgumentError(
          absl::StrCat("domain sizes must lie in [1, 2^31], got ", d));
    }
  }
  if (n < 0) return absl::InvalidArgumentError("record count is negative");
  return absl::OkStatus();
}

uint32_t Discretize(double x, int64_t domain) {
  const double r = std::round(x);
  return static_cast<uint32_t>(
      std::clamp(r, 0.0, static_cast<double>(domain - 1)));
}

absl::StatusOr<CountTensor> GaussianMixture(
    const std::vector<int64_t>& domains, int64_t n, int clusters,
    double spread, RandomStream& rng) {
  RETURN_IF_ERROR(CheckShape(domains, n));
  if (clusters < 1) return absl::InvalidArgumentError("need a cluster");
  if (!(spread >= 0.0)) return absl::InvalidArgumentError("negative spread");
  std::vector<std::vector<double>> centers(clusters);
  for (auto& center : centers) {
    for (int64_t d : domains) {
      center.push_back(rng.NextUniform() * static_cast<double>(d - 1));
    }
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Coord> records;
  records.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    const auto& center = centers[rng.NextBelow(clusters)];
    Coord c(domains.size());
    for (size_t a = 0; a < domains.size(); ++a) {
      const double sd = spread * static_cast<double>(domains[a]);
      c[a] = Discretize(center[a] + sd * normal(rng), domains[a]);
    }
    records.push_back(std::move(c));
  }
  return CountTensor::FromRecords(SyntheticSchema(domains), records);
}

}  // namespace

absl::StatusOr<CountTensor> ClusteredData(const std::vector<int64_t>& domains,
                                          int64_t n, int clusters,
                                          double spread, RandomStream& rng) {
  return GaussianMixture(domains, n, clusters, spread, rng);
}

absl::StatusOr<CountTensor> UniformData(const std::vector<int64_t>& domains,
                                        int64_t n, RandomStream& rng) {
  RETURN_IF_ERROR(CheckShape(domains, n));
  std::vector<Coord> records;
  records.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    Coord c(domains.size());
    for (size_t a = 0; a < domains.size(); ++a) {
      c[a] = static_cast<uint32_t>(rng.NextBelow(domains[a]));
    }
    records.push_back(std::move(c));
  }
  return CountTensor::FromRecords(SyntheticSchema(domains), records);
}

absl::StatusOr<CountTensor> ConcentratedData(
    const std::vector<int64_t>& domains, int64_t n, RandomStream& rng,
    double spread) {
  return GaussianMixture(domains, n, 1, spread, rng);
}

}  // namespace pview

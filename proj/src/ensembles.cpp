// Copyright 2026 the decohist authors
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

#include "decohist/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace decohist {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

constexpr double kFloor = 1e-12;

}  // namespace

Mat haar_unitary(Eigen::Index d, CounterRng& rng) {
  Mat g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is exactly Haar.
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rj = r(j, j);
    q.col(j) *= rj / std::abs(rj);
  }
  return q;
}

ProjectorFamily sample_random_family(Eigen::Index d, const std::vector<int>& ranks,
                                     CounterRng& rng) {
  const int total = std::accumulate(ranks.begin(), ranks.end(), 0);
  if (total != d)
    throw ValidationError("sample_random_family: ranks must partition the dimension");
  for (int r : ranks)
    if (r < 1) throw ValidationError("sample_random_family: ranks must be positive");
  const Mat u = haar_unitary(d, rng);
  std::vector<Mat> members;
  Eigen::Index col = 0;
  for (int r : ranks) {
    const Mat v = u.middleCols(col, r);
    members.push_back(v * v.adjoint());
    col += r;
  }
  return ProjectorFamily{std::move(members)};
}

TypicalRatioReport typical_ratio_experiment(const RandomScheduleSpec& spec, const Vec& psi0) {
  if (spec.n_events < 1)
    throw ValidationError("typical_ratio_experiment: need at least one event");
  check_state_vector(psi0);
  if (psi0.size() != spec.dim)
    throw DimensionError("typical_ratio_experiment: state dimension mismatch");

  const double d = static_cast<double>(spec.dim);
  const std::size_t n_outcomes = spec.ranks.size();

  TypicalRatioReport rep;
  rep.samples = spec.samples;
  double sum_all = 0.0, sum_off = 0.0;
  std::vector<double> scaled_off, ratios_off, ratios_same_final, overlaps_same_final;

  for (int s = 0; s < spec.samples; ++s) {
    CounterRng rng(CounterRng::derive(spec.seed, s));
    std::vector<ProjectorFamily> families;
    for (int k = 0; k < spec.n_events; ++k)
      families.push_back(sample_random_family(spec.dim, spec.ranks, rng));

    // Branch vectors w_label = P^n ... P^1 psi (trivial dynamics).
    std::size_t n_labels = 1;
    for (int k = 0; k < spec.n_events; ++k) n_labels *= n_outcomes;
    std::vector<Vec> w(n_labels);
    std::vector<std::size_t> final_outcome(n_labels);
    for (std::size_t idx = 0; idx < n_labels; ++idx) {
      std::size_t rem = idx;
      std::vector<std::size_t> digits(spec.n_events);  // event 0 most significant
      for (int k = spec.n_events - 1; k >= 0; --k) {
        digits[k] = rem % n_outcomes;
        rem /= n_outcomes;
      }
      Vec v = psi0;
      for (int k = 0; k < spec.n_events; ++k)
        v = families[k].members[digits[k]] * v;
      w[idx] = std::move(v);
      final_outcome[idx] = digits[spec.n_events - 1];
    }

    for (std::size_t i = 0; i < n_labels; ++i) {
      const double pi = w[i].squaredNorm();
      if (pi < kFloor) continue;
      for (std::size_t j = i; j < n_labels; ++j) {
        const double pj = w[j].squaredNorm();
        if (pj < kFloor) continue;
        const double ratio = std::norm(w[j].dot(w[i])) / (pi * pj);
        const double scaled = ratio * d * pi * pj;
        sum_all += scaled;
        ++rep.pairs_all;
        if (i != j) {
          sum_off += scaled;
          ++rep.pairs_offdiag;
          scaled_off.push_back(scaled);
          ratios_off.push_back(ratio);
          const bool same_final = final_outcome[i] == final_outcome[j];
          rep.offdiag_pairs.push_back({static_cast<std::size_t>(s), pi, pj, ratio, same_final});
          if (same_final) {
            ratios_same_final.push_back(ratio);
            overlaps_same_final.push_back(ratio * d);
          }
        }
      }
    }
  }

  rep.mean_scaled_all = rep.pairs_all ? sum_all / rep.pairs_all : 0.0;
  rep.mean_scaled_offdiag = rep.pairs_offdiag ? sum_off / rep.pairs_offdiag : 0.0;
  rep.median_scaled_offdiag = median(scaled_off);
  rep.median_ratio_offdiag = median(ratios_off);
  rep.median_ratio_same_final = median(ratios_same_final);
  rep.median_overlap_times_d = median(overlaps_same_final);
  return rep;
}

CapacityReport information_capacity_check(Eigen::Index d, int n_events, int samples_per_rank,
                                          std::uint64_t seed, double threshold) {
  if (d < 4 || (d & (d - 1)) != 0)
    throw ValidationError("information_capacity_check: dimension must be a power of two >= 4");
  CapacityReport rep;
  rep.threshold = threshold;
  rep.predicted_scale = 1.0 / std::sqrt(static_cast<double>(d));

  CounterRng state_rng(CounterRng::derive(seed, 0xabcdef));
  for (int rank = static_cast<int>(d) / 2; rank >= std::max<int>(2, static_cast<int>(d) / 16);
       rank /= 2) {
    RandomScheduleSpec spec;
    spec.dim = d;
    spec.n_events = n_events;
    spec.ranks.assign(d / rank, rank);
    spec.samples = samples_per_rank;
    spec.seed = CounterRng::derive(seed, static_cast<std::uint64_t>(rank));

    Vec psi(d);
    for (Eigen::Index i = 0; i < d; ++i)
      psi(i) = Complex(state_rng.next_normal(), state_rng.next_normal());
    psi /= psi.norm();

    const auto r = typical_ratio_experiment(spec, psi);
    std::vector<double> ps;
    ps.reserve(r.offdiag_pairs.size());
    for (const auto& pr : r.offdiag_pairs) ps.push_back(pr.p);

    CapacityPoint pt;
    pt.rank = rank;
    pt.event_scale = static_cast<double>(rank) / static_cast<double>(d);
    pt.median_ratio = r.median_ratio_same_final;
    pt.median_history_p = median(ps);
    rep.sweep.push_back(pt);
  }

  // log-interpolate the crossing in (event_scale, median_ratio)
  for (std::size_t i = 1; i < rep.sweep.size(); ++i) {
    const auto& hi = rep.sweep[i - 1];  // larger rank, smaller ratio
    const auto& lo = rep.sweep[i];
    if (hi.median_ratio < threshold && lo.median_ratio >= threshold) {
      const double t = (std::log(threshold) - std::log(hi.median_ratio)) /
                       (std::log(lo.median_ratio) - std::log(hi.median_ratio));
      rep.crossing_scale =
          std::exp(std::log(hi.event_scale) +
                   t * (std::log(lo.event_scale) - std::log(hi.event_scale)));
      rep.crossed = true;
      break;
    }
  }
  if (!rep.crossed && !rep.sweep.empty() && rep.sweep.front().median_ratio >= threshold) {
    rep.crossing_scale = rep.sweep.front().event_scale;
    rep.crossed = true;
  }
  return rep;
}

}  // namespace decohist

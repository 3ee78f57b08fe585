// Copyright 2026 The invkrr Authors. All Rights Reserved.
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

#include "invkrr/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "invkrr/rng.hpp"

namespace invkrr {
namespace {

// Stream indices under a trial seed.
constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kTestStream = 2;
// Stream indices under the master seed for bound ingredients; far from any
// trial index.
constexpr std::uint64_t kEffDimStream = 0xB0B0'0000'0000'0001ULL;
constexpr std::uint64_t kBiasStream = 0xB0B0'0000'0000'0002ULL;

GapEstimate paired(const Vector& f, const Vector& fbar, const Vector& fstar) {
  const Eigen::ArrayXd diff =
      (f - fstar).array().square() - (fbar - fstar).array().square();
  const double n = static_cast<double>(diff.size());
  GapEstimate out;
  out.gap = diff.mean();
  out.std_error = diff.size() > 1
                      ? std::sqrt((diff - out.gap).square().sum() / (n - 1.0) / n)
                      : 0.0;
  return out;
}

Vector evaluate_target(const TargetFn& target, const Points& x) {
  Vector out(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) out(j) = target(x.col(j));
  return out;
}

struct Setup {
  GroupRep rep;
  Kernel kernel;
  LinearTarget target;
  ThetaSpec theta;
  std::optional<DiscreteDomain> domain;
};

Setup prepare(const ExperimentConfig& cfg) {
  GroupRep rep = parse_group(cfg.group);
  if (rep.dim() != cfg.d) {
    throw ValidationError("group '" + cfg.group + "' acts on R^" + std::to_string(rep.dim()) +
                          " but d = " + std::to_string(cfg.d));
  }
  ThetaSpec theta = parse_theta(cfg.theta, cfg.d);
  LinearTarget target = make_invariant_theta(rep, theta.raw);
  std::optional<DiscreteDomain> domain;
  if (cfg.mode == ExperimentMode::kExactDiscrete) {
    domain = orbit_closure(parse_points(cfg.seed_points, cfg.d), rep);
  }
  return Setup{std::move(rep), Kernel::parse(cfg.kernel), std::move(target), std::move(theta),
               std::move(domain)};
}

TrialRow run_trial(const ExperimentConfig& cfg, const Setup& s, int trial) {
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  Points train;
  if (s.domain) {
    Rng rng(derive_seed(seed, kTrainStream));
    std::uniform_int_distribution<Eigen::Index> pick(0, s.domain->size() - 1);
    train.resize(cfg.d, cfg.n);
    for (Eigen::Index j = 0; j < cfg.n; ++j) train.col(j) = s.domain->points().col(pick(rng));
  } else {
    train = sample_sphere(SphereDomain{cfg.d, derive_seed(seed, kTrainStream)}, cfg.n);
  }
  const Vector y = draw_labels(s.target, NoiseModel{cfg.sigma}, train,
                               derive_seed(seed, kLabelStream));
  const KrrModel model = fit(s.kernel, train, y, RidgeConfig{cfg.rho}, s.rep.id());
  const GapEstimate gap =
      s.domain ? estimate_gap(model, s.rep, s.target, *s.domain)
               : estimate_gap(model, s.rep, s.target,
                              sample_sphere(SphereDomain{cfg.d, derive_seed(seed, kTestStream)},
                                            cfg.n_test));
  return TrialRow{trial, seed, gap.gap, gap.std_error};
}

BoundReport evaluate_bound(const ExperimentConfig& cfg, const Setup& s) {
  const double n = static_cast<double>(cfg.n);
  const double sigma_sq = cfg.sigma * cfg.sigma;
  const TargetFn target = s.target;
  if (s.domain) {
    double m_k = 0.0;
    for (Eigen::Index j = 0; j < s.domain->size(); ++j) {
      const auto p = s.domain->points().col(j);
      m_k = std::max(m_k, s.kernel(p, p));
    }
    const auto perp = effdim_exact_discrete(PerpKernel(s.kernel, s.rep), *s.domain);
    const auto bias = bias_term_exact_discrete(s.kernel, s.rep, target, *s.domain);
    return general_bound(n, cfg.rho, m_k, sigma_sq, std::max(0.0, perp.value),
                         std::max(0.0, bias.estimate.value));
  }
  if (s.kernel.family() == KernelFamily::kLinear) {
    if (cfg.group.starts_with("sym:") && s.theta.t) {
      return sd_bound(cfg.d, *s.theta.t, n, cfg.rho, sigma_sq);
    }
    return linear_bound(averaged_rep(s.rep), s.target.theta, n, cfg.rho, sigma_sq);
  }
  const auto perp = effdim_mc(PerpKernel(s.kernel, s.rep), cfg.d, cfg.effdim_m,
                              derive_seed(cfg.seed, kEffDimStream));
  const auto bias = bias_term_mc(s.kernel, s.rep, target, cfg.d, cfg.effdim_m,
                                 derive_seed(cfg.seed, kBiasStream));
  return general_bound(n, cfg.rho, s.kernel.bound(), sigma_sq, std::max(0.0, perp.value),
                       std::max(0.0, bias.estimate.value));
}

double reported_t(const Setup& s) {
  if (s.theta.t) return *s.theta.t;
  const Vector& th = s.target.theta;
  if ((th.array() - th(0)).abs().maxCoeff() <= 1e-12) return th(0);
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

GapEstimate estimate_gap(const KrrModel& model, const GroupRep& rep, const TargetFn& target,
                         const Points& test_x) {
  if (test_x.cols() == 0) throw ValidationError("estimate_gap: empty test set");
  return paired(model.predict_batch(test_x), model.predict_averaged_batch(rep, test_x),
                evaluate_target(target, test_x));
}

GapEstimate estimate_gap(const KrrModel& model, const GroupRep& rep, const TargetFn& target,
                         const DiscreteDomain& domain) {
  GapEstimate out = estimate_gap(model, rep, target, domain.points());
  out.std_error = 0.0;
  return out;
}

GapReport run_gap_experiment(const ExperimentConfig& cfg, unsigned workers) {
  const Setup setup = prepare(cfg);
  GapReport report;
  report.config = cfg;
  report.trials.resize(static_cast<std::size_t>(cfg.trials));

  std::vector<std::exception_ptr> errors(report.trials.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) {
      try {
        report.trials[static_cast<std::size_t>(t)] = run_trial(cfg, setup, t);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < count; ++w) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (!errors[t]) continue;
    try {
      std::rethrow_exception(errors[t]);
    } catch (const NumericalError& e) {
      throw NumericalError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("trial " + std::to_string(t) + ": " + e.what());
    }
  }

  GapAggregate& agg = report.aggregate;
  const double k = static_cast<double>(cfg.trials);
  double sum = 0.0;
  for (const auto& row : report.trials) sum += row.gap;
  agg.mean_gap = sum / k;
  double ss = 0.0;
  for (const auto& row : report.trials) ss += (row.gap - agg.mean_gap) * (row.gap - agg.mean_gap);
  agg.se = cfg.trials > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
  agg.t = reported_t(setup);
  agg.bound = evaluate_bound(cfg, setup);
  agg.bound_holds = agg.mean_gap >= agg.bound.value - 3.0 * agg.se;
  agg.nonnegative = agg.mean_gap >= -3.0 * agg.se;
  agg.verdict = agg.bound_holds && agg.nonnegative ? "pass" : "fail";
  return report;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_trials_csv(std::ostream& out, const GapReport& report) {
  const auto& c = report.config;
  out << "trial,seed,n,d,rho,sigma,group,kernel,gap,gap_se\n";
  for (const auto& row : report.trials) {
    out << row.trial << ',' << row.seed << ',' << c.n << ',' << c.d << ','
        << format_number(c.rho) << ',' << format_number(c.sigma) << ',' << c.group << ','
        << c.kernel << ',' << format_number(row.gap) << ',' << format_number(row.gap_se) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const GapReport& report, bool header) {
  const auto& c = report.config;
  const auto& a = report.aggregate;
  if (header) {
    out << "group,kernel,d,n,rho,sigma,t,trials,mean_gap,se,bound,dim_eff_perp,bias_term,verdict\n";
  }
  out << c.group << ',' << c.kernel << ',' << c.d << ',' << c.n << ',' << format_number(c.rho)
      << ',' << format_number(c.sigma) << ',' << format_number(a.t) << ',' << c.trials << ','
      << format_number(a.mean_gap) << ',' << format_number(a.se) << ','
      << format_number(a.bound.value) << ',' << format_number(a.bound.ingredients.dim_eff_perp)
      << ',' << format_number(a.bound.ingredients.bias_term) << ',' << a.verdict << '\n';
}

void write_report_files(const GapReport& report, const std::filesystem::path& dir,
                        const std::string& prefix) {
  std::filesystem::create_directories(dir);
  std::ofstream trials(dir / (prefix + "_trials.csv"));
  std::ofstream aggregate(dir / (prefix + "_aggregate.csv"));
  if (!trials || !aggregate) {
    throw ValidationError("cannot write CSV files under '" + dir.string() + "'");
  }
  write_trials_csv(trials, report);
  write_aggregate_csv(aggregate, report);
}

}  // namespace invkrr

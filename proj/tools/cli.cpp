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

#include "cli.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "invkrr/bounds.hpp"
#include "invkrr/config.hpp"
#include "invkrr/effdim.hpp"
#include "invkrr/experiment.hpp"
#include "invkrr/group.hpp"
#include "invkrr/kernel.hpp"
#include "invkrr/krr.hpp"
#include "invkrr/rng.hpp"

namespace invkrr::cli {
namespace {

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

const char* formula_name(BoundFormula f) {
  switch (f) {
    case BoundFormula::kGeneral:
      return "general";
    case BoundFormula::kLinearClosedForm:
      return "linear_closed_form";
    case BoundFormula::kSymmetricGroup:
      return "symmetric_group";
  }
  return "?";
}

void print_bound(std::ostream& out, const BoundReport& r) {
  out << "bound: " << sci(r.value) << '\n'
      << "formula: " << formula_name(r.formula) << '\n'
      << "dim_eff_perp: " << sci(r.ingredients.dim_eff_perp) << '\n'
      << "bias_term: " << sci(r.ingredients.bias_term) << '\n'
      << "m_k: " << format_number(r.ingredients.m_k) << '\n';
  if (r.degenerate) out << "note: d = 1, S_1 is trivial and the bound is 0\n";
}

// Options shared by gap and fit; every config key can be given as --<key>.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App& cmd, bool with_file) {
    if (with_file) cmd.add_option("--config", config_path, "key=value config file");
    for (const auto& key : config_keys()) {
      cmd.add_option("--" + key, overrides[key], "override config key '" + key + "'");
    }
  }

  ExperimentConfig resolve() const {
    ConfigMap values;
    if (!config_path.empty()) values = load_config_file(config_path);
    for (const auto& [key, value] : overrides) {
      if (!value.empty()) values[key] = value;
    }
    return build_config(values);
  }
};

Evaluator select_evaluator(const Kernel& k, const GroupRep& rep, const std::string& which) {
  if (which == "base") return k;
  if (which == "avg") return AveragedKernel(k, rep);
  if (which == "perp") return PerpKernel(k, rep);
  throw ValidationError("--which must be base, avg or perp");
}

int run_check(std::ostream& out, const std::string& group_id, const std::string& kernel_id,
              int probes, int n, std::uint64_t seed) {
  const GroupRep rep = parse_group(group_id);
  const Kernel k = Kernel::parse(kernel_id);
  const int d = static_cast<int>(rep.dim());
  bool ok = true;

  const Points px = sample_sphere(SphereDomain{d, derive_seed(seed, 0)}, probes);
  const Points py = sample_sphere(SphereDomain{d, derive_seed(seed, 1)}, probes);
  std::vector<ProbePair> pairs;
  for (int i = 0; i < probes; ++i) pairs.emplace_back(px.col(i), py.col(i));
  const double switch_gap = check_switch_condition(k, rep, pairs);
  const bool switch_ok = switch_gap <= 1e-8;
  ok = ok && switch_ok;
  out << (switch_ok ? "PASS" : "FAIL") << " switch_condition max_discrepancy=" << sci(switch_gap)
      << '\n';

  if (rep.is_finite()) {
    const ClosureReport closure = verify_closure(rep);
    ok = ok && closure.closed;
    out << (closure.closed ? "PASS" : "FAIL") << " closure violations="
        << closure.violations.size() << '\n';
    const AveragedRep phi = averaged_rep(rep);
    const double idem = (phi.phi * phi.phi - phi.phi).cwiseAbs().maxCoeff();
    const bool idem_ok = idem <= 1e-10;
    ok = ok && idem_ok;
    out << (idem_ok ? "PASS" : "FAIL") << " phi_projection max_error=" << sci(idem) << '\n';
  }
  const double fro = averaged_rep(rep).frobenius_sq();
  const bool jensen_ok = fro <= d + 1e-10;
  ok = ok && jensen_ok;
  out << (jensen_ok ? "PASS" : "FAIL") << " jensen |Phi|_F^2=" << format_number(fro)
      << " d=" << d << '\n';

  const Points pts = sample_sphere(SphereDomain{d, derive_seed(seed, 2)}, n);
  const std::pair<const char*, Evaluator> kinds[] = {
      {"base", k}, {"avg", AveragedKernel(k, rep)}, {"perp", PerpKernel(k, rep)}};
  for (const auto& [name, ev] : kinds) {
    const PsdReport psd = check_psd(gram(ev, pts).entries);
    ok = ok && psd.psd;
    out << (psd.psd ? "PASS" : "FAIL") << " psd_" << name
        << " min_eigenvalue=" << sci(psd.min_eigenvalue) << '\n';
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant kernel ridge regression: bounds, effective dimensions and gap experiments",
               "invkrr"};
  app.require_subcommand(1);

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate a generalisation-gap lower bound");
  bound->require_subcommand(1);
  struct {
    int d = 0;
    double t = 0, n = 0, rho = 0, sigma_sq = 1.0, m_k = 0, dim_eff_perp = 0, bias = 0;
    std::string group, theta;
  } b;
  auto* bsd = bound->add_subcommand("sd", "Symmetric group S_d with theta = t 1");
  bsd->add_option("--d", b.d)->required();
  bsd->add_option("--t", b.t)->required();
  bsd->add_option("--n", b.n)->required();
  bsd->add_option("--rho", b.rho)->required();
  bsd->add_option("--sigma-sq", b.sigma_sq, "noise variance (default 1)");
  auto* blin = bound->add_subcommand("linear", "Linear kernel closed form for a named group");
  blin->add_option("--group", b.group)->required();
  blin->add_option("--theta", b.theta, "t:<value> or comma-separated vector")->required();
  blin->add_option("--n", b.n)->required();
  blin->add_option("--rho", b.rho)->required();
  blin->add_option("--sigma-sq", b.sigma_sq, "noise variance (default 1)");
  auto* bgen = bound->add_subcommand("general", "General bound from supplied ingredients");
  bgen->add_option("--n", b.n)->required();
  bgen->add_option("--rho", b.rho)->required();
  bgen->add_option("--mk", b.m_k)->required();
  bgen->add_option("--sigma-sq", b.sigma_sq)->required();
  bgen->add_option("--dim-eff-perp", b.dim_eff_perp)->required();
  bgen->add_option("--bias", b.bias)->required();

  // effdim
  auto* eff = app.add_subcommand("effdim", "Estimate dim_eff of H, its invariant or perp part");
  struct {
    std::string kernel, group, which = "perp", mode = "mc", seed_points;
    int d = 0;
    long long m = 100000;
    std::uint64_t seed = 0;
  } e;
  eff->add_option("--kernel", e.kernel)->required();
  eff->add_option("--group", e.group)->required();
  eff->add_option("--d", e.d)->required();
  eff->add_option("--which", e.which, "base | avg | perp")->check(CLI::IsMember({"base", "avg", "perp"}));
  eff->add_option("--m", e.m, "Monte Carlo sample size");
  eff->add_option("--seed", e.seed);
  eff->add_option("--mode", e.mode, "mc | exact")->check(CLI::IsMember({"mc", "exact"}));
  eff->add_option("--seed-points", e.seed_points, "exact mode: '1,0;0,1'");

  // gap
  auto* gap = app.add_subcommand("gap", "Run the generalisation-gap experiment");
  ConfigFlags gap_flags;
  gap_flags.attach(*gap, true);
  unsigned workers = 1;
  std::string out_dir = ".";
  std::string prefix = "gap";
  gap->add_option("--workers", workers, "worker threads");
  gap->add_option("--out-dir", out_dir, "directory for CSV output");
  gap->add_option("--prefix", prefix, "CSV file prefix");

  // fit
  auto* fitcmd = app.add_subcommand("fit", "Fit one model on sampled data and report diagnostics");
  ConfigFlags fit_flags;
  fit_flags.attach(*fitcmd, true);

  // check
  auto* check = app.add_subcommand("check", "Switch-condition, closure and PSD checks");
  struct {
    std::string group, kernel;
    int probes = 50, n = 32;
    std::uint64_t seed = 0;
  } c;
  check->add_option("--group", c.group)->required();
  check->add_option("--kernel", c.kernel)->required();
  check->add_option("--probes", c.probes);
  check->add_option("--n", c.n, "points for the PSD checks");
  check->add_option("--seed", c.seed);

  std::vector<const char*> argv{"invkrr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (bsd->parsed()) {
      print_bound(out, sd_bound(b.d, b.t, b.n, b.rho, b.sigma_sq));
    } else if (blin->parsed()) {
      const GroupRep rep = parse_group(b.group);
      const ThetaSpec theta = parse_theta(b.theta, static_cast<int>(rep.dim()));
      const LinearTarget target = make_invariant_theta(rep, theta.raw);
      print_bound(out, linear_bound(averaged_rep(rep), target.theta, b.n, b.rho, b.sigma_sq));
    } else if (bgen->parsed()) {
      print_bound(out, general_bound(b.n, b.rho, b.m_k, b.sigma_sq, b.dim_eff_perp, b.bias));
    } else if (eff->parsed()) {
      const GroupRep rep = parse_group(e.group);
      if (rep.dim() != e.d) throw ValidationError("--d does not match the group dimension");
      const Evaluator ev = select_evaluator(Kernel::parse(e.kernel), rep, e.which);
      EffDimEstimate est;
      if (e.mode == "exact") {
        if (e.seed_points.empty()) throw ValidationError("--mode exact requires --seed-points");
        est = effdim_exact_discrete(ev, orbit_closure(parse_points(e.seed_points, e.d), rep));
      } else {
        est = effdim_mc(ev, e.d, e.m, e.seed);
      }
      out << "value: " << sci(est.value) << '\n'
          << "se: " << sci(est.std_error) << '\n'
          << "samples: " << est.sample_size << '\n';
    } else if (gap->parsed()) {
      const ExperimentConfig cfg = gap_flags.resolve();
      const GapReport report = run_gap_experiment(cfg, workers);
      write_report_files(report, out_dir, prefix);
      write_aggregate_csv(out, report);
    } else if (fitcmd->parsed()) {
      const ExperimentConfig cfg = fit_flags.resolve();
      const GroupRep rep = parse_group(cfg.group);
      if (rep.dim() != cfg.d) throw ValidationError("--d does not match the group dimension");
      const LinearTarget target = make_invariant_theta(rep, parse_theta(cfg.theta, cfg.d).raw);
      const Points x = sample_sphere(SphereDomain{cfg.d, derive_seed(cfg.seed, 0)}, cfg.n);
      const Vector y = draw_labels(target, NoiseModel{cfg.sigma}, x, derive_seed(cfg.seed, 1));
      const KrrModel model = fit(Kernel::parse(cfg.kernel), x, y, RidgeConfig{cfg.rho}, rep.id());
      const Points test = sample_sphere(SphereDomain{cfg.d, derive_seed(cfg.seed, 2)}, cfg.n_test);
      const GapEstimate g = estimate_gap(model, rep, target, test);
      out << "n: " << cfg.n << '\n'
          << "rho: " << format_number(cfg.rho) << '\n'
          << "residual: " << sci(model.residual_norm()) << '\n'
          << "jitter: " << sci(model.jitter_used()) << '\n'
          << "alpha_norm: " << sci(model.alpha().norm()) << '\n'
          << "gap: " << sci(g.gap) << '\n'
          << "gap_se: " << sci(g.std_error) << '\n';
    } else if (check->parsed()) {
      return run_check(out, c.group, c.kernel, c.probes, c.n, c.seed);
    }
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace invkrr::cli

/*
 * Copyright 2026 The cvrealign Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// cvreal: command-line front end over the cvrealign C interface.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvrealign/cvrealign.h"
#include "json.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitSeparable = 0;
constexpr int kExitError = 1;
constexpr int kExitEntangled = 2;
constexpr int kExitBoundary = 3;
constexpr int kDefaultCutoff = 40;
constexpr int kConvergenceStep = 8;
constexpr double kConvergenceTol = 1e-7;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(cvr_status s) {
  if (s != CVR_OK) throw CliError(std::string(cvr_status_name(s)) + ": " + cvr_last_error());
}

// Owns a cvr_fock handle.
class Fock {
 public:
  Fock() = default;
  explicit Fock(cvr_fock* h) : h_(h) {}
  Fock(Fock&& o) noexcept : h_(o.h_) { o.h_ = nullptr; }
  Fock& operator=(Fock&& o) noexcept {
    std::swap(h_, o.h_);
    return *this;
  }
  Fock(const Fock&) = delete;
  Fock& operator=(const Fock&) = delete;
  ~Fock() { cvr_fock_free(h_); }
  const cvr_fock* get() const { return h_; }
  cvr_fock** out() { return &h_; }

 private:
  cvr_fock* h_ = nullptr;
};

struct KernelOpts {
  std::optional<double> lambda, b0, c1, c2;
};

struct ChannelOpts {
  std::optional<double> gamma, t, gammat;
  double nbar = 0.0;
};

void add_kernel_options(CLI::App* app, KernelOpts& k) {
  app->add_option("--lambda", k.lambda, "two-mode squeezed vacuum kernel, lambda = tanh r");
  app->add_option("--b0", k.b0, "b0 = <a+a> + 1/2");
  app->add_option("--c1", k.c1, "c1 correlation");
  app->add_option("--c2", k.c2, "c2 correlation");
}

void add_channel_options(CLI::App* app, ChannelOpts& c) {
  app->add_option("--gamma", c.gamma, "damping rate Gamma");
  app->add_option("--t", c.t, "elapsed time");
  app->add_option("--gammat", c.gammat, "dimensionless Gamma*t (overrides --gamma/--t)");
  app->add_option("--nbar", c.nbar, "thermal occupation of the bath");
}

bool has_ccm(const KernelOpts& k) { return k.b0 || k.c1 || k.c2; }

cvr_ccm resolve_kernel(const KernelOpts& k) {
  if (k.lambda && has_ccm(k)) throw CliError("give either --lambda or --b0/--c1/--c2, not both");
  cvr_ccm ccm{};
  if (k.lambda) {
    check(cvr_tmsv_ccm(*k.lambda, &ccm));
    return ccm;
  }
  if (!k.b0) throw CliError("a kernel is required: --lambda or --b0 [--c1] [--c2]");
  return {*k.b0, k.c1.value_or(0.0), k.c2.value_or(0.0)};
}

cvr_channel resolve_channel(const ChannelOpts& c) {
  cvr_channel ch{};
  if (c.gammat) {
    check(cvr_channel_from_rate(1.0, *c.gammat, c.nbar, &ch));
  } else if (c.gamma || c.t) {
    if (!(c.gamma && c.t)) throw CliError("--gamma and --t must be given together");
    check(cvr_channel_from_rate(*c.gamma, *c.t, c.nbar, &ch));
  } else {
    check(cvr_channel_from_rate(0.0, 0.0, c.nbar, &ch));
  }
  return ch;
}

cvr_photon_op parse_op(const std::string& s) {
  if (s == "sub" || s == "subtract") return CVR_SUBTRACT;
  if (s == "add") return CVR_ADD;
  throw CliError("unknown photon operation '" + s + "' (expected sub or add)");
}

const char* op_name(cvr_photon_op op) { return op == CVR_SUBTRACT ? "sub" : "add"; }

ordered_json branch_json(const cvr_report& r) {
  switch (r.branch) {
    case CVR_BRANCH_PLAIN: return "plain";
    case CVR_BRANCH_PI: return "pi";
    default: return nullptr;
  }
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json notes_of(const std::string& detail) {
  ordered_json notes = ordered_json::array();
  std::size_t start = 0;
  while (start < detail.size()) {
    std::size_t end = detail.find("; ", start);
    if (end == std::string::npos) end = detail.size();
    if (end > start) notes.push_back(detail.substr(start, end - start));
    start = end + 2;
  }
  return notes;
}

ordered_json report_json(const std::string& command, ordered_json inputs, const cvr_report& r) {
  ordered_json j;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  j["value"] = number_or_null(r.value);
  j["threshold"] = r.threshold;
  j["entangled"] = r.entangled != 0;
  j["branch"] = branch_json(r);
  j["lower_bound_only"] = r.lower_bound_only != 0;
  ordered_json notes = notes_of(r.detail);
  if (r.boundary) notes.push_back("value is on the separability boundary");
  j["notes"] = std::move(notes);
  return j;
}

int verdict_exit(const cvr_report& r) {
  if (r.boundary) return kExitBoundary;
  return r.entangled ? kExitEntangled : kExitSeparable;
}

ordered_json kernel_inputs(const KernelOpts& k, const cvr_ccm& ccm) {
  ordered_json in;
  if (k.lambda) in["lambda"] = *k.lambda;
  in["b0"] = ccm.b0;
  in["c1"] = ccm.c1;
  in["c2"] = ccm.c2;
  return in;
}

void add_channel_inputs(ordered_json& in, const cvr_channel& ch) {
  in["gammat"] = ch.decay;
  in["nbar"] = ch.nbar;
}

std::array<int, 8> photon_orders(cvr_photon_op op, int m) {
  if (op == CVR_SUBTRACT) return {0, 0, m, m, m, m, 0, 0};
  return {m, m, 0, 0, 0, 0, m, m};
}

int oracle_cutoff(std::optional<int> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CVREAL_CUTOFF")) {
    int v = 0;
    const std::string s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 1)
      throw CliError("CVREAL_CUTOFF must be a positive integer, got '" + s + "'");
    return v;
  }
  return kDefaultCutoff;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return ec == std::errc() ? std::string(buf, p) : "nan";
}

// Γt* as a number: 0 when never detected, +inf when detected throughout.
double critical_value(const cvr_critical_time& ct) {
  if (!ct.detected_initially) return 0.0;
  return ct.found ? ct.decay : INFINITY;
}

// ---------------------------------------------------------------------------
// Config file: `key=value` per line, '#' comments. Entries become flags placed
// right after the subcommand name so explicit flags (which come later) win.

std::vector<std::string> config_flags(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot read config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw CliError(path + ":" + std::to_string(lineno) + ": empty key");
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& subcommands) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> config;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CliError("--config needs a file name");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!config) return kept;
  auto sub = std::find_first_of(kept.begin(), kept.end(), subcommands.begin(), subcommands.end());
  if (sub == kept.end()) throw CliError("--config needs a subcommand");
  const std::ptrdiff_t at = sub - kept.begin() + 1;
  const std::vector<std::string> flags = config_flags(*config);
  kept.insert(kept.begin() + at, flags.begin(), flags.end());
  return kept;
}

// ---------------------------------------------------------------------------
// Subcommands

struct GaussianCmd {
  KernelOpts kernel;
  std::optional<double> b1, b2;
};

int run_gaussian(const GaussianCmd& o) {
  cvr_report r{};
  ordered_json in;
  if (o.b1 || o.b2) {
    if (!(o.b1 && o.b2)) throw CliError("--b1 and --b2 must be given together");
    if (o.kernel.b0 || o.kernel.lambda) throw CliError("--b1/--b2 cannot be combined with --b0 or --lambda");
    const double c1 = o.kernel.c1.value_or(0.0), c2 = o.kernel.c2.value_or(0.0);
    check(cvr_gaussian_criterion_nonsymmetric(*o.b1, *o.b2, c1, c2, &r));
    in = {{"b1", *o.b1}, {"b2", *o.b2}, {"c1", c1}, {"c2", c2}};
  } else {
    const cvr_ccm ccm = resolve_kernel(o.kernel);
    check(cvr_gaussian_criterion(&ccm, &r));
    in = kernel_inputs(o.kernel, ccm);
  }
  ordered_json j = report_json("gaussian", in, r);
  j["details"] = {{"product", r.product}, {"product_threshold", r.product_threshold}, {"tau", r.tau}};
  std::cout << j.dump(2) << "\n";
  return verdict_exit(r);
}

struct PhotonCmd {
  KernelOpts kernel;
  std::string op = "sub";
  int m = 1;
};

int run_photon(const PhotonCmd& o) {
  const cvr_ccm ccm = resolve_kernel(o.kernel);
  const cvr_photon_op op = parse_op(o.op);
  cvr_report r{};
  check(cvr_photon_criterion(&ccm, op, o.m, &r));
  double norm = 0.0;
  check(cvr_photon_normalization(&ccm, op, o.m, &norm));
  ordered_json in = kernel_inputs(o.kernel, ccm);
  in["op"] = op_name(op);
  in["m"] = o.m;
  ordered_json j = report_json("photon", in, r);
  j["details"] = {{"normalization", norm}, {"tau", r.tau}};
  std::cout << j.dump(2) << "\n";
  return verdict_exit(r);
}

struct EvolveCmd {
  KernelOpts kernel;
  ChannelOpts channel;
  std::string state = "sub";
  int m = 1;
  std::string criterion = "realign";
};

int run_evolve(const EvolveCmd& o) {
  const cvr_ccm ccm = resolve_kernel(o.kernel);
  const cvr_channel ch = resolve_channel(o.channel);
  ordered_json in = kernel_inputs(o.kernel, ccm);
  add_channel_inputs(in, ch);
  in["state"] = o.state;
  in["criterion"] = o.criterion;
  cvr_report r{};
  ordered_json details = ordered_json::object();
  if (o.state == "gaussian" || o.state == "tmsv") {
    if (o.criterion != "realign") throw CliError("Gaussian states support --criterion realign only");
    cvr_ccm evolved{};
    check(cvr_evolve_ccm(&ccm, &ch, &evolved));
    check(cvr_gaussian_criterion(&evolved, &r));
    details = {{"b0_t", evolved.b0}, {"c1_t", evolved.c1}, {"c2_t", evolved.c2}, {"product", r.product}};
  } else {
    const cvr_photon_op op = parse_op(o.state);
    in["m"] = o.m;
    if (o.criterion == "second-moment") {
      if (!o.kernel.lambda || o.m != 1)
        throw CliError("the second-moment criterion needs a --lambda kernel and m = 1");
      const cvr_tmsv_criterion c = op == CVR_SUBTRACT ? CVR_SECOND_MOMENT_SUB : CVR_SECOND_MOMENT_ADD;
      check(cvr_evaluate_tmsv_criterion(c, *o.kernel.lambda, &ch, &r));
    } else if (o.criterion == "realign") {
      const std::array<int, 8> orders = photon_orders(op, o.m);
      check(cvr_evolved_criterion_general(&ccm, orders.data(), &ch, &r));
      if (o.kernel.lambda && o.m == 1) {
        cvr_report closed{};
        const cvr_tmsv_criterion c = op == CVR_SUBTRACT ? CVR_REALIGN_SUB : CVR_REALIGN_ADD;
        check(cvr_evaluate_tmsv_criterion(c, *o.kernel.lambda, &ch, &closed));
        details["closed_form"] = closed.value;
      }
    } else {
      throw CliError("unknown --criterion '" + o.criterion + "' (expected realign or second-moment)");
    }
  }
  ordered_json j = report_json("evolve", in, r);
  j["details"] = details;
  std::cout << j.dump(2) << "\n";
  return verdict_exit(r);
}

struct CriticalCmd {
  double lambda = 0.5;
  double nbar = 0.0;
  std::optional<double> gamma;
  std::string state = "sub";
  std::string criterion = "realign";
};

cvr_tmsv_criterion resolve_criterion(const std::string& criterion, const std::string& state) {
  std::string name = criterion;
  if (criterion == "realign" || criterion == "second-moment") name += "-" + std::string(op_name(parse_op(state)));
  cvr_tmsv_criterion c{};
  check(cvr_parse_tmsv_criterion(name.c_str(), &c));
  return c;
}

int run_critical(const CriticalCmd& o) {
  const cvr_tmsv_criterion c = resolve_criterion(o.criterion, o.state);
  cvr_critical_time ct{};
  check(cvr_critical_time_tmsv(c, o.lambda, o.nbar, &ct));
  cvr_report at0{};
  const cvr_channel ch0{0.0, o.nbar};
  check(cvr_evaluate_tmsv_criterion(c, o.lambda, &ch0, &at0));

  ordered_json in = {{"state", o.state}, {"lambda", o.lambda}, {"nbar", o.nbar}, {"criterion", cvr_tmsv_criterion_name(c)}};
  if (o.gamma) in["gamma"] = *o.gamma;
  ordered_json j;
  j["command"] = "critical-time";
  j["inputs"] = in;
  std::string status;
  ordered_json notes = ordered_json::array();
  if (!ct.detected_initially) {
    status = "not-detected-initially";
    j["value"] = 0.0;
    notes.push_back("criterion does not detect entanglement at t = 0");
  } else if (ct.found) {
    status = "found";
    j["value"] = ct.decay;
  } else {
    status = "none";
    j["value"] = nullptr;
    notes.push_back("no finite critical time <= bracket (Gamma t <= 50)");
  }
  if (ct.non_monotonic) notes.push_back("warning: non-monotonic criterion; first crossing reported");
  j["threshold"] = at0.threshold;
  j["entangled"] = ct.detected_initially != 0;
  j["branch"] = nullptr;
  j["lower_bound_only"] = false;
  j["notes"] = notes;
  ordered_json details = {{"status", status},
                          {"detected_initially", ct.detected_initially != 0},
                          {"non_monotonic", ct.non_monotonic != 0},
                          {"sign_changes", ct.sign_changes},
                          {"value_at_t0", at0.value}};
  if (o.gamma && ct.found && *o.gamma > 0.0) details["t"] = ct.decay / *o.gamma;
  j["details"] = details;
  std::cout << j.dump(2) << "\n";
  // The verdict is the one at t = 0.
  return ct.detected_initially ? kExitEntangled : kExitSeparable;
}

struct MixtureCmd {
  double w1 = -0.3, w2 = 0.2, p = 0.5;
};

int run_mixture(const MixtureCmd& o) {
  cvr_report r[3];
  check(cvr_mixture_criteria(o.w1, o.w2, o.p, r));
  ordered_json j = report_json("mixture", {{"w1", o.w1}, {"w2", o.w2}, {"p", o.p}}, r[2]);
  auto entry = [](const cvr_report& x) {
    return ordered_json{{"value", x.value}, {"entangled", x.entangled != 0}, {"boundary", x.boundary != 0}};
  };
  j["details"] = {{"second_moment", entry(r[0])}, {"fock", entry(r[1])}, {"realignment", entry(r[2])}};
  std::cout << j.dump(2) << "\n";
  return verdict_exit(r[2]);
}

struct OracleCmd {
  KernelOpts kernel;
  ChannelOpts channel;
  std::string state = "tmsv";
  int m = 1;
  std::optional<int> cutoff;
};

struct OracleRun {
  cvr_realigned_norms norms{};
  double leak = 0.0;
};

OracleRun oracle_tensor(const cvr_ccm& ccm, const std::string& state, int m, const cvr_channel& ch, int cutoff) {
  Fock f;
  check(cvr_fock_gaussian(&ccm, cutoff, f.out()));
  OracleRun run;
  check(cvr_fock_trace(f.get(), &run.leak));
  run.leak = 1.0 - run.leak;
  if (state == "sub" || state == "add") {
    Fock g;
    check(cvr_fock_photon(f.get(), parse_op(state), m, g.out(), nullptr));
    f = std::move(g);
  }
  if (ch.decay > 0.0) {
    Fock g;
    check(cvr_fock_evolve(f.get(), &ch, g.out()));
    double tr = 0.0;
    check(cvr_fock_trace(g.get(), &tr));
    run.leak = std::max(run.leak, 1.0 - tr);
    f = std::move(g);
  }
  check(cvr_fock_realigned_norms(f.get(), &run.norms));
  double tr = 1.0;
  check(cvr_fock_trace(f.get(), &tr));
  run.norms.trace_norm /= tr;
  run.norms.trace /= tr;
  return run;
}

int run_oracle(const OracleCmd& o) {
  const cvr_ccm ccm = resolve_kernel(o.kernel);
  const cvr_channel ch = resolve_channel(o.channel);
  const int cutoff = oracle_cutoff(o.cutoff);
  cvr_report r{};
  if (o.state == "tmsv" || o.state == "gaussian") {
    cvr_ccm evolved{};
    check(cvr_evolve_ccm(&ccm, &ch, &evolved));
    check(cvr_gaussian_criterion(&evolved, &r));
  } else {
    const std::array<int, 8> orders = photon_orders(parse_op(o.state), o.m);
    check(cvr_evolved_criterion_general(&ccm, orders.data(), &ch, &r));
  }
  const OracleRun a = oracle_tensor(ccm, o.state, o.m, ch, cutoff);
  const OracleRun b = oracle_tensor(ccm, o.state, o.m, ch, cutoff + kConvergenceStep);
  const double drift = std::abs(b.norms.trace_norm - a.norms.trace_norm);
  const bool converged = drift < kConvergenceTol;
  const double abs_dev = std::abs(b.norms.trace_norm - r.value);
  const double rel_dev = abs_dev / std::max(std::abs(r.value), 1e-300);
  r.lower_bound_only = b.norms.trace_norm > std::abs(b.norms.trace) + 1e-8 ? 1 : 0;

  ordered_json in = kernel_inputs(o.kernel, ccm);
  add_channel_inputs(in, ch);
  in["state"] = o.state;
  if (o.state == "sub" || o.state == "add") in["m"] = o.m;
  in["cutoff"] = cutoff;
  ordered_json j = report_json("oracle", in, r);
  if (!converged) j["notes"].push_back("trace norm not converged at this cutoff");
  if (r.lower_bound_only) j["notes"].push_back("realigned trace is strictly below the trace norm");
  j["details"] = {{"analytic", r.value},
                  {"trace_norm", b.norms.trace_norm},
                  {"realigned_trace", b.norms.trace},
                  {"abs_deviation", abs_dev},
                  {"rel_deviation", rel_dev},
                  {"converged", converged},
                  {"cutoff", cutoff},
                  {"cutoff_check", cutoff + kConvergenceStep},
                  {"trace_norm_at_cutoff", a.norms.trace_norm},
                  {"convergence_drift", drift},
                  {"truncation_leak", b.leak},
                  {"blocks", b.norms.blocks}};
  std::cout << j.dump(2) << "\n";
  return verdict_exit(r);
}

struct SweepCmd {
  std::string param;
  double from = 0.0, to = 1.0;
  int steps = 2;
  std::string state = "sub";
  KernelOpts kernel;
  ChannelOpts channel;
  std::optional<double> p, w1, w2;
  int m = 1;
  std::string out;
  int jobs = 1;
};

struct SweepRow {
  double x = 0.0;
  std::vector<double> cols;
};

std::vector<std::string> sweep_columns(const SweepCmd& o, bool tmsv_kernel) {
  if (o.state == "gaussian" || o.state == "tmsv") return {"realign_value", "realign_product", "ppt_separable"};
  if (o.state == "mixture") return {"second_moment", "fock", "realignment"};
  if (tmsv_kernel && o.m == 1)
    return {"realign_value", "second_moment_value", "realign_critical_time", "second_moment_critical_time"};
  return {"realign_value"};
}

SweepRow sweep_point(const SweepCmd& base, double x, bool tmsv_kernel) {
  SweepCmd o = base;
  const std::string& p = o.param;
  if (p == "lambda") o.kernel.lambda = x;
  else if (p == "b0") o.kernel.b0 = x;
  else if (p == "c1") o.kernel.c1 = x;
  else if (p == "c2") o.kernel.c2 = x;
  else if (p == "gammat") o.channel.gammat = x;
  else if (p == "nbar") o.channel.nbar = x;
  else if (p == "p") o.p = x;

  SweepRow row{x, {}};
  if (o.state == "mixture") {
    if (!o.w1 || !o.w2 || !o.p) throw CliError("mixture sweeps need --w1, --w2 and --p (or --param p)");
    cvr_report r[3];
    check(cvr_mixture_criteria(*o.w1, *o.w2, *o.p, r));
    row.cols = {r[0].value, r[1].value, r[2].value};
    return row;
  }
  const cvr_ccm ccm = resolve_kernel(o.kernel);
  const cvr_channel ch = resolve_channel(o.channel);
  if (o.state == "gaussian" || o.state == "tmsv") {
    cvr_ccm evolved{};
    check(cvr_evolve_ccm(&ccm, &ch, &evolved));
    cvr_report r{};
    check(cvr_gaussian_criterion(&evolved, &r));
    int separable = 0;
    check(cvr_simon_ppt_check(&evolved, &separable));
    row.cols = {r.value, r.product, static_cast<double>(separable)};
    return row;
  }
  const cvr_photon_op op = parse_op(o.state);
  if (tmsv_kernel && o.m == 1) {
    const double lambda = *o.kernel.lambda;
    const cvr_tmsv_criterion rc = op == CVR_SUBTRACT ? CVR_REALIGN_SUB : CVR_REALIGN_ADD;
    const cvr_tmsv_criterion sc = op == CVR_SUBTRACT ? CVR_SECOND_MOMENT_SUB : CVR_SECOND_MOMENT_ADD;
    cvr_report rv{}, sv{};
    check(cvr_evaluate_tmsv_criterion(rc, lambda, &ch, &rv));
    check(cvr_evaluate_tmsv_criterion(sc, lambda, &ch, &sv));
    cvr_critical_time rt{}, st{};
    check(cvr_critical_time_tmsv(rc, lambda, ch.nbar, &rt));
    check(cvr_critical_time_tmsv(sc, lambda, ch.nbar, &st));
    row.cols = {rv.value, sv.value, critical_value(rt), critical_value(st)};
    return row;
  }
  const std::array<int, 8> orders = photon_orders(op, o.m);
  cvr_report r{};
  check(cvr_evolved_criterion_general(&ccm, orders.data(), &ch, &r));
  row.cols = {r.value};
  return row;
}

int run_sweep(const SweepCmd& o) {
  static const std::vector<std::string> params = {"lambda", "gammat", "nbar", "p", "b0", "c1", "c2"};
  if (std::find(params.begin(), params.end(), o.param) == params.end())
    throw CliError("--param must be one of lambda, gammat, nbar, p, b0, c1, c2");
  if (!(o.from < o.to)) throw CliError("--from must be smaller than --to");
  if (o.steps < 2 || o.steps > 1000000) throw CliError("--steps must lie in 2..1000000");
  if (o.jobs < 1) throw CliError("--jobs must be positive");
  static const std::vector<std::string> states = {"gaussian", "tmsv", "sub", "add", "mixture"};
  if (std::find(states.begin(), states.end(), o.state) == states.end())
    throw CliError("--state must be one of gaussian, tmsv, sub, add, mixture");
  const bool tmsv_kernel = o.param == "lambda" || o.kernel.lambda.has_value();

  std::vector<double> grid(o.steps);
  for (int i = 0; i < o.steps; ++i) grid[i] = o.from + (o.to - o.from) * i / (o.steps - 1);

  std::vector<SweepRow> rows(grid.size());
  if (o.jobs == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = sweep_point(o, grid[i], tmsv_kernel);
  } else {
    // Independent points; results land in grid order whatever the finish order.
    for (std::size_t start = 0; start < grid.size(); start += static_cast<std::size_t>(o.jobs)) {
      const std::size_t stop = std::min(grid.size(), start + static_cast<std::size_t>(o.jobs));
      std::vector<std::future<SweepRow>> batch;
      for (std::size_t i = start; i < stop; ++i)
        batch.push_back(std::async(std::launch::async, sweep_point, std::cref(o), grid[i], tmsv_kernel));
      for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
    }
  }

  std::ostringstream csv;
  csv << o.param;
  for (const auto& c : sweep_columns(o, tmsv_kernel)) csv << "," << c;
  csv << "\n";
  for (const auto& row : rows) {
    csv << csv_number(row.x);
    for (double v : row.cols) csv << "," << csv_number(v);
    csv << "\n";
  }
  if (o.out.empty()) {
    std::cout << csv.str();
    return kExitSeparable;
  }
  std::ofstream file(o.out);
  if (!file) throw CliError("cannot write '" + o.out + "'");
  file << csv.str();
  if (!file) throw CliError("write to '" + o.out + "' failed");

  ordered_json j;
  j["command"] = "sweep";
  j["inputs"] = {{"param", o.param}, {"from", o.from}, {"to", o.to}, {"steps", o.steps}, {"state", o.state}};
  j["value"] = nullptr;
  j["threshold"] = nullptr;
  j["entangled"] = nullptr;
  j["branch"] = nullptr;
  j["lower_bound_only"] = false;
  j["notes"] = {"wrote " + std::to_string(rows.size()) + " rows to " + o.out};
  std::cout << j.dump(2) << "\n";
  return kExitSeparable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement tests for two-mode continuous-variable states by realignment"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cvr_version()));
  app.footer("Exit status: 0 separable, 2 entangled, 3 boundary, 1 error.\n"
             "--config FILE reads key=value lines (# comments) as defaults for the subcommand.");

  GaussianCmd gauss;
  auto* g = app.add_subcommand("gaussian", "realignment test for a symmetric (or b1/b2) Gaussian state");
  add_kernel_options(g, gauss.kernel);
  g->add_option("--b1", gauss.b1, "mode-1 b for a non-symmetric standard form");
  g->add_option("--b2", gauss.b2, "mode-2 b for a non-symmetric standard form");

  PhotonCmd photon;
  auto* ph = app.add_subcommand("photon", "m-photon subtracted or added Gaussian state");
  add_kernel_options(ph, photon.kernel);
  ph->add_option("--op", photon.op, "sub or add")->capture_default_str();
  ph->add_option("--m", photon.m, "photons per mode (1..6)")->capture_default_str();

  EvolveCmd evolve;
  auto* ev = app.add_subcommand("evolve", "criterion after a thermal damping channel");
  add_kernel_options(ev, evolve.kernel);
  add_channel_options(ev, evolve.channel);
  ev->add_option("--state", evolve.state, "gaussian, sub or add")->capture_default_str();
  ev->add_option("--m", evolve.m, "photons per mode")->capture_default_str();
  ev->add_option("--criterion", evolve.criterion, "realign or second-moment")->capture_default_str();

  CriticalCmd crit;
  auto* ct = app.add_subcommand("critical-time", "earliest Gamma*t at which a criterion stops detecting");
  ct->add_option("--lambda", crit.lambda, "squeezing lambda of the kernel")->capture_default_str();
  ct->add_option("--nbar", crit.nbar, "thermal occupation")->capture_default_str();
  ct->add_option("--gamma", crit.gamma, "report t* = (Gamma t)* / Gamma as well");
  ct->add_option("--state", crit.state, "sub or add")->capture_default_str();
  ct->add_option("--criterion", crit.criterion,
                 "realign, second-moment, or a full name such as second-moment-add")
      ->capture_default_str();

  MixtureCmd mix;
  auto* mx = app.add_subcommand("mixture", "three criteria for a mixture of squeezed thermal states");
  mx->add_option("--w1", mix.w1, "w of the entangled component")->capture_default_str();
  mx->add_option("--w2", mix.w2, "w of the separable component")->capture_default_str();
  mx->add_option("--p", mix.p, "weight of the entangled component")->capture_default_str();

  OracleCmd oracle;
  auto* orc = app.add_subcommand("oracle", "compare the analytic value with a truncated Fock-space SVD");
  add_kernel_options(orc, oracle.kernel);
  add_channel_options(orc, oracle.channel);
  orc->add_option("--state", oracle.state, "tmsv, gaussian, sub or add")->capture_default_str();
  orc->add_option("--m", oracle.m, "photons per mode")->capture_default_str();
  orc->add_option("--cutoff", oracle.cutoff, "photon-number cutoff (default $CVREAL_CUTOFF or 40)");

  SweepCmd sweep;
  auto* sw = app.add_subcommand("sweep", "evaluate criteria over a parameter grid and write CSV");
  sw->add_option("--param", sweep.param, "lambda, gammat, nbar, p, b0, c1 or c2")->required();
  sw->add_option("--from", sweep.from, "grid start")->required();
  sw->add_option("--to", sweep.to, "grid end")->required();
  sw->add_option("--steps", sweep.steps, "grid points (>= 2)")->required();
  sw->add_option("--state", sweep.state, "gaussian, tmsv, sub, add or mixture")->capture_default_str();
  add_kernel_options(sw, sweep.kernel);
  add_channel_options(sw, sweep.channel);
  sw->add_option("--p", sweep.p, "mixture weight");
  sw->add_option("--w1", sweep.w1, "mixture w1");
  sw->add_option("--w2", sweep.w2, "mixture w2");
  sw->add_option("--m", sweep.m, "photons per mode")->capture_default_str();
  sw->add_option("--out", sweep.out, "CSV file (stdout when omitted)");
  sw->add_option("--jobs", sweep.jobs, "concurrent grid evaluations")->capture_default_str();

  try {
    std::vector<std::string> args =
        expand_config(argc, argv, {"gaussian", "photon", "evolve", "critical-time", "mixture", "oracle", "sweep"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  } catch (const CliError& e) {
    std::cerr << "cvreal: error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*g) return run_gaussian(gauss);
    if (*ph) return run_photon(photon);
    if (*ev) return run_evolve(evolve);
    if (*ct) return run_critical(crit);
    if (*mx) return run_mixture(mix);
    if (*orc) return run_oracle(oracle);
    if (*sw) return run_sweep(sweep);
  } catch (const CliError& e) {
    std::cerr << "cvreal: error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "cvreal: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commop/errors.hpp"
#include "commop/family.hpp"
#include "commop/qbuilder.hpp"
#include "commop/random_rationals.hpp"
#include "commop/soliton.hpp"
#include "commop/verifier.hpp"

using namespace commop;
using json = nlohmann::ordered_json;

namespace {

// Stable exit code contract.
constexpr int kOk = 0;
constexpr int kIdentityFailure = 1;
constexpr int kInputError = 2;
constexpr int kNumericAbort = 3;

/// Raised for malformed command input (bad rationals, unreadable files).
class InputError : public Error {
 public:
  using Error::Error;
};

struct Output {
  bool json = false;
  bool timing = false;
  std::string out;
};

const std::vector<std::string> kParamNames{"alpha0", "alpha1", "g2", "g1", "g0", "a", "h"};

struct ParamFlags {
  std::vector<std::pair<std::string, std::string>> values;  // filled by CLI11
  std::vector<CLI::Option*> options;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app, const std::vector<std::string>& names) {
    values.reserve(names.size());
    for (const auto& n : names) {
      values.emplace_back(n, "");
      options.push_back(app->add_option("--" + n, values.back().second, "parameter " + n + " (p/q)"));
    }
  }
  ParamMap given() const {
    ParamMap p;
    for (size_t i = 0; i < values.size(); ++i) {
      if (options[i]->count() == 0) continue;
      p[values[i].first] = parse_rational(values[i].second, values[i].first);
    }
    return p;
  }
  static Rational parse_rational(const std::string& text, const std::string& name) {
    try {
      return Rational::parse(text);
    } catch (const std::exception& e) {
      throw InputError("--" + name + ": " + e.what());
    }
  }
};

/// Instantiates the family; unset parameters are drawn from the seeded
/// generator when a seed is given, redrawing tuples the pipeline rejects.
Family resolve_family(const std::string& name, int g, const ParamFlags& pf) {
  const FamilyTag tag = parse_family_tag(name);
  const ParamMap given = pf.given();
  if (!pf.seed) return Family::make(tag, g, given);
  RationalGen gen(*pf.seed);
  for (int attempt = 0;; ++attempt) {
    ParamMap p = given;
    for (const auto& n : Family::settable_params(tag)) {
      if (p.count(n)) continue;
      Rational v = gen.nonzero();
      p[n] = n == "a" ? v.abs() : v;
    }
    try {
      Family f = Family::make(tag, g, p);
      solve_Q(f);
      return f;
    } catch (const Error&) {
      if (attempt >= 100) throw;
    }
  }
}

std::string effective_config(const std::string& cmd, const Family& f,
                             const std::optional<std::uint64_t>& seed) {
  std::string s = cmd + " --family " + to_string(f.tag()) + " --g " + std::to_string(f.genus());
  for (const auto& n : Family::settable_params(f.tag())) s += " --" + n + " " + f.param(n).str();
  if (seed) s += " --seed " + std::to_string(*seed);
  return s;
}

void announce(const std::string& config) { std::cerr << "effective config: " << config << "\n"; }

std::string human_report(const VerificationReport& r) {
  std::ostringstream os;
  os << r.subject << "\n";
  int counts[4] = {0, 0, 0, 0};
  for (const auto& c : r.checks) {
    ++counts[static_cast<int>(c.status)];
    os << "  " << std::left << std::setw(12) << to_string(c.status) << " " << c.check;
    if (!c.residual_max.is_zero()) os << "  [residual " << c.residual_max.str() << "]";
    if (!c.details.empty() && c.status != CheckStatus::Pass) os << "  " << c.details;
    os << "\n";
  }
  for (const auto& [name, order] : r.orders) os << "  order " << name << " = " << order << "\n";
  os << "summary: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " match, "
     << counts[3] << " discrepancy\n";
  return os.str();
}

void emit(const Output& o, const json& j, const std::string& human) {
  const std::string text = j.dump(2) + "\n";
  if (!o.out.empty()) write_file_atomic(o.out, text);
  std::cout << (o.json ? text : human);
}

int report_exit(const VerificationReport& r) { return r.ok() ? kOk : kIdentityFailure; }

json with_config(json j, const std::string& config) {
  j["effective_config"] = config;
  return j;
}

int cmd_curve(const Output& o, const std::string& family, int g, const ParamFlags& pf) {
  const Family f = resolve_family(family, g, pf);
  const std::string config = effective_config("curve", f, pf.seed);
  announce(config);
  const CurveResult res = curve_report(f);
  json j = res.curve ? curve_json(f, *res.curve) : json::object();
  j["cross_checks"] = res.report.to_json(o.timing);
  std::string human = res.curve ? "F = " + res.curve->F.str() + "\n" : "no curve\n";
  emit(o, with_config(j, config), human + human_report(res.report));
  return res.curve ? report_exit(res.report) : kIdentityFailure;
}

int cmd_report(const Output& o, const std::string& config, const VerificationReport& r) {
  announce(config);
  const json j = r.to_json(o.timing);
  emit(o, with_config(j, config), human_report(r));
  return report_exit(r);
}

int cmd_pair(const Output& o, const std::string& family, int g, const ParamFlags& pf) {
  const Family f = resolve_family(family, g, pf);
  const std::string config = effective_config("pair", f, pf.seed);
  if (f.tag() == FamilyTag::Dixmier) return cmd_report(o, config, dixmier_report(f.param("h")));
  return cmd_report(o, config, pair_report(f));
}

int cmd_lame(const Output& o, int g, const ParamFlags& pf) {
  const Family f = resolve_family("lame", g, pf);
  return cmd_report(o, effective_config("lame", f, pf.seed), lame_eigen_check(f));
}

int cmd_dixmier(const Output& o, const ParamFlags& pf) {
  const Family f = resolve_family("dixmier", 1, pf);
  std::string config = "dixmier --h " + f.param("h").str();
  if (pf.seed) config += " --seed " + std::to_string(*pf.seed);
  return cmd_report(o, config, dixmier_report(f.param("h")));
}

int cmd_lax(const Output& o) {
  VerificationReport r = lax_check();
  r.append(skew_check());
  return cmd_report(o, "lax-check", r);
}

int cmd_thm11(const Output& o, const ParamFlags& pf) {
  const ParamMap values = pf.given();
  std::string config = "thm11";
  for (const auto& [k, v] : values) config += " --" + k + " " + v.str();
  const TravelingWaveResult res = traveling_wave_solve(values);
  json branches = json::array();
  std::ostringstream human;
  for (const auto& b : res.branches) {
    json jb;
    jb["trivial"] = b.trivial;
    jb["solution"] = json::object();
    for (const auto& [k, v] : b.solution) jb["solution"][k] = v;
    jb["constraints"] = b.constraints;
    jb["unresolved"] = b.unresolved;
    branches.push_back(jb);
    human << "branch" << (b.trivial ? " (trivial)" : "") << ":";
    for (const auto& [k, v] : b.solution) human << " " << k << " = " << v << ";";
    for (const auto& c : b.constraints) human << " constraint " << c << ";";
    human << "\n";
  }
  announce(config);
  json j = res.report.to_json(o.timing);
  j["branches"] = branches;
  emit(o, with_config(j, config), human.str() + human_report(res.report));
  return report_exit(res.report);
}

int cmd_simulate(const Output& o, const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw InputError("cannot read config " + config_path);
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + config_path + ": " + e.what());
  }
  const SimConfig c = SimConfig::from_json(raw);
  announce("simulate " + c.to_json().dump());
  for (const auto& w : c.warnings()) std::cerr << "warning: " << w << "\n";

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  write_file_atomic((dir / "config.json").string(), c.to_json().dump(2) + "\n");
  Simulator grid_only(c.N, c.L, c.dealias);
  const auto x = grid_only.grid();
  std::string diag = diagnostics_header(c.track_Q);
  const RunResult r = run(c, [&](const SimState& s, const Diagnostics& d) {
    write_file_atomic((dir / snapshot_name(s.t)).string(), snapshot_csv(x, s));
    diag += diagnostics_row(d);
  });
  write_file_atomic((dir / "diagnostics.csv").string(), diag);

  const Diagnostics& last = r.diagnostics.back();
  json j;
  j["t"] = last.t;
  j["mass_V"] = last.mass_V;
  j["mass_W"] = last.mass_W;
  j["max_abs_V"] = last.max_abs_V;
  j["peak_count"] = last.peak_count;
  if (last.eq6_residual_max) j["eq6_residual_max"] = *last.eq6_residual_max;
  j["aborted"] = r.aborted;
  if (r.aborted) j["message"] = r.message;
  std::string human = "final " + diagnostics_header(c.track_Q) + "final " + diagnostics_row(last);
  if (r.aborted) human += "aborted: " + r.message + "\n";
  emit(o, j, human);
  if (r.aborted) {
    std::cerr << "error: " << r.message << "\n";
    return kNumericAbort;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commuting differential operators: construction, verification and simulation"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Output o;
  app.add_flag("--json", o.json, "print machine-readable JSON on stdout");
  app.add_flag("--timing", o.timing, "include wall-clock timing in reports");

  std::string family;
  int g = 1;
  ParamFlags pf;
  std::string config_path, out_dir = "sim_out";

  auto add_family = [&](CLI::App* sub, bool with_family) {
    if (with_family) {
      sub->add_option("--family", family, "trig, cos, elliptic, rapid-decay, lame or dixmier")->required();
    }
    sub->add_option("--g", g, "genus")->check(CLI::PositiveNumber);
    sub->add_option("--seed", pf.seed, "draw unset parameters from this seed");
    sub->add_option("--out", o.out, "write the JSON result to this path");
  };

  auto* curve = app.add_subcommand("curve", "build Q and the spectral curve");
  add_family(curve, true);
  pf.attach(curve, kParamNames);

  auto* pair = app.add_subcommand("pair", "verify the commuting pair");
  add_family(pair, true);
  ParamFlags pf_pair;
  pf_pair.attach(pair, kParamNames);

  auto* lame = app.add_subcommand("lame", "eigenfunction identities for the Lame family");
  add_family(lame, false);
  ParamFlags pf_lame;
  pf_lame.attach(lame, {"g1", "g0"});

  auto* dixmier = app.add_subcommand("dixmier", "the x^3 operator pair");
  dixmier->add_option("--seed", pf.seed, "draw h from this seed");
  dixmier->add_option("--out", o.out, "write the JSON result to this path");
  ParamFlags pf_dix;
  pf_dix.attach(dixmier, {"h"});

  auto* lax = app.add_subcommand("lax-check", "Lax form of the (V, W) flow and skew symmetry");
  lax->add_option("--out", o.out, "write the JSON result to this path");

  auto* thm11 = app.add_subcommand("thm11", "traveling-wave elliptic solution of the flow");
  thm11->add_option("--out", o.out, "write the JSON result to this path");
  ParamFlags pf_thm;
  pf_thm.attach(thm11, {"b", "g2", "g1", "g0"});

  auto* sim = app.add_subcommand("simulate", "evolve rapid-decay initial data");
  sim->add_option("--config", config_path, "JSON config file")->required();
  sim->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  auto with_seed = [&](ParamFlags& p) -> ParamFlags& {
    p.seed = pf.seed;
    return p;
  };
  try {
    if (*curve) return cmd_curve(o, family, g, pf);
    if (*pair) return cmd_pair(o, family, g, with_seed(pf_pair));
    if (*lame) return cmd_lame(o, g, with_seed(pf_lame));
    if (*dixmier) return cmd_dixmier(o, with_seed(pf_dix));
    if (*lax) return cmd_lax(o);
    if (*thm11) return cmd_thm11(o, pf_thm);
    if (*sim) return cmd_simulate(o, config_path, out_dir);
  } catch (const NumericalBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericAbort;
  } catch (const FamilyConstraintError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIdentityFailure;
  }
  return kInputError;
}

// riccisol command-line front end: verify soliton specs, classify triviality,
// estimate first Laplace eigenvalues, and browse the fixture catalog.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "riccisol/catalog.hpp"
#include "riccisol/soliton.hpp"
#include "riccisol/specfile.hpp"
#include "riccisol/spectral.hpp"

namespace {

using riccisol::Tolerance;
using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInconclusive = 3;

struct CommonOptions {
  bool json = false;
  bool quiet = false;
  std::string csv_path;
  double tolerance = -1.0;  // < 0: not set
  int samples = -1;
  std::uint64_t seed = riccisol::kDefaultSeed;

  bool tolerance_set() const { return tolerance >= 0.0; }
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_flag("--json", opt.json, "emit a machine-readable JSON report on stdout");
  cmd->add_flag("--quiet", opt.quiet, "suppress the human-readable report");
  cmd->add_option("--csv", opt.csv_path, "write a CSV table to this path");
  cmd->add_option("--tolerance", opt.tolerance, "override residual tolerances");
  cmd->add_option("--samples", opt.samples, "override per-axis sample counts");
  cmd->add_option("--seed", opt.seed, "seed for randomized start vectors");
}

std::string read_input(const std::string& target) {
  if (target == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(target);
  if (!in) throw riccisol::SpecFileError("cannot open '" + target + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  riccisol::SolitonSpec spec;
  Tolerance tol;
  std::string label;
};

Loaded load_target(const std::string& target, const CommonOptions& opt) {
  std::optional<riccisol::SolitonSpec> spec;
  Tolerance tol;
  if (target.starts_with("catalog:")) {
    const auto* fx = riccisol::find_fixture(target.substr(8));
    if (!fx) throw riccisol::SpecFileError("unknown catalog fixture '" + target.substr(8) + "'");
    spec = fx->spec;
  } else {
    auto loaded = riccisol::load_spec_text(read_input(target));
    if (loaded.tolerance) tol = *loaded.tolerance;
    spec = std::move(loaded.spec);
  }
  if (opt.tolerance_set()) tol = Tolerance{opt.tolerance, opt.tolerance};
  if (opt.samples > 0) {
    spec = spec->with_plan(riccisol::SamplePlan::grid(
        std::vector<int>(static_cast<std::size_t>(spec->dim()), opt.samples)));
  }
  return {std::move(*spec), tol, target};
}

Json to_json(const riccisol::Vector& v) {
  Json arr = Json::array();
  for (riccisol::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json to_json(const riccisol::IdentityEntry& e) {
  Json j;
  j["max_abs"] = e.max_abs;
  j["max_rel"] = e.max_rel;
  j["worst_point"] = to_json(e.worst_point);
  j["tolerance_abs"] = e.tol.abs;
  j["tolerance_rel"] = e.tol.rel;
  j["pass"] = e.pass;
  return j;
}

void print_entry_row(const riccisol::IdentityEntry& e) {
  std::printf("  %-8s %-12.4e %-12.4e %-9.1e %-9.1e %s", riccisol::identity_name(e.id),
              e.max_abs, e.max_rel, e.tol.abs, e.tol.rel, e.pass ? "pass" : "FAIL");
  if (!e.pass) {
    std::printf("  worst at (");
    for (riccisol::Index i = 0; i < e.worst_point.size(); ++i)
      std::printf("%s%g", i ? ", " : "", e.worst_point[i]);
    std::printf(")");
  }
  std::printf("\n");
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw riccisol::SpecFileError("cannot write '" + path + "'");
  out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
}

// --------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& target, const CommonOptions& opt) {
  const Loaded in = load_target(target, opt);
  const auto& spec = in.spec;
  const bool steady = spec.kind() == riccisol::SolitonKind::Steady;

  const auto report = riccisol::identity_suite(spec, in.tol);
  std::optional<riccisol::Theorem1Report> thm1;
  std::optional<riccisol::PoissonReport> poisson;
  if (!steady) {
    thm1 = riccisol::theorem1_pipeline(spec, in.tol);
    poisson = riccisol::poisson_check(spec, in.tol);
  }

  bool pass = report.pass;
  if (thm1) pass = pass && thm1->pass;
  if (poisson) pass = pass && poisson->algebra_ok;

  if (!opt.quiet && !opt.json) {
    std::printf("spec: %s (n=%d, lambda=%g, %s)\n", in.label.c_str(), spec.dim(), spec.lambda(),
                riccisol::to_string(spec.kind()));
    std::printf("samples: %d\n", report.sample_count);
    std::printf("normalization: c = %.6e, spread = %.4e%s\n", report.normalization_c,
                report.normalization_spread,
                report.auto_normalized ? "  (auto-normalized, potential shifted by c/(2*lambda))"
                                       : "");
    std::printf("  %-8s %-12s %-12s %-9s %-9s %s\n", "identity", "max-abs", "max-rel", "tol-abs",
                "tol-rel", "status");
    for (const auto& e : report.entries) print_entry_row(e);
    if (thm1) {
      std::printf("theorem 1: S - lambda*f spread = %.4e (tolerance %.1e): hypothesis %s\n",
                  thm1->spread, thm1->hypothesis_tolerance,
                  thm1->hypothesis_holds ? "holds" : "fails (identities skipped)");
      if (thm1->hypothesis_holds) {
        std::printf("  fitted c' = %.12g (n*lambda/2 = %.12g)\n", thm1->c_prime,
                    0.5 * spec.dim() * spec.lambda());
        for (const auto& e : thm1->entries) print_entry_row(e);
      }
    }
    if (poisson) {
      std::printf("poisson: max |lap(S) - lambda*(n*lambda - S)| = %.4e (hypothesis %s)\n",
                  poisson->max_r1, poisson->hypothesis_holds ? "holds" : "fails");
      std::printf("  |lap(S - lambda*f) - r1| = %.4e, S - lambda*f spread = %.4e, algebra %s\n",
                  poisson->max_r2_minus_r1, poisson->spread_s_minus_lambda_f,
                  poisson->algebra_ok ? "ok" : "VIOLATED");
      if (poisson->conclusion_applies)
        std::printf("  conclusion (non-trivial branch): %s\n",
                    poisson->conclusion_holds ? "holds" : "VIOLATED");
      std::printf("caveat: %s\n", poisson->caveat.c_str());
      std::printf("caveat: %s\n", riccisol::kSamplingCaveat);
    }
    std::printf("result: %s\n", pass ? "PASS" : "FAIL");
  }

  if (opt.json) {
    Json j;
    j["tool"] = "riccisol";
    j["command"] = "verify";
    j["target"] = in.label;
    j["dimension"] = spec.dim();
    j["lambda"] = spec.lambda();
    j["kind"] = riccisol::to_string(spec.kind());
    j["samples"] = report.sample_count;
    j["normalization"] = {{"c", report.normalization_c},
                          {"spread", report.normalization_spread},
                          {"auto_normalized", report.auto_normalized}};
    Json ids;
    for (const auto& e : report.entries) ids[riccisol::identity_name(e.id)] = to_json(e);
    j["identities"] = std::move(ids);
    if (thm1) {
      Json t;
      t["c_prime"] = thm1->c_prime;
      t["spread"] = thm1->spread;
      t["hypothesis_tolerance"] = thm1->hypothesis_tolerance;
      t["hypothesis_holds"] = thm1->hypothesis_holds;
      for (const auto& e : thm1->entries) t[riccisol::identity_name(e.id)] = to_json(e);
      j["theorem1"] = std::move(t);
    }
    if (poisson) {
      Json p;
      p["max_r1"] = poisson->max_r1;
      p["max_r2_minus_r1"] = poisson->max_r2_minus_r1;
      p["max_eq5_residual"] = poisson->max_eq5_residual;
      p["algebra_ok"] = poisson->algebra_ok;
      p["c_fit"] = poisson->c_fit;
      p["spread_s_minus_lambda_f"] = poisson->spread_s_minus_lambda_f;
      p["hypothesis_holds"] = poisson->hypothesis_holds;
      p["conclusion_applies"] = poisson->conclusion_applies;
      p["conclusion_holds"] = poisson->conclusion_holds;
      j["poisson"] = std::move(p);
    }
    j["tolerance"] = {{"abs", in.tol.abs},
                      {"rel", in.tol.rel},
                      {"overridden", opt.tolerance_set()}};
    j["caveats"] = Json::array({riccisol::kCompactnessCaveat, riccisol::kSamplingCaveat});
    j["pass"] = pass;
    std::printf("%s\n", j.dump(2).c_str());
  }

  if (!opt.csv_path.empty()) {
    std::vector<std::string> rows;
    for (const auto& e : report.entries) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%d",
                    riccisol::identity_name(e.id), e.max_abs, e.max_rel, e.tol.abs, e.tol.rel,
                    e.pass ? 1 : 0);
      rows.emplace_back(buf);
    }
    write_csv(opt.csv_path, "identity,max_abs,max_rel,tol_abs,tol_rel,pass", rows);
  }

  return pass ? kExitPass : kExitCheckFailure;
}

// --------------------------------------------------------------------------
// classify

int cmd_classify(const std::string& target, const CommonOptions& opt) {
  const Loaded in = load_target(target, opt);
  const double tol = opt.tolerance_set() ? opt.tolerance : 1e-6;
  const auto v = riccisol::classify_triviality(in.spec, tol);

  if (!opt.quiet && !opt.json) {
    std::printf("spec: %s (n=%d, lambda=%g, %s)\n", in.label.c_str(), in.spec.dim(),
                in.spec.lambda(), riccisol::to_string(in.spec.kind()));
    std::printf("verdict: %s\n", riccisol::to_string(v.verdict));
    std::printf("  criterion |S - lambda*(f + n/2)| max = %.6e\n", v.criterion_residual);
    std::printf("  potential spread = %.6e, scalar spread = %.6e\n", v.potential_spread,
                v.scalar_spread);
    std::printf("  scale = %.6g, tolerance = %g%s\n", v.scale, v.tolerance,
                opt.tolerance_set() ? " (overridden)" : "");
    if (v.consistency_flag)
      std::printf("  warning: criterion and f-constancy disagree (not a gradient soliton?)\n");
  }
  if (opt.json) {
    Json j;
    j["tool"] = "riccisol";
    j["command"] = "classify";
    j["target"] = in.label;
    j["id"] = riccisol::identity_name(riccisol::IdentityId::Thm2);
    j["verdict"] = riccisol::to_string(v.verdict);
    j["criterion_residual"] = v.criterion_residual;
    j["potential_spread"] = v.potential_spread;
    j["scalar_spread"] = v.scalar_spread;
    j["scale"] = v.scale;
    j["tolerance"] = v.tolerance;
    j["tolerance_overridden"] = opt.tolerance_set();
    j["consistency_flag"] = v.consistency_flag;
    j["auto_normalized"] = v.auto_normalized;
    j["samples"] = v.sample_count;
    std::printf("%s\n", j.dump(2).c_str());
  }
  if (v.verdict == riccisol::Triviality::Inconclusive) return kExitInconclusive;
  return kExitPass;
}

// --------------------------------------------------------------------------
// spectral

int cmd_spectral(const std::string& tag_name, int res, double radius, double side,
                 bool dichotomy, const CommonOptions& opt) {
  riccisol::ManifoldTag tag;
  if (tag_name == "sphere")
    tag = riccisol::ManifoldTag::Sphere;
  else if (tag_name == "torus")
    tag = riccisol::ManifoldTag::Torus;
  else
    throw riccisol::SpecFileError("unknown manifold tag '" + tag_name + "'");

  if (dichotomy && tag != riccisol::ManifoldTag::Sphere)
    throw riccisol::SpecFileError(
        "the flat torus is not a soliton fixture; dichotomy reporting needs the sphere");

  const double size = tag == riccisol::ManifoldTag::Sphere ? radius : side;
  const auto op = riccisol::build_laplacian(tag, res, size);
  const double conv_tol = opt.tolerance_set() ? opt.tolerance : 1e-10;
  const auto est = riccisol::first_eigenvalue(op, conv_tol, opt.seed);
  const double reference = riccisol::reference_lambda1(tag, size);
  const double rel_err = std::abs(est.lambda1 - reference) / reference;

  std::optional<riccisol::DichotomyReport> dich;
  if (dichotomy) {
    const auto fx = riccisol::einstein_trivial(riccisol::EinsteinKind::Sphere, 2, radius);
    const auto suite = riccisol::identity_suite(fx.spec);
    const auto poisson = riccisol::poisson_check(fx.spec);
    const auto verdict = riccisol::classify_triviality(fx.spec);
    const double premise =
        std::max(suite.find(riccisol::IdentityId::Eq3)->max_abs, poisson.max_r1);
    dich = riccisol::dichotomy_report(verdict.verdict == riccisol::Triviality::Trivial,
                                      premise, fx.spec.lambda(), est.lambda1);
  }

  if (!opt.quiet && !opt.json) {
    std::printf("tag: %s, resolution: %d%s, %s = %g\n", riccisol::to_string(tag), res,
                op.low_resolution ? " (low resolution)" : "",
                tag == riccisol::ManifoldTag::Sphere ? "radius" : "side", size);
    if (tag == riccisol::ManifoldTag::Sphere)
      std::printf("pole offset: %.6g rad (half a latitude cell)\n", op.pole_offset);
    std::printf("vertices: %ld, total measure: %.10g\n", static_cast<long>(op.vertex_count()),
                op.total_measure());
    std::printf("lambda1 = %.12g (closed form %.12g, relative error %.3e)\n", est.lambda1,
                reference, rel_err);
    std::printf("iterations: %d, constant orthogonality: %.3e\n", est.iterations,
                est.constant_orthogonality);
    if (dich) {
      std::printf("dichotomy: hypothesis %s; %s\n",
                  dich->hypothesis_satisfied ? "satisfied" : "not satisfied",
                  dich->note.c_str());
      std::printf("caveat: %s\n", riccisol::kCompactnessCaveat);
    }
  }
  if (opt.json) {
    Json j;
    j["tool"] = "riccisol";
    j["command"] = "spectral";
    j["tag"] = riccisol::to_string(tag);
    j["resolution"] = res;
    j["size"] = size;
    j["low_resolution"] = op.low_resolution;
    if (tag == riccisol::ManifoldTag::Sphere) j["pole_offset"] = op.pole_offset;
    j["vertices"] = static_cast<long>(op.vertex_count());
    j["total_measure"] = op.total_measure();
    j["lambda1"] = est.lambda1;
    j["reference"] = reference;
    j["relative_error"] = rel_err;
    j["iterations"] = est.iterations;
    j["constant_orthogonality"] = est.constant_orthogonality;
    j["seed"] = opt.seed;
    if (dich) {
      Json d;
      d["id"] = riccisol::identity_name(riccisol::IdentityId::Thm34);
      d["hypothesis_satisfied"] = dich->hypothesis_satisfied;
      d["trivial_branch"] = dich->trivial_branch;
      d["lambda"] = dich->lambda;
      d["lambda1"] = dich->lambda1;
      d["dichotomy_satisfied"] = dich->dichotomy_satisfied;
      d["note"] = dich->note;
      d["caveat"] = riccisol::kCompactnessCaveat;
      j["dichotomy"] = std::move(d);
    }
    std::printf("%s\n", j.dump(2).c_str());
  }
  if (!opt.csv_path.empty()) {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < est.history.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%zu,%.17g", i + 1, est.history[i]);
      rows.emplace_back(buf);
    }
    write_csv(opt.csv_path, "iteration,rayleigh", rows);
  }
  return kExitPass;
}

// --------------------------------------------------------------------------
// catalog

int cmd_catalog_list(const CommonOptions& opt) {
  if (opt.json) {
    Json arr = Json::array();
    for (const auto& fx : riccisol::builtin_fixtures()) {
      Json j;
      j["name"] = fx.name;
      j["dimension"] = fx.spec.dim();
      j["lambda"] = fx.spec.lambda();
      j["kind"] = riccisol::to_string(fx.spec.kind());
      j["trivial"] = fx.trivial;
      arr.push_back(std::move(j));
    }
    std::printf("%s\n", arr.dump(2).c_str());
    return kExitPass;
  }
  std::printf("%-24s %-4s %-10s %-12s %s\n", "name", "n", "lambda", "kind", "triviality");
  for (const auto& fx : riccisol::builtin_fixtures())
    std::printf("%-24s %-4d %-10g %-12s %s\n", fx.name.c_str(), fx.spec.dim(), fx.spec.lambda(),
                riccisol::to_string(fx.spec.kind()), fx.trivial ? "trivial" : "non-trivial");
  return kExitPass;
}

int cmd_catalog_show(const std::string& name, const CommonOptions& opt) {
  const auto* fx = riccisol::find_fixture(name);
  if (!fx) throw riccisol::SpecFileError("unknown catalog fixture '" + name + "'");
  if (opt.json) {
    // Emit the JSON input encoding of the same document.
    const auto& spec = fx->spec;
    const auto& names = spec.chart().coord_names();
    Json j;
    j["dimension"] = spec.dim();
    j["coordinates"] = names;
    j["lambda"] = spec.lambda();
    j["potential"] = riccisol::to_string(spec.potential_expr(), names);
    Json metric;
    for (int i = 0; i < spec.dim(); ++i)
      for (int k = 0; k <= i; ++k)
        metric[std::to_string(i + 1) + "," + std::to_string(k + 1)] =
            riccisol::to_string(spec.metric().component(i, k), names);
    j["metric"] = std::move(metric);
    Json domain;
    for (int i = 0; i < spec.dim(); ++i) {
      const auto [lo, hi] = spec.chart().domain()[static_cast<std::size_t>(i)];
      domain[names[static_cast<std::size_t>(i)]] = Json::array({lo, hi});
    }
    j["domain"] = std::move(domain);
    if (spec.chart().validity())
      j["validity"] = riccisol::to_string(*spec.chart().validity(), names);
    std::printf("%s\n", j.dump(2).c_str());
    return kExitPass;
  }
  std::printf("# %s: %s\n", fx->name.c_str(), fx->provenance.c_str());
  std::printf("%s", riccisol::emit_spec_file(fx->spec).c_str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riccisol: residual verification of gradient Ricci solitons on coordinate charts"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string target;
  std::string tag;
  std::string show_name;
  int res = 64;
  double radius = 1.0;
  double side = 2.0 * std::numbers::pi;
  bool dichotomy = false;

  auto* verify = app.add_subcommand(
      "verify", "evaluate every identity of a soliton spec as pointwise residuals");
  verify->add_option("target", target, "spec path, '-' for stdin, or catalog:<name>")
      ->required();
  add_common(verify, opt);

  auto* classify = app.add_subcommand(
      "classify", "decide triviality via the criterion S = lambda*(f + n/2)");
  classify->add_option("target", target, "spec path, '-' for stdin, or catalog:<name>")
      ->required();
  add_common(classify, opt);

  auto* spectral =
      app.add_subcommand("spectral", "estimate the first nonzero Laplace eigenvalue");
  spectral->add_option("tag", tag, "manifold tag: sphere | torus")->required();
  spectral->add_option("--res", res, "cells per axis (>= 8)");
  spectral->add_option("--radius", radius, "sphere radius");
  spectral->add_option("--side", side, "torus side length");
  spectral->add_flag("--dichotomy", dichotomy,
                     "report the trivial-or-eigenvalue dichotomy for the sphere fixture");
  add_common(spectral, opt);

  auto* catalog = app.add_subcommand("catalog", "browse the built-in fixtures");
  auto* list = catalog->add_subcommand("list", "list fixture names and properties");
  add_common(list, opt);
  auto* show = catalog->add_subcommand("show", "emit one fixture as a spec document");
  show->add_option("name", show_name, "fixture name")->required();
  add_common(show, opt);
  catalog->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(target, opt);
    if (classify->parsed()) return cmd_classify(target, opt);
    if (spectral->parsed()) return cmd_spectral(tag, res, radius, side, dichotomy, opt);
    if (list->parsed()) return cmd_catalog_list(opt);
    if (show->parsed()) return cmd_catalog_show(show_name, opt);
  } catch (const riccisol::SpecFileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const riccisol::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const riccisol::MetricNotSpdError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const riccisol::EvalDomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailure;
  }
  return kExitInputError;
}

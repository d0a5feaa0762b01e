// besov: regularity bounds, wavelet analysis and n-term studies from the command line.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "besov/approx.hpp"
#include "besov/besovwav.hpp"
#include "besov/bounds.hpp"
#include "besov/grid.hpp"
#include "besov/models.hpp"
#include "besov/seminorms.hpp"
#include "besov/verify.hpp"
#include "besov/version.hpp"
#include "besov/wavelet.hpp"

namespace fs = std::filesystem;
using besov::PreconditionError;
using nlohmann::json;

namespace {

constexpr int kExitPrecondition = 2;
constexpr int kExitSuiteFailed = 3;

std::string num(double x) { return std::isfinite(x) ? fmt::format("{:.17g}", x) : "nan"; }

json num_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json file_entry(const fs::path& p) {
  const std::string bytes = besov::detail::read_all(p);
  return {{"path", p.string()}, {"bytes", bytes.size()}, {"fnv1a64", fmt::format("{:016x}", fnv1a(bytes))}};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(besov::Exponent::parse(tok).to_double());
  return out;
}

/// Collects what a run read, wrote and resolved, then writes it next to the primary output.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json params = json::object();
  json inputs = json::array();
  json outputs = json::array();
  json results = json::object();
  std::uint64_t seed = besov::kDefaultPairSeed;
  std::string path;

  void input(const fs::path& p) { inputs.push_back(file_entry(p)); }
  void output(const fs::path& p) { outputs.push_back(file_entry(p)); }

  void write(const std::string& primary_out) const {
    const std::string target = !path.empty()            ? path
                               : !primary_out.empty() ? primary_out + ".manifest.json"
                                                      : "besov-" + command + ".manifest.json";
    json m{{"version", besov::kVersion}, {"command", command}, {"argv", argv},     {"params", params},
           {"seed", seed},               {"inputs", inputs},   {"outputs", outputs}};
    if (!results.empty()) m["results"] = results;
    besov::detail::write_atomic(target, m.dump(2) + "\n");
  }
};

/// Writes to a file atomically, or to stdout when the path is empty.
void emit(const std::string& path, const std::string& bytes, Manifest& man) {
  if (path.empty()) {
    std::cout << bytes;
    return;
  }
  besov::detail::write_atomic(path, bytes);
  man.output(path);
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::string p;
  std::string q = "inf";
  std::string domain = "lipschitz";
  std::string out;
};

std::vector<besov::Rational> parse_p_spec(const std::string& s, bool& sweep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() == 1) {
    sweep = false;
    return {besov::Rational::parse(parts[0])};
  }
  if (parts.size() != 3) throw PreconditionError("--p expects a value or lo:hi:step, got '" + s + "'");
  sweep = true;
  return besov::rational_range(besov::Rational::parse(parts[0]), besov::Rational::parse(parts[1]),
                               besov::Rational::parse(parts[2]));
}

int run_bounds(const BoundsArgs& a, Manifest& man) {
  bool sweep = false;
  const auto ps = parse_p_spec(a.p, sweep);
  const besov::Exponent q = besov::Exponent::parse(a.q);
  const besov::DomainClass dc = besov::parse_domain_class(a.domain);
  man.params = {{"p", a.p}, {"q", q.str()}, {"domain", besov::to_string(dc)}, {"out", a.out}};

  const auto rows = besov::figure1_data(ps, q, dc);
  if (!sweep && !rows[0].sigma_bar) {
    std::cerr << fmt::format("error: (p, q) = ({}, {}) not covered: requires {}\n", rows[0].p.str(), q.str(),
                             rows[0].sigma_bar.failed);
    return kExitPrecondition;
  }

  std::string csv = "p,sigma_bar,s_star,line,branch\n";
  json breaks = json::array();
  int invalid = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string branch = r.sigma_bar ? r.sigma_bar.branch : "invalid:" + r.sigma_bar.failed;
    invalid += !r.sigma_bar;
    csv += fmt::format("{},{},{},{},\"{}\"\n", num(r.p.to_double()), num(r.sigma_bar.value),
                       r.s_star ? num(r.s_star.value) : "nan", r.sigma_bar.line, branch);
    if (i > 0 && rows[i - 1].sigma_bar.line != r.sigma_bar.line)
      breaks.push_back({{"after_p", rows[i - 1].p.str()}, {"at_p", r.p.str()}, {"from_line", rows[i - 1].sigma_bar.line},
                        {"to_line", r.sigma_bar.line}});
  }
  emit(a.out, csv, man);
  man.results = {{"rows", rows.size()}, {"invalid_rows", invalid}, {"breakpoints", breaks}};

  if (!sweep) {
    const auto& r = rows[0];
    std::cerr << fmt::format("{} domain, p = {}, q = {}: sigma_bar = {} ({}), s* = {}, line {} [{}]\n",
                             besov::to_string(dc), r.p.str(), q.str(), r.sigma_bar.exact ? r.sigma_bar.exact->str() : "-",
                             num(r.sigma_bar.value), r.s_star.exact ? r.s_star.exact->str() : num(r.s_star.value),
                             r.sigma_bar.line, r.sigma_bar.branch);
  } else {
    std::cerr << fmt::format("{} rows, {} invalid, {} branch changes\n", rows.size(), invalid, breaks.size());
    for (const auto& b : breaks)
      std::cerr << fmt::format("  line {} -> {} between p = {} and p = {}\n", b["from_line"].get<int>(),
                               b["to_line"].get<int>(), b["after_p"].get<std::string>(), b["at_p"].get<std::string>());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// grid

struct GridArgs {
  std::string model = "corner";
  int J = 8;
  double p = 2.0;
  double omega = 1.5 * std::numbers::pi;
  std::string out;
};

int run_grid(const GridArgs& a, Manifest& man) {
  man.params = {{"model", a.model}, {"J", a.J}, {"out", a.out}};
  besov::require(a.J >= 2 && a.J <= 13, "J must lie in [2, 13]");
  std::optional<besov::GridFunction> g;
  if (a.model == "flat") {
    man.params["p"] = a.p;
    g = besov::flat_singularity(a.p, a.J);
  } else if (a.model == "corner") {
    man.params["omega"] = a.omega;
    g = besov::corner_singularity(a.omega, a.J);
  } else if (a.model == "bump") {
    g = besov::smooth_bump(a.J);
  } else {
    throw PreconditionError("unknown model '" + a.model + "' (expected flat, corner or bump)");
  }
  besov::save_grid(*g, a.out);
  man.output(a.out);
  man.output(a.out + ".bin");
  std::cerr << fmt::format("wrote {} ({} samples, domain {})\n", a.out, g->spec().size(),
                           besov::to_string(g->domain().kind));
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string grid;
  int m = 3;
  int j0 = 2;
  double p = 2.0;
  std::string sigma;
  std::string s;
  double c = 2.0;
  std::string hoelder;
  bool modulus = false;
  std::string levels;
  std::string coeff_csv;
  std::string out;
};

json level_profile(const besov::QuasiNorm& q, int jlo, int jhi) {
  json per = json::array();
  for (std::size_t i = 0; i < q.levels.size(); ++i) per.push_back({{"j", q.levels[i]}, {"sum", num_json(q.per_level[i])}});
  json out{{"coarse", q.coarse}, {"detail", q.detail}, {"total", q.total}, {"exponent", q.exponent}, {"per_level", per}};
  // slope of log2 of the per-level sums; undefined when a level sum vanishes
  bool positive = true;
  for (std::size_t i = 0; i < q.levels.size(); ++i)
    if (q.levels[i] >= jlo && q.levels[i] <= jhi && !(q.per_level[i] > 0)) positive = false;
  out["level_slope"] = positive && jhi > jlo ? num_json(besov::level_log2_slope(q.levels, q.per_level, jlo, jhi)) : json(nullptr);
  out["slope_levels"] = {jlo, jhi};
  return out;
}

int run_analyze(const AnalyzeArgs& a, Manifest& man) {
  const besov::GridFunction g = besov::load_grid(a.grid);
  man.input(a.grid);
  man.input(a.grid + ".bin");
  const auto sigmas = parse_list(a.sigma);
  const auto ss = parse_list(a.s);
  besov::require(!sigmas.empty() || !ss.empty(), "give at least one --sigma or --s value");

  const besov::WaveletCoeffs coeffs = besov::analyze(g, a.m, a.j0, a.p);
  int jlo = a.j0, jhi = coeffs.J - 1;
  if (!a.levels.empty()) {
    const auto colon = a.levels.find(':');
    besov::require(colon != std::string::npos, "--levels expects lo:hi");
    jlo = std::stoi(a.levels.substr(0, colon));
    jhi = std::stoi(a.levels.substr(colon + 1));
    besov::require(jlo >= a.j0 && jhi <= coeffs.J - 1 && jlo < jhi, "--levels outside the detail levels");
  }
  man.params = {{"grid", a.grid}, {"m", a.m},         {"j0", a.j0},          {"p", a.p},
                {"sigma", sigmas}, {"s", ss},           {"c", a.c},            {"hoelder", a.hoelder},
                {"modulus", a.modulus}, {"levels", {jlo, jhi}}, {"coeff_csv", a.coeff_csv}, {"out", a.out}};

  json rep{{"grid", {{"J", g.spec().J}, {"d", g.spec().d}, {"h", g.spec().h()}, {"domain", besov::to_json(g.domain())}}},
           {"m", a.m},
           {"j0", a.j0},
           {"p", a.p},
           {"details", coeffs.detail_count()}};

  json besov_rows = json::array();
  for (double s : ss) {
    json row = level_profile(besov::besov_quasinorm_wavelet(coeffs, s, a.p), jlo, jhi);
    row["s"] = s;
    besov_rows.push_back(std::move(row));
  }
  rep["besov"] = besov_rows;

  json adapt_rows = json::array();
  for (double sigma : sigmas) {
    json row = level_profile(besov::adaptivity_quasinorm(coeffs, sigma, a.p), jlo, jhi);
    row["sigma"] = sigma;
    row["split"] = besov::split_norm_contributions(coeffs, g.domain(), sigma, a.p, a.c).to_json();
    adapt_rows.push_back(std::move(row));
  }
  rep["adaptivity"] = adapt_rows;

  if (!a.hoelder.empty()) {
    const auto v = parse_list(a.hoelder);
    besov::require(v.size() == 3, "--hoelder expects ell,alpha,gamma");
    const besov::HolderParams prm{static_cast<int>(v[0]), v[1], v[2]};
    besov::require(prm.ell == v[0], "--hoelder: ell must be an integer");
    const auto w = besov::weighted_hoelder_seminorm(g, g.domain(), prm, a.c, 1, -1, man.seed);
    rep["weighted_hoelder"] = {{"ell", prm.ell},
                               {"alpha", prm.alpha},
                               {"gamma", prm.gamma},
                               {"value", w.value},
                               {"balls", w.balls},
                               {"argmax", {{"center", {w.argmax.center[0], w.argmax.center[1]}},
                                           {"radius", w.argmax.radius}, {"delta", w.argmax.delta}}}};
  }

  if (a.modulus) {
    const int r = a.m;
    const double t_max = g.spec().box.side / 4;
    const auto prof = besov::modulus_profile(g, r, t_max, a.p);
    json mrows = json::array();
    for (double s : ss)
      if (s < r) mrows.push_back({{"s", s}, {"value", besov::besov_seminorm_modulus(g, s, a.p, a.p, r)}});
    rep["modulus"] = {{"r", r}, {"t", prof.lengths}, {"omega", prof.values}, {"besov_seminorm", mrows}};
  }

  if (!a.coeff_csv.empty()) {
    std::ostringstream os;
    besov::write_coeff_csv(coeffs, besov::classify(coeffs, g.domain(), a.c), os);
    besov::detail::write_atomic(a.coeff_csv, os.str());
    man.output(a.coeff_csv);
  }
  emit(a.out, rep.dump(2) + "\n", man);
  return 0;
}

// ---------------------------------------------------------------------------
// nterm

struct NTermArgs {
  std::string grid;
  int m = 3;
  int j0 = 2;
  double p = 2.0;
  std::string budgets;
  std::string region = "domain";
  std::string out;
  std::string summary;
};

json fit_curve(besov::ApproxCurve& c, std::size_t total, double& exact_at, bool& floor_limited) {
  double emax = 0;
  for (double e : c.errors) emax = std::max(emax, e);
  exact_at = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < c.errors.size() && !std::isfinite(exact_at); ++i)
    if (c.errors[i] <= 1e-12 * emax) exact_at = c.budgets[i];
  // the sampled data runs out before every detail is used: the tail reflects the grid, not the function
  floor_limited = std::isfinite(exact_at) && exact_at < static_cast<double>(total);
  json out = c.to_json();
  try {
    c.fit();
    out = c.to_json();
  } catch (const PreconditionError& e) {
    out["slope"] = nullptr;
    out["slope_error"] = e.what();
  }
  out["errors"] = json::array();
  for (double e : c.errors) out["errors"].push_back(num_json(e));
  out["exact_at"] = num_json(exact_at);
  out["floor_limited"] = floor_limited;
  return out;
}

int run_nterm(const NTermArgs& a, Manifest& man) {
  const besov::GridFunction g = besov::load_grid(a.grid);
  man.input(a.grid);
  man.input(a.grid + ".bin");
  besov::ErrorRegion region;
  if (a.region == "domain")
    region = besov::ErrorRegion::domain;
  else if (a.region == "cube")
    region = besov::ErrorRegion::cube;
  else
    throw PreconditionError("--region must be domain or cube");
  const besov::WaveletCoeffs coeffs = besov::analyze(g, a.m, a.j0, a.p);
  besov::NTermStudy st = besov::nterm_study(coeffs, a.p, region);
  if (!a.budgets.empty()) {
    std::vector<std::size_t> b;
    for (double x : parse_list(a.budgets)) {
      besov::require(x >= 0 && x == std::floor(x), "budgets must be non-negative integers");
      b.push_back(static_cast<std::size_t>(x));
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    const auto errs = besov::best_n_term_errors(coeffs, b, a.p, region);
    st.adaptive = {};
    for (std::size_t i = 0; i < b.size(); ++i) {
      st.adaptive.budgets.push_back(static_cast<double>(b[i]));
      st.adaptive.errors.push_back(errs[i]);
    }
  }
  man.params = {{"grid", a.grid}, {"m", a.m},          {"j0", a.j0},       {"p", a.p},
                {"budgets", a.budgets.empty() ? json("dyadic") : json(a.budgets)},
                {"region", a.region}, {"out", a.out}, {"summary", a.summary}};

  // merged table: adaptive budgets plus the uniform cut sizes
  std::map<double, std::pair<double, double>> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < st.adaptive.budgets.size(); ++i) rows[st.adaptive.budgets[i]] = {st.adaptive.errors[i], nan};
  for (std::size_t i = 0; i < st.uniform.budgets.size(); ++i)
    rows[st.uniform.budgets[i]] = {st.adaptive_at_uniform[i], st.uniform.errors[i]};
  std::string csv = "n,error_adaptive,error_uniform\n";
  for (const auto& [n, e] : rows) csv += fmt::format("{},{},{}\n", num(n), num(e.first), num(e.second));
  emit(a.out, csv, man);

  double ea = 0, eu = 0;
  bool fa = false, fu = false;
  json sum{{"adaptive", fit_curve(st.adaptive, coeffs.detail_count(), ea, fa)},
           {"uniform", fit_curve(st.uniform, coeffs.detail_count(), eu, fu)},
           {"adaptive_dominates", st.adaptive_dominates},
           {"adaptive_at_uniform", st.adaptive_at_uniform},
           {"wavelet_order_rate", static_cast<double>(a.m) / g.spec().d}};
  sum["floor_limited"] = fa || fu;
  sum["exact_at"] = num_json(ea);
  const std::string spath = !a.summary.empty() ? a.summary : !a.out.empty() ? a.out + ".summary.json" : "";
  if (spath.empty()) {
    std::cerr << sum.dump(2) << "\n";
  } else {
    besov::detail::write_atomic(spath, sum.dump(2) + "\n");
    man.output(spath);
  }
  man.results = {{"slope_adaptive", sum["adaptive"]["slope"]},
                 {"slope_uniform", sum["uniform"]["slope"]},
                 {"adaptive_dominates", st.adaptive_dominates}};
  std::cerr << fmt::format("adaptive slope {}, uniform slope {}, adaptive dominates: {}\n",
                           sum["adaptive"]["slope"].dump(), sum["uniform"]["slope"].dump(), st.adaptive_dominates);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = besov::kDefaultPairSeed;
  std::string out;
};

int run_verify(const VerifyArgs& a, Manifest& man) {
  man.params = {{"suite", a.suite}, {"out", a.out}};
  const besov::SuiteReport rep = besov::run_suite(a.suite, a.seed);
  for (const auto& c : rep.checks)
    std::cerr << fmt::format("[{}]{} {}: {} (limit {}){}\n", c.passed ? "PASS" : "FAIL", c.hard ? "" : " soft", c.name,
                             num(c.value), num(c.limit), c.detail.empty() ? "" : "  " + c.detail);
  emit(a.out, rep.to_json().dump(2) + "\n", man);
  man.results = {{"passed", rep.passed()}};
  return rep.passed() ? 0 : kExitSuiteFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Besov regularity and adaptive approximation toolkit"};
  app.set_version_flag("--version", std::string(besov::kVersion));
  app.require_subcommand(1);

  Manifest man;
  for (int i = 0; i < argc; ++i) man.argv.emplace_back(argv[i]);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "sigma-bar and s* for one p or a sweep lo:hi:step");
  bounds->add_option("--p", ba.p, "p value or lo:hi:step")->required();
  bounds->add_option("--q", ba.q, "q value or inf")->capture_default_str();
  bounds->add_option("--domain", ba.domain, "lipschitz or polygonal")->capture_default_str();
  bounds->add_option("--out", ba.out, "CSV output (stdout if omitted)");

  GridArgs ga;
  auto* grid = app.add_subcommand("grid", "sample a model solution to a grid file");
  grid->add_option("--model", ga.model, "flat, corner or bump")->capture_default_str();
  grid->add_option("--J", ga.J, "grid level, 2^J points per side")->capture_default_str();
  grid->add_option("--p", ga.p, "p for the flat model")->capture_default_str();
  grid->add_option("--omega", ga.omega, "interior angle for the corner model")->capture_default_str();
  grid->add_option("--out", ga.out, "grid header path")->required();

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "wavelet quasi-norms of a grid function");
  analyze->add_option("--grid", aa.grid, "grid header path")->required();
  analyze->add_option("--m", aa.m, "vanishing moments")->capture_default_str();
  analyze->add_option("--j0", aa.j0, "coarsest level")->capture_default_str();
  analyze->add_option("--p", aa.p, "integrability")->capture_default_str();
  analyze->add_option("--sigma", aa.sigma, "comma separated adaptivity smoothness values");
  analyze->add_option("--s", aa.s, "comma separated Besov smoothness values");
  analyze->add_option("--c", aa.c, "ball expansion constant")->capture_default_str();
  analyze->add_option("--hoelder", aa.hoelder, "ell,alpha,gamma for the weighted Hoelder semi-norm");
  analyze->add_flag("--modulus", aa.modulus, "add the modulus of smoothness profile");
  analyze->add_option("--levels", aa.levels, "lo:hi levels for the slope fit");
  analyze->add_option("--coeff-csv", aa.coeff_csv, "dump classified coefficients");
  analyze->add_option("--out", aa.out, "JSON report (stdout if omitted)");
  analyze->add_option("--seed", man.seed, "pair sampling seed");

  NTermArgs na;
  auto* nterm = app.add_subcommand("nterm", "best n-term versus uniform refinement");
  nterm->add_option("--grid", na.grid, "grid header path")->required();
  nterm->add_option("--m", na.m, "vanishing moments")->capture_default_str();
  nterm->add_option("--j0", na.j0, "coarsest level")->capture_default_str();
  nterm->add_option("--p", na.p, "error norm exponent")->capture_default_str();
  nterm->add_option("--budgets", na.budgets, "comma separated n values (default powers of two)");
  nterm->add_option("--region", na.region, "domain or cube")->capture_default_str();
  nterm->add_option("--out", na.out, "CSV output (stdout if omitted)");
  nterm->add_option("--summary", na.summary, "JSON summary path (default <out>.summary.json)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", va.suite, "embedding, tables, wavelet-core or seminorm-oracles")->required();
  verify->add_option("--seed", va.seed, "seed for sampled checks")->capture_default_str();
  verify->add_option("--out", va.out, "JSON report (stdout if omitted)");

  for (auto* sc : {bounds, grid, analyze, nterm, verify})
    sc->add_option("--manifest", man.path, "manifest path (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitPrecondition;
  }

  try {
    int rc = 0;
    std::string primary;
    if (bounds->parsed()) {
      man.command = "bounds";
      primary = ba.out;
      rc = run_bounds(ba, man);
    } else if (grid->parsed()) {
      man.command = "grid";
      primary = ga.out;
      rc = run_grid(ga, man);
    } else if (analyze->parsed()) {
      man.command = "analyze";
      primary = aa.out;
      rc = run_analyze(aa, man);
    } else if (nterm->parsed()) {
      man.command = "nterm";
      primary = na.out;
      rc = run_nterm(na, man);
    } else {
      man.command = "verify";
      man.seed = va.seed;
      primary = va.out;
      rc = run_verify(va, man);
    }
    man.write(primary);
    return rc;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const besov::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

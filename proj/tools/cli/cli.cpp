// Copyright 2026 The dexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dexp/lattices.hpp"
#include "dexp/text_io.hpp"
#include "report.hpp"

namespace dexp::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  int workers = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget_nodes;
  std::optional<double> budget_seconds;
  std::string out_dir;
};

struct Outcome {
  std::string kind;
  Json payload;
  bool budget_exhausted = false;
  bool failed = false;
  std::string summary;
  // Extra artifacts (name suffix, contents) written next to the report.
  std::vector<std::pair<std::string, std::string>> files;
};

class Session {
 public:
  explicit Session(const Globals& g) : globals_(g) {}

  const Globals& globals() const { return globals_; }
  Json& params() { return params_; }
  const Json& inputs() const { return inputs_; }

  /// Reads an input file and records its hash.
  std::string Load(const std::string& path) {
    std::string text = ReadTextFile(path);
    inputs_.push_back(Json{{"path", path}, {"sha256", Sha256Hex(text)}});
    return text;
  }

  SearchOptions Options() const {
    SearchOptions o;
    o.workers = globals_.workers;
    if (globals_.budget_nodes) o.budget.max_nodes = *globals_.budget_nodes;
    if (globals_.budget_seconds) o.budget.max_seconds = *globals_.budget_seconds;
    return o;
  }

 private:
  Globals globals_;
  Json params_ = Json::object();
  Json inputs_ = Json::array();
};

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> ParseIntList(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const std::string& item : SplitList(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != item.size()) throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> ParseNumberList(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& item : SplitList(s)) {
    try {
      out.push_back(ToDouble(ParseRational(item)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string(what) + ": " + e.what());
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

RationalVector SingleLine(const RationalMatrix& a, const std::string& path) {
  if (a.rows() == 1) return a.row(0);
  if (a.cols() == 1) return a.transposed().row(0);
  throw std::invalid_argument(path + ": this mode needs a single row or column");
}

void RequirePositive(long h, const char* what) {
  if (h < 1) throw std::invalid_argument(std::string(what) + " must be at least 1");
}

std::string ResolveOut(const Globals& g, const std::string& out, const std::string& fallback) {
  fs::path p = out.empty() ? fs::path(fallback) : fs::path(out);
  if (p.is_relative() && !g.out_dir.empty()) p = fs::path(g.out_dir) / p;
  return p.string();
}

void WriteFile(const std::string& path, const std::string& contents) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << contents;
}

std::string StemPath(const std::string& report_path) {
  fs::path p(report_path);
  if (p.extension() == ".json") p.replace_extension();
  return p.string();
}

struct ExponentCmd {
  std::string matrix;
  long height = 0;
  bool mult = false, simult = false, sigma = false;
  std::string norm = "sup";

  Outcome Exec(Session& s) const {
    RequirePositive(height, "--height");
    const RationalMatrix a = ParseMatrix(s.Load(matrix), matrix);
    SearchOptions opt = s.Options();
    opt.norm = norm == "euclid" ? Norm::kEuclid : Norm::kSup;
    const std::string mode = mult ? "multiplicative" : sigma ? "uniform_sigma" : "simultaneous";
    s.params() = Json{{"height", height}, {"mode", mode}, {"norm", norm}};
    RecordCurve curve;
    if (mult) curve = OmegaMultRecords(SingleLine(a, matrix), height, opt);
    else if (sigma) curve = SigmaRecords(SingleLine(a, matrix), height, opt);
    else curve = OmegaRecords(a, height, opt);
    Outcome o;
    o.kind = "record_curve";
    o.payload = Json{{"mode", mode}, {"matrix", ToJson(a)}, {"curve", ToJson(curve)}};
    o.budget_exhausted = curve.budget_exhausted;
    std::ostringstream sum;
    sum << "estimate " << (curve.infinite() ? std::string("inf") : std::to_string(curve.estimate))
        << " tail " << curve.tail_estimate << " records " << curve.records.size();
    o.summary = sum.str();
    return o;
  }
};

struct SubspaceCmd {
  std::string matrix;
  long height = 0;
  std::string orders;
  bool closed_form = false, search_gap = false, all_orders = false;
  int trials = 12;

  Outcome Exec(Session& s) const {
    RequirePositive(height, "--height");
    const RationalMatrix a = ParseMatrix(s.Load(matrix), matrix);
    const AffineSubspaceParam p(a);
    const std::vector<int> ord = ParseIntList(orders, "--orders");
    const SearchOptions opt = s.Options();
    s.params() = Json{{"height", height}, {"orders", ord}, {"closed_form_2x2", closed_form},
                      {"search_gap", search_gap}, {"trials", trials}, {"all_orders", all_orders}};
    const OrderExponentReport rep = SubspaceExponent(p, height, opt, ord, all_orders);
    Outcome o;
    o.kind = "order_exponent_report";
    o.payload = Json{{"matrix", ToJson(a)}, {"n", p.n()}, {"s", p.s()}, {"report", ToJson(rep)}};
    for (const auto& [order, curve] : rep.curves) o.budget_exhausted = o.budget_exhausted || curve.budget_exhausted;
    if (closed_form) {
      if (a.rows() != 2 || a.cols() != 2) throw std::invalid_argument("--closed-form-2x2 needs a 2x2 matrix");
      const RecordCurve closed = Omega2Records(a, height, true, opt);
      const RecordCurve general = Omega2Records(a, height, false, opt);
      const bool equal = ToJson(closed) == ToJson(general);
      o.payload["closed_form_2x2"] = Json{{"closed_form", ToJson(closed)}, {"general", ToJson(general)}, {"equal", equal}};
      o.failed = !equal;
      o.budget_exhausted = o.budget_exhausted || closed.budget_exhausted || general.budget_exhausted;
    }
    if (search_gap) {
      const GapSearchReport gap = GapSearch(trials, height, s.globals().seed, opt);
      o.payload["gap_search"] = ToJson(gap);
      o.budget_exhausted = o.budget_exhausted || gap.budget_exhausted;
    }
    std::ostringstream sum;
    sum << "orders";
    for (const auto& [order, curve] : rep.curves) sum << " " << order << ":" << curve.estimate;
    sum << " combined " << rep.combined;
    o.summary = sum.str();
    return o;
  }
};

struct FlowCmd {
  std::string vector;
  std::string lambda0 = "4", ratio = "2";
  int count = 20;
  std::optional<double> eta;

  Outcome Exec(Session& s) const {
    const RationalVector y = ParseVector(s.Load(vector), vector);
    const std::vector<Rational> grid = GeometricGrid(ParseRational(lambda0), ParseRational(ratio), count);
    TraceOptions opt;
    opt.workers = s.globals().workers;
    if (s.globals().budget_nodes) opt.budget.max_nodes = *s.globals().budget_nodes;
    opt.eta = eta;
    s.params() = Json{{"lambda0", lambda0}, {"ratio", ratio}, {"count", count}, {"eta", eta ? Number(*eta) : Json(nullptr)}};
    const TraceResult res = MakeExcursionTrace(y, grid, opt);
    const GammaEstimate g = EstimateGamma(res.trace);
    Outcome o;
    o.kind = "excursion_trace";
    Json yj = Json::array();
    for (const Rational& v : y) yj.push_back(ToString(v));
    o.payload = Json{{"y", yj}, {"trace", ToJson(res, g)}};
    o.budget_exhausted = res.exhausted;
    o.files.emplace_back(".trace.tsv", FormatTrace(res.trace, g));
    o.summary = "gamma " + std::to_string(g.estimate) + " points " + std::to_string(res.trace.points.size());
    return o;
  }
};

struct NondivVerifyCmd {
  std::string map;
  double t = 3;
  std::string eps_grid = "1/8,1/16,1/32,1/64,1/128,1/256";
  std::uint64_t samples = 1'000'000;
  double c = 2 * std::sqrt(2.0), alpha = 1, d = 3;
  int n = 2, rho_height = 3, rho_grid = 64;

  Outcome Exec(Session& s) const {
    EscapeBoundConfig cfg;
    cfg.map = ParsePolynomialMap(s.Load(map), map);
    cfg.t = t;
    cfg.eps_grid = ParseNumberList(eps_grid, "--eps-grid");
    cfg.samples = samples;
    cfg.seed = s.globals().seed;
    cfg.goodness = {c, alpha};
    cfg.space = {n, d, cfg.map.d};
    cfg.rho_height = rho_height;
    cfg.rho_grid = rho_grid;
    cfg.workers = s.globals().workers;
    bool capped = false;
    if (s.globals().budget_nodes && *s.globals().budget_nodes < cfg.samples) {
      cfg.samples = *s.globals().budget_nodes;
      capped = true;
    }
    if (s.globals().budget_seconds) cfg.budget.max_seconds = *s.globals().budget_seconds;
    s.params() = Json{{"t", Number(t)}, {"eps_grid", eps_grid}, {"samples", samples}, {"C", Number(c)},
                      {"alpha", Number(alpha)}, {"N", n}, {"D", Number(d)},
                      {"rho_height", rho_height}, {"rho_grid", rho_grid}};
    const EscapeBoundReport r = EscapeBoundVerify(cfg);
    Outcome o;
    o.kind = "nondivergence_verification";
    o.payload = ToJson(r, cfg);
    o.budget_exhausted = r.budget_exhausted || capped;
    o.failed = !r.bound_holds;
    std::ostringstream sum;
    sum << "rho " << r.rho << " bound " << (r.bound_holds ? "holds" : "VIOLATED") << " slope ";
    if (r.slope) sum << *r.slope;
    else sum << "undefined";
    o.summary = sum.str();
    return o;
  }
};

struct NondivMarkingCmd {
  std::string map;
  int grid = 100;
  std::string rho = "1/2", eps = "1/8", lambda = "4";

  Outcome Exec(Session& s) const {
    const PolynomialMap m = ParsePolynomialMap(s.Load(map), map);
    if (grid < 1) throw std::invalid_argument("--grid must be at least 1");
    MarkingConfig cfg;
    cfg.k = m.n() + 1;
    cfg.lambda = ParseRational(lambda);
    cfg.rho = ParseRational(rho);
    cfg.eps = ParseRational(eps);
    cfg.workers = s.globals().workers;
    std::vector<int> idx(m.d, 0);
    while (true) {
      RationalVector x(m.d);
      for (int i = 0; i < m.d; ++i) {
        const Rational lo = FromDouble(m.lo[i]), hi = FromDouble(m.hi[i]);
        x[i] = lo + (hi - lo) * Ratio(idx[i], grid);
      }
      cfg.grid.push_back(m.EvalExact(x));
      int i = 0;
      while (i < m.d && ++idx[i] == grid) idx[i++] = 0;
      if (i == m.d) break;
    }
    s.params() = Json{{"grid", grid}, {"rho", rho}, {"eps", eps}, {"lambda", lambda}};
    const MarkingReport r = MarkingInclusionCheck(cfg);
    Outcome o;
    o.kind = "marking_inclusion";
    o.payload = ToJson(r, cfg);
    o.failed = !r.holds;
    o.summary = "points " + std::to_string(r.points) + " marked " + std::to_string(r.marked) + " violations " +
                std::to_string(r.violations.size());
    return o;
  }
};

struct SelftestCmd {
  int cases = 200;

  Outcome Exec(Session& s) const {
    if (cases < 1) throw std::invalid_argument("--cases must be at least 1");
    const std::uint64_t seed = s.globals().seed;
    const int w = s.globals().workers;
    s.params() = Json{{"cases", cases}};
    const std::vector<Rational> lambdas{Rational(2), Rational(3, 2), Rational(5, 4), Rational(7, 3), Rational(10)};
    const std::vector<IdentityReport> suites{
        ContractionIdentitySuite(cases, 4, seed, w), TwoPathSuite(cases, 4, lambdas, seed, w),
        FirstOrderEqualitySuite(std::max(2, cases / 50), 3, 3, 20, seed, w)};
    Outcome o;
    o.kind = "selftest";
    Json arr = Json::array();
    bool ok = true;
    for (const IdentityReport& r : suites) {
      arr.push_back(ToJson(r));
      ok = ok && r.passed();
    }
    o.payload = Json{{"suites", arr}, {"passed", ok}};
    o.failed = !ok;
    o.summary = ok ? "all identity suites passed" : "identity suite FAILED";
    return o;
  }
};

struct SearchGapCmd {
  int trials = 12;
  long height = 20;

  Outcome Exec(Session& s) const {
    RequirePositive(height, "--height");
    if (trials < 1) throw std::invalid_argument("--trials must be at least 1");
    s.params() = Json{{"trials", trials}, {"height", height}};
    const GapSearchReport r = GapSearch(trials, height, s.globals().seed, s.Options());
    Outcome o;
    o.kind = "gap_search";
    o.payload = ToJson(r);
    o.budget_exhausted = r.budget_exhausted;
    o.summary = r.best ? "largest gap " + std::to_string(*r.candidates[*r.best].gap) : std::string("no finite gap");
    return o;
  }
};

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diophantine exponents with exact arithmetic"};
  app.require_subcommand(1);
  Globals g;
  if (const char* env = std::getenv(kOutDirEnv)) g.out_dir = env;
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--seed", g.seed, "Seed for every random stream");
  app.add_option("--budget-nodes", g.budget_nodes, "Cap on search nodes (samples for Monte Carlo)");
  app.add_option("--budget-seconds", g.budget_seconds, "Wall-clock cap; partial results are kept");
  app.add_option("--out-dir", g.out_dir, std::string("Output directory (default $") + kOutDirEnv + ")");

  std::string out_path;
  std::string command;
  std::function<Outcome(Session&)> action;
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "Report file"); };

  ExponentCmd exponent;
  CLI::App* ex = app.add_subcommand("exponent", "Record curve of the simultaneous exponent");
  ex->add_option("--matrix", exponent.matrix, "Matrix file")->required();
  ex->add_option("--height", exponent.height, "Largest ‖q‖")->required();
  CLI::Option* mult = ex->add_flag("--mult", exponent.mult, "Multiplicative exponent of a vector");
  CLI::Option* simult = ex->add_flag("--simult", exponent.simult, "Simultaneous exponent (default)");
  CLI::Option* sigma = ex->add_flag("--sigma", exponent.sigma, "Uniform approximation by a single integer");
  mult->excludes(simult)->excludes(sigma);
  simult->excludes(sigma);
  ex->add_option("--norm", exponent.norm, "sup or euclid")->check(CLI::IsMember({"sup", "euclid"}));
  add_out(ex);
  ex->callback([&] { command = "exponent"; action = [&](Session& s) { return exponent.Exec(s); }; });

  SubspaceCmd subspace;
  CLI::App* sb = app.add_subcommand("subspace", "Higher-order exponents of an affine subspace");
  sb->add_option("--A,--matrix", subspace.matrix, "Matrix file")->required();
  sb->add_option("--height", subspace.height, "Height bound")->required();
  sb->add_option("--orders", subspace.orders, "Comma separated orders");
  sb->add_flag("--closed-form-2x2", subspace.closed_form, "Cross-check the 2x2 second-order closed form");
  sb->add_flag("--search-gap", subspace.search_gap, "Also run the random gap search");
  sb->add_option("--trials", subspace.trials, "Gap search trials");
  sb->add_flag("--all-orders", subspace.all_orders, "Allow orders above n - s");
  add_out(sb);
  sb->callback([&] { command = "subspace"; action = [&](Session& s) { return subspace.Exec(s); }; });

  FlowCmd flow;
  CLI::App* fl = app.add_subcommand("flow", "Excursion trace of g_t u_y Z^{n+1}");
  fl->add_option("--vector", flow.vector, "Vector file")->required();
  fl->add_option("--lambda0", flow.lambda0, "First λ (rational)");
  fl->add_option("--ratio", flow.ratio, "Grid ratio (rational > 1)");
  fl->add_option("--count", flow.count, "Grid points")->check(CLI::Range(1, 100000));
  fl->add_option("--eta", flow.eta, "Declared truncation error of y");
  add_out(fl);
  fl->callback([&] { command = "flow"; action = [&](Session& s) { return flow.Exec(s); }; });

  CLI::App* nd = app.add_subcommand("nondiv", "Quantitative nondivergence checks");
  nd->require_subcommand(1);
  NondivVerifyCmd verify;
  CLI::App* ver = nd->add_subcommand("verify", "Monte Carlo check of the measure bound");
  ver->add_option("--map", verify.map, "Polynomial map file")->required();
  ver->add_option("--t", verify.t, "Flow time");
  ver->add_option("--eps-grid", verify.eps_grid, "Comma separated ε values");
  ver->add_option("--samples", verify.samples, "Monte Carlo samples");
  ver->add_option("--C", verify.c, "Goodness constant C");
  ver->add_option("--alpha", verify.alpha, "Goodness exponent α");
  ver->add_option("--N", verify.n, "Besicovitch constant");
  ver->add_option("--D", verify.d, "Federer constant");
  ver->add_option("--rho-height", verify.rho_height, "HNF height for the ρ estimate");
  ver->add_option("--rho-grid", verify.rho_grid, "Grid points per axis for the ρ estimate");
  add_out(ver);
  ver->callback([&] { command = "nondiv verify"; action = [&](Session& s) { return verify.Exec(s); }; });
  NondivMarkingCmd marking;
  CLI::App* mk = nd->add_subcommand("marking", "Exact check that marked points avoid short vectors");
  mk->add_option("--map", marking.map, "Polynomial map file")->required();
  mk->add_option("--grid", marking.grid, "Grid points per axis");
  mk->add_option("--rho", marking.rho, "ρ (rational)");
  mk->add_option("--eps", marking.eps, "ε (rational)");
  mk->add_option("--lambda", marking.lambda, "λ of g (rational)");
  add_out(mk);
  mk->callback([&] { command = "nondiv marking"; action = [&](Session& s) { return marking.Exec(s); }; });

  SelftestCmd selftest;
  CLI::App* st = app.add_subcommand("selftest", "Exact identity suites");
  st->add_option("--cases", selftest.cases, "Random cases per suite");
  add_out(st);
  st->callback([&] { command = "selftest"; action = [&](Session& s) { return selftest.Exec(s); }; });

  SearchGapCmd gap;
  CLI::App* sg = app.add_subcommand("search-gap", "Random search for a gap between orders 1 and 2");
  sg->add_option("--trials", gap.trials, "Trials");
  sg->add_option("--height", gap.height, "Height bound");
  add_out(sg);
  sg->callback([&] { command = "search-gap"; action = [&](Session& s) { return gap.Exec(s); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  if (!action) {
    err << "error: no command\n";
    return kExitInvalidInput;
  }

  Session session(g);
  const std::string started = UtcNow();
  std::string fallback = command;
  for (char& ch : fallback)
    if (ch == ' ') ch = '_';
  const std::string report_path = ResolveOut(g, out_path, fallback + ".json");
  Outcome outcome;
  std::string status = "ok";
  int code = kExitOk;
  try {
    outcome = action(session);
    if (outcome.budget_exhausted) {
      status = "budget_exhausted";
      code = kExitBudget;
    } else if (outcome.failed) {
      status = "failed";
      code = kExitFailure;
    }
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const BudgetExceeded& e) {
    status = "budget_exhausted";
    code = kExitBudget;
    outcome.kind = "none";
    outcome.payload = Json{{"error", e.what()}};
    outcome.summary = e.what();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  Json report{{"schema", kReportSchema},
              {"command", command},
              {"kind", outcome.kind},
              {"status", status},
              {"provenance", Json{{"version", kVersion},
                                  {"seed", g.seed},
                                  {"inputs", session.inputs()},
                                  {"parameters", session.params()},
                                  {"budget_nodes", g.budget_nodes ? Json(*g.budget_nodes) : Json(nullptr)},
                                  {"budget_seconds", g.budget_seconds ? Number(*g.budget_seconds) : Json(nullptr)}}},
              {"payload", outcome.payload}};
  const std::string report_text = Dump(report);
  const std::string stem = StemPath(report_path);
  Json files = Json::array();
  try {
    WriteFile(report_path, report_text);
    for (const auto& [suffix, contents] : outcome.files) {
      WriteFile(stem + suffix, contents);
      files.push_back(stem + suffix);
    }
    Json manifest{{"schema", kManifestSchema},
                  {"command", command},
                  {"argv", args},
                  {"parameters", session.params()},
                  {"inputs", session.inputs()},
                  {"seed", g.seed},
                  {"workers", g.workers},
                  {"version", kVersion},
                  {"started_at", started},
                  {"finished_at", UtcNow()},
                  {"report", report_path},
                  {"report_sha256", Sha256Hex(report_text)},
                  {"artifacts", files},
                  {"status", status},
                  {"exit_code", code},
                  {"summary", outcome.summary}};
    WriteFile(stem + ".manifest.json", Dump(manifest));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  out << command << ": " << status << ": " << outcome.summary << " -> " << report_path << "\n";
  return code;
}

}  // namespace dexp::cli

// pidlab command-line front end.
//
//   pidlab info <dist.json> [--x A,B] [--y C]
//   pidlab decompose <dist.json> --measure i3 [--svg out.svg]
//   pidlab lattice <file.partitions>
//   pidlab axioms --measure i1 --trials 200 --seed 1
//   pidlab corpus <outdir>
//   pidlab report [--corpus DIR] [--only 1,2]
//
// Exit status: 0 ok, 2 validation error, 3 optimizer infeasibility.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "pidlab/acceptance.hpp"
#include "pidlab/axioms.hpp"
#include "pidlab/common_info.hpp"
#include "pidlab/corpus.hpp"
#include "pidlab/dist_io.hpp"
#include "pidlab/error.hpp"
#include "pidlab/partition.hpp"
#include "pidlab/pid.hpp"

using namespace pidlab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kInvalid = 2, kInfeasible = 3;

struct Settings {
  std::string format = "text";
  std::optional<double> tol;
  uint64_t seed = 1;
  std::optional<size_t> restarts;
  size_t qcard = 0;
  bool exact = false;
  bool as_float = false;
  bool verbose = false;
};

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, std::abs(v) < 5e-15 ? 0.0 : v);
  return buf;
}

// A report is an ordered JSON document plus a text rendering built alongside.
class Report {
 public:
  explicit Report(std::string verb) { doc_["verb"] = std::move(verb); }

  ojson& doc() { return doc_; }

  // Numeric fields always carry the tolerance they are good to.
  void quantity(const std::string& name, double value, double tol, const std::string& kind,
                std::optional<double> residual = std::nullopt) {
    ojson q{{"value", value}, {"tol", tol}, {"kind", kind}};
    if (residual) q["residual"] = *residual;
    doc_["quantities"][name] = q;
    std::string row = "  " + name;
    row.resize(std::max<size_t>(row.size() + 1, 24), ' ');
    row += fixed(value) + "  +/- " + short_num(tol) + "  " + kind;
    if (residual) row += "  (residual " + short_num(*residual) + ")";
    text_.push_back(row);
  }
  void line(const std::string& s) { text_.push_back(s); }

  void print(const Settings& st) const {
    if (st.format == "json") {
      std::cout << doc_.dump(2) << "\n";
    } else {
      for (const auto& l : text_) std::cout << l << "\n";
    }
  }

  static std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", v);
    return buf;
  }

 private:
  ojson doc_;
  std::vector<std::string> text_;
};

Names split_names(const std::string& s) {
  Names out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

JointDistribution load(const std::string& path, const Settings& st) {
  auto d = load_distribution(path);
  if (st.exact && !d.is_exact()) throw Error(Errc::BadParams, path + ": --exact needs rational weights");
  return st.as_float ? d.to_float() : d;
}

AuxOptions aux_options(const Settings& st, AuxOptions base = {}) {
  base.seed = st.seed;
  if (st.tol) base.tol = *st.tol;
  if (st.restarts) base.restarts = *st.restarts;
  base.q_card = st.qcard;
  if (base.q_card > 8) base.allow_large_q = true;
  if (st.verbose) base.trace = &std::cerr;
  return base;
}

PidOptions pid_options(const Settings& st, const Roles& roles) {
  PidOptions o;
  o.roles = roles;
  o.aux = aux_options(st, o.aux);
  return o;
}

// Exact inputs are computed through doubles, so 1e-12 covers the rounding.
double plain_tol(const JointDistribution& d) { return d.is_exact() ? 1e-12 : 1e-9; }
std::string plain_kind(const JointDistribution& d) { return d.is_exact() ? "exact" : "float"; }

std::string join_names(const Names& n) {
  std::string s;
  for (const auto& v : n) s += v;
  return s;
}

void run_info(const std::string& path, std::string xs, std::string ys, const Settings& st) {
  auto d = load(path, st);
  const auto& vars = d.variables();
  Names x = split_names(xs), y = split_names(ys);
  if (x.empty() && y.empty()) {
    if (vars.size() < 2) throw Error(Errc::BadParams, "need at least two variables");
    for (size_t i = 0; i + 1 < vars.size(); ++i) x.push_back(vars[i].name);
    y = {vars.back().name};
  }
  if (x.empty() || y.empty()) throw Error(Errc::BadParams, "give both --x and --y");
  const std::string X = join_names(x), Y = join_names(y);
  Report r("info");
  r.doc()["input"] = path;
  r.doc()["mode"] = plain_kind(d);
  r.doc()["x"] = x;
  r.doc()["y"] = y;
  r.line(path + "  (" + plain_kind(d) + ", X = " + X + ", Y = " + Y + ")");

  const double t = plain_tol(d);
  const std::string k = plain_kind(d);
  r.quantity("H(" + X + ")", entropy(d, x), t, k);
  r.quantity("H(" + Y + ")", entropy(d, y), t, k);
  Names xy = x;
  xy.insert(xy.end(), y.begin(), y.end());
  r.quantity("H(" + X + Y + ")", entropy(d, xy), t, k);
  r.quantity("I(" + X + ";" + Y + ")", mutual_information(d, x, y), t, k);
  r.quantity("C_GK(" + X + ";" + Y + ")", gacs_korner(d, {x, y}).entropy.bits, t, k);
  bool sat = is_saturable(d, x, y);
  r.doc()["saturable"] = sat;
  r.line(std::string("  saturable             ") + (sat ? "yes" : "no"));

  auto qy = minimal_sufficient_statistic(d, y, x);
  auto qx = minimal_sufficient_statistic(d, x, y);
  const double st_tol = d.is_exact() ? 1e-12 : 1e-9;
  r.quantity("H(Q_" + Y + "^" + X + ")", qy.common.bits, st_tol, k);
  r.quantity("H(Q_" + X + "^" + Y + ")", qx.common.bits, st_tol, k);
  r.quantity("P_W(" + Y + "\\" + X + ")", qy.residual_private.bits, st_tol, k);
  r.quantity("P_W(" + X + "\\" + Y + ")", qx.residual_private.bits, st_tol, k);

  auto aux = aux_options(st);
  auto w = wyner_ci(d, x, y, aux);
  r.quantity("C_W(" + X + ";" + Y + ")", w.solution.value.bits, aux.tol, "upper bound", w.solution.residual);
  r.quantity("P_W total", w.total_private.bits, aux.tol, "lower bound", w.solution.residual);
  auto g = common_entropy(d, x, y, aux);
  r.quantity("G(" + X + ";" + Y + ")", g.value.bits, aux.tol, "upper bound", g.residual);
  r.quantity("rho(" + X + ";" + Y + ")", hgr_maximal_correlation(d, x, y).bits, 1e-9, "numeric");
  r.print(st);
}

double measure_tol(Measure m) { return default_axiom_tol(m); }

std::string measure_kind(Measure m) {
  switch (m) {
    case Measure::I1:
    case Measure::C2GK:
      return "exact";
    case Measure::I2:
      return "lower bound";
    default:
      return "numeric";
  }
}

void run_decompose(const std::string& path, const std::string& measure, const Roles& roles, const std::string& svg,
                   const Settings& st) {
  auto d = load(path, st);
  auto m = parse_measure(measure);
  auto res = decompose(d, m, pid_options(st, roles));
  Report r("decompose");
  r.doc()["input"] = path;
  r.doc()["measure"] = res.measure;
  r.line(path + "  measure " + res.measure);
  const double t = measure_tol(m);
  const auto k = measure_kind(m);
  r.quantity("redundancy", res.redundancy.bits, t, k);
  // the other atoms follow from the redundancy by subtraction
  const auto dk = k == "exact" ? k : "derived";
  r.quantity("unique " + roles.x1, res.unique1.bits, t, dk);
  r.quantity("unique " + roles.x2, res.unique2.bits, t, dk);
  r.quantity("synergy", res.synergy.bits, t, dk);
  r.quantity("total", res.total, plain_tol(d), plain_kind(d));
  if (res.alternate_redundancy) r.quantity("alternate redundancy", *res.alternate_redundancy, t, k);
  if (!res.note.empty()) {
    r.doc()["note"] = res.note;
    r.line("  note: " + res.note);
  }
  r.line("");
  std::istringstream diagram(render_pi_diagram(res, DiagramFormat::Text));
  for (std::string l; std::getline(diagram, l);) r.line(l);
  if (!svg.empty()) {
    write_text(svg, render_pi_diagram(res, DiagramFormat::Svg));
    r.doc()["svg"] = svg;
  }
  r.print(st);
}

void run_lattice(const std::string& path, const Settings& st) {
  auto pf = load_partition_file(path);
  Report r("lattice");
  r.doc()["input"] = path;
  auto put = [&](const std::string& name, const std::string& value) {
    r.doc()["results"][name] = value;
    std::string row = "  " + name;
    row.resize(std::max<size_t>(row.size() + 1, 14), ' ');
    r.line(row + value);
  };
  auto put_list = [&](const std::string& name, const std::vector<Partition>& ps) {
    ojson arr = ojson::array();
    r.line("  " + name + ":");
    for (const auto& p : ps) {
      arr.push_back(format(p));
      r.line("    " + format(p));
    }
    r.doc()["results"][name] = arr;
  };
  put("X", format(pf.x));
  put("Y", format(pf.y));
  put("join", format(join(pf.x, pf.y)));
  put("meet", format(meet(pf.x, pf.y)));
  if (pf.event) {
    put("E", format(*pf.event));
    put("K_X(E)", format(knows(pf.x, *pf.event)));
    put("K_Y(E)", format(knows(pf.y, *pf.event)));
    put("C(E)", format(common_knowledge(pf.x, pf.y, *pf.event)));
  }
  for (bool swap : {false, true}) {
    const auto& a = swap ? pf.y : pf.x;
    const auto& b = swap ? pf.x : pf.y;
    const std::string tag = swap ? "PI_Y(X)" : "PI_X(Y)";
    auto c = private_complement(a, b);
    r.doc()["results"][tag + " chromatic number"] = c.chromatic_number;
    r.line("  " + tag + " chromatic number " + std::to_string(c.chromatic_number) +
           (c.truncated ? " (list truncated)" : ""));
    put_list(tag, c.structures);
  }
  try {
    auto rel = private_relative(pf.x, pf.y);
    put_list("relative Z", rel.structures);
  } catch (const Error& e) {
    if (e.code() != Errc::GroundTooLarge) throw;
    r.doc()["results"]["relative Z"] = nullptr;
    r.line("  relative Z: skipped, ground set too large");
  }
  r.print(st);
}

void run_axioms(const std::string& measure, size_t trials, const Settings& st) {
  auto m = parse_measure(measure);
  AxiomOptions o;
  o.random_trials = trials;
  o.seed = st.seed;
  if (st.tol) o.tol = *st.tol;
  o.pid = pid_options(st, {});
  auto rep = axiom_harness(m, o);
  Report r("axioms");
  r.doc()["measure"] = rep.measure;
  r.doc()["corpus_instances"] = rep.corpus_instances;
  r.doc()["random_trials"] = rep.random_trials;
  r.doc()["seed"] = rep.seed;
  r.doc()["tol"] = rep.tol;
  r.line("measure " + rep.measure + ", " + std::to_string(rep.corpus_instances) + " corpus + " +
         std::to_string(rep.random_trials) + " random instances, seed " + std::to_string(rep.seed) + ", tol " +
         Report::short_num(rep.tol));
  r.line("");
  r.line("  property  status            checks  worst gap  counterexample");
  ojson rows = ojson::array();
  for (const auto& e : rep.entries) {
    ojson row{{"property", property_name(e.property)},
              {"status", status_name(e.status)},
              {"checked", e.checked},
              {"worst_gap", {{"value", e.worst_gap}, {"tol", rep.tol}, {"kind", "numeric"}}}};
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-8s  %-16s  %6zu  %9.2e", property_name(e.property).c_str(),
                  status_name(e.status).c_str(), e.checked, e.worst_gap);
    std::string text = buf;
    if (e.counterexample) {
      const auto& c = *e.counterexample;
      row["counterexample"] = {{"instance", c.instance},
                               {"roles", {c.roles.x1, c.roles.x2, c.roles.y}},
                               {"gap", c.gap},
                               {"detail", c.detail},
                               {"distribution", ojson::parse(distribution_to_json(c.dist).dump())}};
      text += "  " + c.instance + ": " + c.detail;
    }
    rows.push_back(row);
    r.line(text);
  }
  r.doc()["properties"] = rows;
  r.doc()["skipped"] = rep.skipped;
  for (const auto& s : rep.skipped) r.line("  skipped " + s);
  r.print(st);
}

void run_corpus(const std::string& dir, const Settings& st) {
  Report r("corpus");
  ojson files = ojson::array();
  for (const auto& f : emit_corpus(dir)) {
    files.push_back(f.string());
    r.line(f.string());
  }
  r.doc()["files"] = files;
  r.print(st);
}

void run_report(const std::string& dir, const std::vector<int>& only, const Settings& st) {
  AcceptanceOptions o;
  if (!dir.empty()) o.corpus_dir = dir;
  o.seed = st.seed;
  o.only = only;
  auto results = run_acceptance(o);
  Report r("report");
  ojson arr = ojson::array();
  size_t passed = 0;
  for (const auto& c : results) {
    arr.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"lines", c.lines}});
    r.line(summary_line(c));
    passed += c.passed ? 1 : 0;
  }
  for (const auto& c : results) {
    r.line("");
    r.line("[" + std::to_string(c.id) + "] " + c.title + " (" + fixed(c.seconds, 2) + " s)");
    for (const auto& l : c.lines) r.line("    " + l);
  }
  r.doc()["criteria"] = arr;
  r.doc()["passed"] = passed;
  r.doc()["total"] = results.size();
  r.print(st);
}

int exit_code_for(const Error& e) {
  return e.code() == Errc::Infeasible || e.code() == Errc::NonConvergence ? kInfeasible : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pidlab: common information and partial information decomposition"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings st;
  std::string measure = "i3";
  app.add_option("--format", st.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", st.tol, "feasibility tolerance in bits")->check(CLI::PositiveNumber);
  app.add_option("--seed", st.seed, "random seed");
  app.add_option("--restarts", st.restarts, "optimizer restarts");
  app.add_option("--qcard", st.qcard, "alphabet size of auxiliary variables")->check(CLI::PositiveNumber);
  auto* ex = app.add_flag("--exact", st.exact, "require rational weights");
  app.add_flag("--float", st.as_float, "compute in floating point")->excludes(ex);
  app.add_flag("-v,--verbose", st.verbose, "trace optimizer stages on stderr");

  std::string input, xs, ys, svg, corpus_dir;
  Roles roles;
  size_t trials = 200;
  std::vector<int> only;

  auto* info = app.add_subcommand("info", "entropies, common information and maximal correlation");
  info->add_option("file", input, "distribution JSON")->required();
  info->add_option("--x", xs, "comma-separated variables");
  info->add_option("--y", ys, "comma-separated variables");

  auto* dec = app.add_subcommand("decompose", "bivariate partial information decomposition");
  dec->add_option("file", input, "distribution JSON")->required();
  dec->add_option("--measure", measure, "i1, i2, i3, i4, i4max or c2gk");
  dec->add_option("--svg", svg, "write a diagram");
  dec->add_option("--x1", roles.x1);
  dec->add_option("--x2", roles.x2);
  dec->add_option("--y", roles.y);

  auto* lat = app.add_subcommand("lattice", "partition lattice and private structures");
  lat->add_option("file", input, "partition file")->required();

  auto* ax = app.add_subcommand("axioms", "property matrix for a redundancy measure");
  ax->add_option("--measure", measure, "i1, i2, i3, i4, i4max or c2gk");
  ax->add_option("--trials", trials, "random instances");

  auto* cor = app.add_subcommand("corpus", "write the example corpus");
  cor->add_option("outdir", input, "output directory")->required();

  auto* rep = app.add_subcommand("report", "run the reproduction suite");
  rep->add_option("--corpus", corpus_dir, "read the corpus from this directory");
  rep->add_option("--only", only, "criteria to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*info) run_info(input, xs, ys, st);
    if (*dec) run_decompose(input, measure, roles, svg, st);
    if (*lat) run_lattice(input, st);
    if (*ax) run_axioms(measure, trials, st);
    if (*cor) run_corpus(input, st);
    if (*rep) run_report(corpus_dir, only, st);
  } catch (const Error& e) {
    std::cerr << "pidlab: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "pidlab: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

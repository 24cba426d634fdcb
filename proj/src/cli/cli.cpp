#include "singtrace/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>

#include "format.hpp"
#include "singtrace/dixmier.hpp"
#include "singtrace/error.hpp"
#include "singtrace/majorization.hpp"
#include "singtrace/spectra.hpp"

namespace singtrace::cli {
namespace {

using Json = nlohmann::ordered_json;
using Curve = std::vector<std::pair<double, double>>;

constexpr Index kHeadLength = 32;
constexpr Index kFullListLimit = 10'000;

// What a command hands back to the record writer.
struct Outcome {
  Json parameters = Json::object();
  Json result = Json::object();
  std::vector<std::string> diagnostics;
  std::optional<Index> horizon;
  std::optional<std::string> procedure;
  Curve curve;
  int exit_code = kOk;
};

Index parse_index(const std::string& text, const std::string& name) {
  const auto v = parse_reals(text);
  if (v.size() != 1 || !(v[0] >= 1.0) || v[0] != std::floor(v[0]) ||
      v[0] > static_cast<double>(kUnboundedHorizon))
    throw ArgumentError("--" + name + " must be a positive integer, got '" +
                        text + "'");
  return static_cast<Index>(v[0]);
}

std::string strip_file_prefix(const std::string& spec) {
  if (spec.rfind("file:", 0) != 0)
    throw ArgumentError("matrix input must be file:<csv>, got '" + spec + "'");
  return spec.substr(5);
}

Json list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json head_of(const Sequence& s, Index n) {
  return list(s.materialize(std::min(n, kHeadLength)));
}

// 0..99, then a ratio-1.02 grid, always ending at last.
std::vector<Index> log_grid(Index last) {
  std::vector<Index> g;
  for (Index k = 0; k <= last;) {
    g.push_back(k);
    k = k < 100 ? k + 1 : std::max(k + 1, static_cast<Index>(static_cast<double>(k) * 1.02));
  }
  if (g.back() != last) g.push_back(last);
  return g;
}

Json residuals_json(const LimitEvaluation& e) {
  Json d = Json::object();
  for (const auto& [n, r] : e.dilation_residuals) d[std::to_string(n)] = r;
  return Json{{"shift", e.shift_residual},
              {"dilation", d},
              {"tail_sensitivity", e.tail_sensitivity}};
}

void write_curve(const std::string& path, const Curve& curve) {
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot write curve file '" + path + "'");
  for (const auto& [x, y] : curve)
    f << detail::short_number(x) << ',' << detail::short_number(y) << '\n';
}

Json trace_json(const TraceEstimate& e) {
  Json r;
  r["value"] = e.value;
  r["verdict"] = to_string(e.verdict);
  r["band_min"] = e.band_min;
  r["band_max"] = e.band_max;
  r["band_width"] = e.band_width();
  r["criterion"] = e.criterion;
  r["cutoffs"] = list(e.extension.cutoffs);
  r["cutoff_values"] = list(e.extension.values);
  return r;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  CLI::App* add(const std::string& name, const std::string& help,
                std::function<Outcome()> body) {
    CLI::App* sub = app_.add_subcommand(name, help);
    bodies_.emplace_back(sub, std::move(body));
    return sub;
  }

  void add_horizon(CLI::App* sub) {
    sub->add_option("--horizon", horizon_text_, "Evaluation horizon N")
        ->capture_default_str();
  }
  void add_curve(CLI::App* sub) {
    sub->add_option("--curve", curve_path_, "Write an index,value CSV curve");
  }
  void add_psi(CLI::App* sub) {
    sub->add_option("--psi", psi_spec_,
                    "log | power:<alpha> | linear | dpss | file:<csv>")
        ->capture_default_str();
  }
  void add_limit(CLI::App* sub) {
    sub->add_option("--limit", limit_spec_,
                    "cesaro:<k> | logmean | dilavg:<d,...>[@<order>] | "
                    "tail:<fraction>")
        ->capture_default_str();
  }

  Index horizon() const { return parse_index(horizon_text_, "horizon"); }

  void build();

  Outcome mu();
  Outcome submaj();
  Outcome wedge_cmd();
  Outcome decompose();
  Outcome norm();
  Outcome psi_diagnose();
  Outcome trace();
  Outcome criterion();
  Outcome measurability();
  Outcome normal_part();
  Outcome dichotomy();
  Outcome audit();

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Singular-trace numerics: sequences, submajorization, "
                "Marcinkiewicz norms and Dixmier-trace estimates.",
                "singtrace"};
  std::vector<std::pair<CLI::App*, std::function<Outcome()>>> bodies_;

  std::string horizon_text_ = "1000000";
  std::string curve_path_;
  std::string psi_spec_ = "log";
  std::string limit_spec_ = "dilavg:2,4,8";
  std::string seq_spec_ = "harmonic";
  std::string a_spec_;
  std::string b_spec_;
  std::string a1_spec_;
  std::string a2_spec_;
  std::string matrix_spec_;
  std::string matrix_b_spec_;
  std::string n_text_;
  std::string cutoffs_text_ = "1,2,4,8,16";
  std::string ns_text_ = "32,1048576";
  std::string blocks_text_ = "16777216";
  std::vector<std::string> limit_specs_{"cesaro:1", "logmean", "dilavg:2,4,8"};
  double tol_ = 0.0;
  double criterion_tol_ = 0.1;
  double band_tol_ = 0.05;
  double spread_tol_ = 0.05;
  double grid_ = 2.0;
  std::optional<double> threshold_;
};

void Runner::build() {
  app_.require_subcommand(1);
  app_.set_version_flag("--version", kVersion);
  app_.footer(
      "Defaults: --horizon 1000000, --limit dilavg:2,4,8 (cesaro order 2), "
      "--psi log.\nSequences: harmonic | power:<beta> | geometric:<r> | "
      "psi-inc:<psi> | oscillating | file:<csv> | values:<v0,v1,...>.\n"
      "Exit codes: 0 success (verdicts such as divergent included), 2 "
      "argument errors, 3 precondition failures.\nSINGTRACE_THREADS caps the "
      "worker threads.");

  auto* s = add("mu", "Singular values of a real square matrix", [this] { return mu(); });
  s->add_option("--matrix", matrix_spec_, "file:<csv>")->required();
  s->add_option("--threshold", threshold_, "Also report d(s) = #{k : mu(k) > s}");
  add_curve(s);

  s = add("submaj", "Check b ≺≺ a on the first n entries", [this] { return submaj(); });
  s->add_option("--b", b_spec_, "Minorant sequence")->required();
  s->add_option("--a", a_spec_, "Majorant sequence")->required();
  s->add_option("--n", n_text_, "Number of entries")->required();
  s->add_option("--tol", tol_, "Absolute tolerance")->capture_default_str();
  add_curve(s);

  s = add("wedge", "Sequence whose prefix sums are min{A, B}", [this] { return wedge_cmd(); });
  s->add_option("--a", a_spec_)->required();
  s->add_option("--b", b_spec_)->required();
  s->add_option("--n", n_text_, "Number of entries")->required();
  add_curve(s);

  s = add("decompose", "Split b = b1 + b2 with b1 ≺≺ a1, b2 ≺≺ a2",
          [this] { return decompose(); });
  s->add_option("--b", b_spec_)->required();
  s->add_option("--a1", a1_spec_)->required();
  s->add_option("--a2", a2_spec_)->required();
  s->add_option("--n", n_text_, "Number of entries")->required();

  s = add("norm", "Marcinkiewicz norm sup_n T(a)(n)", [this] { return norm(); });
  s->add_option("--seq", seq_spec_)->capture_default_str();
  add_psi(s);
  add_horizon(s);

  s = add("psi-diagnose", "Doubling ratio psi(2t)/psi(t) on a geometric grid",
          [this] { return psi_diagnose(); });
  add_psi(s);
  add_horizon(s);
  s->add_option("--grid", grid_, "Grid ratio (> 1)")->capture_default_str();
  add_curve(s);

  s = add("trace", "Dixmier-trace estimate of a sequence", [this] { return trace(); });
  s->add_option("--seq", seq_spec_)->capture_default_str();
  add_psi(s);
  add_limit(s);
  add_horizon(s);
  s->add_option("--band-tol", band_tol_, "Band threshold of the verdict")
      ->capture_default_str();
  add_curve(s);

  s = add("criterion", "glim psi(2n+1)/psi(n+1), compared with 1",
          [this] { return criterion(); });
  add_psi(s);
  add_limit(s);
  add_horizon(s);
  s->add_option("--tol", criterion_tol_, "Pass if |value - 1| <= tol")
      ->capture_default_str();
  add_curve(s);

  s = add("measurability", "Trace values across procedures and the T band",
          [this] { return measurability(); });
  s->add_option("--seq", seq_spec_)->capture_default_str();
  add_psi(s);
  s->add_option("--limit", limit_specs_, "Procedure (repeatable)")
      ->capture_default_str();
  add_horizon(s);
  s->add_option("--band-tol", band_tol_)->capture_default_str();
  s->add_option("--spread-tol", spread_tol_)->capture_default_str();
  add_curve(s);

  s = add("normal-part", "Cutoff curve of wedge truncations",
          [this] { return normal_part(); });
  s->add_option("--seq", seq_spec_)->capture_default_str();
  add_psi(s);
  add_limit(s);
  add_horizon(s);
  s->add_option("--cutoffs", cutoffs_text_, "Increasing cutoff levels")
      ->capture_default_str();
  s->add_option("--band-tol", band_tol_)->capture_default_str();
  add_curve(s);

  s = add("dichotomy", "(1/n) ||sigma_n a|| for several n", [this] { return dichotomy(); });
  s->add_option("--seq", seq_spec_)->capture_default_str();
  add_psi(s);
  s->add_option("--n", ns_text_, "Comma-separated dilation factors")
      ->capture_default_str();
  s->add_option("--blocks", blocks_text_, "Inspect n * blocks indices")
      ->capture_default_str();
  add_curve(s);

  s = add("audit", "tau(a) + tau(b) - tau(a ⊞ b), or a matrix pair",
          [this] { return audit(); });
  s->add_option("--a", a_spec_, "First sequence");
  s->add_option("--b", b_spec_, "Second sequence");
  s->add_option("--matrix-a", matrix_spec_, "file:<csv>");
  s->add_option("--matrix-b", matrix_b_spec_, "file:<csv>");
  add_psi(s);
  add_limit(s);
  add_horizon(s);
}

Outcome Runner::mu() {
  Outcome o;
  o.parameters = {{"matrix", matrix_spec_}};
  const auto m = read_matrix_csv(strip_file_prefix(matrix_spec_));
  const auto s = singular_values(m);
  o.horizon = s.dimension();
  o.result["dimension"] = s.dimension();
  o.result["singular_values"] = list(s.singular_values);
  o.result["hermitian_positive"] = s.hermitian_positive;
  if (threshold_) {
    o.parameters["threshold"] = *threshold_;
    o.result["distribution"] = distribution_function(s, *threshold_);
  }
  for (std::size_t k = 0; k < s.dimension(); ++k)
    o.curve.emplace_back(static_cast<double>(k), s.singular_values[k]);
  return o;
}

Outcome Runner::submaj() {
  Outcome o;
  const Index n = parse_index(n_text_, "n");
  o.parameters = {{"b", b_spec_}, {"a", a_spec_}, {"n", n}, {"tol", tol_}};
  o.horizon = n;
  const auto r = check_submajorized(parse_sequence(b_spec_), parse_sequence(a_spec_), n, tol_);
  o.result["holds"] = r.holds;
  o.result["first_violation"] = r.first_violation ? Json(*r.first_violation) : Json(nullptr);
  o.result["min_slack"] = r.slack.back();
  for (Index m = 0; m < n; ++m) o.curve.emplace_back(static_cast<double>(m), r.slack[m]);
  return o;
}

Outcome Runner::wedge_cmd() {
  Outcome o;
  const Index n = parse_index(n_text_, "n");
  o.parameters = {{"a", a_spec_}, {"b", b_spec_}, {"n", n}};
  o.horizon = n;
  const auto w = wedge(parse_sequence(a_spec_), parse_sequence(b_spec_), n);
  o.result["total"] = prefix_sums(w, n)(n - 1);
  o.result["head"] = head_of(w, n);
  for (Index k = 0; k < n; ++k) o.curve.emplace_back(static_cast<double>(k), w(k));
  return o;
}

Outcome Runner::decompose() {
  Outcome o;
  const Index n = parse_index(n_text_, "n");
  o.parameters = {{"b", b_spec_}, {"a1", a1_spec_}, {"a2", a2_spec_}, {"n", n}};
  o.horizon = n;
  const auto b = parse_sequence(b_spec_);
  const auto a1 = parse_sequence(a1_spec_);
  const auto a2 = parse_sequence(a2_spec_);
  try {
    const auto c = decompose_submajorized(b, a1, a2, n);
    o.result["precondition_met"] = true;
    o.result["path"] = to_string(c.path);
    o.result["integral"] = c.integral;
    const bool full = n <= kFullListLimit;
    o.result[full ? "b1" : "b1_head"] = full ? list(c.b1.materialize(n)) : head_of(c.b1, n);
    o.result[full ? "b2" : "b2_head"] = full ? list(c.b2.materialize(n)) : head_of(c.b2, n);
    o.result["b1_submajorized"] = c.report1.holds;
    o.result["b2_submajorized"] = c.report2.holds;
  } catch (const SubmajorizationError& e) {
    o.result["precondition_met"] = false;
    o.result["first_violation"] = e.index();
    o.diagnostics.push_back(e.what());
    o.exit_code = kPrecondition;
  }
  return o;
}

Outcome Runner::norm() {
  Outcome o;
  const Index n = horizon();
  o.parameters = {{"seq", seq_spec_}, {"psi", psi_spec_}, {"horizon", n}};
  o.horizon = n;
  const auto r = marcinkiewicz_norm(parse_sequence(seq_spec_), parse_psi(psi_spec_), n);
  o.result["value"] = r.value;
  o.result["argmax"] = r.argmax;
  o.result["attained_within_horizon"] = r.attained_within_horizon;
  if (!r.attained_within_horizon)
    o.diagnostics.push_back("running max still increasing in the last decade of indices");
  return o;
}

Outcome Runner::psi_diagnose() {
  Outcome o;
  const Index n = horizon();
  o.parameters = {{"psi", psi_spec_}, {"horizon", n}, {"grid", grid_}};
  o.horizon = n;
  const auto d = psi_diagnostics(parse_psi(psi_spec_), n, grid_);
  o.result["samples"] = d.t.size();
  o.result["sampled_min"] = d.sampled_min;
  o.result["sampled_max"] = d.sampled_max;
  o.result["tail_start"] = d.tail_start;
  o.result["liminf_estimate"] = d.liminf_estimate;
  o.result["limsup_estimate"] = d.limsup_estimate;
  o.result["ratio_bounds_hold"] = d.ratio_bounds_hold;
  o.diagnostics.push_back("liminf/limsup are extremes over the tail window t >= " +
                          std::to_string(d.tail_start) + ", not limits");
  for (std::size_t i = 0; i < d.t.size(); ++i)
    o.curve.emplace_back(static_cast<double>(d.t[i]), d.ratio[i]);
  return o;
}

Outcome Runner::trace() {
  Outcome o;
  const Index n = horizon();
  const auto proc = parse_limit(limit_spec_, n);
  o.parameters = {{"seq", seq_spec_}, {"psi", psi_spec_}, {"limit", limit_spec_},
                  {"horizon", n}, {"band_tol", band_tol_}};
  o.horizon = n;
  o.procedure = proc.label();
  const auto a = parse_sequence(seq_spec_);
  const auto psi = parse_psi(psi_spec_);
  const auto e = dixmier_estimate(a, psi, proc, {band_tol_, 0.05});
  o.result = trace_json(e);
  const auto t = prefunctional(a, psi, n);
  o.result["residuals"] = residuals_json(glim_evaluate(proc, t));
  if (e.verdict == Verdict::kDivergent)
    o.diagnostics.push_back("cutoff curve did not stabilize: T(a) looks unbounded");
  for (Index k : log_grid(n - 1)) o.curve.emplace_back(static_cast<double>(k), t(k));
  return o;
}

Outcome Runner::criterion() {
  Outcome o;
  const Index n = horizon();
  const auto proc = parse_limit(limit_spec_, n);
  o.parameters = {{"psi", psi_spec_}, {"limit", limit_spec_}, {"horizon", n},
                  {"tol", criterion_tol_}};
  o.horizon = n;
  o.procedure = proc.label();
  const auto psi = parse_psi(psi_spec_);
  const double v = additivity_criterion(psi, proc);
  o.result["value"] = v;
  o.result["deviation"] = std::abs(v - 1.0);
  o.result["pass"] = std::abs(v - 1.0) <= criterion_tol_;
  for (Index k : log_grid(n - 1))
    o.curve.emplace_back(static_cast<double>(k), psi(2 * k + 1) / psi(k + 1));
  return o;
}

Outcome Runner::measurability() {
  Outcome o;
  const Index n = horizon();
  std::vector<LimitProcedure> procs;
  for (const auto& spec : limit_specs_) procs.push_back(parse_limit(spec, n));
  o.parameters = {{"seq", seq_spec_}, {"psi", psi_spec_}, {"limits", limit_specs_},
                  {"horizon", n}, {"band_tol", band_tol_}, {"spread_tol", spread_tol_}};
  o.horizon = n;
  const auto r = measurability_report(parse_sequence(seq_spec_), parse_psi(psi_spec_),
                                      procs, n, {band_tol_, spread_tol_});
  Json values = Json::array();
  for (std::size_t i = 0; i < r.values.size(); ++i)
    values.push_back({{"procedure", r.procedures[i]}, {"value", r.values[i]}});
  o.result["values"] = values;
  o.result["value_horizon"] = r.value_horizon;
  o.result["spread"] = r.spread;
  o.result["band_min"] = r.band_min;
  o.result["band_max"] = r.band_max;
  o.result["band_width"] = r.band_width();
  o.result["checkpoints"] = r.checkpoints.size();
  o.result["verdict"] = to_string(r.verdict);
  if (r.value_horizon < n)
    o.diagnostics.push_back("procedure values computed at horizon " +
                            std::to_string(r.value_horizon) +
                            "; band streamed to the full horizon");
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i)
    o.curve.emplace_back(static_cast<double>(r.checkpoints[i]), r.band_values[i]);
  return o;
}

Outcome Runner::normal_part() {
  Outcome o;
  const Index n = horizon();
  const auto proc = parse_limit(limit_spec_, n);
  const auto cutoffs = parse_reals(cutoffs_text_);
  o.parameters = {{"seq", seq_spec_}, {"psi", psi_spec_}, {"limit", limit_spec_},
                  {"horizon", n}, {"cutoffs", list(cutoffs)}, {"band_tol", band_tol_}};
  o.horizon = n;
  o.procedure = proc.label();
  const auto e = normal_part_estimate(parse_sequence(seq_spec_), parse_psi(psi_spec_),
                                      proc, cutoffs, {band_tol_, 0.05});
  o.result = trace_json(e);
  for (std::size_t i = 0; i < cutoffs.size(); ++i)
    o.curve.emplace_back(cutoffs[i], e.extension.values[i]);
  return o;
}

Outcome Runner::dichotomy() {
  Outcome o;
  const Index blocks = parse_index(blocks_text_, "blocks");
  std::vector<Index> ns;
  for (double v : parse_reals(ns_text_)) ns.push_back(parse_index(detail::short_number(v), "n"));
  o.parameters = {{"seq", seq_spec_}, {"psi", psi_spec_}, {"n", ns}, {"blocks", blocks}};
  const auto a = parse_sequence(seq_spec_);
  const auto psi = parse_psi(psi_spec_);
  Json rates = Json::array();
  for (Index n : ns) {
    if (blocks > kUnboundedHorizon / n) throw ArgumentError("n * blocks overflows");
    const double r = direct_sum_norm_rate(a, psi, n, n * blocks);
    rates.push_back({{"n", n}, {"horizon", n * blocks}, {"rate", r}});
    o.curve.emplace_back(static_cast<double>(n), r);
  }
  o.horizon = blocks;
  o.result["rates"] = rates;
  return o;
}

Outcome Runner::audit() {
  Outcome o;
  const Index n = horizon();
  const auto proc = parse_limit(limit_spec_, n);
  const auto psi = parse_psi(psi_spec_);
  o.horizon = n;
  o.procedure = proc.label();
  const bool matrices = !matrix_spec_.empty() || !matrix_b_spec_.empty();
  const bool sequences = !a_spec_.empty() || !b_spec_.empty();
  if (matrices == sequences)
    throw ArgumentError("audit needs either --a/--b or --matrix-a/--matrix-b");
  if (sequences) {
    if (a_spec_.empty() || b_spec_.empty()) throw ArgumentError("audit needs both --a and --b");
    o.parameters = {{"a", a_spec_}, {"b", b_spec_}, {"psi", psi_spec_},
                    {"limit", limit_spec_}, {"horizon", n}};
    const auto r = additivity_audit(parse_sequence(a_spec_), parse_sequence(b_spec_), psi, proc);
    o.result = {{"tau_a", r.tau_a}, {"tau_b", r.tau_b}, {"tau_sum", r.tau_sum},
                {"defect", r.defect}, {"finite", r.finite}};
    if (!r.finite) o.diagnostics.push_back("a trace estimate diverged; defect undefined");
  } else {
    if (matrix_spec_.empty() || matrix_b_spec_.empty())
      throw ArgumentError("audit needs both --matrix-a and --matrix-b");
    o.parameters = {{"matrix_a", matrix_spec_}, {"matrix_b", matrix_b_spec_},
                    {"psi", psi_spec_}, {"limit", limit_spec_}, {"horizon", n}};
    const auto r = additivity_audit(read_matrix_csv(strip_file_prefix(matrix_spec_)),
                                    read_matrix_csv(strip_file_prefix(matrix_b_spec_)),
                                    psi, proc);
    o.result = {{"sandwich_holds", r.sandwich.holds},
                {"lower_slack", r.sandwich.lower_slack},
                {"upper_slack", r.sandwich.upper_slack},
                {"tau_a", r.tau_a}, {"tau_b", r.tau_b}, {"tau_sum", r.tau_sum},
                {"defect", r.defect}};
  }
  return o;
}

int Runner::run(const std::vector<std::string>& args) {
  build();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app_.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = app_.get_subcommands().empty() ? &app_ : app_.get_subcommands()[0];
    out_ << sub->help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out_ << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n\n" << app_.help();
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  for (const auto& [sub, body] : bodies_) {
    if (!sub->parsed()) continue;
    Outcome o;
    try {
      o = body();
      if (!curve_path_.empty()) write_curve(curve_path_, o.curve);
    } catch (const ArgumentError& e) {
      err_ << "error: " << e.what() << "\n\n" << sub->help();
      return kUsage;
    } catch (const ConstructionError& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return 1;
    }
    if (!curve_path_.empty()) o.parameters["curve"] = curve_path_;
    Json record;
    record["command"] = sub->get_name();
    record["parameters"] = o.parameters;
    record["version"] = kVersion;
    record["horizon"] = o.horizon ? Json(*o.horizon) : Json(nullptr);
    if (o.procedure) record["procedure"] = *o.procedure;
    record["result"] = o.result;
    record["diagnostics"] = o.diagnostics;
    out_ << record.dump(2) << '\n';
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    err_ << "wall_time_s " << wall.count() << '\n';
    return o.exit_code;
  }
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

}  // namespace singtrace::cli

#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "friable/constants.hpp"
#include "friable/equid.hpp"
#include "friable/errors.hpp"
#include "friable/linsys.hpp"
#include "friable/polyphase.hpp"
#include "friable/recurrence.hpp"
#include "friable/saddle.hpp"
#include "friable/sieve.hpp"
#include "friable/weights.hpp"
#include "friable/weyl.hpp"

#ifndef FRIABLE_VERSION
#define FRIABLE_VERSION "0.0.0"
#endif

namespace friable::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::vector<Json> rows;
};

// Raw flag values; everything numeric is parsed after CLI11 so that "1e6" is
// accepted for integer parameters.
struct Flags {
  std::string x, y, y_lo = "1", q, a, N, n0, n1, start, length, step = "1";
  std::string d, sigma, theta, eps, q_max = "10000", L, eps_prime, delta;
  std::string k = "1", ell = "1", chi = "1", poly, w_override, q_extra = "1";
  std::string a_seed = "1", system, p_limit, primes, Q, M, n;
  std::string mode, model = "g";
  bool weighted = false, coprime = false;
};

std::uint64_t parse_count(const std::string& name, const std::string& text) {
  if (text.empty()) throw UsageError("--" + name + " is required");
  const bool digits = text.find_first_not_of("0123456789") == std::string::npos;
  if (digits) {
    try {
      const unsigned long long v = std::stoull(text);
      if (v > kMaxInteger) throw UsageError("--" + name + " exceeds 2^63 - 1");
      return v;
    } catch (const std::out_of_range&) {
      throw UsageError("--" + name + " exceeds 2^63 - 1");
    }
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("--" + name + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v) || v < 0 || v != std::floor(v) ||
      v >= 9223372036854775808.0) {
    throw UsageError("--" + name + ": '" + text + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& name, const std::string& text) {
  if (text.empty()) throw UsageError("--" + name + " is required");
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("--" + name + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw UsageError("--" + name + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "0.25", "1/7", "1/7+1e-12", "3/10-2e-9".
Frequency parse_frequency(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Frequency::real(parse_real("theta", text));
  const std::string num = text.substr(0, slash);
  std::string rest = text.substr(slash + 1);
  const auto sign = rest.find_first_of("+-");
  double offset = 0;
  if (sign != std::string::npos) {
    offset = parse_real("theta", rest.substr(sign));
    rest = rest.substr(0, sign);
  }
  std::int64_t a = 0;
  try {
    std::size_t used = 0;
    a = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw UsageError("--theta: bad numerator in '" + text + "'");
  }
  const std::uint64_t q = parse_count("theta", rest);
  if (q == 0) throw UsageError("--theta: zero denominator");
  return Frequency::rational(a, q, offset);
}

SmoothWindow window(const Flags& f) {
  return SmoothWindow(parse_real("yprime", f.y_lo), parse_real("y", f.y));
}

int parse_k(const Flags& f) {
  const std::uint64_t k = parse_count("k", f.k);
  if (k < 1 || k > 64) throw UsageError("--k must lie in [1, 64]");
  return static_cast<int>(k);
}

Json params_json(const Params& p) {
  Json j = Json::object();
  for (const auto& [key, value] : p) j[key] = value;
  return j;
}

Json complex_json(std::complex<double> z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

Json report_row(const EquidReport& r) {
  Json row;
  row["observed"] = r.observed;
  row["predicted"] = r.predicted;
  row["abs_err"] = r.abs_err;
  row["rel_err"] = r.rel_err;
  row["regime_ok"] = r.regime_ok;
  row["params"] = params_json(r.params);
  row["extra"] = params_json(r.extra);
  return row;
}

Json count_row(const CountBoundReport& r) {
  Json row;
  row["observed"] = r.observed;
  row["bound"] = r.bound;
  row["constant"] = r.constant;
  row["ratio"] = r.ratio;
  row["within"] = r.within;
  row["regime_ok"] = r.regime_ok;
  row["params"] = params_json(r.params);
  return row;
}

// --- commands ---------------------------------------------------------------

Output cmd_psi(const Flags& f, const Constants& c) {
  const std::uint64_t x = parse_count("x", f.x);
  const SmoothWindow w = window(f);
  Json row;
  row["x"] = x;
  row["y_lo"] = w.y_lo();
  row["y_hi"] = w.y_hi();
  const std::uint64_t exact = psi(x, w);
  row["psi"] = exact;
  if (x >= 2 && w.y_hi() >= 2) {
    const BrtEstimate brt = brt_estimate(static_cast<double>(x), w, c);
    row["alpha"] = brt.ctx.alpha;
    row["clamped"] = brt.ctx.clamped;
    row["ht"] = brt.ht;
    row["brt"] = brt.value;
    row["restricted_factor"] = brt.restricted_factor;
    row["ht_ratio"] = brt.ht / static_cast<double>(exact);
    row["brt_ratio"] = brt.value / static_cast<double>(exact);
    row["regime_ok"] = brt.regime_ok;
  } else {
    row["regime_ok"] = false;
  }
  if (!f.q.empty()) {
    const std::uint64_t q = parse_count("q", f.q);
    const std::uint64_t a = parse_count("a", f.a.empty() ? "0" : f.a);
    if (q == 0 || a >= q) throw UsageError("need q >= 1 and 0 <= a < q");
    row["q"] = q;
    row["a"] = a;
    row["psi_progression"] = psi_progression(x, w, q, a);
  }
  return {{row}};
}

Output cmd_alpha(const Flags& f, const Constants& c) {
  const double x = parse_real("x", f.x);
  const double y = parse_real("y", f.y);
  const SaddleContext ctx = solve_alpha(x, y);
  const double main = alpha_main_term(x, y);
  const double log_y = std::log(y);
  Json row;
  row["x"] = x;
  row["y"] = y;
  row["alpha"] = ctx.alpha;
  row["residual"] = ctx.residual;
  row["residual_rel"] = ctx.residual / std::log(x);
  row["clamped"] = ctx.clamped;
  row["iterations"] = ctx.iterations;
  row["u"] = ctx.u;
  row["log_zeta"] = ctx.log_zeta_alpha_y;
  row["main_term"] = main;
  row["deviation"] = ctx.alpha - main;
  row["deviation_log_y"] = std::abs(ctx.alpha - main) * log_y;
  row["bound_constant"] = c.alpha_main_term;
  row["within"] = std::abs(ctx.alpha - main) * log_y <= c.alpha_main_term;
  row["regime_ok"] = std::log(x) < y && y <= x;
  return {{row}};
}

Output cmd_estimate(const Flags& f, const Constants& c) {
  const std::uint64_t x = parse_count("x", f.x);
  const SmoothWindow w = window(f);
  const auto X = static_cast<double>(x);
  const BrtEstimate brt = brt_estimate(X, w, c);
  const std::uint64_t exact = psi(x, w);
  Output out;
  Json base;
  base["kind"] = "saddle";
  base["x"] = x;
  base["y_lo"] = w.y_lo();
  base["y_hi"] = w.y_hi();
  base["alpha"] = brt.ctx.alpha;
  base["psi"] = exact;
  base["ht"] = brt.ht;
  base["brt"] = brt.value;
  base["brt_ratio"] = brt.value / static_cast<double>(exact);
  base["regime_ok"] = brt.regime_ok;
  out.rows.push_back(base);
  for (const auto& token : split(f.d, ',')) {
    const double d = parse_real("d", token);
    const double predicted =
        dilation_prediction(X, w, d, static_cast<double>(exact));
    const auto xd = static_cast<std::uint64_t>(std::floor(X / d));
    const std::uint64_t at = psi(xd, w);
    Json row;
    row["kind"] = "dilation";
    row["d"] = d;
    row["x_over_d"] = xd;
    row["psi"] = at;
    row["predicted"] = predicted;
    row["ratio"] = predicted / static_cast<double>(at);
    row["regime_ok"] = std::max({w.y_lo() * w.y_lo(),
                                 std::pow(std::log(X), 2.0)}) < w.y_hi() &&
                       w.y_hi() <= X;
    out.rows.push_back(row);
  }
  for (const auto& token : split(f.sigma, ',')) {
    const double sigma = parse_real("sigma", token);
    const ProductEnvelope env = mv_product_bounds(sigma, w.y_hi(), c);
    const double value = log_truncated_zeta(sigma, w.y_hi());
    Json row;
    row["kind"] = "envelope";
    row["sigma"] = sigma;
    row["log_zeta"] = value;
    row["log_lower"] = env.log_lower;
    row["log_upper"] = env.log_upper;
    row["log_main"] = env.log_main;
    row["branch"] = to_string(env.regime);
    row["contained"] = env.contains_log(value);
    out.rows.push_back(row);
  }
  return out;
}

Output cmd_equid(const Flags& f, const Constants& c) {
  const SmoothWindow w = window(f);
  const std::string& mode = f.mode.empty() ? std::string("interval") : f.mode;
  if (mode == "interval" || mode == "progression") {
    const std::uint64_t N = parse_count("x", f.x);
    const std::uint64_t n0 = f.n0.empty() ? N : parse_count("n0", f.n0);
    const std::uint64_t n1 = f.n1.empty() ? N : parse_count("n1", f.n1);
    if (mode == "interval") return {{report_row(short_interval_sum(N, n0, n1, w, c))}};
    const std::uint64_t q = parse_count("q", f.q);
    const std::uint64_t a = parse_count("a", f.a);
    return {{report_row(short_progression_sum(N, n0, n1, w, q, a, c))}};
  }
  if (mode == "residues") {
    const std::uint64_t x = parse_count("x", f.x);
    const std::uint64_t q = parse_count("q", f.q);
    const ProgressionReport r = progression_equid(x, w, q, c);
    Output out;
    Json head;
    head["kind"] = "summary";
    head["x"] = r.x;
    head["q"] = r.q;
    head["psi"] = r.psi_total;
    head["max_deviation"] = r.max_deviation;
    head["regime_ok"] = r.regime_ok;
    out.rows.push_back(head);
    for (const ResidueRow& row : r.rows) {
      out.rows.push_back(Json{{"kind", "residue"},
                              {"a", row.a},
                              {"count", row.count},
                              {"deviation", row.deviation}});
    }
    return out;
  }
  if (mode == "count" || mode == "window-count") {
    const std::uint64_t x = parse_count("x", f.x);
    Progression p;
    p.start = f.start.empty() ? x : parse_count("start", f.start);
    p.length = parse_count("length", f.length);
    p.step = parse_count("step", f.step);
    if (mode == "count") return {{count_row(short_interval_count_bound(x, w, p, c))}};
    return {{count_row(progression_count_bound(x, w, p, parse_real("ell", f.ell), c))}};
  }
  if (mode == "character") {
    const std::uint64_t x = parse_count("x", f.x);
    const std::uint64_t q = parse_count("q", f.q);
    const std::uint64_t index = parse_count("chi", f.chi);
    const auto chars = DirichletCharacter::all(q);
    if (index >= chars.size()) throw UsageError("--chi exceeds the number of characters mod q");
    Json row = report_row(character_sum_smallness(x, w, chars[index], c));
    row["chi_index"] = index;
    return {{row}};
  }
  throw UsageError("unknown --mode '" + mode + "' for equid");
}

Json approx_json(const RationalApprox& r) {
  return Json{{"a", r.a}, {"q", r.q}, {"err", r.err}};
}

Output cmd_weyl(const Flags& f, const Constants& c) {
  const std::string& mode = f.mode.empty() ? std::string("dichotomy") : f.mode;
  Output out;
  if (mode == "triple") {
    const SmoothWindow w = window(f);
    const std::uint64_t n = parse_count("n", f.n);
    const std::uint64_t M = parse_count("M", f.M);
    const FactorTriple t = factor_triple(n, M, w);
    out.rows.push_back(Json{{"n", n}, {"M", M}, {"u", t.u}, {"v", t.v},
                            {"p", t.p}, {"valid", triple_is_valid(t, M, w)}});
    return out;
  }
  const auto thetas = split(f.theta, ',');
  if (thetas.empty()) throw UsageError("--theta is required");
  for (const auto& token : thetas) {
    const Frequency theta = parse_frequency(token);
    Json row;
    row["theta"] = theta.describe();
    if (mode == "approx") {
      const RationalApprox r = dirichlet_approx(theta, parse_count("qmax", f.q_max));
      row.update(approx_json(r));
    } else if (mode == "major") {
      const double x = parse_real("x", f.x);
      const double Q = parse_real("Q", f.Q);
      const MajorArc arc = major_arc_member(theta, Q, x, parse_k(f));
      row["member"] = arc.member;
      row["radius"] = arc.radius;
      row["witness"] = approx_json(arc.witness);
    } else if (mode == "sum" || mode == "dichotomy") {
      const std::uint64_t x = parse_count("x", f.x);
      const SmoothWindow w = window(f);
      const int k = parse_k(f);
      row["k"] = k;
      if (mode == "sum") {
        const auto s = weyl_sum(x, w, k, theta);
        row["sum"] = complex_json(s);
        row["abs"] = std::abs(s);
      } else {
        const DichotomyReport r = dichotomy_report(x, w, k, theta, c);
        row["ratio"] = r.ratio;
        row["sum"] = complex_json(r.sum);
        row["psi"] = r.psi;
        row["alpha"] = r.alpha;
        row["branch"] = r.branch;
        row["major_arc"] = r.arc.member;
        row["arc_witness"] = approx_json(r.arc.witness);
        row["witness"] = approx_json(r.witness);
        row["quality"] = r.quality;
        row["envelope_major"] = r.envelope_major;
        row["envelope_minor"] = r.envelope_minor;
        row["decay"] = r.decay;
        row["regime_ok"] = r.regime_ok;
      }
    } else {
      throw UsageError("unknown --mode '" + mode + "' for weyl");
    }
    out.rows.push_back(row);
  }
  return out;
}

Output cmd_recur(const Flags& f, const Constants& c) {
  const std::uint64_t N = parse_count("N", f.N);
  const SmoothWindow w = window(f);
  const int k = parse_k(f);
  const Frequency theta = parse_frequency(f.theta);
  Output out;
  if (!f.eps.empty()) {
    const double eps = parse_real("eps", f.eps);
    const RecurrenceCensus cs = census(N, w, k, theta, eps);
    Json row;
    row["kind"] = "census";
    row["theta"] = theta.describe();
    row["k"] = k;
    row["eps"] = eps;
    row["total"] = cs.total;
    row["hits"] = cs.hits;
    row["fraction"] = cs.fraction;
    row["baseline"] = 2 * eps;
    row["lift"] = cs.fraction / (2 * eps);
    row["sample"] = cs.sample;
    if (cs.hits > 0) {
      const RecoveredDenominator r = recover_q(cs, parse_count("qmax", f.q_max), N, c);
      row["q"] = r.q;
      row["q_err"] = r.err;
      row["threshold"] = r.threshold;
      row["certified"] = r.certified;
    }
    // The hypothesis window on delta is never reached at desk scale.
    row["regime_ok"] = false;
    out.rows.push_back(row);
  }
  if (!f.L.empty()) {
    const BootstrapReport b = bootstrap_audit(
        theta, k, N, w, parse_count("L", f.L), parse_real("eps-prime", f.eps_prime),
        parse_real("delta", f.delta), c);
    Json row;
    row["kind"] = "bootstrap";
    row["theta"] = theta.describe();
    row["set_size"] = b.set_size;
    row["hits"] = b.hits;
    row["delta_obs"] = b.delta_obs;
    row["intervals"] = b.intervals;
    row["theta_abs"] = b.theta_abs;
    row["hypothesis_bound"] = b.hypothesis_bound;
    row["hypothesis_ok"] = b.hypothesis_ok;
    row["branch_small"] = b.branch_small;
    row["branch_large"] = b.branch_large;
    row["small_threshold"] = b.small_threshold;
    row["large_threshold"] = b.large_threshold;
    row["regime_ok"] = b.hypothesis_ok;
    out.rows.push_back(row);
  }
  if (out.rows.empty()) throw UsageError("recur needs --eps (census) or --L (bootstrap audit)");
  return out;
}

Output cmd_phase(const Flags& f, const Constants&) {
  const std::uint64_t N = parse_count("N", f.N);
  if (f.poly.empty()) throw UsageError("--poly is required");
  const PolyMod1 p = PolyMod1::parse(f.poly);
  WTrickOptions options;
  if (!f.w_override.empty()) options.w_override = parse_real("w", f.w_override);
  const WTrick wt = build_wtrick(N, parse_count("a-seed", f.a_seed),
                                 parse_count("q-extra", f.q_extra), options);
  Json row;
  row["N"] = N;
  row["poly"] = p.describe();
  std::vector<std::string> alpha;
  for (const auto& a : p.alpha()) alpha.push_back(a.str());
  row["binomial"] = alpha;
  row["smoothness_norm"] = smoothness_norm(p, N);
  row["w_of_n"] = wt.w_of_n;
  row["W"] = wt.W;
  row["modulus"] = wt.modulus();
  row["A"] = wt.A;
  std::complex<double> corr;
  if (f.model == "g") {
    const SmoothWindow w = window(f);
    corr = phase_correlation(N, w, wt, p);
  } else if (f.model == "cramer") {
    corr = cramer_phase_correlation(N, parse_real("yprime", f.y_lo), wt, p);
  } else {
    throw UsageError("--model must be g or cramer");
  }
  row["model"] = f.model;
  row["correlation"] = complex_json(corr);
  row["abs"] = std::abs(corr);
  // w(N) is far below any prime at desk scale; an override is always outside
  // the asymptotic regime.
  row["regime_ok"] = !options.w_override.has_value() && wt.w_of_n >= 2;
  return {{row}};
}

Output cmd_linsys(const Flags& f, const Constants&) {
  if (f.system.empty()) throw UsageError("--system is required");
  std::ifstream in(f.system);
  if (!in) throw UsageError("cannot open system file '" + f.system + "'");
  SystemDescriptor d = parse_descriptor(in);
  if (!f.N.empty()) d.N = parse_count("N", f.N);
  if (!f.y.empty()) d.y = parse_real("y", f.y);
  if (f.y_lo != "1" || !d.y_lo) d.y_lo = parse_real("yprime", f.y_lo);
  Output out;
  Json row;
  row["kind"] = "system";
  row["descriptor"] = canonical_descriptor(d);
  row["volume"] = static_cast<double>(d.system.body.volume());
  if (d.N && d.y) {
    const SmoothWindow w(*d.y_lo, *d.y);
    const CountResult r = count_solutions(d.system, *d.N, w, f.weighted);
    row["weighted"] = f.weighted;
    row["value"] = r.value;
    row["predicted"] = r.predicted;
    row["ratio"] = r.ratio;
    row["lattice_points"] = r.lattice_points;
    row["singular"] = r.singular;
    row["range_ok"] = r.range_ok;
    row["regime_ok"] = r.range_ok;
  }
  if (!f.p_limit.empty()) {
    const SingularSeries s = singular_series(d.system, parse_real("plimit", f.p_limit));
    row["singular_series"] = s.value;
    row["singular_limit"] = parse_real("plimit", f.p_limit);
  }
  out.rows.push_back(row);
  for (const auto& token : split(f.primes, ',')) {
    const LocalFactor lf = local_factor(d.system, parse_count("primes", token));
    const auto p = static_cast<double>(lf.p);
    out.rows.push_back(Json{
        {"kind", "local_factor"},
        {"p", lf.p},
        {"beta", lf.beta},
        {"method", lf.method == FactorMethod::enumeration ? "enumeration"
                                                          : "inclusion-exclusion"},
        {"scaled_deviation", std::abs(lf.beta - 1.0) * p * p}});
  }
  return out;
}

Output cmd_abc(const Flags& f, const Constants&) {
  const std::uint64_t N = parse_count("N", f.N);
  const SmoothWindow w = window(f);
  const AbcResult r = abc_census(N, w, f.coprime);
  Json row;
  row["N"] = N;
  row["y_lo"] = w.y_lo();
  row["y_hi"] = w.y_hi();
  row["coprime_only"] = f.coprime;
  row["count"] = r.count;
  row["psi"] = r.psi;
  row["predicted"] = r.predicted;
  row["ratio"] = r.ratio;
  return {{row}};
}

// --- output -----------------------------------------------------------------

std::map<std::string, double*> constant_fields(Constants& c) {
  return {{"alpha_main_term", &c.alpha_main_term},
          {"envelope_lower", &c.envelope_lower},
          {"envelope_upper", &c.envelope_upper},
          {"envelope_error", &c.envelope_error},
          {"k_prime", &c.k_prime},
          {"k_modulus", &c.k_modulus},
          {"count_bound", &c.count_bound},
          {"weyl_decay", &c.weyl_decay},
          {"recurrence_scale", &c.recurrence_scale},
          {"recurrence_kappa", &c.recurrence_kappa},
          {"bootstrap_small", &c.bootstrap_small},
          {"bootstrap_large", &c.bootstrap_large}};
}

Json constants_json(Constants c) {
  Json j = Json::object();
  for (const auto& [name, ptr] : constant_fields(c)) j[name] = *ptr;
  return j;
}

Json config_json(const CLI::App& app, const CLI::App& sub) {
  Json cfg = Json::object();
  const auto add = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "version") continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (opt->get_expected_max() == 0) {
          cfg[name] = true;
        } else if (res.size() == 1) {
          cfg[name] = res.front();
        } else {
          cfg[name] = res;
        }
      } else if (opt->get_expected_max() == 0) {
        cfg[name] = false;
      } else {
        cfg[name] = opt->get_default_str();
      }
    }
  };
  add(app);
  add(sub);
  return cfg;
}

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_null()) {
    return "";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (const char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

// Nested objects are flattened to dotted column names.
void flatten(const Json& j, const std::string& prefix, Json& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else {
      out[name] = value;
    }
  }
}

void emit(std::ostream& out, const std::string& format, const Json& header,
          const Output& result) {
  if (format == "csv") {
    out << "# tool=" << header["tool"].get<std::string>()
        << " version=" << header["version"].get<std::string>()
        << " command=" << header["command"].get<std::string>() << "\n";
    out << "# config=" << header["config"].dump() << "\n";
    out << "# constants=" << header["constants"].dump() << "\n";
    out << "# regime_ok=" << (header["regime_ok"].get<bool>() ? "true" : "false")
        << "\n";
    std::vector<Json> flat;
    std::vector<std::string> columns;
    for (const Json& row : result.rows) {
      Json f = Json::object();
      flatten(row, "", f);
      for (const auto& [key, value] : f.items()) {
        if (std::find(columns.begin(), columns.end(), key) == columns.end()) {
          columns.push_back(key);
        }
      }
      flat.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const Json& row : flat) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ",";
        if (row.contains(columns[i])) out << csv_cell(row[columns[i]]);
      }
      out << "\n";
    }
    return;
  }
  if (result.rows.size() == 1) {
    Json single = header;
    single["result"] = result.rows.front();
    out << single.dump() << "\n";
    return;
  }
  Json head = header;
  head["rows"] = result.rows.size();
  out << head.dump() << "\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    Json row;
    row["row"] = i;
    row.update(result.rows[i]);
    out << row.dump() << "\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counts, saddle-point estimates and equidistribution "
               "experiments for numbers with all prime factors in [y', y]."};
  app.set_version_flag("--version", std::string(FRIABLE_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::string output_path;
  std::string seed = "0";
  std::vector<std::string> overrides;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", output_path, "Write to this file instead of stdout");
  app.add_option("--seed", seed, "Seed echoed for sampled grids")->capture_default_str();
  app.add_option("--const", overrides,
                 "Override an implicit constant, name=value (repeatable)");

  Flags f;
  std::map<std::string, std::function<Output(const Flags&, const Constants&)>> handlers;
  const auto add_window = [&](CLI::App* s, bool need_y = true) {
    auto* y = s->add_option("--y", f.y, "Upper prime bound y");
    if (need_y) y->required();
    s->add_option("--yprime", f.y_lo, "Lower prime bound y'")->capture_default_str();
  };

  auto* psi_cmd = app.add_subcommand("psi", "Exact Psi(x, [y', y]) with HT and BrT estimates");
  psi_cmd->add_option("--x", f.x, "Count up to x")->required();
  add_window(psi_cmd);
  psi_cmd->add_option("--q", f.q, "Also count the residue class a mod q");
  psi_cmd->add_option("--a", f.a, "Residue for --q");
  handlers["psi"] = cmd_psi;

  auto* alpha_cmd = app.add_subcommand("alpha", "Saddle point alpha(x, y)");
  alpha_cmd->add_option("--x", f.x)->required();
  alpha_cmd->add_option("--y", f.y)->required();
  handlers["alpha"] = cmd_alpha;

  auto* est_cmd = app.add_subcommand("estimate", "Estimates, dilation law and Euler-product envelopes");
  est_cmd->add_option("--x", f.x)->required();
  add_window(est_cmd);
  est_cmd->add_option("--d", f.d, "Comma-separated dilation factors");
  est_cmd->add_option("--sigma", f.sigma, "Comma-separated sigma values for envelopes");
  handlers["estimate"] = cmd_estimate;

  auto* equid_cmd = app.add_subcommand("equid", "Equidistribution diagnostics");
  equid_cmd->add_option("--mode", f.mode, "interval|progression|residues|count|window-count|character")
      ->check(CLI::IsMember({"interval", "progression", "residues", "count", "window-count", "character"}));
  equid_cmd->add_option("--x", f.x, "x, or the anchor N")->required();
  add_window(equid_cmd);
  equid_cmd->add_option("--n0", f.n0);
  equid_cmd->add_option("--n1", f.n1);
  equid_cmd->add_option("--q", f.q);
  equid_cmd->add_option("--a", f.a);
  equid_cmd->add_option("--start", f.start);
  equid_cmd->add_option("--length", f.length);
  equid_cmd->add_option("--step", f.step)->capture_default_str();
  equid_cmd->add_option("--ell", f.ell)->capture_default_str();
  equid_cmd->add_option("--chi", f.chi, "Index into the characters mod q")->capture_default_str();
  handlers["equid"] = cmd_equid;

  auto* weyl_cmd = app.add_subcommand("weyl", "Smooth Weyl sums and Diophantine data");
  weyl_cmd->add_option("--mode", f.mode, "dichotomy|sum|approx|major|triple")
      ->check(CLI::IsMember({"dichotomy", "sum", "approx", "major", "triple"}));
  weyl_cmd->add_option("--x", f.x);
  add_window(weyl_cmd, false);
  weyl_cmd->add_option("--k", f.k)->capture_default_str();
  weyl_cmd->add_option("--theta", f.theta, "Comma-separated: 0.25, 1/7 or 1/7+1e-12");
  weyl_cmd->add_option("--qmax", f.q_max)->capture_default_str();
  weyl_cmd->add_option("--Q", f.Q);
  weyl_cmd->add_option("--n", f.n);
  weyl_cmd->add_option("--M", f.M);
  handlers["weyl"] = cmd_weyl;

  auto* recur_cmd = app.add_subcommand("recur", "Strong recurrence census and bootstrap audit");
  recur_cmd->add_option("--N", f.N)->required();
  add_window(recur_cmd);
  recur_cmd->add_option("--k", f.k)->capture_default_str();
  recur_cmd->add_option("--theta", f.theta)->required();
  recur_cmd->add_option("--eps", f.eps);
  recur_cmd->add_option("--qmax", f.q_max)->capture_default_str();
  recur_cmd->add_option("--L", f.L);
  recur_cmd->add_option("--eps-prime", f.eps_prime);
  recur_cmd->add_option("--delta", f.delta);
  handlers["recur"] = cmd_recur;

  auto* phase_cmd = app.add_subcommand("phase", "Correlation of the W-tricked weight with e(P(n))");
  phase_cmd->add_option("--N", f.N)->required();
  add_window(phase_cmd, false);
  phase_cmd->add_option("--poly", f.poly, "Monomial coefficients, constant first")->required();
  phase_cmd->add_option("--w", f.w_override, "Override w(N)");
  phase_cmd->add_option("--q-extra", f.q_extra)->capture_default_str();
  phase_cmd->add_option("--a-seed", f.a_seed)->capture_default_str();
  phase_cmd->add_option("--model", f.model, "g|cramer")->capture_default_str();
  handlers["phase"] = cmd_phase;

  auto* lin_cmd = app.add_subcommand("linsys", "Smooth solutions of a linear system");
  lin_cmd->add_option("--system", f.system, "Descriptor file")->required();
  lin_cmd->add_option("--N", f.N, "Override N");
  add_window(lin_cmd, false);
  lin_cmd->add_flag("--weighted", f.weighted, "Sum products of g instead of counting");
  lin_cmd->add_option("--plimit", f.p_limit, "Report prod_{p < plimit} beta_p");
  lin_cmd->add_option("--primes", f.primes, "Comma-separated primes for local factors");
  handlers["linsys"] = cmd_linsys;

  auto* abc_cmd = app.add_subcommand("abc", "Smooth solutions of A + B = C");
  abc_cmd->add_option("--N", f.N)->required();
  add_window(abc_cmd);
  abc_cmd->add_flag("--coprime", f.coprime, "Require gcd(A, B) = 1");
  handlers["abc"] = cmd_abc;

  if (argc <= 1) {
    err << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << FRIABLE_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Constants constants;
    auto fields = constant_fields(constants);
    for (const auto& item : overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("--const expects name=value");
      const auto it = fields.find(item.substr(0, eq));
      if (it == fields.end()) throw UsageError("unknown constant '" + item.substr(0, eq) + "'");
      *it->second = parse_real("const", item.substr(eq + 1));
    }
    const Output result = handlers.at(name)(f, constants);
    bool regime = true;
    for (const Json& row : result.rows) {
      if (row.contains("regime_ok")) regime = regime && row["regime_ok"].get<bool>();
    }
    Json header;
    header["tool"] = "friable";
    header["version"] = FRIABLE_VERSION;
    header["command"] = name;
    header["config"] = config_json(app, *sub);
    header["constants"] = constants_json(constants);
    header["regime_ok"] = regime;
    if (output_path.empty()) {
      emit(out, format, header, result);
    } else {
      std::ofstream file(output_path);
      if (!file) throw UsageError("cannot write '" + output_path + "'");
      emit(file, format, header, result);
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  }
}

}  // namespace friable::cli

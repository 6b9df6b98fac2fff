#include <binocoll/json_io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace binocoll;

namespace {

enum Exit { kOk = 0, kFails = 1, kUsage = 2, kRuntime = 3 };

struct Output {
  std::string path;
  std::string format;  // json | jsonl | text; empty: infer from path

  [[nodiscard]] std::string resolved() const {
    if (!format.empty()) return format;
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".jsonl") return "jsonl";
    if (ext == ".txt") return "text";
    return "json";
  }
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void render_text(std::ostream& os, const Json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      render_text(os, value, prefix.empty() ? key : prefix + "." + key);
    }
  } else if (j.is_array() && !j.empty() && j.front().is_structured()) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(os, j[i], prefix + "[" + std::to_string(i) + "]");
  } else if (j.is_array() && j.size() == 2 && j[0].is_number_float()) {
    os << prefix << ": [" << number_text(j[0].get<double>()) << ", " << number_text(j[1].get<double>()) << "]\n";
  } else if (j.is_number_float()) {
    os << prefix << ": " << number_text(j.get<double>()) << "\n";
  } else if (j.is_string()) {
    os << prefix << ": " << j.get<std::string>() << "\n";
  } else {
    os << prefix << ": " << j.dump() << "\n";
  }
}

/// Writes header + result.  For jsonl, `records` go one per line after the header.
void emit(const Output& out, const std::string& command, const Json& config, const Json& result,
          const std::vector<Json>& records = {}) {
  std::ostringstream body;
  const Json header = output_header(command, config);
  const std::string fmt = out.resolved();
  if (fmt == "jsonl") {
    body << Json{{"header", header}}.dump() << '\n';
    if (!result.is_null()) body << Json{{"result", result}}.dump() << '\n';
    for (const auto& r : records) body << r.dump() << '\n';
  } else if (fmt == "text") {
    render_text(body, header, "header");
    if (!result.is_null()) render_text(body, result, "");
    for (std::size_t i = 0; i < records.size(); ++i) render_text(body, records[i], "record[" + std::to_string(i) + "]");
  } else {
    Json doc{{"header", header}};
    if (!result.is_null()) doc["result"] = result;
    if (!records.empty()) doc["records"] = records;
    body << doc.dump(2) << '\n';
  }
  if (out.path.empty() || out.path == "-") {
    std::cout << body.str();
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("cannot write to standard output");
    return;
  }
  std::ofstream file(out.path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + out.path + " for writing");
  file << body.str();
  file.flush();
  if (!file) throw std::runtime_error("write to " + out.path + " failed");
}

int verdict_exit(const Verdict& v) { return v.fails() ? kFails : kOk; }

// ---------------------------------------------------------------------------
// Tuple options shared by the lemma checks

struct TupleArgs {
  std::optional<std::int64_t> x, a, y, b;
  std::optional<int> delta;
  std::optional<std::int64_t> n, m, k, l;

  void add(CLI::App* app) {
    app->add_option("--x", x, "larger top index");
    app->add_option("--a", a, "bottom index at x");
    app->add_option("--y", y, "smaller top index");
    app->add_option("--b", b, "bottom index at y");
    app->add_option("--delta", delta, "parity of y")->check(CLI::IsMember({0, 1}));
    app->add_option("--n", n);
    app->add_option("--m", m);
    app->add_option("--k", k);
    app->add_option("--l", l);
  }

  [[nodiscard]] bool positions() const { return x || a || y || b; }
  [[nodiscard]] bool params() const { return delta || n || m || k || l; }

  [[nodiscard]] ParamTuple tuple() const {
    if (positions() && params()) throw UsageError("give either --x --a --y --b or --delta --n --m --k --l");
    if (positions()) {
      if (!(x && a && y && b)) throw UsageError("--x, --a, --y and --b are all required");
      return to_param(*x, *a, *y, *b);
    }
    if (!(delta && n && m && k && l)) throw UsageError("--delta, --n, --m, --k and --l are all required");
    return ParamTuple{*delta, *n, *m, *k, *l};
  }
};

Json tuple_config(const ParamTuple& t) {
  return Json{{"delta", t.delta}, {"n", t.n}, {"m", t.m}, {"k", t.k}, {"l", t.l}};
}

PiMode parse_pi_mode(const std::string& s) { return s == "exact" ? PiMode::exact : PiMode::dusart; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binomial collision verification tools"};
  app.set_version_flag("--version", std::string(BINOCOLL_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Output out;
  app.add_option("--out", out.path, "output file (default: standard output)");
  app.add_option("--format", out.format, "json, jsonl or text (default: from --out extension, else json)")
      ->check(CLI::IsMember({"json", "jsonl", "text"}));

  int rc = kOk;
  std::function<void()> action;

  // search
  auto* search = app.add_subcommand("search", "enumerate binomial collisions up to a value bound");
  std::string max_value;
  search->add_option("--max-value", max_value, "largest value to search")->required();
  search->callback([&] {
    action = [&] {
      Natural v;
      try {
        v = Natural(max_value);
      } catch (const std::exception&) {
        throw UsageError("--max-value must be a non-negative integer");
      }
      if (v < 0) throw UsageError("--max-value must be a non-negative integer");
      std::vector<Json> records;
      for (const auto& c : enumerate_collisions(v)) records.push_back(to_json(c));
      Json result{{"count", records.size()}};
      emit(out, "search", Json{{"max_value", v.str()}}, out.resolved() == "jsonl" ? Json() : result, records);
    };
  });

  // fib-family
  auto* fib = app.add_subcommand("fib-family", "verify the Fibonacci collision family");
  std::uint64_t fib_count = 5;
  fib->add_option("--count", fib_count, "members i = 0 .. count-1")->check(CLI::Range(1, 9));
  fib->callback([&] {
    action = [&] {
      std::vector<Json> records;
      bool all = true;
      for (std::uint64_t i = 0; i < fib_count; ++i) {
        const auto f = fib_identity(i);
        all = all && f.verified;
        records.push_back(Json{{"i", i}, {"x", f.x.str()}, {"a", f.a.str()}, {"y", f.y.str()}, {"b", f.b.str()},
                               {"verified", f.verified}});
      }
      emit(out, "fib-family", Json{{"count", fib_count}}, out.resolved() == "jsonl" ? Json() : Json{{"all_verified", all}},
           records);
      rc = all ? kOk : kFails;
    };
  });

  // param
  auto* param = app.add_subcommand("param", "coordinates (delta, n, m, k, l) of C(x, a) = C(y, b)");
  std::int64_t px = 0, pa = 0, py = 0, pb = 0;
  param->add_option("--x", px)->required();
  param->add_option("--a", pa)->required();
  param->add_option("--y", py)->required();
  param->add_option("--b", pb)->required();
  param->callback([&] {
    action = [&] {
      const ParamTuple t = to_param(px, pa, py, pb);
      const Hypotheses h = t.hypotheses();
      Json result = to_json(t);
      result["eq12"] = check_eq12(t);
      result["hypotheses"] = Json{{"0<=m<k<n/2", h.order}, {"m<=0.735k", h.m_ratio}, {"l>delta", h.l_gt_delta},
                                  {"n>=500000", h.n_large}};
      emit(out, "param", Json{{"x", px}, {"a", pa}, {"y", py}, {"b", pb}}, result);
    };
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "explicit analytic estimates");
  bounds->require_subcommand(1);
  auto* pi_up = bounds->add_subcommand("pi-upper", "Dusart upper bound for pi(x)");
  double bx = 0;
  pi_up->add_option("--x", bx)->required();
  pi_up->callback([&] {
    action = [&] {
      emit(out, "bounds pi-upper", Json{{"x", bx}}, Json{{"pi_upper", to_json(pi_upper_dusart(bx))}});
    };
  });
  auto* stirling = bounds->add_subcommand("stirling", "Robbins bracket of log nu!");
  std::uint64_t nu = 0;
  std::uint64_t digits = 30;
  stirling->add_option("--nu", nu)->required();
  stirling->add_option("--digits", digits, "digits for the exact log nu!")->check(CLI::Range(15, 1000));
  stirling->callback([&] {
    action = [&] {
      const auto s = stirling_log_bounds(nu);
      const BigReal exact = log_factorial_exact(nu, static_cast<int>(digits));
      emit(out, "bounds stirling", Json{{"nu", nu}, {"digits", digits}},
           Json{{"log_g_minus", to_json(s.log_lower)},
                {"log_factorial", exact.str(static_cast<std::streamsize>(digits))},
                {"log_g_plus", to_json(s.log_upper)},
                {"f", to_json(s.f)}});
    };
  });
  auto* thresholds = bounds->add_subcommand("thresholds", "large-l thresholds");
  std::int64_t tn = 0;
  double tc = 0.68;
  thresholds->add_option("--n", tn)->required();
  thresholds->add_option("--c", tc);
  thresholds->callback([&] {
    action = [&] {
      const auto th = section5_thresholds(tn, tc);
      emit(out, "bounds thresholds", Json{{"n", tn}, {"c", tc}},
           Json{{"t_log2", to_json(th.t_log2)}, {"t_pow", to_json(th.t_pow)}, {"c_star", to_json(th.c_star)}});
    };
  });
  auto* hrate = bounds->add_subcommand("h-rate", "rate function h(alpha, lambda)");
  double alpha = 0.00151, lambda = 0.0;
  hrate->add_option("--alpha", alpha);
  hrate->add_option("--lambda", lambda);
  hrate->callback([&] {
    action = [&] {
      emit(out, "bounds h-rate", Json{{"alpha", alpha}, {"lambda", lambda}}, Json{{"h", to_json(h_rate(alpha, lambda))}});
    };
  });
  auto* lbin = bounds->add_subcommand("log-binom", "Stirling lower bounds for the two log-binomials");
  std::int64_t lbn = kNFloor;
  lbin->add_option("--alpha", alpha);
  lbin->add_option("--lambda", lambda);
  lbin->add_option("--n", lbn);
  lbin->callback([&] {
    action = [&] {
      const auto lb = log_binom_lowers(alpha, lambda, lbn);
      emit(out, "bounds log-binom", Json{{"alpha", alpha}, {"lambda", lambda}, {"n", lbn}},
           Json{{"first", to_json(lb.eq42)}, {"second", to_json(lb.eq43)}});
    };
  });
  auto* dint = bounds->add_subcommand("dusart-interval", "interval (x, x(1 + 1/log^3 x)] containing a prime");
  double dx = 0;
  dint->add_option("--x", dx)->required();
  dint->callback([&] {
    action = [&] {
      const auto iv = dusart_interval(dx);
      emit(out, "bounds dusart-interval", Json{{"x", dx}},
           Json{{"lower_exclusive", iv.lower_exclusive}, {"upper", to_json(iv.upper)}});
    };
  });
  auto* cbin = bounds->add_subcommand("central-binom", "lower bound for log C(2n + l, n - k)");
  std::int64_t cbn = kNFloor;
  cbin->add_option("--n", cbn);
  cbin->callback([&] {
    action = [&] {
      emit(out, "bounds central-binom", Json{{"n", cbn}},
           Json{{"lower", to_json(central_binom_lower(cbn))}, {"rate", to_json(central_binom_rate())}});
    };
  });
  auto* consts = bounds->add_subcommand("constants", "numerical constant checks");
  consts->callback([&] {
    action = [&] {
      const Verdict v1 = psi_constant_check(), v2 = h_rate_floor_check(), v3 = central_binom_constant_check();
      emit(out, "bounds constants", Json::object(),
           Json{{"1.03883<log2.83", to_json(v1)}, {"4.6623<h(0.00151,0)", to_json(v2)}, {"1.3132<=rate", to_json(v3)}});
      rc = (v1.fails() || v2.fails() || v3.fails()) ? kFails : kOk;
    };
  });

  // lemma
  auto* lemma = app.add_subcommand("lemma", "certified lemma checks");
  lemma->require_subcommand(1);
  TupleArgs targs;
  auto report_action = [&](const char* name, auto&& fn) {
    return [&, name, fn] {
      action = [&, name, fn] {
        const ParamTuple t = targs.tuple();
        const LemmaReport r = fn(t);
        Json cfg = tuple_config(t);
        emit(out, std::string("lemma ") + name, cfg, to_json(r));
        rc = verdict_exit(r.verdict);
      };
    };
  };
  auto* c21 = lemma->add_subcommand("check21", "first-order inequalities");
  targs.add(c21);
  c21->callback(report_action("check21", [](const ParamTuple& t) { return check_lemma21(t); }));
  auto* c23 = lemma->add_subcommand("check23", "smoothness of the two windows");
  targs.add(c23);
  c23->callback(report_action("check23", [](const ParamTuple& t) { return check_lemma23_smooth(t); }));
  auto* c31 = lemma->add_subcommand("check31", "prime-counting inequality");
  targs.add(c31);
  std::string pi_mode = "exact";
  c31->add_option("--pi-mode", pi_mode)->check(CLI::IsMember({"exact", "dusart"}));
  c31->callback([&] {
    action = [&] {
      const ParamTuple t = targs.tuple();
      const LemmaReport r = check_lemma31(t, parse_pi_mode(pi_mode));
      Json cfg = tuple_config(t);
      cfg["pi_mode"] = pi_mode;
      emit(out, "lemma check31", cfg, to_json(r));
      rc = verdict_exit(r.verdict);
    };
  });
  auto* c22 = lemma->add_subcommand("check22", "k >= 588 consequence");
  std::int64_t l22n = 0, l22k = 0;
  c22->add_option("--n", l22n)->required();
  c22->add_option("--k", l22k)->required();
  c22->callback([&] {
    action = [&] {
      const LemmaReport r = check_lemma22(l22n, l22k);
      emit(out, "lemma check22", Json{{"n", l22n}, {"k", l22k}}, to_json(r));
      rc = verdict_exit(r.verdict);
    };
  });
  auto* t32 = lemma->add_subcommand("threshold32", "largest F with a nonnegative threshold expression");
  std::int64_t t32lo = 10'000, t32hi = 10'000'000;
  t32->add_option("--lo", t32lo);
  t32->add_option("--hi", t32hi);
  t32->callback([&] {
    action = [&] {
      const auto th = threshold_lemma32(t32lo, t32hi);
      emit(out, "lemma threshold32", Json{{"lo", t32lo}, {"hi", t32hi}},
           Json{{"f_star", th.f_star},
                {"value_at_star", to_json(th.value_at_star)},
                {"value_after_star", to_json(th.value_after_star)},
                {"bisection_steps", th.bisection_steps}});
    };
  });
  auto* n31 = lemma->add_subcommand("nmax31", "maximise the n bound over a (k, l) grid");
  NmaxConfig ncfg;
  std::string n31_mode = "dusart";
  n31->add_option("--k-min", ncfg.k_min);
  n31->add_option("--k-dense-max", ncfg.k_dense_max);
  n31->add_option("--k-max", ncfg.k_max);
  n31->add_option("--k-stride", ncfg.k_stride)->check(CLI::PositiveNumber);
  n31->add_option("--delta", ncfg.delta)->check(CLI::IsMember({0, 1}));
  n31->add_option("--pi-mode", n31_mode)->check(CLI::IsMember({"exact", "dusart"}));
  n31->add_option("--threads", ncfg.threads, "0 = all cores");
  n31->callback([&] {
    action = [&] {
      ncfg.pi_mode = parse_pi_mode(n31_mode);
      const auto r = nmax_lemma31(ncfg);
      emit(out, "lemma nmax31",
           Json{{"k_min", ncfg.k_min}, {"k_dense_max", ncfg.k_dense_max}, {"k_max", ncfg.k_max},
                {"k_stride", ncfg.k_stride}, {"delta", ncfg.delta}, {"pi_mode", n31_mode}},
           Json{{"n_max", r.n_max}, {"log_bound", to_json(r.log_bound)}, {"k", r.k}, {"l", r.l},
                {"points", r.points}, {"skipped", r.skipped}, {"reference_value", r.reference_value}});
    };
  });
  auto* s4 = lemma->add_subcommand("section4", "small-l contradiction (--k) or full check on a tuple");
  targs.add(s4);
  s4->callback([&] {
    action = [&] {
      if (targs.k && !targs.positions() && !targs.delta && !targs.n && !targs.m && !targs.l) {
        const auto c = section4_contradiction(*targs.k);
        emit(out, "lemma section4", Json{{"k", *targs.k}},
             Json{{"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}, {"contradiction", c.contradiction},
                  {"verdict", to_string(c.verdict.truth)}, {"margin", c.verdict.margin}});
        rc = verdict_exit(c.verdict);
        return;
      }
      const ParamTuple t = targs.tuple();
      const LemmaReport r = section4_check(t);
      emit(out, "lemma section4", tuple_config(t), to_json(r));
      rc = verdict_exit(r.verdict);
    };
  });
  auto* s5 = lemma->add_subcommand("section5", "large-l consistency");
  std::int64_t s5n = 0;
  double s5c = 0.68;
  s5->add_option("--n", s5n)->required();
  s5->add_option("--c", s5c);
  s5->callback([&] {
    action = [&] {
      const auto r = section5_check(s5n, s5c);
      emit(out, "lemma section5", Json{{"n", s5n}, {"c", s5c}},
           Json{{"hypotheses", hypotheses_json(r.hypotheses)},
                {"t_log2", to_json(r.thresholds.t_log2)},
                {"t_pow", to_json(r.thresholds.t_pow)},
                {"c_star", to_json(r.thresholds.c_star)},
                {"lhs", to_json(r.lhs)},
                {"rhs", to_json(r.rhs)},
                {"verdict", to_string(r.verdict.truth)},
                {"margin", r.verdict.margin}});
      rc = verdict_exit(r.verdict);
    };
  });

  // sieve
  auto* sieve = app.add_subcommand("sieve", "prime sieving utilities");
  sieve->require_subcommand(1);
  auto* gaps = sieve->add_subcommand("gaps", "prime gaps of at least --min-gap with left prime in [lo, hi)");
  GapScanOptions gopt;
  gopt.lo = 2;
  gaps->add_option("--lo", gopt.lo);
  gaps->add_option("--hi", gopt.hi)->required();
  gaps->add_option("--min-gap", gopt.min_gap)->check(CLI::PositiveNumber);
  gaps->add_option("--segment-size", gopt.segment_size)->check(CLI::Range(std::size_t{1024}, std::size_t{1} << 30));
  gaps->add_option("--threads", gopt.threads, "0 = all cores");
  gaps->callback([&] {
    action = [&] {
      std::vector<Json> records;
      for (const auto& e : gap_scan(gopt)) records.push_back(to_json(e));
      emit(out, "sieve gaps", Json{{"lo", gopt.lo}, {"hi", gopt.hi}, {"min_gap", gopt.min_gap}},
           out.resolved() == "jsonl" ? Json() : Json{{"count", records.size()}}, records);
    };
  });
  auto* spi = sieve->add_subcommand("pi", "pi(x), theta(x) and psi(x)");
  std::uint64_t sx = 0;
  spi->add_option("--x", sx)->required()->check(CLI::Range(std::uint64_t{2}, kChebyshevExactLimit));
  spi->callback([&] {
    action = [&] {
      const auto c = chebyshev_exact(sx);
      emit(out, "sieve pi", Json{{"x", sx}}, Json{{"pi", c.pi}, {"theta", to_json(c.theta)}, {"psi", to_json(c.psi)}});
    };
  });
  auto* snb = sieve->add_subcommand("neighbors", "largest prime <= x and smallest prime > x");
  std::uint64_t nx = 0;
  snb->add_option("--x", nx)->required()->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1} << 62));
  snb->callback([&] {
    action = [&] {
      const auto [prev, next] = prime_neighbors(nx);
      emit(out, "sieve neighbors", Json{{"x", nx}}, Json{{"prev", prev}, {"next", next}});
    };
  });

  // certify
  auto* certify = app.add_subcommand("certify", "gap-and-smoothness certificate");
  CertificateConfig ccfg;
  std::string windows_text = "152-156,303-308";
  std::uint64_t max_segments = 0;
  bool timing = false;
  certify->add_option("--qmax", ccfg.q_max)->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
  certify->add_option("--gap-min", ccfg.gap_min)->check(CLI::PositiveNumber);
  certify->add_option("--windows", windows_text, "comma-separated offset ranges a-b");
  certify->add_option("--smooth-bound", ccfg.smooth_bound)->check(CLI::Range(2u, 1u << 22));
  certify->add_option("--gap-cap", ccfg.gap_cap);
  certify->add_option("--window-len", ccfg.window_len);
  certify->add_option("--segment-size", ccfg.segment_size)->check(CLI::Range(std::size_t{1024}, std::size_t{1} << 30));
  certify->add_option("--checkpoint", ccfg.checkpoint_path, "resumable state file");
  certify->add_option("--threads", ccfg.threads, "0 = all cores");
  certify->add_option("--max-segments", max_segments, "stop after this many segments (resume later)");
  certify->add_flag("--timing", timing, "include wall time in the report");
  certify->callback([&] {
    action = [&] {
      try {
        ccfg.windows = parse_windows(windows_text);
      } catch (const std::exception& e) {
        throw UsageError(std::string("--windows: ") + e.what());
      }
      if (ccfg.checkpoint_path.empty()) {
        if (const char* dir = std::getenv("BINOCOLL_CACHE_DIR"); dir && *dir) {
          std::filesystem::create_directories(dir);
          ccfg.checkpoint_path = (std::filesystem::path(dir) / ("certify-" + ccfg.hash() + ".json")).string();
        }
      }
      const bool stream = out.resolved() == "jsonl";
      std::vector<Json> records;
      RunOptions opts;
      opts.max_segments = max_segments;
      if (stream) {
        opts.on_gap_prime = [&](const GapEvent& e, const std::vector<std::optional<WindowRefutation>>& refs) {
          Json rec = to_json(e);
          Json rs = Json::array();
          for (std::size_t i = 0; i < refs.size(); ++i)
            rs.push_back(refs[i] ? to_json(*refs[i]) : Json{{"window", to_string(ccfg.windows[i])}, {"refuted", false}});
          rec["refutations"] = rs;
          records.push_back(std::move(rec));
        };
      }
      const auto report = run_certificate(ccfg, opts);
      emit(out, "certify", to_json(ccfg), to_json(report, timing), records);
      rc = (report.state.failures.empty() && report.state.cap_violations.empty()) ? kOk : kFails;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return rc;
}

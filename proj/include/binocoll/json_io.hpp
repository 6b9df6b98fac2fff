#pragma once

// JSON encodings of the library's results.  Natural numbers are written as
// decimal strings, intervals as [lo, hi].

#include <binocoll/certificate.hpp>
#include <binocoll/collision.hpp>
#include <binocoll/lemma.hpp>

#include <json.hpp>

#include <string>

#ifndef BINOCOLL_VERSION
#define BINOCOLL_VERSION "1.0.0"
#endif

namespace binocoll {

using Json = nlohmann::ordered_json;

inline Json to_json(const Interval& x) { return Json::array({x.lo(), x.hi()}); }

inline Json to_json(const Verdict& v) {
  return Json{{"truth", to_string(v.truth)}, {"margin", v.margin}, {"refined", v.refined}};
}

inline Json to_json(const Inequality& q) {
  return Json{{"name", q.name},
              {"lhs", to_json(q.lhs)},
              {"relation", q.relation == Relation::less ? "<" : "<="},
              {"rhs", to_json(q.rhs)},
              {"verdict", to_string(q.verdict.truth)},
              {"margin", q.verdict.margin},
              {"decisive", q.decisive}};
}

inline Json hypotheses_json(const std::vector<std::pair<std::string, bool>>& hs) {
  Json out = Json::object();
  for (const auto& [name, ok] : hs) out[name] = ok;
  return out;
}

inline Json to_json(const LemmaReport& r) {
  Json parts = Json::array();
  for (const auto& q : r.parts) parts.push_back(to_json(q));
  return Json{{"lemma", r.lemma},
              {"hypotheses", hypotheses_json(r.hypotheses)},
              {"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"verdict", to_string(r.verdict.truth)},
              {"margin", r.verdict.margin},
              {"refined", r.verdict.refined},
              {"notes", r.notes},
              {"parts", parts}};
}

inline Json to_json(const ParamTuple& t) {
  return Json{{"delta", t.delta}, {"n", t.n}, {"m", t.m}, {"k", t.k}, {"l", t.l}, {"k0", t.k0()}, {"m0", t.m0()}};
}

inline Json to_json(const CollisionRecord& c) {
  Json reps = Json::array();
  for (const auto& r : c.reps) reps.push_back({r.x, r.a});
  return Json{{"N", c.value.str()}, {"reps", reps}};
}

inline Json to_json(const GapEvent& e) { return Json{{"p", e.p}, {"gap", e.gap}}; }

inline Json to_json(const WindowRefutation& w) {
  return Json{{"q", w.q},
              {"window", to_string(w.window)},
              {"witness_offset", w.witness_offset},
              {"witness_prime", w.witness_prime}};
}

inline Json to_json(const CertificateConfig& c) {
  Json windows = Json::array();
  for (const auto& w : c.windows) windows.push_back(to_string(w));
  return Json{{"q_max", c.q_max},
              {"gap_min", c.gap_min},
              {"windows", windows},
              {"smooth_bound", c.smooth_bound},
              {"gap_cap", c.gap_cap},
              {"window_len", c.window_len},
              {"segment_size", c.segment_size},
              {"config_hash", c.hash()}};
}

inline Json to_json(const CoverageResult& c) {
  Json table = Json::array();
  for (const auto& [s, w] : c.table) table.push_back({s, w ? Json(*w) : Json(nullptr)});
  return Json{{"ok", c.ok}, {"placements", table}};
}

/// wall_time is only included on request so that reports stay reproducible.
inline Json to_json(const CertificateReport& r, bool with_timing = false) {
  Json refs = Json::object();
  for (std::size_t i = 0; i < r.config.windows.size(); ++i) refs[to_string(r.config.windows[i])] = r.state.refutations[i];
  Json fails = Json::array();
  for (const auto& [q, w] : r.state.failures) fails.push_back({{"q", q}, {"window", to_string(r.config.windows[w])}});
  Json caps = Json::array();
  for (const auto& e : r.state.cap_violations) caps.push_back(to_json(e));
  Json out{{"config", to_json(r.config)},
           {"coverage_ok", r.coverage.ok},
           {"completed_hi", r.state.completed_hi},
           {"finished", r.finished},
           {"gap_prime_count", r.state.gap_prime_count},
           {"refutations", refs},
           {"failures", fails},
           {"max_gap", r.state.max_gap},
           {"cap_violations", caps},
           {"segments_done", r.state.segments_done},
           {"certificate_ok", r.certificate_ok()},
           {"covers_all_runs", r.covers_all_runs()}};
  if (with_timing) out["wall_time"] = r.wall_time;
  return out;
}

inline Json output_header(const std::string& command, const Json& config) {
  return Json{{"tool", "binocoll"}, {"version", BINOCOLL_VERSION}, {"command", command}, {"config", config}};
}

}  // namespace binocoll

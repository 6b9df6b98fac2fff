#pragma once

// Gap-and-smoothness certificate: every prime q <= q_max whose gap to the
// next prime is at least gap_min must have, in each configured offset window
// [a, b], some q + i (a <= i <= b) with a prime factor above smooth_bound.
// Together with coverage_check this rules out runs of window_len consecutive
// smooth_bound-smooth integers below q_max.

#include <binocoll/arith.hpp>
#include <binocoll/sieve.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace binocoll {

/// Inclusive offset range [first, last] relative to a prime q.
struct OffsetWindow {
  std::int64_t first = 0;
  std::int64_t last = 0;

  friend bool operator==(const OffsetWindow&, const OffsetWindow&) = default;
};

inline std::string to_string(const OffsetWindow& w) {
  return std::to_string(w.first) + "-" + std::to_string(w.last);
}

/// Parses "152-156,303-308".
inline std::vector<OffsetWindow> parse_windows(const std::string& text) {
  std::vector<OffsetWindow> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos || dash == 0) throw std::invalid_argument("bad window '" + item + "'");
    std::size_t used_a = 0, used_b = 0;
    const std::string a = item.substr(0, dash), b = item.substr(dash + 1);
    OffsetWindow w{std::stoll(a, &used_a), std::stoll(b, &used_b)};
    if (used_a != a.size() || used_b != b.size() || w.first < 1 || w.last < w.first)
      throw std::invalid_argument("bad window '" + item + "'");
    out.push_back(w);
  }
  if (out.empty()) throw std::invalid_argument("no windows given");
  return out;
}

struct CertificateConfig {
  std::uint64_t q_max = 31754673611ull;
  std::uint64_t gap_min = 158;
  std::vector<OffsetWindow> windows = {{152, 156}, {303, 308}};
  std::uint32_t smooth_bound = 3427;
  std::uint64_t gap_cap = 456;
  std::uint64_t window_len = 156;
  std::size_t segment_size = kDefaultSegmentSize;
  std::string checkpoint_path;  // empty: no checkpointing
  unsigned threads = 1;

  /// FNV-1a over the fields that determine the result.
  [[nodiscard]] std::string hash() const {
    std::string canon = "qmax=" + std::to_string(q_max) + ";gap_min=" + std::to_string(gap_min) + ";windows=";
    for (const auto& w : windows) canon += to_string(w) + ",";
    canon += ";bound=" + std::to_string(smooth_bound) + ";cap=" + std::to_string(gap_cap) +
             ";len=" + std::to_string(window_len) + ";segment=" + std::to_string(segment_size);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

// ---------------------------------------------------------------------------
// Window covering

/// For each placement s = z - q of a run z+1..z+window_len inside a gap of at
/// most gap_cap, the first window [a, b] with z+1 <= q+a and q+b <= z+window_len.
struct CoverageResult {
  bool ok = true;
  std::vector<std::pair<std::int64_t, std::optional<std::size_t>>> table;
};

inline CoverageResult coverage_check(std::uint64_t gap_cap, std::uint64_t window_len,
                                     const std::vector<OffsetWindow>& windows) {
  CoverageResult out;
  const auto last = static_cast<std::int64_t>(gap_cap) - static_cast<std::int64_t>(window_len) - 1;
  const auto len = static_cast<std::int64_t>(window_len);
  for (std::int64_t s = 0; s <= last; ++s) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < windows.size() && !hit; ++i)
      if (s + 1 <= windows[i].first && windows[i].last <= s + len) hit = i;
    out.ok = out.ok && hit.has_value();
    out.table.emplace_back(s, hit);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Refutation

struct WindowRefutation {
  std::uint64_t q = 0;
  OffsetWindow window;
  std::int64_t witness_offset = 0;
  std::uint64_t witness_prime = 0;
};

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First q + i in the window that is not bound-smooth, with a prime factor of
/// it above the bound.  nullopt when every element is bound-smooth.
inline std::optional<WindowRefutation> refute_window(std::uint64_t q, const OffsetWindow& w, std::uint32_t bound) {
  if (w.first < 0 || w.last < w.first) throw std::invalid_argument("refute_window: bad window");
  if (q > std::numeric_limits<std::uint64_t>::max() - static_cast<std::uint64_t>(w.last))
    throw CapabilityError("refute_window: q + offset exceeds 64 bits");
  for (std::int64_t off = w.first; off <= w.last; ++off) {
    const std::uint64_t v = q + static_cast<std::uint64_t>(off);
    if (v < 2) continue;
    const auto split = smooth_split<std::uint64_t>(v, bound);
    if (split.is_smooth()) continue;
    const std::uint64_t witness = largest_prime_factor<std::uint64_t>(split.cofactor);
    if (witness <= bound || v % witness != 0)
      throw std::logic_error("refute_window: witness failed re-verification");
    return WindowRefutation{q, w, off, witness};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Run state and report

struct CertificateState {
  std::uint64_t completed_hi = 2;  // primes p < completed_hi are done
  std::uint64_t gap_prime_count = 0;
  std::vector<std::uint64_t> refutations;                         // per window
  std::vector<std::pair<std::uint64_t, std::size_t>> failures;    // (q, window index)
  std::vector<GapEvent> cap_violations;                           // gap > gap_cap
  std::uint64_t max_gap = 0;
  std::uint64_t segments_done = 0;

  friend bool operator==(const CertificateState&, const CertificateState&) = default;
};

struct CertificateReport {
  CertificateConfig config;
  CertificateState state;
  CoverageResult coverage;
  bool finished = false;  // scan reached q_max
  double wall_time = 0.0;

  /// Every scanned gap prime refuted in every window, no gap above gap_cap,
  /// and the windows cover all placements.
  [[nodiscard]] bool certificate_ok() const {
    return finished && coverage.ok && state.failures.empty() && state.cap_violations.empty();
  }
  /// The no-smooth-run conclusion additionally needs every gap that can hold
  /// window_len composites: d >= window_len + 1, and d is even after an odd prime.
  [[nodiscard]] bool covers_all_runs() const {
    const std::uint64_t need = config.window_len + 1 + (config.window_len + 1) % 2;
    return certificate_ok() && config.gap_min <= need;
  }
};

// ---------------------------------------------------------------------------
// Checkpoint file

using Json = nlohmann::ordered_json;

inline Json checkpoint_json(const CertificateConfig& cfg, const CertificateState& s) {
  Json j;
  j["config_hash"] = cfg.hash();
  j["completed_hi"] = s.completed_hi;
  j["gap_prime_count"] = s.gap_prime_count;
  j["refutations"] = s.refutations;
  j["failures"] = Json::array();
  for (const auto& [q, w] : s.failures) j["failures"].push_back({q, w});
  j["cap_violations"] = Json::array();
  for (const auto& e : s.cap_violations) j["cap_violations"].push_back({e.p, e.gap});
  j["max_gap"] = s.max_gap;
  j["segments_done"] = s.segments_done;
  return j;
}

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.contains(name)) throw CheckpointError(std::string("checkpoint: missing field '") + name + "'");
  return j.at(name);
}

inline std::uint64_t field_u64(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_unsigned()) throw CheckpointError(std::string("checkpoint: field '") + name + "' is not an unsigned integer");
  return v.get<std::uint64_t>();
}

}  // namespace detail

/// Reads a checkpoint.  A missing or empty file yields the initial state.
inline CertificateState load_checkpoint(const std::string& path, const CertificateConfig& cfg) {
  CertificateState s;
  s.refutations.assign(cfg.windows.size(), 0);
  std::ifstream in(path);
  if (!in) return s;
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return s;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CheckpointError(std::string("checkpoint: not valid JSON: ") + e.what());
  }
  const Json& hash = detail::field(j, "config_hash");
  if (!hash.is_string()) throw CheckpointError("checkpoint: field 'config_hash' is not a string");
  if (hash.get<std::string>() != cfg.hash())
    throw CheckpointError("checkpoint: field 'config_hash' does not match the current configuration");
  s.completed_hi = detail::field_u64(j, "completed_hi");
  s.gap_prime_count = detail::field_u64(j, "gap_prime_count");
  s.max_gap = detail::field_u64(j, "max_gap");
  s.segments_done = detail::field_u64(j, "segments_done");
  const Json& refs = detail::field(j, "refutations");
  if (!refs.is_array() || refs.size() != cfg.windows.size())
    throw CheckpointError("checkpoint: field 'refutations' has the wrong shape");
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (!refs[i].is_number_unsigned()) throw CheckpointError("checkpoint: field 'refutations' has a non-integer entry");
    s.refutations[i] = refs[i].get<std::uint64_t>();
  }
  const Json& fails = detail::field(j, "failures");
  if (!fails.is_array()) throw CheckpointError("checkpoint: field 'failures' is not an array");
  for (const auto& f : fails) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_unsigned() || !f[1].is_number_unsigned())
      throw CheckpointError("checkpoint: field 'failures' has a malformed entry");
    s.failures.emplace_back(f[0].get<std::uint64_t>(), f[1].get<std::size_t>());
  }
  const Json& caps = detail::field(j, "cap_violations");
  if (!caps.is_array()) throw CheckpointError("checkpoint: field 'cap_violations' is not an array");
  for (const auto& c : caps) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_unsigned() || !c[1].is_number_unsigned())
      throw CheckpointError("checkpoint: field 'cap_violations' has a malformed entry");
    s.cap_violations.push_back({c[0].get<std::uint64_t>(), c[1].get<std::uint64_t>()});
  }
  return s;
}

/// Write-temp-then-rename so a crash never leaves a torn checkpoint.
inline void save_checkpoint(const std::string& path, const CertificateConfig& cfg, const CertificateState& s) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp + " for writing");
    out << checkpoint_json(cfg, s).dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("checkpoint: write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("checkpoint: rename to " + path + " failed: " + ec.message());
}

// ---------------------------------------------------------------------------
// Run

struct RunOptions {
  /// Stop after this many segments in this invocation (0 = no limit).
  std::uint64_t max_segments = 0;
  /// Called in ascending q for every gap prime with its per-window outcome.
  std::function<void(const GapEvent&, const std::vector<std::optional<WindowRefutation>>&)> on_gap_prime;
};

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline CertificateReport run_certificate(const CertificateConfig& cfg, const RunOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  CertificateReport report;
  report.config = cfg;
  report.coverage = coverage_check(cfg.gap_cap, cfg.window_len, cfg.windows);
  if (!report.coverage.ok) throw CoverageError("certificate: windows do not cover every placement; refusing to run");
  if (cfg.smooth_bound < 2) throw std::invalid_argument("certificate: smooth_bound must be >= 2");
  if (cfg.q_max < 2) throw std::invalid_argument("certificate: q_max must be >= 2");

  CertificateState state;
  state.refutations.assign(cfg.windows.size(), 0);
  if (!cfg.checkpoint_path.empty()) state = load_checkpoint(cfg.checkpoint_path, cfg);

  struct Outcome {
    GapEvent event;
    std::vector<std::optional<WindowRefutation>> refs;
  };
  if (state.completed_hi <= cfg.q_max) {
    GapScanOptions scan;
    scan.lo = state.completed_hi;
    scan.hi = cfg.q_max + 1;
    scan.min_gap = cfg.gap_min;
    scan.segment_size = cfg.segment_size;
    scan.threads = cfg.threads;

    // Workers refute their own chunk; the ordered sink picks the outcomes up
    // by the chunk's first gap prime.
    std::mutex mu;
    std::map<std::uint64_t, std::vector<Outcome>> done;  // keyed by first p of chunk (or sentinel)
    std::uint64_t this_run = 0;
    auto last_save = std::chrono::steady_clock::now();

    auto per_chunk = [&](std::vector<GapEvent>& events) {
      std::vector<Outcome> outcomes;
      outcomes.reserve(events.size());
      for (const GapEvent& e : events) {
        Outcome o{e, {}};
        for (const auto& w : cfg.windows) o.refs.push_back(refute_window(e.p, w, cfg.smooth_bound));
        outcomes.push_back(std::move(o));
      }
      if (!events.empty()) {
        std::lock_guard lock(mu);
        done[events.front().p] = std::move(outcomes);
      }
    };
    auto sink = [&](std::uint64_t, std::uint64_t chunk_hi, std::vector<GapEvent>&& events) {
      std::vector<Outcome> outcomes;
      if (!events.empty()) {
        std::lock_guard lock(mu);
        auto it = done.find(events.front().p);
        outcomes = std::move(it->second);
        done.erase(it);
      }
      for (const Outcome& o : outcomes) {
        ++state.gap_prime_count;
        state.max_gap = std::max(state.max_gap, o.event.gap);
        if (o.event.gap > cfg.gap_cap) state.cap_violations.push_back(o.event);
        for (std::size_t i = 0; i < o.refs.size(); ++i) {
          if (o.refs[i]) ++state.refutations[i];
          else state.failures.emplace_back(o.event.p, i);
        }
        if (opts.on_gap_prime) opts.on_gap_prime(o.event, o.refs);
      }
      state.completed_hi = chunk_hi;
      ++state.segments_done;
      ++this_run;
      const auto now = std::chrono::steady_clock::now();
      if (!cfg.checkpoint_path.empty() && now - last_save > std::chrono::seconds(1)) {
        save_checkpoint(cfg.checkpoint_path, cfg, state);
        last_save = now;
      }
      return opts.max_segments == 0 || this_run < opts.max_segments;
    };
    gap_scan_chunks(scan, sink, per_chunk);
  }
  if (!cfg.checkpoint_path.empty()) save_checkpoint(cfg.checkpoint_path, cfg, state);

  report.finished = state.completed_hi > cfg.q_max;
  report.state = std::move(state);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace binocoll

#include "tarmac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tarmac {

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Tarmac: return "tarmac";
    case Protocol::TarmacAdaptive: return "tarmac_adaptive";
    case Protocol::TarmacMultipath: return "tarmac_multipath";
    case Protocol::ShortestPath: return "sp";
    case Protocol::Intrusion1: return "intrusion1";
    case Protocol::Intrusion2: return "intrusion2";
  }
  return "?";
}

const char* to_string(PatternKind k) {
  switch (k) {
    case PatternKind::AllToSink: return "all_to_sink";
    case PatternKind::AllNodes: return "all_nodes";
    case PatternKind::OneThird: return "one_third";
    case PatternKind::CornerQuarter: return "corner_quarter";
    case PatternKind::Single: return "single";
  }
  return "?";
}

bool protocol_from_string(const std::string& s, Protocol& out) {
  for (Protocol p : {Protocol::Tarmac, Protocol::TarmacAdaptive,
                     Protocol::TarmacMultipath, Protocol::ShortestPath,
                     Protocol::Intrusion1, Protocol::Intrusion2}) {
    if (s == to_string(p)) {
      out = p;
      return true;
    }
  }
  return false;
}

bool pattern_from_string(const std::string& s, PatternKind& out) {
  for (PatternKind k :
       {PatternKind::AllToSink, PatternKind::AllNodes, PatternKind::OneThird,
        PatternKind::CornerQuarter, PatternKind::Single}) {
    if (s == to_string(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (c.rows < 1 || c.cols < 1) fail("grid dimensions must be >= 1");
  if (c.spacing_m < 1) fail("spacing_m must be >= 1");
  if (c.node_count() > 0xFFF0) fail("too many nodes");
  if (c.sink >= c.node_count()) fail("sink id out of range");
  if (c.slot_count < 1) fail("slot_count must be >= 1");
  if (c.period_us <= 0) fail("period_us must be > 0");
  if (c.slot_bytes < 1) fail("slot_bytes must be >= 1");
  if (c.payload_bytes < 1) fail("payload_bytes must be >= 1");
  if (c.payload_bytes + c.slot_header_bytes > c.slot_bytes) {
    fail("payload + slot header exceeds slot_bytes");
  }
  if (c.buffer_slots < 1) fail("buffer_slots must be >= 1");
  if (c.pattern == PatternKind::Single && c.single_source >= c.node_count()) {
    fail("single_source out of range");
  }
  if (c.rate_pps < 0) fail("rate_pps must be >= 0");
  if (c.traffic_start_us < 0 || c.traffic_duration_us < 0) {
    fail("traffic window must be non-negative");
  }
  if (c.traffic_start_us + c.traffic_duration_us > c.sim_end_us) {
    fail("traffic window extends past sim_end_us");
  }
  if (c.routing_period_us < 0) fail("routing_period_us must be >= 0");
  if (c.channel.range_dm < 0) fail("range_dm must be >= 0");
  if (c.channel.effective_interference_dm() < c.channel.range_dm) {
    fail("interference_dm must be 0 or >= range_dm");
  }
  if (c.channel.bitrate_bps <= 0) fail("bitrate_bps must be > 0");
  if (c.channel.max_jitter_us < 0) fail("max_jitter_us must be >= 0");
  if (c.sim_end_us <= 0) fail("sim_end_us must be > 0");
  if (c.tau_min_us <= 0 || c.tau_max_us < c.tau_min_us) {
    fail("bad tau_min_us / tau_max_us");
  }
  if (c.backlog_persist_periods < 1) fail("backlog_persist_periods must be >= 1");
  if (c.fake_path_prob < 0 || c.fake_path_prob > 1) {
    fail("fake_path_prob must be in [0, 1]");
  }
  if (c.retry_limit < 1) fail("retry_limit must be >= 1");
  if (c.attack_shuffles < 1) fail("attack_shuffles must be >= 1");
  if (c.attack_window_us <= 0) fail("attack_window_us must be > 0");
  if (c.attack_edge_min_repeats < 1) fail("attack_edge_min_repeats must be >= 1");
}

namespace {

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::int64_t to_i64(const std::string& v) {
  std::size_t pos = 0;
  const std::int64_t out = std::stoll(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("not an integer: " + v);
  return out;
}

double to_f64(const std::string& v) {
  std::size_t pos = 0;
  const double out = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("not a number: " + v);
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("not a bool: " + v);
}

std::string fmt_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

#define INT_FIELD(KEY, EXPR)                                           \
  Field{KEY, [](const RunConfig& c) { return std::to_string(EXPR); }, \
        [](RunConfig& c, const std::string& v) { EXPR = static_cast<decltype(EXPR)>(to_i64(v)); }}
#define F64_FIELD(KEY, EXPR)                                  \
  Field{KEY, [](const RunConfig& c) { return fmt_f64(EXPR); }, \
        [](RunConfig& c, const std::string& v) { EXPR = to_f64(v); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      Field{"protocol",
            [](const RunConfig& c) { return std::string(to_string(c.protocol)); },
            [](RunConfig& c, const std::string& v) {
              if (!protocol_from_string(v, c.protocol)) {
                throw std::invalid_argument("unknown protocol: " + v);
              }
            }},
      INT_FIELD("rows", c.rows),
      INT_FIELD("cols", c.cols),
      INT_FIELD("spacing_m", c.spacing_m),
      INT_FIELD("sink", c.sink),
      INT_FIELD("slot_count", c.slot_count),
      INT_FIELD("period_us", c.period_us),
      INT_FIELD("slot_bytes", c.slot_bytes),
      INT_FIELD("frame_header_bytes", c.frame_header_bytes),
      INT_FIELD("slot_header_bytes", c.slot_header_bytes),
      INT_FIELD("payload_bytes", c.payload_bytes),
      INT_FIELD("buffer_slots", c.buffer_slots),
      Field{"pattern",
            [](const RunConfig& c) { return std::string(to_string(c.pattern)); },
            [](RunConfig& c, const std::string& v) {
              if (!pattern_from_string(v, c.pattern)) {
                throw std::invalid_argument("unknown pattern: " + v);
              }
            }},
      INT_FIELD("single_source", c.single_source),
      F64_FIELD("rate_pps", c.rate_pps),
      INT_FIELD("traffic_start_us", c.traffic_start_us),
      INT_FIELD("traffic_duration_us", c.traffic_duration_us),
      INT_FIELD("routing_period_us", c.routing_period_us),
      INT_FIELD("range_dm", c.channel.range_dm),
      INT_FIELD("interference_dm", c.channel.interference_dm),
      INT_FIELD("bitrate_bps", c.channel.bitrate_bps),
      Field{"csma_defer",
            [](const RunConfig& c) {
              return std::string(c.channel.csma_defer ? "true" : "false");
            },
            [](RunConfig& c, const std::string& v) {
              c.channel.csma_defer = to_bool(v);
            }},
      INT_FIELD("max_jitter_us", c.channel.max_jitter_us),
      INT_FIELD("seed", c.seed),
      INT_FIELD("sim_end_us", c.sim_end_us),
      Field{"output_dir", [](const RunConfig& c) { return c.output_dir; },
            [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      Field{"trace_file", [](const RunConfig& c) { return c.trace_file; },
            [](RunConfig& c, const std::string& v) { c.trace_file = v; }},
      INT_FIELD("tau_min_us", c.tau_min_us),
      INT_FIELD("tau_max_us", c.tau_max_us),
      INT_FIELD("backlog_watermark_slots", c.backlog_watermark_slots),
      INT_FIELD("backlog_persist_periods", c.backlog_persist_periods),
      INT_FIELD("bs_request_window_us", c.bs_request_window_us),
      INT_FIELD("bs_occupancy_window_us", c.bs_occupancy_window_us),
      F64_FIELD("bs_reduce_threshold", c.bs_reduce_threshold),
      F64_FIELD("fake_path_prob", c.fake_path_prob),
      INT_FIELD("retry_limit", c.retry_limit),
      INT_FIELD("sifs_us", c.sifs_us),
      F64_FIELD("e_tx_uj_per_byte", c.e_tx_uj_per_byte),
      F64_FIELD("e_rx_uj_per_byte", c.e_rx_uj_per_byte),
      INT_FIELD("attack_window_us", c.attack_window_us),
      INT_FIELD("attack_shuffles", c.attack_shuffles),
      INT_FIELD("attack_edge_min_repeats", c.attack_edge_min_repeats),
  };
  return kFields;
}

#undef INT_FIELD
#undef F64_FIELD

}  // namespace

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(config, value);
      return;
    }
  }
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
    line.erase(line.begin(),
               std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(),
               line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(),
              key.end());
    value.erase(value.begin(),
                std::find_if(value.begin(), value.end(), notspace));
    apply_override(config, key, value);
  }
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_text(const RunConfig& config) {
  std::string out;
  for (const Field& f : fields()) {
    if (std::string(f.key) == "output_dir" || std::string(f.key) == "trace_file")
      continue;  // paths do not affect behavior
    out += f.key;
    out += '=';
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = canonical_text(config);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tarmac

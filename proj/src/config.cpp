#include "fluctlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace fluctlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a real number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an unsigned integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

// "[a, b, c]" -> items
std::vector<std::string> parse_list(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ConfigError(key, "expected a [..] list, got '" + v + "'");
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  return items;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : parse_list(key, v)) out.push_back(parse_real(key, item));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : parse_list(key, v))
    out.push_back(static_cast<int>(parse_int(key, item)));
  return out;
}

// "[(u, s), (u, s)]"
std::vector<WJump> parse_jump_list(const std::string& key, const std::string& v) {
  std::vector<WJump> out;
  for (const auto& item : parse_list(key, v)) {
    const std::string p = trim(item);
    if (p.size() < 2 || p.front() != '(' || p.back() != ')')
      throw ConfigError(key, "expected (location, size) pairs");
    const std::string inner = p.substr(1, p.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos)
      throw ConfigError(key, "expected (location, size) pairs");
    out.push_back(WJump{parse_real(key, trim(inner.substr(0, comma))),
                        parse_real(key, trim(inner.substr(comma + 1)))});
  }
  return out;
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "d") {
    d = static_cast<int>(parse_int(key, value));
  } else if (key == "N") {
    n = static_cast<int>(parse_int(key, value));
  } else if (key == "rho") {
    rho = parse_real(key, value);
  } else if (key == "b") {
    b = parse_real(key, value);
  } else if (key == "T") {
    t_final = parse_real(key, value);
  } else if (key == "replicas") {
    replicas = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "threads") {
    threads = static_cast<int>(parse_int(key, value));
  } else if (key == "timing") {
    timing = parse_bool(key, value);
  } else if (key == "event.log") {
    event_log = parse_bool(key, value);
  } else if (key == "rates.family") {
    if (value != "standard" && value != "extended")
      throw ConfigError(key, "expected 'standard' or 'extended'");
    rates_family = value;
  } else if (key == "rates.a") {
    rates_a = parse_real(key, value);
  } else if (key == "rates.b3") {
    rates_b3 = parse_real(key, value);
  } else if (key.rfind("w.", 0) == 0) {
    const auto second = key.find('.', 2);
    if (second == std::string::npos) throw ConfigError(key, "expected w.<axis>.<field>");
    const int axis = static_cast<int>(parse_int(key, key.substr(2, second - 2)));
    if (axis < 1 || axis > 16) throw ConfigError(key, "axis index must be in 1..16");
    if (static_cast<int>(w_axes.size()) < axis) w_axes.resize(static_cast<std::size_t>(axis));
    auto& prof = w_axes[static_cast<std::size_t>(axis - 1)];
    const std::string field = key.substr(second + 1);
    if (field == "slope") {
      prof.slope = parse_real(key, value);
    } else if (field == "jumps") {
      prof.jumps = parse_jump_list(key, value);
    } else {
      throw ConfigError(key, "unknown W field (slope | jumps)");
    }
  } else if (key == "env.kind") {
    if (value == "constant")
      env.kind = EnvKind::kConstant;
    else if (value == "iid")
      env.kind = EnvKind::kIid;
    else if (value == "periodic")
      env.kind = EnvKind::kPeriodic;
    else
      throw ConfigError(key, "expected constant | iid | periodic");
  } else if (key == "env.theta") {
    env.theta = parse_real(key, value);
  } else if (key == "env.seed") {
    env.seed = parse_u64(key, value);
  } else if (key == "env.values") {
    env.values = parse_real_list(key, value);
  } else if (key == "env.probs") {
    env.probs = parse_real_list(key, value);
  } else if (key == "env.period") {
    env.period = parse_int_list(key, value);
  } else if (key == "env.table") {
    env.table = parse_real_list(key, value);
  } else if (key == "g.set") {
    g_set.clear();
    for (const auto& item : parse_list(key, value)) g_set.push_back(item);
  } else if (key == "sample.times") {
    sample_times = parse_real_list(key, value);
  } else if (key == "lambda") {
    lambda = parse_real(key, value);
  } else if (key == "n.list") {
    n_list = parse_int_list(key, value);
  } else if (key == "ou.nref") {
    ou_n_ref = static_cast<int>(parse_int(key, value));
  } else if (key == "ou.k") {
    ou_k = static_cast<int>(parse_int(key, value));
  } else if (key == "empirical") {
    empirical_path = value;
  } else {
    throw ConfigError(key, "unknown key");
  }
}

void ExperimentConfig::validate() const {
  if (d < 1 || d > 16) throw ConfigError("d", "dimension must be in 1..16");
  if (n < 2) throw ConfigError("N", "lattice size must be >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho", "must lie in [0,1]");
  if (!(b > -0.5)) throw ConfigError("b", "must be > -1/2");
  if (!(t_final >= 0.0)) throw ConfigError("T", "must be >= 0");
  if (replicas < 0) throw ConfigError("replicas", "must be >= 0");
  if (!(lambda > 0.0)) throw ConfigError("lambda", "must be > 0");
  if (!(env.theta >= 1.0)) throw ConfigError("env.theta", "must be >= 1");
  if (rates_family == "extended" && !(1.0 + 2.0 * rates_a + 3.0 * rates_b3 > 0.0))
    throw ConfigError("rates.a", "extended family needs 1 + 2a + 3b > 0");
  for (double t : sample_times)
    if (t < 0.0 || t > t_final)
      throw ConfigError("sample.times", "sample times must lie in [0, T]");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw ConfigError("sample.times", "sample times must be nondecreasing");
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw ConfigError("n.list", "must be increasing");
  try {
    env.validate(d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("env", e.what());
  }
  try {
    (void)w_function();
    (void)rate_family();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("w", e.what());
  }
}

WFunction ExperimentConfig::w_function() const {
  std::vector<WProfile> axes;
  for (int j = 0; j < d; ++j) {
    if (j < static_cast<int>(w_axes.size())) {
      const auto& spec = w_axes[static_cast<std::size_t>(j)];
      axes.emplace_back(spec.slope, spec.jumps);
    } else {
      axes.emplace_back();
    }
  }
  return WFunction(std::move(axes));
}

RateFamily ExperimentConfig::rate_family() const {
  if (rates_family == "extended") return RateFamily::extended(rates_a, rates_b3);
  return RateFamily::standard(b);
}

int ExperimentConfig::effective_threads() const {
  if (threads > 0) return threads;
  if (const char* env_threads = std::getenv("FLUCTLAB_THREADS")) {
    const int t = std::atoi(env_threads);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

std::string ExperimentConfig::canonical_dump() const {
  std::map<std::string, std::string> kv;
  kv["d"] = std::to_string(d);
  kv["N"] = std::to_string(n);
  kv["rho"] = fmt_real(rho);
  kv["b"] = fmt_real(b);
  kv["T"] = fmt_real(t_final);
  kv["replicas"] = std::to_string(replicas);
  kv["seed"] = std::to_string(seed);
  kv["timing"] = timing ? "true" : "false";
  kv["event.log"] = event_log ? "true" : "false";
  kv["rates.family"] = rates_family;
  kv["rates.a"] = fmt_real(rates_a);
  kv["rates.b3"] = fmt_real(rates_b3);
  for (std::size_t j = 0; j < w_axes.size(); ++j) {
    const std::string prefix = "w." + std::to_string(j + 1) + ".";
    kv[prefix + "slope"] = fmt_real(w_axes[j].slope);
    std::string jumps = "[";
    for (std::size_t q = 0; q < w_axes[j].jumps.size(); ++q) {
      if (q) jumps += ", ";
      jumps += "(" + fmt_real(w_axes[j].jumps[q].location) + ", " +
               fmt_real(w_axes[j].jumps[q].size) + ")";
    }
    kv[prefix + "jumps"] = jumps + "]";
  }
  kv["env.kind"] = env.kind == EnvKind::kConstant  ? "constant"
                   : env.kind == EnvKind::kIid     ? "iid"
                                                   : "periodic";
  kv["env.theta"] = fmt_real(env.theta);
  kv["env.seed"] = std::to_string(env.seed);
  auto real_list = [](const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt_real(xs[i]);
    return s + "]";
  };
  kv["env.values"] = real_list(env.values);
  kv["env.probs"] = real_list(env.probs);
  std::string period = "[";
  for (std::size_t i = 0; i < env.period.size(); ++i)
    period += (i ? ", " : "") + std::to_string(env.period[i]);
  kv["env.period"] = period + "]";
  kv["env.table"] = real_list(env.table);
  std::string gs = "[";
  for (std::size_t i = 0; i < g_set.size(); ++i) gs += (i ? ", " : "") + g_set[i];
  kv["g.set"] = gs + "]";
  kv["sample.times"] = real_list(sample_times);
  kv["lambda"] = fmt_real(lambda);
  std::string nl = "[";
  for (std::size_t i = 0; i < n_list.size(); ++i)
    nl += (i ? ", " : "") + std::to_string(n_list[i]);
  kv["n.list"] = nl + "]";
  kv["ou.nref"] = std::to_string(ou_n_ref);
  kv["ou.k"] = std::to_string(ou_k);
  kv["empirical"] = empirical_path;

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t ExperimentConfig::config_hash() const {
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ull;
  for (char c : canonical_dump()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace fluctlab

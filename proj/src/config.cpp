#include "irsnet/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace irsnet {

namespace {

// Minimal TOML reader covering the configuration surface: tables,
// key = value lines, scalars (bool/int/float/string) and single-line
// (possibly nested) arrays.
struct TomlValue {
  std::variant<bool, long long, double, std::string, std::vector<TomlValue>> v;

  bool is_array() const { return std::holds_alternative<std::vector<TomlValue>>(v); }

  double as_number(const std::string& path) const {
    if (std::holds_alternative<long long>(v)) {
      return static_cast<double>(std::get<long long>(v));
    }
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    throw std::invalid_argument("config: " + path + " must be a number");
  }
  long long as_int(const std::string& path) const {
    if (!std::holds_alternative<long long>(v)) {
      throw std::invalid_argument("config: " + path + " must be an integer");
    }
    return std::get<long long>(v);
  }
  bool as_bool(const std::string& path) const {
    if (!std::holds_alternative<bool>(v)) {
      throw std::invalid_argument("config: " + path + " must be a boolean");
    }
    return std::get<bool>(v);
  }
  const std::vector<TomlValue>& as_array(const std::string& path) const {
    if (!is_array()) {
      throw std::invalid_argument("config: " + path + " must be an array");
    }
    return std::get<std::vector<TomlValue>>(v);
  }
};

using TomlTable = std::map<std::string, TomlValue>;
using TomlDoc = std::map<std::string, TomlTable>;  // "" = top level

void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

TomlValue parse_value(const std::string& s, std::size_t& i, int line_no);

TomlValue parse_array(const std::string& s, std::size_t& i, int line_no) {
  ++i;  // consume '['
  std::vector<TomlValue> items;
  for (;;) {
    skip_ws(s, i);
    if (i >= s.size()) {
      throw std::invalid_argument("config: unterminated array on line " +
                                  std::to_string(line_no));
    }
    if (s[i] == ']') {
      ++i;
      break;
    }
    items.push_back(parse_value(s, i, line_no));
    skip_ws(s, i);
    if (i < s.size() && s[i] == ',') ++i;
  }
  return TomlValue{std::move(items)};
}

TomlValue parse_value(const std::string& s, std::size_t& i, int line_no) {
  skip_ws(s, i);
  if (i >= s.size()) {
    throw std::invalid_argument("config: missing value on line " +
                                std::to_string(line_no));
  }
  if (s[i] == '[') return parse_array(s, i, line_no);
  if (s[i] == '"') {
    const std::size_t end = s.find('"', i + 1);
    if (end == std::string::npos) {
      throw std::invalid_argument("config: unterminated string on line " +
                                  std::to_string(line_no));
    }
    std::string text = s.substr(i + 1, end - i - 1);
    i = end + 1;
    return TomlValue{std::move(text)};
  }
  std::size_t end = i;
  while (end < s.size() && s[end] != ',' && s[end] != ']' && s[end] != '#' &&
         s[end] != ' ' && s[end] != '\t') {
    ++end;
  }
  const std::string token = s.substr(i, end - i);
  i = end;
  if (token == "true") return TomlValue{true};
  if (token == "false") return TomlValue{false};
  const bool looks_float = token.find_first_of(".eEnN") != std::string::npos;
  try {
    std::size_t used = 0;
    if (!looks_float) {
      const long long n = std::stoll(token, &used);
      if (used == token.size()) return TomlValue{n};
    }
    const double d = std::stod(token, &used);
    if (used == token.size()) return TomlValue{d};
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: cannot parse value '" + token +
                              "' on line " + std::to_string(line_no));
}

TomlDoc parse_toml(const std::string& text) {
  TomlDoc doc;
  std::string section;
  doc[""];
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    if (line[i] == '[') {
      const std::size_t end = line.find(']', i);
      if (end == std::string::npos) {
        throw std::invalid_argument("config: bad table header on line " +
                                    std::to_string(line_no));
      }
      section = line.substr(i + 1, end - i - 1);
      doc[section];
      continue;
    }
    const std::size_t eq = line.find('=', i);
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key = value on line " +
                                  std::to_string(line_no));
    }
    std::string key = line.substr(i, eq - i);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::size_t vi = eq + 1;
    TomlValue value = parse_value(line, vi, line_no);
    skip_ws(line, vi);
    if (vi < line.size() && line[vi] != '#') {
      throw std::invalid_argument("config: trailing characters on line " +
                                  std::to_string(line_no));
    }
    doc[section][key] = std::move(value);
  }
  return doc;
}

std::vector<Point> to_points(const TomlValue& v, const std::string& path) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < v.as_array(path).size(); ++i) {
    const auto& item = v.as_array(path)[i];
    const auto& pair = item.as_array(path + "[" + std::to_string(i) + "]");
    if (pair.size() != 2) {
      throw std::invalid_argument("config: " + path + " entries must be [x, y]");
    }
    pts.push_back(Point{pair[0].as_number(path), pair[1].as_number(path)});
  }
  return pts;
}

// Pops `key` from `table` if present and applies `fn`.
template <typename Fn>
void take(TomlTable& table, const std::string& key, Fn&& fn) {
  auto it = table.find(key);
  if (it == table.end()) return;
  fn(it->second);
  table.erase(it);
}

void reject_leftovers(const TomlTable& table, const std::string& section) {
  if (table.empty()) return;
  const std::string prefix = section.empty() ? "" : section + ".";
  throw std::invalid_argument("config: unknown key `" + prefix +
                              table.begin()->first + "`");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  // Keep floats visually float-typed so the round trip stays stable.
  if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";
  return s;
}

void write_points(std::ostream& out, const std::string& key,
                  const std::vector<Point>& pts) {
  if (pts.empty()) return;
  out << key << " = [";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << ", ";
    out << "[" << fmt(pts[i].x) << ", " << fmt(pts[i].y) << "]";
  }
  out << "]\n";
}

}  // namespace

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const char* field) {
    if (!ok) {
      throw std::invalid_argument(std::string("config: invalid value for `") +
                                  field + "`");
    }
  };
  const auto& d = network.dims;
  need(d.num_bs >= 1, "network.m");
  need(d.num_users >= 1, "network.k");
  need(d.bs_antennas >= 1, "network.n_b");
  need(d.irs_elements >= 1, "network.n_l");
  need(network.p_max > 0.0, "network.p_max");
  need(network.noise_power > 0.0, "network.noise_power");
  need(network.obs_scale > 0.0, "network.obs_scale");
  need(network.area.x_max > network.area.x_min &&
           network.area.y_max > network.area.y_min,
       "network.area");
  need(network.bs_positions.empty() || network.bs_positions.size() == d.num_bs,
       "network.bs_positions");
  need(network.irs_positions.empty() || network.irs_positions.size() == d.num_irs,
       "network.irs_positions");
  need(network.user_positions.empty() ||
           network.user_positions.size() == d.num_users,
       "network.user_positions");
  need(channel.exp_bs_irs >= 2.0, "channel.exp_bs_irs");
  need(channel.exp_irs_user >= 2.0, "channel.exp_irs_user");
  need(channel.exp_bs_user >= 2.0, "channel.exp_bs_user");
  need(mobility.step_std >= 0.0, "mobility.step_std");
  need(hyper.gamma >= 0.0 && hyper.gamma < 1.0, "hyper.gamma");
  need(hyper.lr_actor > 0.0, "hyper.lr_actor");
  need(hyper.lr_critic > 0.0, "hyper.lr_critic");
  need(hyper.tau > 0.0 && hyper.tau <= 1.0, "hyper.tau");
  need(hyper.buffer >= 1, "hyper.buffer");
  need(hyper.episodes >= 1, "hyper.episodes");
  need(hyper.steps >= 1, "hyper.steps");
  need(hyper.batch >= 1, "hyper.batch");
  need(!hyper.hidden.empty(), "hyper.hidden");
  for (int h : hyper.hidden) need(h >= 1, "hyper.hidden");
  need(hyper.noise_start >= 0.0, "hyper.noise_start");
  need(hyper.noise_end >= 0.0 && hyper.noise_end <= hyper.noise_start,
       "hyper.noise_end");
  need(hyper.grad_clip >= 0.0, "hyper.grad_clip");
  need(hyper.checkpoint_interval >= 1, "hyper.checkpoint_interval");
}

ExperimentConfig parse_config(const std::string& text) {
  TomlDoc doc = parse_toml(text);
  ExperimentConfig cfg;

  TomlTable& top = doc[""];
  take(top, "seed", [&](const TomlValue& v) {
    cfg.seed = static_cast<std::uint64_t>(v.as_int("seed"));
  });
  reject_leftovers(top, "");
  doc.erase("");

  if (auto it = doc.find("network"); it != doc.end()) {
    TomlTable& t = it->second;
    auto count = [&](const TomlValue& v, const char* path) {
      const long long n = v.as_int(path);
      if (n < 1) throw std::invalid_argument(std::string("config: invalid value for `") + path + "`");
      return static_cast<std::size_t>(n);
    };
    take(t, "m", [&](const TomlValue& v) { cfg.network.dims.num_bs = count(v, "network.m"); });
    take(t, "k", [&](const TomlValue& v) { cfg.network.dims.num_users = count(v, "network.k"); });
    take(t, "l", [&](const TomlValue& v) {
      cfg.network.dims.num_irs = static_cast<std::size_t>(v.as_int("network.l"));
    });
    take(t, "n_b", [&](const TomlValue& v) { cfg.network.dims.bs_antennas = count(v, "network.n_b"); });
    take(t, "n_l", [&](const TomlValue& v) { cfg.network.dims.irs_elements = count(v, "network.n_l"); });
    take(t, "p_max", [&](const TomlValue& v) { cfg.network.p_max = v.as_number("network.p_max"); });
    take(t, "noise_power", [&](const TomlValue& v) {
      cfg.network.noise_power = v.as_number("network.noise_power");
    });
    take(t, "obs_scale", [&](const TomlValue& v) {
      cfg.network.obs_scale = v.as_number("network.obs_scale");
    });
    take(t, "area", [&](const TomlValue& v) {
      const auto& a = v.as_array("network.area");
      if (a.size() != 4) {
        throw std::invalid_argument(
            "config: network.area must be [x_min, y_min, x_max, y_max]");
      }
      cfg.network.area = Rect{a[0].as_number("network.area"), a[1].as_number("network.area"),
                              a[2].as_number("network.area"), a[3].as_number("network.area")};
    });
    take(t, "bs_positions", [&](const TomlValue& v) {
      cfg.network.bs_positions = to_points(v, "network.bs_positions");
    });
    take(t, "irs_positions", [&](const TomlValue& v) {
      cfg.network.irs_positions = to_points(v, "network.irs_positions");
    });
    take(t, "user_positions", [&](const TomlValue& v) {
      cfg.network.user_positions = to_points(v, "network.user_positions");
    });
    reject_leftovers(t, "network");
    doc.erase(it);
  }

  if (auto it = doc.find("channel"); it != doc.end()) {
    TomlTable& t = it->second;
    take(t, "reference_loss_db", [&](const TomlValue& v) {
      cfg.channel.reference_loss_db = v.as_number("channel.reference_loss_db");
    });
    take(t, "exp_bs_irs", [&](const TomlValue& v) {
      cfg.channel.exp_bs_irs = v.as_number("channel.exp_bs_irs");
    });
    take(t, "exp_irs_user", [&](const TomlValue& v) {
      cfg.channel.exp_irs_user = v.as_number("channel.exp_irs_user");
    });
    take(t, "exp_bs_user", [&](const TomlValue& v) {
      cfg.channel.exp_bs_user = v.as_number("channel.exp_bs_user");
    });
    reject_leftovers(t, "channel");
    doc.erase(it);
  }

  if (auto it = doc.find("mobility"); it != doc.end()) {
    TomlTable& t = it->second;
    take(t, "step_std", [&](const TomlValue& v) {
      cfg.mobility.step_std = v.as_number("mobility.step_std");
    });
    take(t, "per_slot", [&](const TomlValue& v) {
      cfg.mobility.per_slot = v.as_bool("mobility.per_slot");
    });
    reject_leftovers(t, "mobility");
    doc.erase(it);
  }

  if (auto it = doc.find("hyper"); it != doc.end()) {
    TomlTable& t = it->second;
    take(t, "gamma", [&](const TomlValue& v) { cfg.hyper.gamma = v.as_number("hyper.gamma"); });
    take(t, "lr_actor", [&](const TomlValue& v) { cfg.hyper.lr_actor = v.as_number("hyper.lr_actor"); });
    take(t, "lr_critic", [&](const TomlValue& v) { cfg.hyper.lr_critic = v.as_number("hyper.lr_critic"); });
    take(t, "tau", [&](const TomlValue& v) { cfg.hyper.tau = v.as_number("hyper.tau"); });
    take(t, "buffer", [&](const TomlValue& v) {
      cfg.hyper.buffer = static_cast<std::size_t>(v.as_int("hyper.buffer"));
    });
    take(t, "episodes", [&](const TomlValue& v) {
      cfg.hyper.episodes = static_cast<std::size_t>(v.as_int("hyper.episodes"));
    });
    take(t, "steps", [&](const TomlValue& v) {
      cfg.hyper.steps = static_cast<std::size_t>(v.as_int("hyper.steps"));
    });
    take(t, "batch", [&](const TomlValue& v) {
      cfg.hyper.batch = static_cast<std::size_t>(v.as_int("hyper.batch"));
    });
    take(t, "hidden", [&](const TomlValue& v) {
      cfg.hyper.hidden.clear();
      for (const auto& h : v.as_array("hyper.hidden")) {
        cfg.hyper.hidden.push_back(static_cast<int>(h.as_int("hyper.hidden")));
      }
    });
    take(t, "noise_start", [&](const TomlValue& v) {
      cfg.hyper.noise_start = v.as_number("hyper.noise_start");
    });
    take(t, "noise_end", [&](const TomlValue& v) {
      cfg.hyper.noise_end = v.as_number("hyper.noise_end");
    });
    take(t, "grad_clip", [&](const TomlValue& v) {
      cfg.hyper.grad_clip = v.as_number("hyper.grad_clip");
    });
    take(t, "checkpoint_interval", [&](const TomlValue& v) {
      cfg.hyper.checkpoint_interval =
          static_cast<std::size_t>(v.as_int("hyper.checkpoint_interval"));
    });
    reject_leftovers(t, "hyper");
    doc.erase(it);
  }

  if (!doc.empty()) {
    throw std::invalid_argument("config: unknown section `[" + doc.begin()->first +
                                "]`");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "seed = " << cfg.seed << "\n\n";
  out << "[network]\n";
  out << "m = " << cfg.network.dims.num_bs << "\n";
  out << "k = " << cfg.network.dims.num_users << "\n";
  out << "l = " << cfg.network.dims.num_irs << "\n";
  out << "n_b = " << cfg.network.dims.bs_antennas << "\n";
  out << "n_l = " << cfg.network.dims.irs_elements << "\n";
  out << "p_max = " << fmt(cfg.network.p_max) << "\n";
  out << "noise_power = " << fmt(cfg.network.noise_power) << "\n";
  out << "obs_scale = " << fmt(cfg.network.obs_scale) << "\n";
  out << "area = [" << fmt(cfg.network.area.x_min) << ", "
      << fmt(cfg.network.area.y_min) << ", " << fmt(cfg.network.area.x_max)
      << ", " << fmt(cfg.network.area.y_max) << "]\n";
  write_points(out, "bs_positions", cfg.network.bs_positions);
  write_points(out, "irs_positions", cfg.network.irs_positions);
  write_points(out, "user_positions", cfg.network.user_positions);
  out << "\n[channel]\n";
  out << "reference_loss_db = " << fmt(cfg.channel.reference_loss_db) << "\n";
  out << "exp_bs_irs = " << fmt(cfg.channel.exp_bs_irs) << "\n";
  out << "exp_irs_user = " << fmt(cfg.channel.exp_irs_user) << "\n";
  out << "exp_bs_user = " << fmt(cfg.channel.exp_bs_user) << "\n";
  out << "\n[mobility]\n";
  out << "step_std = " << fmt(cfg.mobility.step_std) << "\n";
  out << "per_slot = " << (cfg.mobility.per_slot ? "true" : "false") << "\n";
  out << "\n[hyper]\n";
  out << "gamma = " << fmt(cfg.hyper.gamma) << "\n";
  out << "lr_actor = " << fmt(cfg.hyper.lr_actor) << "\n";
  out << "lr_critic = " << fmt(cfg.hyper.lr_critic) << "\n";
  out << "tau = " << fmt(cfg.hyper.tau) << "\n";
  out << "buffer = " << cfg.hyper.buffer << "\n";
  out << "episodes = " << cfg.hyper.episodes << "\n";
  out << "steps = " << cfg.hyper.steps << "\n";
  out << "batch = " << cfg.hyper.batch << "\n";
  out << "hidden = [";
  for (std::size_t i = 0; i < cfg.hyper.hidden.size(); ++i) {
    if (i) out << ", ";
    out << cfg.hyper.hidden[i];
  }
  out << "]\n";
  out << "noise_start = " << fmt(cfg.hyper.noise_start) << "\n";
  out << "noise_end = " << fmt(cfg.hyper.noise_end) << "\n";
  out << "grad_clip = " << fmt(cfg.hyper.grad_clip) << "\n";
  out << "checkpoint_interval = " << cfg.hyper.checkpoint_interval << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string s = serialize_config(config);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace irsnet

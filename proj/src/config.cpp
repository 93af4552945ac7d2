#include "morreykit/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace morreykit {

namespace {
std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}
}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                       ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      c.entries_[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    Value v;
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
      v.kind = Value::Kind::string;
      v.s = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      v.kind = Value::Kind::boolean;
      v.b = val == "true";
    } else {
      try {
        size_t pos = 0;
        if (val.find('.') == std::string::npos && val.find('e') == std::string::npos &&
            val.find('E') == std::string::npos && val.find("inf") == std::string::npos &&
            val.find("nan") == std::string::npos) {
          v.kind = Value::Kind::integer;
          v.i = std::stoll(val, &pos);
        } else {
          v.kind = Value::Kind::number;
          v.d = std::stod(val, &pos);
        }
        if (pos != val.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unquoted value is not a number or bool: " + val);
      }
    }
    c.entries_[section][key] = v;
  }
  return c;
}

std::string Config::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, kv] : entries_) {
    if (!first) out << "\n";
    first = false;
    if (!section.empty()) out << "[" << section << "]\n";
    for (const auto& [key, v] : kv) {
      out << key << " = ";
      switch (v.kind) {
        case Value::Kind::string: out << '"' << v.s << '"'; break;
        case Value::Kind::boolean: out << (v.b ? "true" : "false"); break;
        case Value::Kind::integer: out << v.i; break;
        case Value::Kind::number: {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", v.d);
          std::string s = buf;
          if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
              s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
            s += ".0";
          out << s;
          break;
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

const Config::Value* Config::find(const std::string& section, const std::string& key) const {
  auto s = entries_.find(section);
  if (s == entries_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::string)
    throw std::invalid_argument("config [" + section + "] " + key + " is not a string");
  return v->s;
}

double Config::get_number(const std::string& section, const std::string& key,
                          double fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind == Value::Kind::number) return v->d;
  if (v->kind == Value::Kind::integer) return static_cast<double>(v->i);
  throw std::invalid_argument("config [" + section + "] " + key + " is not a number");
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind == Value::Kind::integer) return v->i;
  throw std::invalid_argument("config [" + section + "] " + key + " is not an integer");
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::boolean)
    throw std::invalid_argument("config [" + section + "] " + key + " is not a bool");
  return v->b;
}

void Config::set_string(const std::string& section, const std::string& key, const std::string& s) {
  Value v; v.kind = Value::Kind::string; v.s = s; entries_[section][key] = v;
}
void Config::set_number(const std::string& section, const std::string& key, double d) {
  Value v; v.kind = Value::Kind::number; v.d = d; entries_[section][key] = v;
}
void Config::set_int(const std::string& section, const std::string& key, std::int64_t i) {
  Value v; v.kind = Value::Kind::integer; v.i = i; entries_[section][key] = v;
}
void Config::set_bool(const std::string& section, const std::string& key, bool b) {
  Value v; v.kind = Value::Kind::boolean; v.b = b; entries_[section][key] = v;
}

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  ExperimentConfig ec;
  ec.experiment = c.get_string("experiment", "name", "");
  ec.seed = static_cast<std::uint64_t>(c.get_int("experiment", "seed", 42));
  ec.resolution = static_cast<int>(c.get_int("grid", "resolution", 0));
  ec.tol_scale = c.get_number("experiment", "tol_scale", 1.0);
  ec.out_dir = c.get_string("experiment", "out", "");
  ec.raw = c;
  return ec;
}

Config ExperimentConfig::to_config() const {
  Config c = raw;
  c.set_string("experiment", "name", experiment);
  c.set_int("experiment", "seed", static_cast<std::int64_t>(seed));
  c.set_number("experiment", "tol_scale", tol_scale);
  if (!out_dir.empty()) c.set_string("experiment", "out", out_dir);
  if (resolution > 0) c.set_int("grid", "resolution", resolution);
  return c;
}

}  // namespace morreykit

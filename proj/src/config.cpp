// Copyright 2026 The cocycle-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cocycle/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cocycle/error.hpp"

namespace cocycle {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

[[noreturn]] void parse_error(const std::string& origin, int line, const std::string& msg) {
  fail(ErrorCode::kConfig, origin + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') parse_error(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) parse_error(origin, line, "bad section name '" + section + "'");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) parse_error(origin, line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) parse_error(origin, line, "bad key name '" + key + "'");
    if (section.empty()) parse_error(origin, line, "key '" + key + "' outside any [section]");
    if (value.empty()) parse_error(origin, line, "field '" + section + "." + key + "': empty value");
    std::string full = section + "." + key;
    auto it = cfg.entries_.find(full);
    if (it != cfg.entries_.end()) {
      parse_error(origin, line, "field '" + full + "' already set at line " +
                                    std::to_string(it->second.line));
    }
    cfg.entries_[full] = {value, origin, line};
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
  size_t dot = key.find('.');
  if (dot == std::string::npos || !valid_name(key.substr(0, dot)) ||
      !valid_name(key.substr(dot + 1))) {
    fail(ErrorCode::kConfig, origin + ": bad key '" + key + "', expected section.key");
  }
  std::string v = trim(value);
  if (v.empty()) fail(ErrorCode::kConfig, origin + ": field '" + key + "': empty value");
  entries_[key] = {v, origin, 0};
}

void Config::apply_override(const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    fail(ErrorCode::kConfig, "override '" + assignment + "': expected section.key=value");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "override '" + assignment + "'");
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::where(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return "<default>";
  if (it->second.line == 0) return it->second.origin;
  return it->second.origin + ":" + std::to_string(it->second.line);
}

void Config::bad(const std::string& key, const std::string& msg) const {
  fail(ErrorCode::kConfig, where(key) + ": field '" + key + "': " + msg);
}

std::string Config::str(const std::string& key, const std::string& def) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? def : it->second.value;
}

double Config::num(const std::string& key, double def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  const std::string& s = it->second.value;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad(key, "expected a number, got '" + s + "'");
  if (!std::isfinite(v)) bad(key, "value must be finite");
  return v;
}

int64_t Config::integer(const std::string& key, int64_t def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  const std::string& s = it->second.value;
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && p == s.data() + s.size()) return v;
  // Accept integral floating forms such as 1e5.
  double d = num(key, 0);
  if (d != std::floor(d) || std::abs(d) > 9.0e18) bad(key, "expected an integer, got '" + s + "'");
  return static_cast<int64_t>(d);
}

uint64_t Config::u64(const std::string& key, uint64_t def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  const std::string& s = it->second.value;
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    bad(key, "expected an unsigned 64-bit integer, got '" + s + "'");
  }
  return v;
}

bool Config::flag(const std::string& key, bool def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  const std::string& s = it->second.value;
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  bad(key, "expected true/false, got '" + s + "'");
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

void Config::check_known(const std::vector<std::string>& known) const {
  for (const auto& kv : entries_) {
    if (std::find(known.begin(), known.end(), kv.first) == known.end()) {
      bad(kv.first, "unknown key");
    }
  }
}

}  // namespace cocycle

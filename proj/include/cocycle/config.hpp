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


#ifndef COCYCLE_CONFIG_HPP_
#define COCYCLE_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cocycle {

// Flat key=value configuration with [section] headers and # comments.
// Keys are addressed as "section.key".
class Config {
 public:
  static Config from_string(const std::string& text, const std::string& origin = "<string>");
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value,
           const std::string& origin = "override");
  // "section.key=value"
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& def) const;
  double num(const std::string& key, double def) const;
  int64_t integer(const std::string& key, int64_t def) const;
  uint64_t u64(const std::string& key, uint64_t def) const;
  bool flag(const std::string& key, bool def) const;

  std::vector<std::string> keys() const;
  // Location of a key for diagnostics, e.g. "run.cfg:12".
  std::string where(const std::string& key) const;

  // Rejects keys not in `known` with a config error naming the location.
  void check_known(const std::vector<std::string>& known) const;

  [[noreturn]] void bad(const std::string& key, const std::string& msg) const;

 private:
  struct Entry {
    std::string value;
    std::string origin;
    int line = 0;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace cocycle

#endif  // COCYCLE_CONFIG_HPP_

#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace roomforge {

// Key-value configuration document, a small TOML subset:
//   - `[section.name]` headers, dotted, bare or "quoted" parts
//   - `key = value` with number, bool, "string", or [array] values
//   - `#` comments, blank lines
// Keys are flattened to "section.name.key". This covers the rule table,
// score-profile, and catalog documents without pulling in a full TOML parser.
class ConfigDoc {
 public:
  using Value = std::variant<double, bool, std::string, std::vector<std::string>,
                             std::vector<double>>;

  static ConfigDoc parse(std::string_view text) {
    ConfigDoc doc;
    std::string section;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      line = strip(line);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "unterminated section header");
        section = std::string(strip(line.substr(1, line.size() - 2)));
        if (section.empty()) fail(line_no, "empty section name");
        continue;
      }
      size_t eq = find_unquoted(line, '=');
      if (eq == std::string_view::npos) fail(line_no, "expected key = value");
      std::string key = parse_key(strip(line.substr(0, eq)), line_no);
      std::string_view rhs = strip(line.substr(eq + 1));
      if (rhs.empty()) fail(line_no, "missing value");
      std::string full = section.empty() ? key : section + "." + key;
      doc.values_[full] = parse_value(rhs, line_no);
    }
    return doc;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double number(const std::string& key) const {
    return std::get<double>(at(key));
  }
  double number_or(const std::string& key, double dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : std::get<double>(it->second);
  }
  const std::string& str(const std::string& key) const {
    return std::get<std::string>(at(key));
  }
  std::string str_or(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : std::get<std::string>(it->second);
  }
  std::vector<std::string> str_list(const std::string& key) const {
    const Value& v = at(key);
    if (auto* s = std::get_if<std::string>(&v)) return {*s};
    return std::get<std::vector<std::string>>(v);
  }
  std::vector<double> num_list(const std::string& key) const {
    const Value& v = at(key);
    if (auto* d = std::get_if<double>(&v)) return {*d};
    return std::get<std::vector<double>>(v);
  }
  bool boolean_or(const std::string& key, bool dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : std::get<bool>(it->second);
  }

  // Keys under `prefix.` with the prefix removed, in lexicographic order.
  std::vector<std::string> keys_under(const std::string& prefix) const {
    std::vector<std::string> out;
    std::string p = prefix + ".";
    for (auto it = values_.lower_bound(p); it != values_.end(); ++it) {
      if (it->first.compare(0, p.size(), p) != 0) break;
      out.push_back(it->first.substr(p.size()));
    }
    return out;
  }

 private:
  [[noreturn]] static void fail(size_t line, const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
  }

  static std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  static size_t find_unquoted(std::string_view s, char c) {
    bool q = false;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') q = !q;
      else if (s[i] == c && !q) return i;
    }
    return std::string_view::npos;
  }

  static std::string parse_key(std::string_view k, size_t line) {
    if (k.empty()) fail(line, "empty key");
    if (k.front() == '"') {
      if (k.size() < 2 || k.back() != '"') fail(line, "unterminated quoted key");
      return std::string(k.substr(1, k.size() - 2));
    }
    for (char c : k)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
        fail(line, "bad key character");
    return std::string(k);
  }

  static Value parse_value(std::string_view v, size_t line) {
    // Trailing comment after the value.
    size_t hash = find_unquoted(v, '#');
    if (hash != std::string_view::npos) v = strip(v.substr(0, hash));
    if (v.empty()) fail(line, "missing value");
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '"') {
      if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
      return std::string(v.substr(1, v.size() - 2));
    }
    if (v.front() == '[') {
      if (v.back() != ']') fail(line, "unterminated array");
      std::string_view inner = strip(v.substr(1, v.size() - 2));
      std::vector<std::string> strs;
      std::vector<double> nums;
      bool any_str = false, any_num = false;
      size_t i = 0;
      while (i < inner.size()) {
        size_t comma = find_unquoted(inner.substr(i), ',');
        std::string_view item =
            comma == std::string_view::npos ? inner.substr(i) : inner.substr(i, comma);
        i = comma == std::string_view::npos ? inner.size() : i + comma + 1;
        item = strip(item);
        if (item.empty()) continue;
        if (item.front() == '"') {
          if (item.size() < 2 || item.back() != '"') fail(line, "unterminated string in array");
          strs.emplace_back(item.substr(1, item.size() - 2));
          any_str = true;
        } else {
          nums.push_back(parse_number(item, line));
          any_num = true;
        }
      }
      if (any_str && any_num) fail(line, "mixed array types");
      if (any_num) return nums;
      return strs;
    }
    return parse_number(v, line);
  }

  static double parse_number(std::string_view v, size_t line) {
    std::string buf(v);
    try {
      size_t used = 0;
      double d = std::stod(buf, &used);
      if (used != buf.size()) fail(line, "bad number: " + buf);
      return d;
    } catch (const std::invalid_argument&) {
      fail(line, "bad number: " + buf);
    } catch (const std::out_of_range&) {
      fail(line, "number out of range: " + buf);
    }
  }

  const Value& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config key missing: " + key);
    return it->second;
  }

  std::map<std::string, Value> values_;
};

}  // namespace roomforge

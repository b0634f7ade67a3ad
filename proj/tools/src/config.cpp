#include "entrocode/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "entrocode/error.hpp"

namespace entrocode::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

template <class T>
T parse_number(std::string_view key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) {
    fail("key " + std::string(key) + ": cannot parse '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    std::string item = trim(std::string_view(s).substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) fail(where + ": bad section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(where + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) fail(where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (cfg.entries_.count(key)) fail(where + ": duplicate key " + key);
    cfg.entries_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  return parse(in, path.string());
}

bool Config::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

const std::string& Config::raw(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail(source_ + ": missing key " + std::string(key));
  return it->second;
}

std::string Config::str(std::string_view key) const { return raw(key); }

std::string Config::str(std::string_view key, std::string_view fallback) const {
  return has(key) ? raw(key) : std::string(fallback);
}

double Config::real(std::string_view key) const {
  return parse_number<double>(key, raw(key));
}

double Config::real(std::string_view key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

int Config::integer(std::string_view key) const { return parse_number<int>(key, raw(key)); }

int Config::integer(std::string_view key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Config::uint(std::string_view key) const {
  return parse_number<std::uint64_t>(key, raw(key));
}

bool Config::flag(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail("key " + std::string(key) + ": expected a boolean, got '" + v + "'");
}

std::vector<double> Config::reals(std::string_view key) const {
  std::vector<double> out;
  for (const std::string& item : split(raw(key))) {
    out.push_back(parse_number<double>(key, item));
  }
  if (out.empty()) fail("key " + std::string(key) + ": empty list");
  return out;
}

std::vector<double> Config::reals(std::string_view key, std::vector<double> fallback) const {
  return has(key) ? reals(key) : fallback;
}

std::vector<std::string> Config::list(std::string_view key) const {
  auto out = split(raw(key));
  if (out.empty()) fail("key " + std::string(key) + ": empty list");
  return out;
}

std::vector<std::string> Config::list(std::string_view key,
                                      std::vector<std::string> fallback) const {
  return has(key) ? list(key) : fallback;
}

void Config::reject_unknown(std::span<const std::string_view> known) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(source_ + ": unknown key " + key);
    }
  }
}

}  // namespace entrocode::cli

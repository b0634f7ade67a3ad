#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entrocode::cli {

/// Flat key-value configuration with dotted section names.
///
///     # comment
///     [system]
///     name = cat_map
///     coding.alphabet = 3
///
/// Keys inside a `[section]` block are stored as `section.key`. Lists are
/// comma separated.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  void set(const std::string& key, const std::string& value);

  std::string str(std::string_view key) const;
  std::string str(std::string_view key, std::string_view fallback) const;
  double real(std::string_view key) const;
  double real(std::string_view key, double fallback) const;
  int integer(std::string_view key) const;
  int integer(std::string_view key, int fallback) const;
  std::uint64_t uint(std::string_view key) const;
  bool flag(std::string_view key, bool fallback) const;
  std::vector<double> reals(std::string_view key) const;
  std::vector<double> reals(std::string_view key, std::vector<double> fallback) const;
  std::vector<std::string> list(std::string_view key) const;
  std::vector<std::string> list(std::string_view key,
                                std::vector<std::string> fallback) const;

  /// Throws a config error naming the first key not in `known`.
  void reject_unknown(std::span<const std::string_view> known) const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  const std::string& raw(std::string_view key) const;

  std::map<std::string, std::string, std::less<>> entries_;
  std::string source_;
};

}  // namespace entrocode::cli

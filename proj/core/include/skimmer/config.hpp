#pragma once

// Sectioned key/value configuration text:
//
//   # comment
//   include = common.cfg        (before any section: merge every section of that file)
//   [vessel]
//   include = boats/heavy.cfg   (inside a section: merge that file's [vessel] here)
//   mass_kg = 6.0
//   wp = 0 100 3.0 8.0          (keys may repeat; repeated keys keep their order)
//
// Later assignments override earlier ones, so included values act as defaults
// for whatever follows the include line. Every entry remembers its file and
// line so validation errors can point at the offending text.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace skimmer {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::string origin;
  int line = 0;
};

class ConfigSection {
 public:
  ConfigSection(std::string name, std::string origin, int line);

  const std::string& name() const { return name_; }
  const std::vector<ConfigEntry>& entries() const { return entries_; }
  void add(ConfigEntry entry) { entries_.push_back(std::move(entry)); }

  /// Last assignment of `key`, if any.
  const ConfigEntry* find(const std::string& key) const;
  /// Every assignment of `key` in file order.
  std::vector<const ConfigEntry*> all(const std::string& key) const;

  double real(const std::string& key, double fallback) const;
  double real(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::optional<double> optional_real(const std::string& key) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void reject_unknown(std::initializer_list<const char*> allowed) const;

  /// "file:line [section] key" for messages.
  std::string where(const ConfigEntry& entry) const;
  std::string where() const;

 private:
  std::string name_;
  std::string origin_;
  int line_ = 0;
  std::vector<ConfigEntry> entries_;
};

class ConfigFile {
 public:
  const ConfigSection* section(const std::string& name) const;
  ConfigSection& section_for_write(const std::string& name, const std::string& origin, int line);
  const std::vector<ConfigSection>& sections() const { return sections_; }
  std::string origin;

 private:
  std::vector<ConfigSection> sections_;
};

struct ResolvedInclude {
  std::string text;
  std::string origin;  // name used for messages and for resolving nested includes
};

/// Maps an include reference (as written) and the including origin to text.
using IncludeResolver =
    std::function<std::optional<ResolvedInclude>(const std::string& ref, const std::string& from)>;

ConfigFile parse_config(const std::string& text, const std::string& origin,
                        const IncludeResolver& resolver);

/// Resolves includes relative to the including file's directory, falling back
/// to the bundled assets (so copies of the bundled scenarios still find
/// common.cfg).
IncludeResolver filesystem_resolver();

/// Resolves includes among the bundled assets only.
IncludeResolver embedded_resolver();

/// Parses a real with full-string validation; throws ConfigError with `where`.
double parse_real(const std::string& text, const std::string& where);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace skimmer

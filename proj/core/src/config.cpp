#include "skimmer/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "skimmer/detail/embedded_assets.hpp"

namespace skimmer {

namespace {

constexpr int kMaxIncludeDepth = 8;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Strips a trailing comment introduced by whitespace followed by '#' or ';'.
std::string strip_inline_comment(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '#' || s[i] == ';') && (s[i - 1] == ' ' || s[i - 1] == '\t')) {
      return trim(std::string_view(s).substr(0, i));
    }
  }
  return s;
}

bool valid_identifier(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '_';
  });
}

std::string parent_of(const std::string& origin) {
  const auto slash = origin.find_last_of('/');
  return slash == std::string::npos ? std::string() : origin.substr(0, slash + 1);
}

void parse_into(ConfigFile& cfg, const std::string& text, const std::string& origin,
                const IncludeResolver& resolver, int depth, const std::string* only_section,
                ConfigSection* target);

void merge_include(ConfigFile& cfg, const std::string& ref, const std::string& origin, int line,
                   const IncludeResolver& resolver, int depth, ConfigSection* into) {
  const std::string where = origin + ":" + std::to_string(line);
  if (depth >= kMaxIncludeDepth) {
    throw ConfigError(where + ": include nesting too deep (cycle?) at '" + ref + "'");
  }
  const auto resolved = resolver ? resolver(ref, origin) : std::nullopt;
  if (!resolved) {
    throw ConfigError(where + ": cannot resolve include '" + ref + "'");
  }
  if (into != nullptr) {
    const std::string name = into->name();
    parse_into(cfg, resolved->text, resolved->origin, resolver, depth + 1, &name, into);
  } else {
    parse_into(cfg, resolved->text, resolved->origin, resolver, depth + 1, nullptr, nullptr);
  }
}

// Parses `text` into `cfg`. With `only_section` set, only entries of that
// section are taken (section-scoped include) and appended to `target`.
void parse_into(ConfigFile& cfg, const std::string& text, const std::string& origin,
                const IncludeResolver& resolver, int depth, const std::string* only_section,
                ConfigSection* target) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string current;  // empty before the first section header
  bool found_section = only_section == nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos || trim(std::string_view(line).substr(close + 1)).size() != 0) {
        throw ConfigError(where + ": malformed section header '" + line + "'");
      }
      current = trim(std::string_view(line).substr(1, close - 1));
      if (!valid_identifier(current)) {
        throw ConfigError(where + ": invalid section name '" + current + "'");
      }
      if (only_section == nullptr) {
        cfg.section_for_write(current, origin, line_no);
      } else if (current == *only_section) {
        found_section = true;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = strip_inline_comment(trim(std::string_view(line).substr(eq + 1)));
    if (!valid_identifier(key)) {
      throw ConfigError(where + ": invalid key '" + key + "'");
    }

    if (only_section != nullptr) {
      if (current != *only_section) continue;
      if (key == "include") {
        merge_include(cfg, value, origin, line_no, resolver, depth, target);
      } else {
        target->add(ConfigEntry{key, value, origin, line_no});
      }
      continue;
    }

    if (current.empty()) {
      if (key != "include") {
        throw ConfigError(where + ": '" + key + "' appears before any [section]");
      }
      merge_include(cfg, value, origin, line_no, resolver, depth, nullptr);
      continue;
    }
    ConfigSection& section = cfg.section_for_write(current, origin, line_no);
    if (key == "include") {
      merge_include(cfg, value, origin, line_no, resolver, depth, &section);
    } else {
      section.add(ConfigEntry{key, value, origin, line_no});
    }
  }
  if (!found_section) {
    throw ConfigError(origin + ": included file has no [" + *only_section + "] section");
  }
}

std::optional<std::string> read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

ConfigSection::ConfigSection(std::string name, std::string origin, int line)
    : name_(std::move(name)), origin_(std::move(origin)), line_(line) {}

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return &*it;
  }
  return nullptr;
}

std::vector<const ConfigEntry*> ConfigSection::all(const std::string& key) const {
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries_) {
    if (e.key == key) out.push_back(&e);
  }
  return out;
}

std::string ConfigSection::where(const ConfigEntry& entry) const {
  return entry.origin + ":" + std::to_string(entry.line) + " [" + name_ + "] " + entry.key;
}

std::string ConfigSection::where() const {
  return origin_ + ":" + std::to_string(line_) + " [" + name_ + "]";
}

double ConfigSection::real(const std::string& key, double fallback) const {
  const ConfigEntry* e = find(key);
  return e ? parse_real(e->value, where(*e)) : fallback;
}

double ConfigSection::real(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) throw ConfigError(where() + ": missing required key '" + key + "'");
  return parse_real(e->value, where(*e));
}

std::optional<double> ConfigSection::optional_real(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) return std::nullopt;
  return parse_real(e->value, where(*e));
}

std::uint64_t ConfigSection::unsigned_integer(const std::string& key,
                                              std::uint64_t fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  std::uint64_t value = 0;
  const auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), value);
  if (res.ec != std::errc{} || res.ptr != e->value.data() + e->value.size()) {
    throw ConfigError(where(*e) + ": expected a non-negative integer, got '" + e->value + "'");
  }
  return value;
}

std::string ConfigSection::text(const std::string& key, const std::string& fallback) const {
  const ConfigEntry* e = find(key);
  return e ? e->value : fallback;
}

bool ConfigSection::boolean(const std::string& key, bool fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "on" || e->value == "1") return true;
  if (e->value == "false" || e->value == "off" || e->value == "0") return false;
  throw ConfigError(where(*e) + ": expected a boolean, got '" + e->value + "'");
}

void ConfigSection::reject_unknown(std::initializer_list<const char*> allowed) const {
  for (const auto& e : entries_) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return e.key == k; });
    if (!known) {
      throw ConfigError(where(e) + ": unknown key");
    }
  }
}

const ConfigSection* ConfigFile::section(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name() == name) return &s;
  }
  return nullptr;
}

ConfigSection& ConfigFile::section_for_write(const std::string& name, const std::string& origin,
                                             int line) {
  for (auto& s : sections_) {
    if (s.name() == name) return s;
  }
  sections_.emplace_back(name, origin, line);
  return sections_.back();
}

ConfigFile parse_config(const std::string& text, const std::string& origin,
                        const IncludeResolver& resolver) {
  ConfigFile cfg;
  cfg.origin = origin;
  parse_into(cfg, text, origin, resolver, 0, nullptr, nullptr);
  return cfg;
}

IncludeResolver embedded_resolver() {
  return [](const std::string& ref, const std::string& from) -> std::optional<ResolvedInclude> {
    const std::string candidate = parent_of(from) + ref;
    if (auto text = detail::find_embedded(candidate)) {
      return ResolvedInclude{std::string(*text), candidate};
    }
    if (auto text = detail::find_embedded("scenarios/" + ref)) {
      return ResolvedInclude{std::string(*text), "scenarios/" + ref};
    }
    return std::nullopt;
  };
}

IncludeResolver filesystem_resolver() {
  return [embedded = embedded_resolver()](const std::string& ref,
                                          const std::string& from) -> std::optional<ResolvedInclude> {
    std::filesystem::path path(ref);
    if (path.is_relative()) {
      path = std::filesystem::path(from).parent_path() / path;
    }
    if (auto text = read_text_file(path)) {
      return ResolvedInclude{std::move(*text), path.string()};
    }
    return embedded(ref, from);
  };
}

double parse_real(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
    throw ConfigError(where + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace skimmer

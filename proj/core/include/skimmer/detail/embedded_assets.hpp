#pragma once

// Files compiled into the library at build time (bundled scenarios and the
// depth gradient table). The table is generated by core/cmake/EmbedAssets.cmake.

#include <optional>
#include <string_view>
#include <vector>

namespace skimmer::detail {

struct EmbeddedAsset {
  std::string_view name;
  std::string_view text;
};

const std::vector<EmbeddedAsset>& embedded_assets();

inline std::optional<std::string_view> find_embedded(std::string_view name) {
  for (const auto& asset : embedded_assets()) {
    if (asset.name == name) return asset.text;
  }
  return std::nullopt;
}

}  // namespace skimmer::detail

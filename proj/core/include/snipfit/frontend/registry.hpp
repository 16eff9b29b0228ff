#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace snipfit::frontend {

struct RegistryEntry {
  std::string package;
  bool stdlib = false;

  [[nodiscard]] std::string qualified(std::string_view simple) const {
    return package + "." + std::string(simple);
  }
};

/// Importable classes by simple name. Standard-library packages are always
/// listed before third-party ones for the same simple name.
class TypeRegistry {
 public:
  void add(std::string_view simple, std::string_view package, bool stdlib);

  [[nodiscard]] const std::vector<RegistryEntry>& lookup(std::string_view simple) const;
  [[nodiscard]] bool has_package(std::string_view package) const;
  [[nodiscard]] bool contains_qualified(std::string_view qualified) const;
  [[nodiscard]] std::vector<std::string> simple_names() const;

  /// Synthetic standard library plus fake third-party packages that reuse
  /// simple names (List, Optional, StringUtils).
  static const TypeRegistry& standard();

 private:
  std::unordered_map<std::string, std::vector<RegistryEntry>> entries_;
  std::unordered_set<std::string> packages_;
};

}  // namespace snipfit::frontend

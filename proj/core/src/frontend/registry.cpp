#include "snipfit/frontend/registry.hpp"

#include <algorithm>

namespace snipfit::frontend {

void TypeRegistry::add(std::string_view simple, std::string_view package, bool stdlib) {
  auto& list = entries_[std::string(simple)];
  RegistryEntry e{std::string(package), stdlib};
  // Standard-library entries precede third-party ones; insertion order otherwise.
  const auto pos = stdlib ? std::find_if(list.begin(), list.end(), [](const RegistryEntry& x) { return !x.stdlib; })
                          : list.end();
  list.insert(pos, std::move(e));
  packages_.insert(std::string(package));
}

const std::vector<RegistryEntry>& TypeRegistry::lookup(std::string_view simple) const {
  static const std::vector<RegistryEntry> kNone;
  const auto it = entries_.find(std::string(simple));
  return it == entries_.end() ? kNone : it->second;
}

bool TypeRegistry::has_package(std::string_view package) const {
  return packages_.count(std::string(package)) > 0;
}

bool TypeRegistry::contains_qualified(std::string_view qualified) const {
  const auto dot = qualified.rfind('.');
  if (dot == std::string_view::npos) return false;
  const auto& list = lookup(qualified.substr(dot + 1));
  return std::any_of(list.begin(), list.end(),
                     [&](const RegistryEntry& e) { return e.package == qualified.substr(0, dot); });
}

std::vector<std::string> TypeRegistry::simple_names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, list] : entries_) out.push_back(name);
  std::sort(out.begin(), out.end());
  return out;
}

const TypeRegistry& TypeRegistry::standard() {
  static const TypeRegistry reg = [] {
    TypeRegistry r;
    for (const char* n : {"List", "ArrayList", "Optional", "Arrays", "Scanner", "Random", "NoSuchElementException"}) {
      r.add(n, "java.util", true);
    }
    for (const char* n : {"PrintStream", "BufferedReader", "InputStreamReader", "IOException", "InputStream"}) {
      r.add(n, "java.io", true);
    }
    r.add("DecimalFormat", "java.text", true);
    r.add("Ints", "com.google.common.primitives", false);
    r.add("Strings", "com.google.common.base", false);
    r.add("StringUtils", "org.apache.commons.lang3", false);
    r.add("List", "com.sun.tools.javac.util", false);
    r.add("Pair", "com.sun.tools.javac.util", false);
    r.add("List", "org.acme.util", false);
    r.add("Optional", "org.acme.util", false);
    r.add("StringUtils", "org.acme.util", false);
    return r;
  }();
  return reg;
}

}  // namespace snipfit::frontend

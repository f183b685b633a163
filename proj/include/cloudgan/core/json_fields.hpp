#pragma once

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "cloudgan/core/error.hpp"

namespace cloudgan {

/// Typed, strict access to one JSON object section.
class JsonSection {
 public:
  /// Throws ConfigError unless j is an object whose keys all appear in allowed.
  JsonSection(const nlohmann::json& j, std::string name, std::initializer_list<const char*> allowed)
      : json_(j), name_(std::move(name)) {
    if (!j.is_object()) throw ConfigError("'" + name_ + "' must be an object");
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) throw ConfigError("unknown key '" + key + "' in '" + name_ + "'");
    }
  }

  bool has(const char* key) const { return json_.contains(key); }

  /// Assigns json[key] to out when present; type errors become ConfigError.
  template <typename V>
  void read(const char* key, V& out) const {
    if (!json_.contains(key)) return;
    const auto& v = json_.at(key);
    try {
      if constexpr (std::is_same_v<V, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<V>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<V>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) throw ConfigError("");
        }
      } else if constexpr (std::is_floating_point_v<V>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<V, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      out = v.get<V>();
    } catch (const std::exception&) {
      throw ConfigError("'" + name_ + "." + key + "' has the wrong type");
    }
  }

  const nlohmann::json& at(const char* key) const { return json_.at(key); }
  const std::string& name() const { return name_; }

 private:
  const nlohmann::json& json_;
  std::string name_;
};

}  // namespace cloudgan

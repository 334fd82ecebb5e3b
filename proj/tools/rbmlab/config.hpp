#pragma once

// YAML run configuration with strict key checking. Every value read is
// echoed into a JSON record, which becomes the resolved config in the run
// metadata.

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbmlab::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Section {
 public:
  Section(YAML::Node node, std::string path, nlohmann::json* out)
      : node_(std::move(node)), path_(std::move(path)), out_(out) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError(where() + "expected a mapping");
  }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    used_.insert(key);
    T value = fallback;
    if (auto v = lookup(key)) value = convert<T>(*v, key);
    (*out_)[key] = value;
    return value;
  }

  template <class T>
  T required(const std::string& key) {
    used_.insert(key);
    auto v = lookup(key);
    if (!v) throw ConfigError(where() + "missing required key '" + key + "'");
    T value = convert<T>(*v, key);
    (*out_)[key] = value;
    return value;
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    used_.insert(key);
    auto v = lookup(key);
    if (!v) {
      (*out_)[key] = nullptr;
      return std::nullopt;
    }
    T value = convert<T>(*v, key);
    (*out_)[key] = value;
    return value;
  }

  /// Records a value decided outside the file (flag override, derived default).
  template <class T>
  void record(const std::string& key, const T& value) {
    (*out_)[key] = value;
  }

  Section& child(const std::string& key) {
    used_.insert(key);
    auto it = children_.find(key);
    if (it != children_.end()) return *it->second;
    (*out_)[key] = nlohmann::json::object();
    YAML::Node sub = lookup(key).value_or(YAML::Node());
    auto ptr = std::make_unique<Section>(sub, path_ + key + ".", &(*out_)[key]);
    return *children_.emplace(key, std::move(ptr)).first->second;
  }

  [[nodiscard]] bool has(const std::string& key) const { return lookup(key).has_value(); }

  /// Throws on any key present in the file that no reader asked for.
  void finish() const {
    if (node_ && node_.IsMap()) {
      for (const auto& kv : node_) {
        const auto key = kv.first.as<std::string>();
        if (!used_.count(key)) throw ConfigError("unknown config key '" + path_ + key + "'");
      }
    }
    for (const auto& [_, c] : children_) c->finish();
  }

 private:
  [[nodiscard]] std::optional<YAML::Node> lookup(const std::string& key) const {
    if (!node_ || !node_.IsMap()) return std::nullopt;
    YAML::Node v = node_[key];
    if (!v || v.IsNull()) return std::nullopt;
    return v;
  }

  [[nodiscard]] std::string where() const {
    return path_.empty() ? std::string("config: ") : "config '" + path_.substr(0, path_.size() - 1) + "': ";
  }

  template <class T>
  T convert(const YAML::Node& v, const std::string& key) const {
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("config key '" + path_ + key + "' has the wrong type");
    }
  }

  YAML::Node node_;
  std::string path_;
  nlohmann::json* out_;
  std::set<std::string> used_;
  std::map<std::string, std::unique_ptr<Section>> children_;
};

/// Parsed file plus the record of what was read from it.
struct Config {
  YAML::Node root;
  nlohmann::json resolved = nlohmann::json::object();
  std::unique_ptr<Section> top;

  static Config from_node(YAML::Node node) {
    Config c;
    c.root = std::move(node);
    if (c.root.IsNull()) c.root = YAML::Node(YAML::NodeType::Map);
    c.top = std::make_unique<Section>(c.root, "", &c.resolved);
    return c;
  }

  static Config from_string(const std::string& text) {
    try {
      return from_node(YAML::Load(text));
    } catch (const YAML::Exception& e) {
      throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
  }

  static Config from_file(const std::string& path) {
    try {
      return from_node(YAML::LoadFile(path));
    } catch (const YAML::BadFile&) {
      throw ConfigError("cannot read config file '" + path + "'");
    } catch (const YAML::Exception& e) {
      throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
  }
};

}  // namespace rbmlab::cli

#include "archemist/state/registry.hpp"

#include "archemist/error.hpp"

namespace archemist::state {

void PluginRegistry::register_plugin(PluginDescriptor descriptor) {
  std::string name = descriptor.type_name;
  register_plugin(name, std::move(descriptor));
}

void PluginRegistry::register_plugin(const std::string& type_name, PluginDescriptor descriptor) {
  if (type_name.empty()) throw Error(ErrorCode::ConfigError, "plugin type name must not be empty");
  if (descriptor.role == DeviceRole::station && descriptor.ops.empty())
    throw Error(ErrorCode::ConfigError, "station plugin '" + type_name + "' declares no operations");
  descriptor.type_name = type_name;
  if (!plugins_.emplace(type_name, std::move(descriptor)).second)
    throw Error(ErrorCode::DuplicateTypeName, "type '" + type_name + "' is already registered");
}

const PluginDescriptor* PluginRegistry::find(std::string_view type_name) const {
  auto it = plugins_.find(type_name);
  return it == plugins_.end() ? nullptr : &it->second;
}

const PluginDescriptor& PluginRegistry::require(std::string_view type_name) const {
  if (const auto* d = find(type_name)) return *d;
  throw Error(ErrorCode::UnknownTypeName, std::string(type_name));
}

std::vector<std::string> PluginRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : plugins_) out.push_back(name);
  return out;
}

}  // namespace archemist::state

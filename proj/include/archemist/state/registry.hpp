#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "archemist/sim/device.hpp"
#include "archemist/state/workflow_state.hpp"

namespace archemist::state {

enum class DeviceRole { station, robot };

using DeviceFactory = std::function<std::unique_ptr<sim::Device>(const sim::DeviceSpec&)>;

/// Everything the engine needs to know about a station or robot type.
struct PluginDescriptor {
  std::string type_name;
  DeviceRole role = DeviceRole::station;
  std::string device_kind;
  std::vector<OperationDescriptor> ops;
  DeviceFactory make_device;
};

/// Maps configuration type names onto plugin descriptors. New station or robot types
/// are added by registering a descriptor; the core never names concrete types.
class PluginRegistry {
 public:
  /// Throws Error{DuplicateTypeName}.
  void register_plugin(PluginDescriptor descriptor);
  void register_plugin(const std::string& type_name, PluginDescriptor descriptor);

  const PluginDescriptor* find(std::string_view type_name) const;
  /// Throws Error{UnknownTypeName}.
  const PluginDescriptor& require(std::string_view type_name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, PluginDescriptor, std::less<>> plugins_;
};

}  // namespace archemist::state

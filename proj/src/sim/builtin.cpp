#include "archemist/sim/builtin.hpp"

#include "archemist/sim/devices.hpp"

namespace archemist::sim {

namespace {

using state::DeviceRole;
using state::OperationDescriptor;
using state::ParamSchema;
using state::ParamType;
using state::PluginDescriptor;
using state::ReadingEffect;

template <class D>
state::DeviceFactory factory() {
  return [](const DeviceSpec& spec) { return std::make_unique<D>(spec); };
}

ParamSchema quantity(std::string name, Dimension d, bool required = true) {
  return {std::move(name), ParamType::quantity, d, required};
}

std::vector<OperationDescriptor> hotplate_ops() {
  std::vector<ParamSchema> params{quantity("temperature", Dimension::temperature, false),
                                  quantity("stir_rate", Dimension::rate, false),
                                  quantity("duration", Dimension::time)};
  std::vector<state::ReadingSchema> readings{{"evaporated", "g", ReadingEffect::evaporate, ""},
                                             {"undissolved_fraction", "fraction", ReadingEffect::set_property, ""}};
  return {{"stir", params, readings}, {"heat", params, readings}};
}

}  // namespace

void register_builtin_plugins(state::PluginRegistry& registry) {
  registry.register_plugin(PluginDescriptor{
      "quantos_qs30", DeviceRole::station, "quantos",
      {{"dispense_solid",
        {{"solid", ParamType::solid, std::nullopt, true}, quantity("mass", Dimension::mass)},
        {{"final_weight", "mg", ReadingEffect::consume, "solid"}}}},
      factory<QuantosDevice>()});
  registry.register_plugin(PluginDescriptor{
      "peristaltic_pump", DeviceRole::station, "pump",
      {{"dispense_liquid",
        {{"liquid", ParamType::liquid, std::nullopt, true}, quantity("volume", Dimension::volume)},
        {{"dispensed_volume", "mL", ReadingEffect::consume, "liquid"}, {"pulses", "count", ReadingEffect::none, ""}}}},
      factory<PumpDevice>()});
  registry.register_plugin(PluginDescriptor{"top_pan_balance", DeviceRole::station, "balance",
                                            {{"weigh", {}, {{"mass", "g", ReadingEffect::none, ""}}}},
                                            factory<BalanceDevice>()});
  registry.register_plugin(
      PluginDescriptor{"ika_hotplate", DeviceRole::station, "hotplate_stirrer", hotplate_ops(), factory<HotplateDevice>()});
  registry.register_plugin(PluginDescriptor{"turbidity_camera", DeviceRole::station, "camera",
                                            {{"observe", {}, {{"turbidity", "NTU", ReadingEffect::none, ""}}}},
                                            factory<CameraDevice>()});
  registry.register_plugin(PluginDescriptor{"vial_storage", DeviceRole::station, "storage",
                                            {{"store_vial", {}, {}}}, factory<HoldingDevice>()});
  registry.register_plugin(
      PluginDescriptor{"kuka_kmr", DeviceRole::robot, "mobile_robot", {}, factory<RobotDevice>()});
  registry.register_plugin(PluginDescriptor{"franka_panda", DeviceRole::robot, "arm", {}, factory<RobotDevice>()});
}

state::PluginRegistry builtin_registry() {
  state::PluginRegistry r;
  register_builtin_plugins(r);
  return r;
}

}  // namespace archemist::sim

#include "filtration_station.hpp"

#include "archemist/sim/devices.hpp"
#include "archemist/sim/world.hpp"

namespace plugins {

using namespace archemist;

namespace {

class FiltrationDevice : public sim::Device {
 public:
  using Device::Device;

  sim::Execution execute(const sim::Request& req, sim::ExecContext& ctx) override {
    sim::Execution e;
    e.reply.id = req.id;
    auto vial = ctx.world.vial(req.sample);
    if (!vial || vial->location != spec().location) {
      e.reply.success = false;
      e.reply.reason = "no_vial";
      e.service_ticks = 1;
      return e;
    }
    double seconds = sim::quantity_param(req.params, "duration", Unit::s).value_or(60.0);
    double retained = spec().param("retained_fraction", 0.05);
    e.reply.readings["filtrate_volume"] = Reading{vial->liquid_ml() * (1.0 - retained), "mL"};
    e.service_ticks = static_cast<Tick>(seconds) + static_cast<Tick>(spec().param("setup", 20));
    return e;
  }
};

}  // namespace

void register_filtration_station(state::PluginRegistry& registry) {
  state::OperationDescriptor filter{
      "filter",
      {{"duration", state::ParamType::quantity, Dimension::time, true}},
      {{"filtrate_volume", "mL", state::ReadingEffect::none, ""}}};
  registry.register_plugin(state::PluginDescriptor{
      "filtration_station", state::DeviceRole::station, "filter", {filter},
      [](const sim::DeviceSpec& spec) { return std::make_unique<FiltrationDevice>(spec); }});
}

}  // namespace plugins

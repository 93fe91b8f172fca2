#pragma once

#include "testlab.hpp"

namespace testlab {

// Dispense as for solubility, then filter on the plugin station.
inline constexpr const char* kFiltrationRecipe = R"(chemical_recipe:
  name: filtration_trial
  materials:
    liquids: { water }
    solids: { NaCl }
  stations:
    solid_dispensing_quantos_QS2:
      stationOp:
        dispense_solid:
          properties:
            solid: NaCl
            mass: 15
            unit: mg
          output:
            name: "final_weight"
    peristaltic_liquid_dispensing:
      stationOp:
        dispense_liquid:
          properties:
            liquid: water
            volume: 2
            unit: mL
          output:
            name: "dispensed_volume"
    buchner_filter:
      stationOp:
        filter:
          properties:
            duration: 90 s
          output:
            name: "filtrate_volume"
            predicate: {kind: above, reading: filtrate_volume, threshold: 1.5}
  stationFlow:
    start:
      onSuccess: solid_disp
      onFail: end
    solid_disp:
      station: "solid_dispensing_quantos_QS2"
      task: {"dispense_solid", NaCl, 15, "mg"}
      onSuccess: liquid_disp
      onFail: end
    liquid_disp:
      station: "peristaltic_liquid_dispensing"
      task: {"dispense_liquid", water, 2, "mL"}
      onSuccess: filter
      onFail: end
    filter:
      station: "buchner_filter"
      task: {"filter", 90, "s"}
      onSuccess: end
      onFail: end
    end:
)";

/// Shipped lab plus a filtration bench at the Panda site, served by the test-only plugin.
inline state::Config lab_with_filter() {
  state::Config c = lab_config();
  c.topology.nodes.push_back(state::TopologyNode{"filter_bench", "panda", false});
  c.topology.edges.push_back(state::TopologyEdge{"panda_station", "filter_bench", 12, false});
  state::DeviceConfig filter;
  filter.id = "buchner_filter";
  filter.type = "filtration_station";
  filter.location = "filter_bench";
  filter.timeout = 300;
  filter.params = {{"retained_fraction", 0.1}};
  c.stations.push_back(filter);
  return c;
}

}  // namespace testlab

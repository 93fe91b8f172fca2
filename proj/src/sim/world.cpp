#include "archemist/sim/world.hpp"

namespace archemist::sim {

double Vial::solid_mg() const {
  double total = 0.0;
  for (const auto& [_, v] : solids_mg) total += v;
  return total;
}

double Vial::liquid_ml() const {
  double total = 0.0;
  for (const auto& [_, v] : liquids_ml) total += v;
  return total;
}

std::optional<Vial> World::vial(SampleId sample) const {
  auto it = state_->samples.find(sample);
  if (it == state_->samples.end()) return std::nullopt;
  const auto& smp = it->second;
  Vial v;
  v.sample = sample;
  v.location = smp.location;
  for (const auto& [name, qty] : smp.contents) {
    auto m = state_->materials.find(name);
    if (m == state_->materials.end()) continue;
    if (m->second.phase == state::Phase::solid) v.solids_mg[name] = qty;
    else v.liquids_ml[name] = qty;
  }
  if (auto p = smp.properties.find("undissolved_fraction"); p != smp.properties.end())
    v.undissolved_fraction = p->second;
  return v;
}

std::optional<double> World::stock(const std::string& material) const {
  auto it = state_->materials.find(material);
  if (it == state_->materials.end()) return std::nullopt;
  return it->second.remaining;
}

double World::density(const std::string& material) const {
  auto it = state_->materials.find(material);
  return it == state_->materials.end() ? 0.0 : it->second.density;
}

double World::liquid_mass_g(const Vial& v) const {
  double total = 0.0;
  for (const auto& [name, ml] : v.liquids_ml) total += ml * density(name);
  return total;
}

}  // namespace archemist::sim

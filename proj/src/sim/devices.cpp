#include "archemist/sim/devices.hpp"

#include <algorithm>
#include <cmath>

#include "archemist/error.hpp"

namespace archemist::sim {

namespace {

Execution failure(const Request& req, std::string reason, Tick ticks) {
  Execution e;
  e.reply.id = req.id;
  e.reply.success = false;
  e.reply.reason = std::move(reason);
  e.service_ticks = std::max<Tick>(ticks, 1);
  return e;
}

Execution success(const Request& req, Readings readings, Tick ticks) {
  Execution e;
  e.reply.id = req.id;
  e.reply.readings = std::move(readings);
  e.service_ticks = std::max<Tick>(ticks, 1);
  return e;
}

Tick ticks(double v) { return static_cast<Tick>(std::llround(v)); }

// Station devices need the vial sitting at their own location.
std::optional<Vial> vial_here(const Device& d, const Request& req, const ExecContext& ctx) {
  auto v = ctx.world.vial(req.sample);
  if (!v || v->location != d.spec().location) return std::nullopt;
  return v;
}

}  // namespace

double quantos_final_weight(double target_mg, double sigma, Rng& rng) {
  return target_mg * (1.0 + rng.normal(0.0, sigma));
}

PumpResult pump_dispense(double target_ml, double density, double pulse_ml, double sigma, double tolerance,
                         Rng& rng) {
  PumpResult r;
  const double target_g = target_ml * density;
  const double pulse_g = pulse_ml * density;
  double delivered_g = 0.0;
  while (delivered_g < target_g * (1.0 - tolerance) && r.pulses < 100000) {
    double dose = std::min(pulse_g, target_g - delivered_g);
    delivered_g += dose * std::max(0.1, 1.0 + rng.normal(0.0, sigma));
    ++r.pulses;
  }
  r.volume_ml = delivered_g / density;
  return r;
}

double evaporation_g(double temp_c, double duration_s, double k_g_per_s, double min_temp_c, double liquid_g) {
  if (temp_c < min_temp_c || duration_s <= 0.0) return 0.0;
  return std::min(k_g_per_s * duration_s, liquid_g);
}

double undissolved_after(double fraction, double rpm, double duration_s, double rate) {
  return fraction * std::exp(-rate * rpm * duration_s);
}

double turbidity(double undissolved_mg, double liquid_ml, double scale) {
  if (undissolved_mg <= 0.0) return 0.0;
  return scale * undissolved_mg / std::max(liquid_ml, 1.0);
}

std::optional<double> quantity_param(const nlohmann::json& params, const std::string& name, Unit unit) {
  if (!params.is_object() || !params.contains(name)) return std::nullopt;
  const auto& p = params.at(name);
  if (!p.is_object() || !p.contains("value") || !p.contains("unit")) return std::nullopt;
  auto from = parse_unit(p.at("unit").get<std::string>());
  if (!from || dimension_of(*from) != dimension_of(unit)) return std::nullopt;
  return convert(Quantity{p.at("value").get<double>(), *from}, unit).value;
}

Execution QuantosDevice::execute(const Request& req, ExecContext& ctx) {
  if (req.op != "dispense_solid") return failure(req, "unsupported_operation", 1);
  auto vial = vial_here(*this, req, ctx);
  if (!vial) return failure(req, "no_vial", 1);
  if (ctx.fault == FaultKind::taring_timeout) return failure(req, "taring_timeout", ticks(spec().param("tare_timeout", 60)));
  auto target = quantity_param(req.params, "mass", Unit::mg);
  std::string solid = req.params.value("solid", "");
  auto stock = ctx.world.stock(solid);
  if (!target || !stock) return failure(req, "bad_request", 1);
  double final_mg = quantos_final_weight(*target, spec().param("sigma", 0.01), ctx.rng);
  if (final_mg > *stock) return failure(req, "insufficient_stock", 1);
  return success(req, {{"final_weight", {final_mg, "mg"}}}, ticks(spec().param("service", 30)));
}

Execution PumpDevice::execute(const Request& req, ExecContext& ctx) {
  if (req.op != "dispense_liquid") return failure(req, "unsupported_operation", 1);
  auto vial = vial_here(*this, req, ctx);
  if (!vial) return failure(req, "no_vial", 1);
  auto target = quantity_param(req.params, "volume", Unit::mL);
  std::string liquid = req.params.value("liquid", "");
  auto stock = ctx.world.stock(liquid);
  double density = ctx.world.density(liquid);
  if (!target || !stock || density <= 0.0) return failure(req, "bad_request", 1);
  if (*target > *stock) return failure(req, "insufficient_stock", 1);
  PumpResult r = pump_dispense(*target, density, spec().param("pulse_ml", 0.25), spec().param("sigma", 0.01),
                               spec().param("tolerance", 0.01), ctx.rng);
  double volume = std::min(r.volume_ml, *stock);
  Tick t = ticks(spec().param("setup", 10) + r.pulses * spec().param("pulse_ticks", 2));
  return success(req, {{"dispensed_volume", {volume, "mL"}}, {"pulses", {double(r.pulses), "count"}}}, t);
}

Execution BalanceDevice::execute(const Request& req, ExecContext& ctx) {
  if (req.op != "weigh") return failure(req, "unsupported_operation", 1);
  auto vial = vial_here(*this, req, ctx);
  if (!vial) return failure(req, "no_vial", 1);
  if (ctx.fault == FaultKind::misplace_vial) return failure(req, "misplace_vial", 1);
  double mass = spec().param("tare_g", 10.0) + vial->solid_mg() / 1000.0 + ctx.world.liquid_mass_g(*vial);
  mass += ctx.rng.normal(0.0, spec().param("sigma_g", 0.001));
  return success(req, {{"mass", {mass, "g"}}}, ticks(spec().param("service", 10)));
}

Execution HotplateDevice::execute(const Request& req, ExecContext& ctx) {
  if (req.op != "stir" && req.op != "heat") return failure(req, "unsupported_operation", 1);
  auto vial = vial_here(*this, req, ctx);
  if (!vial) return failure(req, "no_vial", 1);
  auto duration = quantity_param(req.params, "duration", Unit::s);
  if (!duration) return failure(req, "bad_request", 1);
  double temp = quantity_param(req.params, "temperature", Unit::degC).value_or(spec().param("ambient_c", 25));
  double rpm = quantity_param(req.params, "stir_rate", Unit::rpm).value_or(0.0);
  double lost = evaporation_g(temp, *duration, spec().param("evaporation_k", 0.0003), spec().param("min_temp_c", 40),
                              ctx.world.liquid_mass_g(*vial));
  double u = vial->solid_mg() > 0.0
                 ? undissolved_after(vial->undissolved_fraction, rpm, *duration, spec().param("dissolution_rate", 0.02))
                 : 0.0;
  Readings r{{"evaporated", {lost, "g"}}, {"undissolved_fraction", {u, "fraction"}}};
  return success(req, std::move(r), ticks(spec().param("setup", 5) + *duration));
}

Execution CameraDevice::execute(const Request& req, ExecContext& ctx) {
  if (req.op != "observe") return failure(req, "unsupported_operation", 1);
  auto vial = vial_here(*this, req, ctx);
  if (!vial) return failure(req, "no_vial", 1);
  double t = turbidity(vial->solid_mg() * vial->undissolved_fraction, vial->liquid_ml(), spec().param("scale", 0.1));
  return success(req, {{"turbidity", {t, "NTU"}}}, ticks(spec().param("service", 5)));
}

Execution HoldingDevice::execute(const Request& req, ExecContext& ctx) {
  if (!vial_here(*this, req, ctx)) return failure(req, "no_vial", 1);
  return success(req, {}, ticks(spec().param("service", 5)));
}

Execution RobotDevice::execute(const Request& req, ExecContext& ctx) {
  if (req.op != "transport" && req.op != "manipulate") return failure(req, "unsupported_operation", 1);
  const std::string from = req.params.value("from", "");
  const std::string to = req.params.value("to", "");
  const auto& topo = ctx.world.topology();
  std::string here = spec().location;
  if (auto it = ctx.world.state().robots.find(spec().id); it != ctx.world.state().robots.end())
    here = it->second.location;
  auto approach = topo.distance(here, from);
  auto carry = topo.distance(from, to);
  auto vial = ctx.world.vial(req.sample);
  if (!vial || vial->location != from) return failure(req, "no_vial", 1);
  if (!approach || !carry) return failure(req, "unreachable", 1);
  Tick t = *approach + *carry + ticks(spec().param("handling", 10));
  if (ctx.fault == FaultKind::misplace_vial) {
    Execution e = failure(req, "misplace_vial", t);
    e.reply.extra["robot_location"] = to;
    return e;
  }
  Execution e = success(req, {}, t);
  e.reply.extra["robot_location"] = to;
  return e;
}

}  // namespace archemist::sim

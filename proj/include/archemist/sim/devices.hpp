#pragma once

#include "archemist/sim/device.hpp"
#include "archemist/sim/world.hpp"

namespace archemist::sim {

// Closed-form physics shared by the device models and their tests.

/// final = target * (1 + N(0, sigma))
double quantos_final_weight(double target_mg, double sigma, Rng& rng);

struct PumpResult {
  double volume_ml = 0.0;
  int pulses = 0;
};

/// Gravimetric feedback loop: dose pulses until the delivered mass is within `tolerance` of the target.
PumpResult pump_dispense(double target_ml, double density, double pulse_ml, double sigma, double tolerance, Rng& rng);

/// Grams of solvent lost while heating; nothing evaporates below `min_temp_c`.
double evaporation_g(double temp_c, double duration_s, double k_g_per_s, double min_temp_c, double liquid_g);

/// Undissolved solid fraction after stirring: u * exp(-rate * rpm * t).
double undissolved_after(double fraction, double rpm, double duration_s, double rate);

/// Scalar turbidity proportional to undissolved solid concentration; 0 when fully dissolved.
double turbidity(double undissolved_mg, double liquid_ml, double scale);

class QuantosDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

class PumpDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

class BalanceDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

class HotplateDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

class CameraDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

/// Passive station that only takes custody of a vial (storage rack, robot deck).
class HoldingDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

/// Mobile robot or fixed arm moving a vial between two topology nodes.
class RobotDevice : public Device {
 public:
  using Device::Device;
  Execution execute(const Request& request, ExecContext& ctx) override;
};

/// Reads a {value, unit} parameter and converts it; nullopt when absent or malformed.
std::optional<double> quantity_param(const nlohmann::json& params, const std::string& name, Unit unit);

}  // namespace archemist::sim

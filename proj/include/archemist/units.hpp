#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace archemist {

// Closed unit table. Conversion is only ever explicit and only within a dimension.
enum class Unit { mg, g, mL, degC, s, min, rpm };

enum class Dimension { mass, volume, temperature, time, rate };

Dimension dimension_of(Unit u);
std::string_view symbol(Unit u);

/// Accepts the canonical symbols plus a few spellings for degrees Celsius.
std::optional<Unit> parse_unit(std::string_view text);

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::mg;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// Throws Error{UnitMismatch} when the dimensions differ.
Quantity convert(const Quantity& q, Unit to);

std::string format_number(double v);
std::string to_string(const Quantity& q);

}  // namespace archemist

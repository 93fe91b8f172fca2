#include "archemist/units.hpp"

#include <charconv>

#include "archemist/error.hpp"

namespace archemist {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCursor: return "InvalidCursor";
    case ErrorCode::UnknownTypeName: return "UnknownTypeName";
    case ErrorCode::DuplicateTypeName: return "DuplicateTypeName";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::NotAssigned: return "NotAssigned";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::Locked: return "Locked";
    case ErrorCode::Corrupt: return "Corrupt";
    case ErrorCode::RevisionGap: return "RevisionGap";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyJournal: return "EmptyJournal";
    case ErrorCode::StaleRevision: return "StaleRevision";
    case ErrorCode::InvalidEvent: return "InvalidEvent";
    case ErrorCode::ScenarioError: return "ScenarioError";
  }
  return "Unknown";
}

Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::mg:
    case Unit::g: return Dimension::mass;
    case Unit::mL: return Dimension::volume;
    case Unit::degC: return Dimension::temperature;
    case Unit::s:
    case Unit::min: return Dimension::time;
    case Unit::rpm: return Dimension::rate;
  }
  return Dimension::mass;
}

std::string_view symbol(Unit u) {
  switch (u) {
    case Unit::mg: return "mg";
    case Unit::g: return "g";
    case Unit::mL: return "mL";
    case Unit::degC: return "°C";
    case Unit::s: return "s";
    case Unit::min: return "min";
    case Unit::rpm: return "rpm";
  }
  return "?";
}

std::optional<Unit> parse_unit(std::string_view text) {
  if (text == "mg") return Unit::mg;
  if (text == "g") return Unit::g;
  if (text == "mL" || text == "ml") return Unit::mL;
  if (text == "°C" || text == "C" || text == "degC") return Unit::degC;
  if (text == "s") return Unit::s;
  if (text == "min") return Unit::min;
  if (text == "rpm") return Unit::rpm;
  return std::nullopt;
}

namespace {
double factor_to_base(Unit u) {
  switch (u) {
    case Unit::g: return 1000.0;  // base mg
    case Unit::min: return 60.0;  // base s
    default: return 1.0;
  }
}
}  // namespace

Quantity convert(const Quantity& q, Unit to) {
  if (dimension_of(q.unit) != dimension_of(to)) {
    throw Error(ErrorCode::UnitMismatch,
                "cannot convert " + std::string(symbol(q.unit)) + " to " + std::string(symbol(to)));
  }
  if (q.unit == to) return q;
  return Quantity{q.value * factor_to_base(q.unit) / factor_to_base(to), to};
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(const Quantity& q) {
  return format_number(q.value) + " " + std::string(symbol(q.unit));
}

}  // namespace archemist

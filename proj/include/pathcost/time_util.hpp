#pragma once

#include <cstdint>
#include <string>

namespace pathcost {

inline constexpr double kMinutesPerDay = 1440.0;

/// Parses ISO-8601 timestamps ("2013-09-10T08:15:00Z", optional fractional
/// seconds and ±HH:MM offsets) into seconds since the Unix epoch.
double parse_iso8601(const std::string& s);

/// Formats epoch seconds as UTC ISO-8601 (millisecond precision when needed).
std::string format_iso8601(double epoch_seconds);

/// Minutes since midnight, UTC, with an optional timezone offset.
double minute_of_day(double epoch_seconds, double tz_offset_minutes = 0.0);

/// Parses "HH:MM" into minutes since midnight.
double parse_hhmm(const std::string& s);

std::int64_t days_from_civil(int y, unsigned m, unsigned d);

}  // namespace pathcost

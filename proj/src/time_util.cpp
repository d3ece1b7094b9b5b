#include "pathcost/time_util.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pathcost {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

double parse_iso8601(const std::string& s) {
  int y = 0, mon = 0, day = 0, h = 0, mi = 0;
  double sec = 0.0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%lf%n", &y, &mon, &day, &h, &mi,
                  &sec, &consumed) != 6) {
    throw std::invalid_argument("bad ISO-8601 timestamp: " + s);
  }
  double offset_s = 0.0;
  const std::string rest = s.substr(consumed);
  if (!rest.empty() && rest != "Z") {
    int oh = 0, om = 0;
    if (std::sscanf(rest.c_str(), "%d:%d", &oh, &om) != 2) {
      throw std::invalid_argument("bad ISO-8601 offset: " + s);
    }
    offset_s = oh * 3600.0 + (oh < 0 ? -om : om) * 60.0;
  }
  const double days = static_cast<double>(
      days_from_civil(y, static_cast<unsigned>(mon), static_cast<unsigned>(day)));
  return days * 86400.0 + h * 3600.0 + mi * 60.0 + sec - offset_s;
}

std::string format_iso8601(double epoch_seconds) {
  std::int64_t total_ms = static_cast<std::int64_t>(std::llround(epoch_seconds * 1000.0));
  std::int64_t day = total_ms / 86400000;
  std::int64_t rem_ms = total_ms % 86400000;
  if (rem_ms < 0) {
    rem_ms += 86400000;
    --day;
  }
  int y;
  unsigned m, d;
  civil_from_days(day, y, m, d);
  const int h = static_cast<int>(rem_ms / 3600000);
  rem_ms %= 3600000;
  const int mi = static_cast<int>(rem_ms / 60000);
  rem_ms %= 60000;
  const int sec = static_cast<int>(rem_ms / 1000);
  const int ms = static_cast<int>(rem_ms % 1000);
  char buf[48];
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d, h,
                  mi, sec);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", y, m,
                  d, h, mi, sec, ms);
  }
  return buf;
}

double minute_of_day(double epoch_seconds, double tz_offset_minutes) {
  double m = std::fmod(epoch_seconds / 60.0 + tz_offset_minutes, kMinutesPerDay);
  if (m < 0) m += kMinutesPerDay;
  return m;
}

double parse_hhmm(const std::string& s) {
  int h = 0, m = 0;
  if (std::sscanf(s.c_str(), "%d:%d", &h, &m) != 2 || h < 0 || h > 23 || m < 0 ||
      m > 59) {
    throw std::invalid_argument("bad HH:MM time: " + s);
  }
  return h * 60.0 + m;
}

}  // namespace pathcost

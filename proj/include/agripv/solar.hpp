#pragma once

#include <string>
#include <string_view>

namespace agripv {

// Calendar timestamp in local standard time (no DST handling).
struct Timestamp {
  int year = 2019;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;   // 0..23
  int minute = 0; // 0..59

  // Parses "YYYY-MM-DDTHH:MM". Throws ValidationError on malformed input.
  static Timestamp parse(std::string_view text);
  std::string to_string() const;

  int day_of_year() const;          // 1..365 (366 in leap years)
  double decimal_hour() const;      // hour + minute/60
  Timestamp next_hour() const;

  bool operator==(const Timestamp& o) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

struct Site {
  double latitude_deg = 30.2864;   // +N
  double longitude_deg = 71.9320;  // +E
  double utc_offset_hours = 5.0;

  void validate() const;  // throws ValidationError
};

struct SunPosition {
  double elevation_deg = 0.0;  // above horizon, [-90, 90]
  double azimuth_deg = 0.0;    // clockwise from North, [0, 360)
};

// Solar declination in degrees for a fractional day of year.
double solar_declination_deg(int day_of_year, double decimal_hour);

// Equation of time in minutes.
double equation_of_time_min(int day_of_year, double decimal_hour);

// Declination + equation-of-time solar position, accurate to ~0.2 degrees.
// Total on valid inputs; timestamps are local standard time.
SunPosition sun_position(const Site& site, const Timestamp& when);

}  // namespace agripv

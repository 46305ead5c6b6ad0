#include "agripv/solar.hpp"

#include <cmath>
#include <cstdio>

#include "agripv/errors.hpp"

namespace agripv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

const int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

}  // namespace

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  if (month < 1 || month > 12) throw ValidationError("month out of range");
  if (month == 2 && is_leap_year(year)) return 29;
  return kMonthDays[month - 1];
}

Timestamp Timestamp::parse(std::string_view text) {
  // YYYY-MM-DDTHH:MM, fixed width
  Timestamp t;
  if (text.size() != 16 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':') {
    throw ValidationError("malformed timestamp '" + std::string(text) +
                          "', expected YYYY-MM-DDTHH:MM");
  }
  auto num = [&](int pos, int len) {
    int v = 0;
    for (int i = pos; i < pos + len; ++i) {
      char c = text[i];
      if (c < '0' || c > '9')
        throw ValidationError("malformed timestamp '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  t.year = num(0, 4);
  t.month = num(5, 2);
  t.day = num(8, 2);
  t.hour = num(11, 2);
  t.minute = num(14, 2);
  if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > days_in_month(t.year, t.month) ||
      t.hour > 23 || t.minute > 59) {
    throw ValidationError("timestamp '" + std::string(text) + "' has out-of-range fields");
  }
  return t;
}

std::string Timestamp::to_string() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", year, month, day, hour, minute);
  return buf;
}

int Timestamp::day_of_year() const {
  int doy = day;
  for (int m = 1; m < month; ++m) doy += days_in_month(year, m);
  return doy;
}

double Timestamp::decimal_hour() const { return hour + minute / 60.0; }

Timestamp Timestamp::next_hour() const {
  Timestamp t = *this;
  t.hour += 1;
  if (t.hour == 24) {
    t.hour = 0;
    t.day += 1;
    if (t.day > days_in_month(t.year, t.month)) {
      t.day = 1;
      t.month += 1;
      if (t.month > 12) {
        t.month = 1;
        t.year += 1;
      }
    }
  }
  return t;
}

void Site::validate() const {
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0))
    throw ValidationError("site.latitude must be in [-90, 90]");
  if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0))
    throw ValidationError("site.longitude must be in [-180, 180]");
  if (!(utc_offset_hours >= -14.0 && utc_offset_hours <= 14.0))
    throw ValidationError("site.utc_offset must be in [-14, 14]");
}

namespace {

// Fractional year angle in radians.
double year_angle(int day_of_year, double decimal_hour) {
  return 2.0 * kPi / 365.0 * (day_of_year - 1 + (decimal_hour - 12.0) / 24.0);
}

}  // namespace

double solar_declination_deg(int day_of_year, double decimal_hour) {
  double g = year_angle(day_of_year, decimal_hour);
  double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
  return decl * kRadToDeg;
}

double equation_of_time_min(int day_of_year, double decimal_hour) {
  double g = year_angle(day_of_year, decimal_hour);
  return 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                   0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
}

SunPosition sun_position(const Site& site, const Timestamp& when) {
  site.validate();
  int doy = when.day_of_year();
  double dec_hour = when.decimal_hour();

  double eqtime = equation_of_time_min(doy, dec_hour);
  double decl = solar_declination_deg(doy, dec_hour) * kDegToRad;

  // minutes; longitude east positive
  double time_offset = eqtime + 4.0 * site.longitude_deg - 60.0 * site.utc_offset_hours;
  double true_solar_min = dec_hour * 60.0 + time_offset;
  double hour_angle = (true_solar_min / 4.0 - 180.0) * kDegToRad;

  double lat = site.latitude_deg * kDegToRad;
  double cos_zen = std::sin(lat) * std::sin(decl) +
                   std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  cos_zen = std::fmin(1.0, std::fmax(-1.0, cos_zen));
  double zen = std::acos(cos_zen);

  SunPosition pos;
  pos.elevation_deg = 90.0 - zen * kRadToDeg;

  // atan2 form, measured from South westward, shifted to clockwise-from-North.
  double az_y = std::sin(hour_angle);
  double az_x = std::cos(hour_angle) * std::sin(lat) - std::tan(decl) * std::cos(lat);
  double az = std::atan2(az_y, az_x) * kRadToDeg + 180.0;
  if (az < 0.0) az += 360.0;
  if (az >= 360.0) az -= 360.0;
  pos.azimuth_deg = az;
  return pos;
}

}  // namespace agripv

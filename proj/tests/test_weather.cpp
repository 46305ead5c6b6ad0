#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "agripv/errors.hpp"
#include "agripv/weather.hpp"

using namespace agripv;

namespace {

const Site kKhanewal{30.2864, 71.9320, 5.0};

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

// rewrites one data row of a weather file (1-based data row index)
void patch_row(const std::filesystem::path& src, const std::filesystem::path& dst, int row,
               const std::string& replacement) {
  std::ifstream in(src);
  std::ofstream out(dst);
  std::string line;
  int data_row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      out << line << '\n';
      first = false;
      continue;
    }
    ++data_row;
    out << (data_row == row ? replacement : line) << '\n';
  }
}

}  // namespace

TEST_CASE("clear-sky generator satisfies all weather invariants") {
  WeatherSeries w = clearsky_weather(kKhanewal);
  CHECK_NOTHROW(w.validate());
  CHECK(w.samples.size() == 8760);
  for (const WeatherSample& s : w.samples) {
    CHECK(s.dni_w_m2 >= 0.0);
    CHECK(s.dhi_w_m2 >= 0.0);
  }
}

TEST_CASE("clear-sky DNI formula at reference elevations") {
  // overhead sun: air mass 1
  CHECK(clearsky_dni(90.0) == doctest::Approx(1361.0 * 0.7).epsilon(1e-12));
  CHECK(clearsky_dni(90.0) == doctest::Approx(952.7).epsilon(1e-4));
  // no sun, no irradiance
  CHECK(clearsky_dni(0.0) == 0.0);
  CHECK(clearsky_dni(-10.0) == 0.0);
  // the air-mass clamp freezes DNI below the minimum elevation
  CHECK(clearsky_dni(1.0) == clearsky_dni(2.0));
  CHECK(clearsky_dni(2.1) < clearsky_dni(3.0));
}

TEST_CASE("clear-sky hours with the sun down carry zero irradiance") {
  WeatherSeries w = clearsky_weather(kKhanewal);
  for (const WeatherSample& s : w.samples) {
    SunPosition sun = sun_position(kKhanewal, s.time);
    if (sun.elevation_deg <= 0.0) {
      CHECK(s.dni_w_m2 == 0.0);
      CHECK(s.dhi_w_m2 == 0.0);
    }
  }
}

TEST_CASE("clear-sky DNI depends only on elevation (time-symmetric at the equator)") {
  Site equator{0.0, 0.0, 0.0};
  WeatherSeries w = clearsky_weather(equator);
  // mid-day samples mirrored around the elevation maximum agree closely
  for (int day : {10, 100, 200, 300}) {
    int base = day * 24;
    int best = base;
    for (int h = base; h < base + 24; ++h)
      if (w.samples[h].dni_w_m2 > w.samples[best].dni_w_m2) best = h;
    for (int k = 1; k <= 2; ++k) {
      double a = w.samples[best - k].dni_w_m2;
      double b = w.samples[best + k].dni_w_m2;
      if (a > 0.0 && b > 0.0) CHECK(std::fabs(a - b) / std::max(a, b) < 0.10);
    }
  }
}

TEST_CASE("weather file round-trips bit-identically") {
  WeatherSeries w = clearsky_weather(kKhanewal);
  auto path = temp_file("agripv_roundtrip.csv");
  save_weather(w, path);
  WeatherSeries r = load_weather(path);
  REQUIRE(r.samples.size() == w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(r.samples[i].time == w.samples[i].time);
    CHECK(r.samples[i].dni_w_m2 == w.samples[i].dni_w_m2);  // bit-exact
    CHECK(r.samples[i].dhi_w_m2 == w.samples[i].dhi_w_m2);
  }
  std::filesystem::remove(path);
}

TEST_CASE("malformed and invalid weather files are rejected with row numbers") {
  WeatherSeries w = clearsky_weather(kKhanewal);
  auto good = temp_file("agripv_good.csv");
  save_weather(w, good);

  SUBCASE("negative dni names the row") {
    auto bad = temp_file("agripv_neg.csv");
    patch_row(good, bad, 4721, "2019-07-16T16:00,-5,0");
    try {
      load_weather(bad);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("4721") != std::string::npos);
      CHECK(std::string(e.what()).find("negative") != std::string::npos);
    }
    std::filesystem::remove(bad);
  }

  SUBCASE("malformed value names the row") {
    auto bad = temp_file("agripv_malformed.csv");
    patch_row(good, bad, 100, "2019-01-05T03:00,abc,0");
    try {
      load_weather(bad);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("100") != std::string::npos);
    }
    std::filesystem::remove(bad);
  }

  SUBCASE("8759 rows are rejected") {
    auto bad = temp_file("agripv_short.csv");
    std::ifstream in(good);
    std::ofstream out(bad);
    std::string line;
    int copied = 0;
    while (std::getline(in, line) && copied < 8760) {  // header + 8759 rows
      out << line << '\n';
      ++copied;
    }
    out.close();
    CHECK_THROWS_AS(load_weather(bad), ValidationError);
    std::filesystem::remove(bad);
  }

  SUBCASE("wrong header is rejected") {
    auto bad = temp_file("agripv_header.csv");
    std::ofstream out(bad);
    out << "time,dni,dhi\n";
    out.close();
    CHECK_THROWS_AS(load_weather(bad), ValidationError);
    std::filesystem::remove(bad);
  }

  SUBCASE("off-hour timestamps are rejected") {
    auto bad = temp_file("agripv_offhour.csv");
    patch_row(good, bad, 10, "2019-01-01T09:30,0,0");
    CHECK_THROWS_AS(load_weather(bad), ValidationError);
    std::filesystem::remove(bad);
  }

  std::filesystem::remove(good);
}

TEST_CASE("leap years are rejected as representative years") {
  CHECK_THROWS_AS(clearsky_weather(kKhanewal, ClearSkyParams{.year = 2020}), ValidationError);

  WeatherSeries w = clearsky_weather(kKhanewal);
  for (WeatherSample& s : w.samples) s.time.year = 2020;
  CHECK_THROWS_AS(w.validate(), ValidationError);
}

TEST_CASE("series validation catches broken hour steps") {
  WeatherSeries w = clearsky_weather(kKhanewal);
  w.samples[17].time.hour = (w.samples[17].time.hour + 1) % 24;
  CHECK_THROWS_AS(w.validate(), ValidationError);
}

#include "helpers.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "iris/encoder.hpp"
#include "iris/hilbert.hpp"
#include "iris/synth.hpp"

using namespace iris;

namespace {

constexpr double kPi = std::numbers::pi;

RealImage random_band(std::mt19937& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(20.0, 230.0);
  RealImage b(cols, rows);
  for (auto& v : b.pixels()) v = u(rng);
  return b;
}

EncoderConfig plain(int rows, int cols, int s) {
  EncoderConfig c;
  c.code_rows = rows;
  c.code_cols = cols;
  c.window_size = s;
  c.butterfly = false;
  return c;
}

// Sector predicate evaluated at column centres.
bool in_sector(int c, int cols, double half) {
  const double theta = 2 * kPi * (c + 0.5) / cols;
  auto near = [&](double a) { return std::abs(std::remainder(theta - a, 2 * kPi)) <= half; };
  return near(0.0) || near(kPi);
}

}  // namespace

TEST_CASE("default code sizes") {
  const auto a = EncoderConfig::code_192();
  CHECK(a.code_rows == 16);
  CHECK(a.code_cols == 96);
  CHECK(a.window_size == 8);
  CHECK(a.byte_count() == 192);
  const auto b = EncoderConfig::code_768();
  CHECK(b.code_rows == 32);
  CHECK(b.code_cols == 192);
  CHECK(b.window_size == 16);
  CHECK(b.byte_count() == 768);
  CHECK_FALSE(a.comparable(b));
}

TEST_CASE("config validation") {
  check_error([] { plain(16, 100, 8).validate(); }, ErrorCode::Parameter);
  check_error([] { plain(3, 12, 4).validate(); }, ErrorCode::Parameter);
  check_error([] { plain(16, 96, 7).validate(); }, ErrorCode::Parameter);
  auto c = EncoderConfig::code_192();
  c.butterfly_half_angle = 2.0;
  check_error([&] { c.validate(); }, ErrorCode::Parameter);
}

TEST_CASE("butterfly mask") {
  const auto full = butterfly_mask(4, 64, kPi / 2);
  CHECK(full.popcount() == 4u * 64u);

  const auto m = butterfly_mask(1, 512, kPi / 4);
  int expected = 0;
  for (int c = 0; c < 512; ++c) {
    expected += in_sector(c, 512, kPi / 4);
    CHECK(m.get(0, c) == in_sector(c, 512, kPi / 4));
  }
  CHECK(expected == 256);
  CHECK(m.popcount() == 256u);
  CHECK(m.shifted_columns(256) == m);

  const auto rows = butterfly_mask(5, 96, kPi / 4);
  for (int r = 1; r < 5; ++r)
    for (int c = 0; c < 96; ++c) CHECK(rows.get(r, c) == rows.get(0, c));
}

TEST_CASE("bit matrix operations") {
  BitMatrix a(3, 70);
  a.set(0, 0, true);
  a.set(2, 69, true);
  a.set(1, 5, true);
  CHECK(a.popcount() == 3);
  CHECK(a.complement().popcount() == 3u * 70u - 3u);
  CHECK((a & a.complement()).popcount() == 0);
  const auto s = a.shifted_columns(1);
  CHECK(s.get(0, 1));
  CHECK(s.get(2, 0));
  CHECK(s.get(1, 6));
  CHECK(s.shifted_columns(-1) == a);
  CHECK(a.shifted_columns(70) == a);
}

TEST_CASE("code bits equal the sign of the quadrature part") {
  std::mt19937 rng(7);
  const auto cfg = plain(16, 96, 8);
  const auto band = random_band(rng, 16, 96);
  const auto code = encode_band(band, cfg);
  for (int r = 0; r < 16; ++r) {
    const auto a = analytic_row(band.row(r), 8);
    for (int c = 0; c < 96; ++c) CHECK(code.bits.get(r, c) == (a.imag[c] >= 0));
  }
  CHECK(code.mask.popcount() == 16u * 96u);
}

TEST_CASE("encoding shifts with the band at window granularity") {
  std::mt19937 rng(9);
  for (int s : {8, 16}) {
    const auto cfg = plain(8, 192, s);
    const auto band = random_band(rng, 8, 192);
    RealImage moved(192, 8);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 192; ++c) moved((c + s) % 192, r) = band(c, r);
    CHECK(encode_band(moved, cfg).bits == encode_band(band, cfg).bits.shifted_columns(s));
  }
}

TEST_CASE("saturated samples are masked") {
  std::mt19937 rng(10);
  const auto cfg = plain(8, 32, 8);
  auto band = random_band(rng, 8, 32);
  band(3, 2) = 0.0;
  band(4, 5) = 255.0;
  band(6, 6) = 254.6;
  band(7, 7) = 0.4;
  const auto code = encode_band(band, cfg);
  CHECK_FALSE(code.mask.get(2, 3));
  CHECK_FALSE(code.mask.get(5, 4));
  CHECK_FALSE(code.mask.get(6, 6));
  CHECK_FALSE(code.mask.get(7, 7));
  CHECK(code.mask.popcount() == 8u * 32u - 4u);
}

TEST_CASE("band shape must match the code") {
  std::mt19937 rng(11);
  check_error([&] { encode_band(random_band(rng, 8, 64), plain(8, 32, 8)); }, ErrorCode::Shape);
}

TEST_CASE("resize of a constant band is constant") {
  UnwrappedIris u;
  u.rui.assign(23, std::vector<double>(512, 77.0));
  u.ui.assign(23, std::vector<std::uint8_t>(300, 77));
  const auto b = resize_band(u, 16, 96);
  CHECK(b.width() == 96);
  CHECK(b.height() == 16);
  for (double v : b.pixels()) CHECK(v == doctest::Approx(77.0).epsilon(1e-12));
}

TEST_CASE("resize keeps row values when only the width shrinks") {
  UnwrappedIris u;
  u.rui.assign(16, std::vector<double>(384));
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 384; ++c) u.rui[r][c] = 2.0 * r;
  const auto b = resize_band(u, 16, 96);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 96; ++c) CHECK(b(c, r) == doctest::Approx(2.0 * r).epsilon(1e-12));
}

TEST_CASE("identical band rows give identical code rows") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> d(30, 200);
  std::vector<double> row(512);
  for (auto& v : row) v = d(rng);
  IrisRing ring;
  ring.unwrapped.rui.assign(30, row);
  ring.unwrapped.ui.assign(30, std::vector<std::uint8_t>(200, 100));
  const auto code = encode(ring, EncoderConfig::code_192());
  for (int r = 1; r < 16; ++r)
    for (int c = 0; c < 96; ++c) CHECK(code.bits.get(r, c) == code.bits.get(0, c));
}

TEST_CASE("encoding is deterministic") {
  SynthEyeParams p;
  const auto eye = synth_eye(p, 31, 1);
  const auto ring = segment(eye.image);
  const auto a = encode(ring, EncoderConfig::code_192());
  const auto b = encode(ring, EncoderConfig::code_192());
  CHECK(a.bits == b.bits);
  CHECK(a.mask == b.mask);
  CHECK(serialize_code(a) == serialize_code(b));
}

TEST_CASE("thin rings are rejected") {
  IrisRing ring;
  ring.unwrapped.rui.assign(1, std::vector<double>(512, 100));
  ring.unwrapped.ui.assign(1, std::vector<std::uint8_t>(100, 100));
  check_error([&] { encode(ring, EncoderConfig::code_192()); }, ErrorCode::DegenerateRing);
}

TEST_CASE("gcode byte layout") {
  IrisCode code;
  code.config = plain(2, 8, 4);
  code.config.phase = PhaseConvention::SingleArgument;
  code.bits = BitMatrix(2, 8);
  code.mask = BitMatrix(2, 8, true);
  code.bits.set(0, 0, true);
  code.bits.set(1, 7, true);
  code.mask.set(0, 1, false);
  const auto bytes = serialize_code(code);
  const std::vector<std::uint8_t> want{'G', 'A', 'I', 'T', 1, 0, 2, 0, 8, 0, 4, 1, 0x80, 0x01, 0xBF, 0xFF};
  CHECK(bytes == want);
  const auto back = deserialize_code(bytes);
  CHECK(back.bits == code.bits);
  CHECK(back.mask == code.mask);
  CHECK(back.config.comparable(code.config));
}

TEST_CASE("gcode round trip through a file") {
  std::mt19937 rng(13);
  const auto cfg = EncoderConfig::code_768();
  auto code = encode_band(random_band(rng, cfg.code_rows, cfg.code_cols), cfg, "x");
  const auto dir = scratch_dir("gcode");
  save_code(code, dir / "eye7.gcode");
  CHECK(std::filesystem::file_size(dir / "eye7.gcode") == 12u + 2u * 768u);
  const auto back = load_code(dir / "eye7.gcode");
  CHECK(back.id == "eye7");
  CHECK(back.bits == code.bits);
  CHECK(back.mask == code.mask);
}

TEST_CASE("gcode errors") {
  std::vector<std::uint8_t> bytes{'G', 'A', 'I', 'X', 1, 0, 2, 0, 8, 0, 4, 0, 0, 0, 0, 0};
  check_error([&] { deserialize_code(bytes); }, ErrorCode::Format);
  bytes[3] = 'T';
  bytes[4] = 9;
  check_error([&] { deserialize_code(bytes); }, ErrorCode::Format);
  bytes[4] = 1;
  bytes.pop_back();
  check_error([&] { deserialize_code(bytes); }, ErrorCode::Format);
  check_error([] { load_code("/nonexistent/x.gcode"); }, ErrorCode::Io);
}

#include "helpers.hpp"

#include <fstream>

#include "iris/image_io.hpp"

using namespace iris;

TEST_CASE("raster shape is checked") {
  check_error([] { GrayImage(0, 3); }, ErrorCode::Shape);
  check_error([] { GrayImage(2, 2, std::vector<std::uint8_t>(3)); }, ErrorCode::Shape);
  GrayImage img(4, 3, 9);
  CHECK(img.size() == 12);
  CHECK(img.contains(3, 2));
  CHECK_FALSE(img.contains(4, 0));
  CHECK_FALSE(img.contains(0, -1));
  img(2, 1) = 77;
  CHECK(img.row(1)[2] == 77);
  CHECK(img.pixels()[1 * 4 + 2] == 77);
}

TEST_CASE("binary helpers") {
  BinaryImage a(3, 1), b(3, 1);
  a(0, 0) = a(1, 0) = 1;
  b(1, 0) = b(2, 0) = 1;
  const auto c = logical_and(a, b);
  CHECK(count_set(c) == 1);
  CHECK(c(1, 0) == 1);
  const auto g = to_gray(a);
  CHECK(g(0, 0) == 255);
  CHECK(g(2, 0) == 0);
  check_error([&] { logical_and(a, BinaryImage(2, 1)); }, ErrorCode::Shape);
}

TEST_CASE("pgm and png round trip") {
  const auto dir = scratch_dir("image_io");
  GrayImage img(17, 9);
  std::mt19937 rng(2);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng());
  save_pgm(img, dir / "a.pgm");
  CHECK(load_pgm(dir / "a.pgm") == img);
  save_png(img, dir / "a.png");
  CHECK(load_png(dir / "a.png") == img);
  save_image(img, dir / "b.pgm");
  CHECK(load_image(dir / "b.pgm") == img);
  CHECK(load_image(dir / "a.png") == img);
}

TEST_CASE("binary pgm stores 0 and 255") {
  const auto dir = scratch_dir("image_io_bin");
  BinaryImage mask(3, 2, 0);
  mask(1, 1) = 1;
  save_pgm(mask, dir / "m.pgm");
  const auto back = load_pgm(dir / "m.pgm");
  CHECK(back(1, 1) == 255);
  CHECK(back(0, 0) == 0);
}

TEST_CASE("image loading errors") {
  const auto dir = scratch_dir("image_io_err");
  check_error([&] { load_pgm(dir / "missing.pgm"); }, ErrorCode::Io);
  {
    std::ofstream f(dir / "bad.pgm", std::ios::binary);
    f << "P2\n2 2\n255\n0 0 0 0\n";
  }
  check_error([&] { load_pgm(dir / "bad.pgm"); }, ErrorCode::Format);
  {
    std::ofstream f(dir / "short.pgm", std::ios::binary);
    f << "P5\n4 4\n255\n";
    f.put(1);
  }
  check_error([&] { load_pgm(dir / "short.pgm"); }, ErrorCode::Format);
  check_error([&] { load_image(dir / "x.bmp"); }, ErrorCode::Format);
}

TEST_CASE("rgb overlay is written as png") {
  const auto dir = scratch_dir("image_rgb");
  GrayImage g(5, 5, 100);
  RgbImage rgb(g);
  rgb.set(2, 2, 255, 0, 0);
  save_png(rgb, dir / "o.png");
  CHECK(std::filesystem::file_size(dir / "o.png") > 0);
}

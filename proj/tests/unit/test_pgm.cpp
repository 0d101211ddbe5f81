#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "percoscan/pgm.hpp"

using namespace percoscan;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) {
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("read_pgm: ASCII P2") {
  const PgmImage img = read_pgm(bytes_of("P2\n2 2\n255\n0 255 128 64\n"));
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.maxval == 255);
  CHECK(img.samples == std::vector<std::uint16_t>{0, 255, 128, 64});
}

TEST_CASE("read_pgm: P5 parses to the same image") {
  std::vector<unsigned char> p5 = bytes_of("P5\n2 2\n255\n");
  for (unsigned char s : {0, 255, 128, 64}) p5.push_back(s);
  const PgmImage a = read_pgm(p5);
  const PgmImage b = read_pgm(bytes_of("P2\n2 2\n255\n0 255 128 64\n"));
  CHECK(a.samples == b.samples);
  CHECK(a.maxval == b.maxval);
}

TEST_CASE("read_pgm: header comments are skipped") {
  const PgmImage img =
      read_pgm(bytes_of("P2\n# a comment\n2 1 # another\n# more\n9\n3 7\n"));
  CHECK(img.width == 2);
  CHECK(img.height == 1);
  CHECK(img.samples == std::vector<std::uint16_t>{3, 7});
}

TEST_CASE("read_pgm: distinct error classes") {
  auto code_of = [](const std::vector<unsigned char>& b) {
    try {
      read_pgm(b);
    } catch (const pgm_error& e) {
      return e.code();
    }
    FAIL("expected pgm_error");
    return pgm_error::Code::BadMagic;
  };
  CHECK(code_of(bytes_of("P6\n1 1\n255\n x")) == pgm_error::Code::BadMagic);
  CHECK(code_of(bytes_of("P2\n2 foo\n255\n1 2")) == pgm_error::Code::BadHeader);
  std::vector<unsigned char> trunc = bytes_of("P5\n2 2\n255\n");
  trunc.push_back(0);  // 1 of 4 samples
  CHECK(code_of(trunc) == pgm_error::Code::Truncated);
  CHECK(code_of(bytes_of("P2\n1 2\n9\n3\n")) == pgm_error::Code::Truncated);
  CHECK(code_of(bytes_of("P2\n1 1\n9\n10\n")) == pgm_error::Code::SampleRange);
}

TEST_CASE("write_pgm/read_pgm: 16-bit samples round-trip big-endian") {
  std::vector<double> values = {0.0, 1.0, 0.5, 0.25};
  const Image img = Image::from_values(2, std::move(values));
  const auto bytes = write_pgm(img, 65535);
  const PgmImage back = read_pgm(bytes);
  CHECK(back.maxval == 65535);
  CHECK(back.samples == std::vector<std::uint16_t>{0, 65535, 32768, 16384});
}

TEST_CASE("write_pgm: quantization error stays below half a level") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> values(16 * 16);
  for (double& v : values) v = unif(gen);
  const Image img = Image::from_values(16, std::move(values));
  const PgmImage back = read_pgm(write_pgm(img, 255));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double rebuilt = back.samples[i * 16 + j] / 255.0;
      CHECK(std::abs(rebuilt - img.at(i, j)) <= 1.0 / 510.0 + 1e-12);
    }
}

TEST_CASE("write_pgm: binary image round-trips its pattern") {
  BinaryImage one(1, LatticeKind::Triangular6);
  one.set(0, 0, true);
  const auto bytes = write_pgm(one);
  const PgmImage parsed = read_pgm(bytes);
  CHECK(parsed.samples == std::vector<std::uint16_t>{0});

  BinaryImage img(8, LatticeKind::Triangular6);
  std::mt19937 gen(9);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) img.set(i, j, gen() % 2 == 0);
  const PgmImage back = read_pgm(write_pgm(img));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK((back.samples[i * 8 + j] == 0) == img.black(i, j));
}

TEST_CASE("integer-valued images survive a write/read cycle at the same maxval") {
  std::mt19937 gen(21);
  PgmImage pgm;
  pgm.width = pgm.height = 12;
  pgm.maxval = 1000;
  for (int k = 0; k < 144; ++k)
    pgm.samples.push_back(static_cast<std::uint16_t>(gen() % 1001));
  const Image img = normalize(pgm);
  const PgmImage back = read_pgm(write_pgm(img, 1000));
  CHECK(back.samples == pgm.samples);
}

TEST_CASE("normalize") {
  PgmImage pgm;
  pgm.width = pgm.height = 2;
  pgm.maxval = 255;
  pgm.samples = {255, 0, 128, 200};
  const Image img = normalize(pgm);
  CHECK(img.at(0, 0) == 1.0);
  CHECK(img.at(0, 1) == 0.0);
  CHECK(img.at(1, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));

  pgm.width = 3;
  pgm.samples = {1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(normalize(pgm), std::invalid_argument);
}

TEST_CASE("downsample2x") {
  SUBCASE("2x2 checker averages to one pixel") {
    const Image img = Image::from_values(2, {0, 1, 1, 0});
    const Image out = downsample2x(img);
    CHECK(out.side() == 1);
    CHECK(out.at(0, 0) == 0.5);
  }
  SUBCASE("constant stays constant at half side") {
    const Image out = downsample2x(Image(10, 0.37));
    CHECK(out.side() == 5);
    for (double v : out.values()) CHECK(v == 0.37);
  }
  SUBCASE("odd trailing row/column is dropped") {
    CHECK(downsample2x(Image(5)).side() == 2);
    CHECK_THROWS_AS(downsample2x(Image(1)), std::invalid_argument);
  }
  SUBCASE("2400 halves twice to 600, as in the micrograph workflow") {
    const Image out = downsample2x(downsample2x(Image(2400, 0.5)));
    CHECK(out.side() == 600);
  }
}

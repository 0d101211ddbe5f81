#include "percoscan/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

namespace percoscan {

namespace {

struct Tokenizer {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;

  // skips whitespace and '#' comments
  void skip_separators() {
    while (pos < bytes.size()) {
      const unsigned char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(c)) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long next_int(const char* field) {
    skip_separators();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
      throw pgm_error(pgm_error::Code::BadHeader,
                      std::string("pgm: expected integer for ") + field);
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000L)
        throw pgm_error(pgm_error::Code::BadHeader,
                        std::string("pgm: integer overflow in ") + field);
      ++pos;
    }
    return value;
  }
};

}  // namespace

PgmImage read_pgm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw pgm_error(pgm_error::Code::BadMagic, "pgm: magic number is not P2 or P5");
  const bool binary = bytes[1] == '5';

  Tokenizer tok{bytes, 2};
  const long width = tok.next_int("width");
  const long height = tok.next_int("height");
  const long maxval = tok.next_int("maxval");
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw pgm_error(pgm_error::Code::BadHeader, "pgm: bad dimensions or maxval");

  PgmImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.maxval = static_cast<int>(maxval);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  img.samples.reserve(count);

  if (binary) {
    // exactly one whitespace byte after maxval, then the raster
    if (tok.pos >= bytes.size() || !std::isspace(bytes[tok.pos]))
      throw pgm_error(pgm_error::Code::BadHeader, "pgm: missing raster separator");
    ++tok.pos;
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    if (bytes.size() - tok.pos < count * bytes_per_sample)
      throw pgm_error(pgm_error::Code::Truncated, "pgm: truncated P5 payload");
    for (std::size_t k = 0; k < count; ++k) {
      std::uint16_t s;
      if (bytes_per_sample == 2) {
        s = static_cast<std::uint16_t>((bytes[tok.pos] << 8) | bytes[tok.pos + 1]);
        tok.pos += 2;
      } else {
        s = bytes[tok.pos++];
      }
      if (s > maxval)
        throw pgm_error(pgm_error::Code::SampleRange, "pgm: sample exceeds maxval");
      img.samples.push_back(s);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      tok.skip_separators();
      if (tok.pos >= bytes.size())
        throw pgm_error(pgm_error::Code::Truncated, "pgm: truncated P2 payload");
      const long s = tok.next_int("sample");
      if (s > maxval)
        throw pgm_error(pgm_error::Code::SampleRange, "pgm: sample exceeds maxval");
      img.samples.push_back(static_cast<std::uint16_t>(s));
    }
  }
  return img;
}

PgmImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open PGM file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return read_pgm(bytes);
}

namespace {

std::vector<unsigned char> p5_header(int width, int height, int maxval) {
  const std::string header = "P5\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n" +
                             std::to_string(maxval) + "\n";
  return {header.begin(), header.end()};
}

}  // namespace

std::vector<unsigned char> write_pgm(const Image& img, int maxval) {
  if (maxval < 1 || maxval > 65535)
    throw std::invalid_argument("write_pgm: maxval out of range");
  const int n = img.side();
  std::vector<unsigned char> out = p5_header(n, n, maxval);
  for (double v : img.values()) {
    const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    const auto s = static_cast<std::uint16_t>(std::lround(clamped * maxval));
    if (maxval > 255) out.push_back(static_cast<unsigned char>(s >> 8));
    out.push_back(static_cast<unsigned char>(s & 0xFF));
  }
  return out;
}

std::vector<unsigned char> write_pgm(const BinaryImage& img) {
  const int n = img.side();
  std::vector<unsigned char> out = p5_header(n, n, 255);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(img.black(i, j) ? 0 : 255);
  return out;
}

Image normalize(const PgmImage& img) {
  if (img.width != img.height)
    throw std::invalid_argument("normalize: image must be square");
  std::vector<double> values;
  values.reserve(img.samples.size());
  for (std::uint16_t s : img.samples)
    values.push_back(static_cast<double>(s) / img.maxval);
  return Image::from_values(img.width, std::move(values));
}

Image downsample2x(const Image& img) {
  const int n = img.side();
  if (n < 2) throw std::invalid_argument("downsample2x: side must be >= 2");
  const int half = n / 2;
  Image out(half);
  for (int i = 0; i < half; ++i)
    for (int j = 0; j < half; ++j)
      out.at(i, j) = (img.at(2 * i, 2 * j) + img.at(2 * i, 2 * j + 1) +
                      img.at(2 * i + 1, 2 * j) + img.at(2 * i + 1, 2 * j + 1)) /
                     4.0;
  return out;
}

}  // namespace percoscan

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "percoscan/image.hpp"

namespace percoscan {

/// Raw PGM raster (P2 or P5), up to 16-bit samples.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> samples;  // row-major
};

class pgm_error : public std::runtime_error {
 public:
  enum class Code { BadMagic, BadHeader, Truncated, SampleRange };

  pgm_error(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Parses P2 (ASCII) or P5 (binary) PGM bytes; '#' comments allowed in the
/// header; P5 16-bit samples are big-endian. Throws pgm_error with a distinct
/// code for a bad magic number, malformed header, truncated payload, or a
/// sample exceeding maxval.
PgmImage read_pgm(const std::vector<unsigned char>& bytes);
PgmImage read_pgm_file(const std::string& path);

/// P5 bytes for a real-valued image; values are clamped to [0,1] and scaled
/// to maxval with rounding.
std::vector<unsigned char> write_pgm(const Image& img, int maxval = 255);

/// P5 bytes for a thresholded picture: black -> 0, white -> 255.
std::vector<unsigned char> write_pgm(const BinaryImage& img);

/// Intensities as samples/maxval in [0,1]. The image must be square.
Image normalize(const PgmImage& img);

/// Halves the resolution by averaging 2x2 blocks; an odd trailing row/column
/// is dropped. Requires side >= 2.
Image downsample2x(const Image& img);

}  // namespace percoscan

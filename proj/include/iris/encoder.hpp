#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "iris/cfis.hpp"
#include "iris/hilbert.hpp"
#include "iris/image.hpp"

namespace iris {

struct EncoderConfig {
  int code_rows = 16;   // d1
  int code_cols = 96;   // d2
  int window_size = 8;  // s
  PhaseConvention phase = PhaseConvention::TwoArgument;
  bool butterfly = true;
  double butterfly_half_angle = std::numbers::pi / 4.0;

  /// 192-byte code: 16 x 96, window 8.
  static EncoderConfig code_192();
  /// 768-byte code: 32 x 192, window 16.
  static EncoderConfig code_768();

  void validate() const;
  std::size_t bit_count() const noexcept {
    return static_cast<std::size_t>(code_rows) * static_cast<std::size_t>(code_cols);
  }
  std::size_t byte_count() const noexcept { return bit_count() / 8; }

  /// Codes are comparable when shape, window and phase convention agree.
  bool comparable(const EncoderConfig& other) const noexcept {
    return code_rows == other.code_rows && code_cols == other.code_cols &&
           window_size == other.window_size && phase == other.phase;
  }
};

/// Dense row-major bit matrix packed into 64-bit words. Padding bits past
/// rows*cols are always zero.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols, bool fill = false);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(rows_) * cols_; }

  bool get(int r, int c) const noexcept {
    const std::size_t i = static_cast<std::size_t>(r) * cols_ + c;
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(int r, int c, bool v) noexcept {
    const std::size_t i = static_cast<std::size_t>(r) * cols_ + c;
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  std::size_t popcount() const noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BitMatrix operator&(const BitMatrix& other) const;
  BitMatrix complement() const;
  /// Rotates every row right by `shift` columns (negative shifts rotate left).
  BitMatrix shifted_columns(int shift) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  void clear_padding() noexcept;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> words_;
};

struct IrisCode {
  BitMatrix bits;
  BitMatrix mask;  // 1 = usable bit
  EncoderConfig config;
  std::string id;
};

/// Left and right angular sectors of half-width `half_angle` around 0 and pi.
/// Column j sits at angle 2*pi*(j + 0.5)/cols.
BitMatrix butterfly_mask(int rows, int cols, double half_angle);

/// Separable bilinear resize of the stretched band. Shrinking widens the
/// triangle kernel by the scale factor (antialiased); columns wrap around
/// since they are angles.
RealImage resize_band(const UnwrappedIris& band, int rows, int cols);

/// Encodes a band already resized to code_rows x code_cols.
IrisCode encode_band(const RealImage& band, const EncoderConfig& cfg, std::string id = {});

IrisCode encode(const IrisRing& ring, const EncoderConfig& cfg, std::string id = {});

/// Binary .gcode layout: "GAIT", version, d1, d2, s (u16 big-endian), phase
/// byte, packed bits, packed mask (row-major, MSB first).
std::vector<std::uint8_t> serialize_code(const IrisCode& code);
IrisCode deserialize_code(std::span<const std::uint8_t> bytes);
void save_code(const IrisCode& code, const std::filesystem::path& path);
IrisCode load_code(const std::filesystem::path& path);

inline constexpr std::uint8_t kCodeFormatVersion = 1;

}  // namespace iris
